//! Canonical forms up to arc relabelling, and breadth-first enumeration.

use std::collections::{HashMap, VecDeque};

use crate::signed::{tagged_flip, SignedTriangulation};
use crate::triangulation::{IdealTriangulation, Side};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Token {
    Arc(u32),
    Bnd(String),
    Vert(String),
    Sign(String, i8),
}

/// Code identifying a triangulation up to renaming its arcs. Boundary and
/// vertex labels are kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<Token>);

impl IdealTriangulation {
    fn code_from(&self, slots: &[[(usize, usize); 2]], t0: usize, r0: usize) -> Vec<Token> {
        let nt = self.triangles().len();
        let mut seen = vec![false; nt];
        let mut rename: Vec<Option<u32>> = vec![None; self.n()];
        let mut next = 0u32;
        let mut queue = VecDeque::new();
        let mut out = Vec::with_capacity(6 * nt);
        seen[t0] = true;
        queue.push_back((t0, r0));
        while let Some((t, r)) = queue.pop_front() {
            for k in 0..3 {
                let i = (r + k) % 3;
                match self.triangles()[t][i] {
                    Side::Arc(a) => {
                        let id = *rename[a].get_or_insert_with(|| {
                            next += 1;
                            next - 1
                        });
                        out.push(Token::Arc(id));
                    }
                    Side::Boundary(b) => out.push(Token::Bnd(self.boundary_segments()[b].clone())),
                }
                out.push(Token::Vert(self.vertices()[self.corners()[t][i]].clone()));
            }
            for k in 0..3 {
                let i = (r + k) % 3;
                if let Side::Arc(a) = self.triangles()[t][i] {
                    let [s1, s2] = slots[a];
                    let (t2, i2) = if s1 == (t, i) { s2 } else { s1 };
                    if !seen[t2] {
                        seen[t2] = true;
                        queue.push_back((t2, i2));
                    }
                }
            }
        }
        out
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        let slots: Vec<[(usize, usize); 2]> = (0..self.n()).map(|a| self.slots(a)).collect();
        let best = (0..self.triangles().len())
            .flat_map(|t| (0..3).map(move |r| (t, r)))
            .map(|(t, r)| self.code_from(&slots, t, r))
            .min()
            .unwrap_or_default();
        CanonicalCode(best)
    }
}

impl SignedTriangulation {
    pub fn canonical_code(&self) -> CanonicalCode {
        let mut code = self.triangulation.canonical_code();
        for (v, s) in self.signs() {
            code.0.push(Token::Sign(self.triangulation.vertices()[*v].clone(), *s));
        }
        code
    }
}

/// All triangulations reachable by flips, up to arc relabelling, with the
/// flip neighbours of each one. Stops after `limit` nodes.
pub fn bfs_triangulations(seed: &IdealTriangulation, limit: usize) -> (Vec<IdealTriangulation>, Vec<Vec<usize>>) {
    let mut nodes = vec![seed.clone()];
    let mut index: HashMap<CanonicalCode, usize> = HashMap::from([(seed.canonical_code(), 0)]);
    let mut adj = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let mut nb = Vec::new();
        for e in 0..nodes[i].n() {
            let Ok(f) = nodes[i].flip(e) else { continue };
            let code = f.canonical_code();
            let j = match index.get(&code) {
                Some(&j) => j,
                None if nodes.len() < limit => {
                    nodes.push(f);
                    index.insert(code, nodes.len() - 1);
                    nodes.len() - 1
                }
                None => continue,
            };
            nb.push(j);
        }
        adj.push(nb);
        i += 1;
    }
    (nodes, adj)
}

/// All tagged triangulations reachable by tagged flips, up to arc relabelling,
/// with the neighbour in every position.
pub fn bfs_tagged(seed: &SignedTriangulation, limit: usize) -> (Vec<SignedTriangulation>, Vec<Vec<usize>>) {
    let seed = seed.normalized();
    let mut nodes = vec![seed.clone()];
    let mut index: HashMap<CanonicalCode, usize> = HashMap::from([(seed.canonical_code(), 0)]);
    let mut adj = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let mut nb = Vec::new();
        for k in 0..nodes[i].triangulation.n() {
            let Ok(f) = tagged_flip(&nodes[i], k) else { continue };
            let f = f.normalized();
            let code = f.canonical_code();
            let j = match index.get(&code) {
                Some(&j) => j,
                None if nodes.len() < limit => {
                    nodes.push(f);
                    index.insert(code, nodes.len() - 1);
                    nodes.len() - 1
                }
                None => continue,
            };
            nb.push(j);
        }
        adj.push(nb);
        i += 1;
    }
    (nodes, adj)
}

/// Labelled triangulations reachable from `seed` by at most `depth` flips.
pub fn flip_corpus(seed: &IdealTriangulation, depth: usize) -> Vec<IdealTriangulation> {
    let mut seen = std::collections::HashSet::from([seed.labelled_key()]);
    let mut out = vec![seed.clone()];
    let mut frontier = vec![seed.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for t in &frontier {
            for e in 0..t.n() {
                if let Ok(f) = t.flip(e) {
                    if seen.insert(f.labelled_key()) {
                        next.push(f.clone());
                        out.push(f);
                    }
                }
            }
        }
        frontier = next;
    }
    out
}
