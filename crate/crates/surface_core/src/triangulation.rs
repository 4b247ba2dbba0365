use std::collections::{BTreeMap, HashMap};

use crate::error::SurfaceError;
use crate::surface::{arc_count, MarkedSurface};

/// A side slot of a triangle: an arc or a boundary segment, by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Arc(usize),
    Boundary(usize),
}

impl Side {
    pub fn arc(self) -> Option<usize> {
        match self {
            Side::Arc(a) => Some(a),
            Side::Boundary(_) => None,
        }
    }
}

/// A self-folded triangle: `encircling` is the loop, `folded` the arc inside
/// it, `puncture` the enclosed marked point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelfFolded {
    pub triangle: usize,
    pub encircling: usize,
    pub folded: usize,
    pub puncture: usize,
}

#[derive(Debug, Clone)]
pub struct IdealTriangulation {
    surface: MarkedSurface,
    arcs: Vec<String>,
    boundary_segments: Vec<String>,
    vertices: Vec<String>,
    triangles: Vec<[Side; 3]>,
    corners: Vec<[usize; 3]>,
    on_boundary: Vec<bool>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, SurfaceError> {
    Err(SurfaceError::Invalid(msg.into()))
}

impl IdealTriangulation {
    /// Builds and validates a triangulation from indexed parts.
    pub fn from_parts(
        surface: MarkedSurface,
        arcs: Vec<String>,
        boundary_segments: Vec<String>,
        vertices: Vec<String>,
        triangles: Vec<[Side; 3]>,
        corners: Vec<[usize; 3]>,
    ) -> Result<Self, SurfaceError> {
        let mut t = IdealTriangulation {
            surface,
            arcs,
            boundary_segments,
            vertices,
            triangles,
            corners,
            on_boundary: Vec::new(),
        };
        t.validate()?;
        Ok(t)
    }

    /// Builds a triangulation from labelled sides and corners. Vertex labels are
    /// taken in order of first appearance.
    pub fn from_labels<S: AsRef<str>>(
        surface: MarkedSurface,
        arcs: &[S],
        boundary_segments: &[S],
        triangles: &[[S; 3]],
        corners: &[[S; 3]],
    ) -> Result<Self, SurfaceError> {
        let arcs: Vec<String> = arcs.iter().map(|s| s.as_ref().to_string()).collect();
        let segs: Vec<String> = boundary_segments.iter().map(|s| s.as_ref().to_string()).collect();
        let mut side_index: HashMap<&str, Side> = HashMap::new();
        for (i, a) in arcs.iter().enumerate() {
            if side_index.insert(a.as_str(), Side::Arc(i)).is_some() {
                return invalid(format!("duplicate label {a}"));
            }
        }
        for (i, b) in segs.iter().enumerate() {
            if side_index.insert(b.as_str(), Side::Boundary(i)).is_some() {
                return invalid(format!("duplicate label {b}"));
            }
        }
        let mut tris = Vec::with_capacity(triangles.len());
        for tri in triangles {
            let mut sides = [Side::Arc(0); 3];
            for (k, s) in tri.iter().enumerate() {
                sides[k] = *side_index
                    .get(s.as_ref())
                    .ok_or_else(|| SurfaceError::UnknownLabel(s.as_ref().to_string()))?;
            }
            tris.push(sides);
        }
        if corners.len() != tris.len() {
            return invalid(format!("{} triangles but {} corner triples", tris.len(), corners.len()));
        }
        let mut vertices: Vec<String> = Vec::new();
        let mut vindex: HashMap<String, usize> = HashMap::new();
        let mut cs = Vec::with_capacity(corners.len());
        for c in corners {
            let mut out = [0usize; 3];
            for (k, v) in c.iter().enumerate() {
                let v = v.as_ref();
                if side_index.contains_key(v) {
                    return invalid(format!("label {v} used both as side and vertex"));
                }
                out[k] = *vindex.entry(v.to_string()).or_insert_with(|| {
                    vertices.push(v.to_string());
                    vertices.len() - 1
                });
            }
            cs.push(out);
        }
        Self::from_parts(surface, arcs, segs, vertices, tris, cs)
    }

    fn validate(&mut self) -> Result<(), SurfaceError> {
        self.surface.check()?;
        let n = arc_count(&self.surface)?;
        if self.arcs.len() != n {
            return invalid(format!("{} arcs, the surface needs {n}", self.arcs.len()));
        }
        if self.corners.len() != self.triangles.len() {
            return invalid("corner and triangle counts differ");
        }
        for c in &self.corners {
            if c.iter().any(|&v| v >= self.vertices.len()) {
                return invalid("corner vertex out of range");
            }
        }
        let mut arc_slots = vec![Vec::new(); self.arcs.len()];
        let mut seg_slots = vec![Vec::new(); self.boundary_segments.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for (i, s) in tri.iter().enumerate() {
                match *s {
                    Side::Arc(a) if a < self.arcs.len() => arc_slots[a].push((t, i)),
                    Side::Boundary(b) if b < self.boundary_segments.len() => seg_slots[b].push((t, i)),
                    _ => return invalid("side index out of range"),
                }
            }
        }
        for (a, slots) in arc_slots.iter().enumerate() {
            if slots.len() != 2 {
                return invalid(format!("arc {} fills {} slots", self.arcs[a], slots.len()));
            }
            let ((t1, i1), (t2, i2)) = (slots[0], slots[1]);
            let v = |t: usize, i: usize| self.corners[t][i % 3];
            if v(t1, i1) != v(t2, i2 + 1) || v(t1, i1 + 1) != v(t2, i2) {
                return invalid(format!("arc {} glued with inconsistent endpoints", self.arcs[a]));
            }
        }
        for (b, slots) in seg_slots.iter().enumerate() {
            if slots.len() != 1 {
                return invalid(format!("boundary segment {} fills {} slots", self.boundary_segments[b], slots.len()));
            }
        }

        // Corners around one marked point must form a single class.
        let nc = 3 * self.triangles.len();
        let mut uf = UnionFind((0..nc).collect());
        for slots in &arc_slots {
            let ((t1, i1), (t2, i2)) = (slots[0], slots[1]);
            uf.union(3 * t1 + i1, 3 * t2 + (i2 + 1) % 3);
            uf.union(3 * t2 + i2, 3 * t1 + (i1 + 1) % 3);
        }
        let mut class_of_vertex: HashMap<usize, usize> = HashMap::new();
        for c in 0..nc {
            let root = uf.find(c);
            let v = self.corners[c / 3][c % 3];
            if let Some(&r) = class_of_vertex.get(&v) {
                if r != root {
                    return invalid(format!("vertex {} has a disconnected link", self.vertices[v]));
                }
            } else {
                class_of_vertex.insert(v, root);
            }
        }
        if class_of_vertex.len() != self.vertices.len() {
            return invalid("unused vertex label");
        }

        // Boundary cycles.
        let nv = self.vertices.len();
        let mut next: Vec<Option<usize>> = vec![None; nv];
        let mut incoming = vec![0usize; nv];
        for slots in &seg_slots {
            let (t, i) = slots[0];
            let (a, b) = (self.corners[t][i], self.corners[t][(i + 1) % 3]);
            if next[a].is_some() {
                return invalid(format!("two boundary segments leave {}", self.vertices[a]));
            }
            next[a] = Some(b);
            incoming[b] += 1;
        }
        let mut on_boundary = vec![false; nv];
        let mut lengths = Vec::new();
        for v in 0..nv {
            if next[v].is_some() != (incoming[v] > 0) || incoming[v] > 1 {
                return invalid(format!("boundary is broken at {}", self.vertices[v]));
            }
            if next[v].is_none() || on_boundary[v] {
                continue;
            }
            let mut len = 0u32;
            let mut w = v;
            loop {
                on_boundary[w] = true;
                len += 1;
                w = next[w].expect("boundary cycle");
                if w == v {
                    break;
                }
            }
            lengths.push(len);
        }
        let mut expected = self.surface.boundary.clone();
        expected.sort_unstable();
        lengths.sort_unstable();
        if lengths != expected {
            return invalid(format!("boundary cycles {lengths:?} do not match {expected:?}"));
        }
        let punctures = on_boundary.iter().filter(|&&b| !b).count();
        if punctures != self.surface.punctures as usize {
            return invalid(format!("{punctures} punctures, the surface has {}", self.surface.punctures));
        }
        let chi = nv as i64 - (self.arcs.len() + self.boundary_segments.len()) as i64 + self.triangles.len() as i64;
        if chi != self.surface.euler_characteristic() {
            return invalid(format!("Euler characteristic {chi}, expected {}", self.surface.euler_characteristic()));
        }
        self.on_boundary = on_boundary;
        Ok(())
    }

    pub fn surface(&self) -> &MarkedSurface {
        &self.surface
    }
    pub fn n(&self) -> usize {
        self.arcs.len()
    }
    pub fn arcs(&self) -> &[String] {
        &self.arcs
    }
    pub fn boundary_segments(&self) -> &[String] {
        &self.boundary_segments
    }
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn triangles(&self) -> &[[Side; 3]] {
        &self.triangles
    }
    pub fn corners(&self) -> &[[usize; 3]] {
        &self.corners
    }
    pub fn arc_label(&self, a: usize) -> &str {
        &self.arcs[a]
    }
    pub fn arc_index(&self, label: &str) -> Option<usize> {
        self.arcs.iter().position(|a| a == label)
    }
    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }
    pub fn side_label(&self, s: Side) -> &str {
        match s {
            Side::Arc(a) => &self.arcs[a],
            Side::Boundary(b) => &self.boundary_segments[b],
        }
    }
    pub fn is_puncture(&self, v: usize) -> bool {
        !self.on_boundary[v]
    }
    pub fn punctures(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.is_puncture(v)).collect()
    }

    /// The two (triangle, slot) positions of an arc.
    pub fn slots(&self, a: usize) -> [(usize, usize); 2] {
        let mut out = [(usize::MAX, 0); 2];
        let mut k = 0;
        for (t, tri) in self.triangles.iter().enumerate() {
            for (i, s) in tri.iter().enumerate() {
                if *s == Side::Arc(a) {
                    out[k] = (t, i);
                    k += 1;
                }
            }
        }
        debug_assert_eq!(k, 2);
        out
    }

    /// The slot glued to `(t, i)` across an arc, if the side is an arc.
    pub fn opposite(&self, t: usize, i: usize) -> Option<(usize, usize)> {
        let a = self.triangles[t][i].arc()?;
        let [s1, s2] = self.slots(a);
        Some(if s1 == (t, i) { s2 } else { s1 })
    }

    /// Endpoints of an arc, read from its first slot.
    pub fn endpoints(&self, a: usize) -> (usize, usize) {
        let (t, i) = self.slots(a)[0];
        (self.corners[t][i], self.corners[t][(i + 1) % 3])
    }

    /// Number of arc ends incident to the marked point `v`.
    pub fn valency(&self, v: usize) -> usize {
        (0..self.n())
            .map(|a| {
                let (x, y) = self.endpoints(a);
                (x == v) as usize + (y == v) as usize
            })
            .sum()
    }

    pub fn self_folded(&self) -> Vec<SelfFolded> {
        let mut out = Vec::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for i in 0..3 {
                let (s0, s1, s2) = (tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]);
                if s1 == s2 && s0 != s1 {
                    if let (Some(e), Some(f)) = (s0.arc(), s1.arc()) {
                        out.push(SelfFolded {
                            triangle: t,
                            encircling: e,
                            folded: f,
                            puncture: self.corners[t][(i + 2) % 3],
                        });
                    }
                }
            }
        }
        out
    }

    /// Whether `a` is the folded side of a triangle, including one whose
    /// encircling side is a boundary segment.
    pub fn is_self_folded_edge(&self, a: usize) -> bool {
        self.triangles.iter().any(|tri| tri.iter().filter(|s| s.arc() == Some(a)).count() == 2)
    }

    /// Maps a folded arc to its encircling loop, every other arc to itself.
    pub fn kappa(&self) -> Vec<usize> {
        let mut k: Vec<usize> = (0..self.n()).collect();
        for s in self.self_folded() {
            k[s.folded] = s.encircling;
        }
        k
    }

    /// Replaces arc `e` by the other diagonal of the quadrilateral formed by
    /// its two triangles. The new arc keeps the index and label of `e`.
    pub fn flip(&self, e: usize) -> Result<IdealTriangulation, SurfaceError> {
        if e >= self.n() {
            return Err(SurfaceError::UnknownLabel(format!("arc index {e}")));
        }
        let [(t1, i1), (t2, i2)] = self.slots(e);
        if t1 == t2 {
            return Err(SurfaceError::SelfFoldedFlip(self.arcs[e].clone()));
        }
        let rot = |t: usize, i: usize| {
            let s = self.triangles[t];
            let c = self.corners[t];
            ([s[i], s[(i + 1) % 3], s[(i + 2) % 3]], [c[i], c[(i + 1) % 3], c[(i + 2) % 3]])
        };
        let ([_, a, b], [x, y, z]) = rot(t1, i1);
        let ([_, c, d], [_, _, w]) = rot(t2, i2);
        let mut out = self.clone();
        out.triangles[t1] = [b, c, Side::Arc(e)];
        out.corners[t1] = [z, x, w];
        out.triangles[t2] = [d, a, Side::Arc(e)];
        out.corners[t2] = [w, y, z];
        debug_assert!(out.clone().validate().is_ok());
        Ok(out)
    }

    /// Exchanges the positions of two arcs, keeping labels attached to indices.
    pub fn swap_arcs(&self, e: usize, f: usize) -> IdealTriangulation {
        let mut out = self.clone();
        for tri in out.triangles.iter_mut() {
            for s in tri.iter_mut() {
                if *s == Side::Arc(e) {
                    *s = Side::Arc(f);
                } else if *s == Side::Arc(f) {
                    *s = Side::Arc(e);
                }
            }
        }
        out
    }

    /// Returns a copy with arc labels replaced.
    pub fn with_arc_labels(&self, labels: Vec<String>) -> Result<IdealTriangulation, SurfaceError> {
        if labels.len() != self.n() {
            return invalid("wrong number of arc labels");
        }
        let mut out = self.clone();
        out.arcs = labels;
        Ok(out)
    }

    fn normal_form(&self) -> (Vec<String>, Vec<String>, Vec<[(String, String); 3]>) {
        let mut tris: Vec<[(String, String); 3]> = self
            .triangles
            .iter()
            .zip(&self.corners)
            .map(|(s, c)| {
                let entries: Vec<(String, String)> = (0..3)
                    .map(|i| (self.side_label(s[i]).to_string(), self.vertices[c[i]].clone()))
                    .collect();
                (0..3)
                    .map(|r| [entries[r].clone(), entries[(r + 1) % 3].clone(), entries[(r + 2) % 3].clone()])
                    .min()
                    .expect("three rotations")
            })
            .collect();
        tris.sort();
        let mut arcs = self.arcs.clone();
        arcs.sort();
        let mut segs = self.boundary_segments.clone();
        segs.sort();
        (arcs, segs, tris)
    }

    /// String identifying the triangulation with its labels.
    pub fn labelled_key(&self) -> String {
        format!("{:?}", self.normal_form())
    }

    /// Arc label to adjacent triangle list, for display.
    pub fn describe(&self) -> BTreeMap<String, Vec<String>> {
        let mut m = BTreeMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            let v: Vec<String> = tri.iter().map(|s| self.side_label(*s).to_string()).collect();
            m.insert(format!("t{t}"), v);
        }
        m
    }
}

impl PartialEq for IdealTriangulation {
    fn eq(&self, other: &Self) -> bool {
        self.surface == other.surface && self.normal_form() == other.normal_form()
    }
}

impl Eq for IdealTriangulation {}
