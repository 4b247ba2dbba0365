use serde::{Deserialize, Serialize};
use surface_core::{IdealTriangulation, SignedTriangulation, SurfaceError};

use crate::mat::IntMatrix;
use crate::quiver::quiver;
use crate::QuiverError;

/// Matrix of `c(e, f)`: the number of times `f` follows `e` in clockwise
/// order inside a triangle. Boundary sides contribute nothing and
/// `c(e, e) = -2`.
pub fn c_matrix(t: &IdealTriangulation) -> IntMatrix {
    let n = t.n();
    let mut c = IntMatrix::zeros(n);
    for tri in t.triangles() {
        for i in 0..3 {
            let (x, y) = (tri[(i + 1) % 3], tri[i]);
            if let (Some(x), Some(y)) = (x.arc(), y.arc()) {
                if x != y {
                    c.0[x][y] += 1;
                }
            }
        }
    }
    for e in 0..n {
        c.0[e][e] = -2;
    }
    c
}

pub fn c_count(t: &IdealTriangulation, e: usize, f: usize) -> i64 {
    c_matrix(t).get(e, f)
}

/// Free abelian group on the arcs with its skew form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLattice {
    pub labels: Vec<String>,
    /// `skew[e][f] = <[e],[f]> = c(f,e) - c(e,f)`.
    pub skew: IntMatrix,
    /// Column `f` holds the coordinates of `{f}` in the `[.]` basis.
    pub change_of_basis: IntMatrix,
    pub kappa: Vec<usize>,
}

impl EdgeLattice {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let sy = self.skew.apply(y);
        x.iter().zip(&sy).map(|(a, b)| a * b).sum()
    }

    /// Skew form in the `{.}` basis.
    pub fn curly_skew(&self) -> IntMatrix {
        let p = &self.change_of_basis;
        p.transpose().mul(&self.skew).mul(p)
    }
}

pub fn edge_lattice(t: &IdealTriangulation) -> EdgeLattice {
    let n = t.n();
    let c = c_matrix(t);
    let mut skew = IntMatrix::zeros(n);
    for e in 0..n {
        for f in 0..n {
            if e != f {
                skew.0[e][f] = c.get(f, e) - c.get(e, f);
            }
        }
    }
    let kappa = t.kappa();
    let mut p = IntMatrix::identity(n);
    for (f, &k) in kappa.iter().enumerate() {
        if k != f {
            p.0[k][f] = 1;
        }
    }
    EdgeLattice { labels: t.arcs().to_vec(), skew, change_of_basis: p, kappa }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlipSign {
    Plus,
    Minus,
}

/// Integer map between edge lattices in the `[.]` bases. Column `f` is the
/// image of `[f]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeMap {
    pub matrix: IntMatrix,
}

impl LatticeMap {
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.matrix.apply(x)
    }
    pub fn compose(&self, first: &LatticeMap) -> LatticeMap {
        LatticeMap { matrix: self.matrix.mul(&first.matrix) }
    }
    pub fn det(&self) -> i64 {
        self.matrix.det()
    }
    /// True when `<Fx, Fy>` in `target` equals `<x, y>` in `source`.
    pub fn is_isometry(&self, source: &EdgeLattice, target: &EdgeLattice) -> bool {
        let m = &self.matrix;
        m.transpose().mul(&target.skew).mul(m) == source.skew
    }
}

fn not_self_folded(source: &IdealTriangulation, e: usize) -> Result<IdealTriangulation, QuiverError> {
    if source.is_self_folded_edge(e) {
        return Err(SurfaceError::SelfFoldedFlip(source.arc_label(e).to_string()).into());
    }
    Ok(source.flip(e)?)
}

/// Transport map of a flip at `e`, from the `c` counts of the flipped triangulation.
pub fn flip_lattice_map(source: &IdealTriangulation, e: usize, sign: FlipSign) -> Result<LatticeMap, QuiverError> {
    let target = not_self_folded(source, e)?;
    let c = c_matrix(&target);
    let mut m = IntMatrix::identity(source.n());
    for f in 0..source.n() {
        m.0[e][f] += match sign {
            FlipSign::Plus => c.get(e, f),
            FlipSign::Minus => c.get(f, e),
        };
    }
    Ok(LatticeMap { matrix: m })
}

/// The same transport map in the `{.}` bases, from arrow counts of the
/// flipped triangulation with `n(e, e) = -2`.
pub fn flip_lattice_map_curly(source: &IdealTriangulation, e: usize, sign: FlipSign) -> Result<IntMatrix, QuiverError> {
    let target = not_self_folded(source, e)?;
    let q = quiver(&target);
    let n = source.n();
    let mut m = IntMatrix::identity(n);
    for f in 0..n {
        m.0[e][f] += if f == e {
            -2
        } else {
            match sign {
                FlipSign::Plus => q.arrows(e, f),
                FlipSign::Minus => q.arrows(f, e),
            }
        };
    }
    Ok(m)
}

/// Transport map of a pop at `q`: exchanges `{e}` and `{f}` for the self-folded
/// pair at `q`, written in the `[.]` basis.
pub fn pop_lattice_map(st: &SignedTriangulation, q: usize) -> Result<LatticeMap, QuiverError> {
    surface_core::pop(st, q)?;
    let t = &st.triangulation;
    let sf = t
        .self_folded()
        .into_iter()
        .find(|s| s.puncture == q)
        .expect("valency one puncture lies in a self-folded triangle");
    let p = edge_lattice(t).change_of_basis;
    let mut swap = IntMatrix::identity(t.n());
    let (e, f) = (sf.encircling, sf.folded);
    swap.0[e][e] = 0;
    swap.0[f][f] = 0;
    swap.0[e][f] = 1;
    swap.0[f][e] = 1;
    let pinv = p.inverse_unimodular().expect("unipotent");
    Ok(LatticeMap { matrix: p.mul(&swap).mul(&pinv) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use surface_core::*;

    #[test]
    fn pentagon_counts() {
        let t = polygon(5);
        let c = c_matrix(&t);
        let mut pair = [c.get(0, 1), c.get(1, 0)];
        pair.sort();
        assert_eq!(pair, [0, 1]);
        let l = edge_lattice(&t);
        assert_eq!(l.skew.get(0, 1).abs(), 1);
        assert_eq!(l.skew.get(0, 1), -l.skew.get(1, 0));
    }

    #[test]
    fn annulus_form_and_transport() {
        let t = annulus(1, 1);
        let l = edge_lattice(&t);
        assert_eq!(l.skew.get(0, 1).abs(), 2);
        for e in 0..2 {
            let f = 1 - e;
            let c2 = c_matrix(&t.flip(e).unwrap());
            let sign = if c2.get(e, f) == 2 { FlipSign::Plus } else { FlipSign::Minus };
            assert_eq!(c2.get(e, f).max(c2.get(f, e)), 2);
            let m = flip_lattice_map(&t, e, sign).unwrap();
            let img = m.apply(&[(f == 0) as i64, (f == 1) as i64]);
            let mut want = vec![0, 0];
            want[f] = 1;
            want[e] = 2;
            assert_eq!(img, want);
        }
        // The sink of the Kronecker quiver becomes its source.
        let sink = (0..2).find(|&v| quiver(&t).arrows(1 - v, v) == 2).unwrap();
        let plus = flip_lattice_map(&t, sink, FlipSign::Plus).unwrap();
        assert_eq!(plus.apply(&[(sink == 1) as i64, (sink == 0) as i64])[sink], 2);
    }

    #[test]
    fn self_folded_pair_is_orthogonal() {
        let (nodes, _) = bfs_triangulations(&once_punctured_disc(3), 100);
        let t = nodes.iter().find(|t| !t.self_folded().is_empty()).unwrap();
        let sf = t.self_folded()[0];
        let c = c_matrix(t);
        assert_eq!(c.get(sf.encircling, sf.folded), 1);
        assert_eq!(c.get(sf.folded, sf.encircling), 1);
        assert_eq!(edge_lattice(t).skew.get(sf.encircling, sf.folded), 0);
    }

    #[test]
    fn pop_map_in_bracket_basis() {
        let (nodes, _) = bfs_triangulations(&once_punctured_disc(3), 100);
        let t = nodes.iter().find(|t| !t.self_folded().is_empty()).unwrap().clone();
        let sf = t.self_folded()[0];
        let st = SignedTriangulation::all_plus(t);
        let m = pop_lattice_map(&st, sf.puncture).unwrap();
        let (e, f) = (sf.encircling, sf.folded);
        let n = st.triangulation.n();
        let unit = |i: usize| (0..n).map(|j| (i == j) as i64).collect::<Vec<_>>();
        let mut ef = unit(e);
        ef[f] = 1;
        assert_eq!(m.apply(&unit(e)), ef);
        assert_eq!(m.apply(&unit(f)), unit(f).iter().map(|x| -x).collect::<Vec<_>>());
        assert_eq!(m.det(), -1);
        assert_eq!(m.compose(&m).matrix, IntMatrix::identity(n));
    }
}
