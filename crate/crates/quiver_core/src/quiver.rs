use serde::{Deserialize, Serialize};
use surface_core::{classify_surface, IdealTriangulation, SurfaceClass, SurfaceError};

use crate::lattice::edge_lattice;
use crate::mat::IntMatrix;
use crate::QuiverError;

/// Quiver without loops or 2-cycles, stored as its skew-symmetric exchange
/// matrix: `matrix[i][j]` arrows `i -> j` when positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub matrix: IntMatrix,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, matrix: IntMatrix) -> Result<Self, QuiverError> {
        let n = vertices.len();
        if matrix.n() != n || matrix.0.iter().any(|r| r.len() != n) {
            return Err(QuiverError::Parse("matrix shape does not match vertices".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if matrix.get(i, j) != -matrix.get(j, i) {
                    return Err(QuiverError::NotReduced(vertices[i].clone()));
                }
            }
        }
        Ok(Quiver { vertices, matrix })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// Number of arrows `i -> j`.
    pub fn arrows(&self, i: usize, j: usize) -> i64 {
        self.matrix.get(i, j).max(0)
    }

    pub fn from_json(text: &str) -> Result<Self, QuiverError> {
        let q: Quiver = serde_json::from_str(text).map_err(|e| QuiverError::Parse(e.to_string()))?;
        Quiver::new(q.vertices, q.matrix)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// Isomorphism of directed multigraphs ignoring vertex labels.
    pub fn is_isomorphic(&self, other: &Quiver) -> bool {
        let n = self.n();
        if n != other.n() {
            return false;
        }
        let profile = |q: &Quiver, i: usize| {
            let mut out: Vec<i64> = (0..n).map(|j| q.arrows(i, j)).filter(|&x| x > 0).collect();
            let mut inc: Vec<i64> = (0..n).map(|j| q.arrows(j, i)).filter(|&x| x > 0).collect();
            out.sort();
            inc.sort();
            (out, inc)
        };
        let pa: Vec<_> = (0..n).map(|i| profile(self, i)).collect();
        let pb: Vec<_> = (0..n).map(|i| profile(other, i)).collect();
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn extend(
            k: usize,
            a: &Quiver,
            b: &Quiver,
            pa: &[(Vec<i64>, Vec<i64>)],
            pb: &[(Vec<i64>, Vec<i64>)],
            image: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            let n = a.n();
            if k == n {
                return true;
            }
            for cand in 0..n {
                if used[cand] || pa[k] != pb[cand] {
                    continue;
                }
                let ok = (0..k).all(|j| a.matrix.get(k, j) == b.matrix.get(cand, image[j]));
                if ok {
                    image[k] = cand;
                    used[cand] = true;
                    if extend(k + 1, a, b, pa, pb, image, used) {
                        return true;
                    }
                    used[cand] = false;
                }
            }
            false
        }
        extend(0, self, other, &pa, &pb, &mut image, &mut used)
    }
}

/// Quiver of a triangulation: `n(e,f) = max(0, <[k f],[k e]>)` arrows `e -> f`,
/// where `k` sends a folded arc to its loop.
pub fn quiver(t: &IdealTriangulation) -> Quiver {
    let l = edge_lattice(t);
    let n = t.n();
    let arrows = |e: usize, f: usize| l.skew.get(l.kappa[f], l.kappa[e]).max(0);
    let mut b = IntMatrix::zeros(n);
    for e in 0..n {
        for f in 0..n {
            b.0[e][f] = arrows(e, f) - arrows(f, e);
        }
    }
    Quiver { vertices: t.arcs().to_vec(), matrix: b }
}

/// Matrix mutation at vertex `k`.
pub fn mutate(q: &Quiver, k: usize) -> Result<Quiver, QuiverError> {
    let n = q.n();
    if k >= n {
        return Err(QuiverError::BadVertex(k));
    }
    let b = &q.matrix;
    let mut out = IntMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.0[i][j] = if i == k || j == k {
                -b.get(i, j)
            } else {
                let bik = b.get(i, k);
                b.get(i, j) + bik.signum() * (bik * b.get(k, j)).max(0)
            };
        }
    }
    Ok(Quiver { vertices: q.vertices.clone(), matrix: out })
}

/// Whether two triangulations of the same surface differ by a mapping class,
/// decided by isomorphism of their quivers.
pub fn mcg_equivalent(a: &IdealTriangulation, b: &IdealTriangulation) -> Result<bool, QuiverError> {
    let s = a.surface();
    if s != b.surface() {
        return Ok(false);
    }
    if classify_surface(s) == SurfaceClass::SpecialWeiwen || !s.admits_triangulation() {
        return Err(SurfaceError::UnsupportedSurface(s.to_string()).into());
    }
    Ok(quiver(a).is_isomorphic(&quiver(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use surface_core::*;

    #[test]
    fn small_quivers() {
        let a2 = quiver(&polygon(5));
        assert_eq!(a2.matrix.get(0, 1).abs(), 1);
        let k = quiver(&annulus(1, 1));
        assert_eq!(k.matrix.get(0, 1).abs(), 2);
        let s = quiver(&three_punctured_sphere());
        assert_eq!(s.matrix, IntMatrix::zeros(3));
    }

    #[test]
    fn mutation_rules() {
        let a2 = Quiver::new(vec!["1".into(), "2".into()], IntMatrix(vec![vec![0, 1], vec![-1, 0]])).unwrap();
        let m = mutate(&a2, 1).unwrap();
        assert_eq!(m.matrix.get(1, 0), 1);
        assert_eq!(mutate(&m, 1).unwrap(), a2);
        let kr = Quiver::new(vec!["1".into(), "2".into()], IntMatrix(vec![vec![0, 2], vec![-2, 0]])).unwrap();
        for v in 0..2 {
            assert_eq!(mutate(&kr, v).unwrap().matrix.get(1, 0), 2);
        }
        assert!(mutate(&kr, 2).is_err());
    }

    #[test]
    fn mcg_examples() {
        let t = annulus(1, 1);
        assert!(mcg_equivalent(&t, &t.flip(0).unwrap()).unwrap());
        let (pent, _) = bfs_triangulations(&polygon(5), 100);
        for a in &pent {
            for b in &pent {
                assert!(mcg_equivalent(a, b).unwrap());
            }
        }
        let d4 = once_punctured_disc(4);
        assert!(matches!(mcg_equivalent(&d4, &d4), Err(QuiverError::Surface(SurfaceError::UnsupportedSurface(_)))));
        // A_3 path versus the oriented 3-cycle of a hexagon.
        let (hex, _) = bfs_triangulations(&polygon(6), 100);
        let fan = polygon(6);
        let classes = hex.iter().filter(|t| mcg_equivalent(&fan, t).unwrap()).count();
        assert!(classes < hex.len());
    }
}
