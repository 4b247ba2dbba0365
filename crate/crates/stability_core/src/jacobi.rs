//! Representations of the Jacobi algebra of the three-punctured sphere
//! quiver with potential `aa' + bb' + cc' - abc - c'b'a'`.
//!
//! Arrows `a: 1 -> 2`, `b: 2 -> 3`, `c: 3 -> 1` and `a': 2 -> 1`,
//! `b': 3 -> 2`, `c': 1 -> 3`. Paths compose left to right, so `abc` is the
//! loop at vertex 1. The cyclic derivatives give `a' = bc`, `b' = ca`,
//! `c' = ab`, after which the remaining relations are `a = abca`,
//! `b = bcab`, `c = cabc`.

use serde::{Deserialize, Serialize};

use crate::field::FpMatrix;
use crate::rep::{FiniteRep, RepQuiver};

pub fn three_punctured_sphere_quiver() -> RepQuiver {
    RepQuiver { vertices: 3, arrows: vec![(0, 1), (1, 2), (2, 0), (1, 0), (2, 1), (0, 2)] }
}

/// Matrix of the path `x` then `y` on column vectors.
fn then(x: &FpMatrix, y: &FpMatrix, p: u8) -> FpMatrix {
    y.mul(x, p)
}

/// Whether the arrow matrices satisfy all Jacobi relations.
pub fn satisfies_relations(rep: &FiniteRep) -> bool {
    let p = rep.p;
    let [a, b, c, a1, b1, c1] = [&rep.maps[0], &rep.maps[1], &rep.maps[2], &rep.maps[3], &rep.maps[4], &rep.maps[5]];
    let abca = then(&then(&then(a, b, p), c, p), a, p);
    let bcab = then(&then(&then(b, c, p), a, p), b, p);
    let cabc = then(&then(&then(c, a, p), b, p), c, p);
    *a1 == then(b, c, p) && *b1 == then(c, a, p) && *c1 == then(a, b, p) && *a == abca && *b == bcab && *c == cabc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiIndecomposable {
    pub class: Vec<usize>,
    pub rep: FiniteRep,
    /// Whether the loop `abc` acts as the identity at vertex 1.
    pub loop_is_identity: bool,
}

/// All indecomposable representations with dimension vector at most
/// `bound` componentwise, up to isomorphism. `a, b, c` are enumerated and
/// the primed arrows are determined by them.
pub fn jacobi_indecomposables_3punct(bound: [usize; 3], p: u8) -> Vec<JacobiIndecomposable> {
    let quiver = three_punctured_sphere_quiver();
    let mut found: Vec<JacobiIndecomposable> = Vec::new();
    for d1 in 0..=bound[0] {
        for d2 in 0..=bound[1] {
            for d3 in 0..=bound[2] {
                let dims = vec![d1, d2, d3];
                if d1 + d2 + d3 == 0 {
                    continue;
                }
                for a in FpMatrix::all(d2, d1, p) {
                    for b in FpMatrix::all(d3, d2, p) {
                        for c in FpMatrix::all(d1, d3, p) {
                            let maps = vec![a.clone(), b.clone(), c.clone(), then(&b, &c, p), then(&c, &a, p), then(&a, &b, p)];
                            let rep = FiniteRep { quiver: quiver.clone(), dims: dims.clone(), p, maps };
                            if !satisfies_relations(&rep) || !rep.is_indecomposable() {
                                continue;
                            }
                            if found.iter().any(|f| f.rep.is_isomorphic(&rep)) {
                                continue;
                            }
                            let abc = then(&then(&a, &b, p), &c, p);
                            let loop_is_identity = abc == FpMatrix::identity(d1);
                            found.push(JacobiIndecomposable { class: dims.clone(), rep, loop_is_identity });
                        }
                    }
                }
            }
        }
    }
    found
}
