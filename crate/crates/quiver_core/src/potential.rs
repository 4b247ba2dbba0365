use serde::{Deserialize, Serialize};
use surface_core::SignedTriangulation;

use crate::QuiverError;

/// Cyclic word of arrows with an integer coefficient. Arrow `t{i}c{j}` sits at
/// corner `j` of triangle `i` and runs from side `j` to side `j-1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cycle {
    pub coefficient: i64,
    pub arrows: Vec<String>,
}

impl Cycle {
    fn new(coefficient: i64, arrows: Vec<String>) -> Self {
        let k = arrows.len();
        let best = (0..k)
            .map(|r| arrows[r..].iter().chain(&arrows[..r]).cloned().collect::<Vec<_>>())
            .min()
            .unwrap_or_default();
        Cycle { coefficient, arrows: best }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Potential {
    pub cycles: Vec<Cycle>,
}

fn arrow(t: usize, j: usize) -> String {
    format!("t{t}c{j}")
}

/// Sum of the clockwise 3-cycle of every interior triangle minus the signed
/// cycle around every puncture.
pub fn potential(st: &SignedTriangulation) -> Result<Potential, QuiverError> {
    let t = &st.triangulation;
    for p in t.punctures() {
        let v = t.valency(p);
        if v <= 2 {
            return Err(QuiverError::DegenerateTriangulation(t.vertices()[p].clone(), v));
        }
    }
    let mut cycles = Vec::new();
    for (i, tri) in t.triangles().iter().enumerate() {
        if tri.iter().all(|s| s.arc().is_some()) {
            cycles.push(Cycle::new(1, vec![arrow(i, 2), arrow(i, 1), arrow(i, 0)]));
        }
    }
    for p in t.punctures() {
        let start = t
            .corners()
            .iter()
            .enumerate()
            .find_map(|(i, c)| c.iter().position(|&v| v == p).map(|j| (i, j)))
            .expect("puncture has a corner");
        let mut word = Vec::new();
        let mut cur = start;
        loop {
            word.push(arrow(cur.0, cur.1));
            let prev_slot = (cur.1 + 2) % 3;
            cur = t.opposite(cur.0, prev_slot).expect("sides at a puncture are arcs");
            if cur == start {
                break;
            }
        }
        cycles.push(Cycle::new(-(st.sign(p) as i64), word));
    }
    cycles.sort();
    Ok(Potential { cycles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use surface_core::*;

    #[test]
    fn unpunctured_has_only_triangles() {
        let (hex, _) = bfs_triangulations(&polygon(6), 100);
        let with_inner = hex
            .iter()
            .find(|t| t.triangles().iter().any(|s| s.iter().all(|x| x.arc().is_some())))
            .unwrap();
        let w = potential(&SignedTriangulation::all_plus(with_inner.clone())).unwrap();
        assert_eq!(w.cycles.len(), 1);
        assert_eq!(w.cycles[0].arrows.len(), 3);
    }

    #[test]
    fn degenerate_sphere() {
        let st = SignedTriangulation::all_plus(three_punctured_sphere());
        assert!(matches!(potential(&st), Err(QuiverError::DegenerateTriangulation(_, 2))));
    }

    #[test]
    fn torus_two_punctures() {
        let t = star_subdivide(&torus_one_puncture(), 1, "p1");
        let st = SignedTriangulation::all_plus(t);
        let w = potential(&st).unwrap();
        assert_eq!(w.cycles.len(), 4 + 2);
        assert!(w.cycles.iter().all(|c| c.arrows.len() >= 3));
        let total: usize = w.cycles.iter().filter(|c| c.coefficient < 0).map(|c| c.arrows.len()).sum();
        assert_eq!(total, 2 * st.triangulation.n());
    }
}
