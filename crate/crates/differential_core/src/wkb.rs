//! Ideal triangulations from strip decompositions.

use std::collections::BTreeMap;

use surface_core::{IdealTriangulation, MarkedSurface, SignedTriangulation};

use crate::decomposition::{StripDecomposition, Vertex};
use crate::differential::{PoleId, QuadraticDifferential};
use crate::error::DiffError;
use crate::real::{phase, Real, C};

#[derive(Debug, Clone)]
pub struct WkbTriangulation {
    pub signed: SignedTriangulation,
    /// Strip index of each arc.
    pub arc_strip: Vec<usize>,
}

impl WkbTriangulation {
    pub fn triangulation(&self) -> &IdealTriangulation {
        &self.signed.triangulation
    }
}

pub fn vertex_label<T: Real>(q: &QuadraticDifferential<T>, v: Vertex) -> String {
    if q.pole_order(v.pole) == 2 {
        format!("p{}", v.pole.label())
    } else {
        format!("b{}_{}", v.pole.label(), v.cluster)
    }
}

/// Sign at a double pole: `+1` when `e^{-i pi theta} Res` lies in the upper
/// half-plane for the canonical residue.
pub fn puncture_sign<T: Real>(q: &QuadraticDifferential<T>, pole: PoleId) -> Result<i8, DiffError> {
    let r = q.residue(pole)?;
    Ok(if (r / phase(q.theta)).im >= T::zero() { 1 } else { -1 })
}

/// The WKB triangulation with arcs labelled `e0, e1, ...` in strip order.
pub fn wkb_triangulation<T: Real>(q: &QuadraticDifferential<T>, dec: &StripDecomposition<T>) -> Result<WkbTriangulation, DiffError> {
    let labels: Vec<String> = (0..dec.strips.len()).map(|i| format!("e{i}")).collect();
    wkb_with_labels(q, dec, &labels)
}

/// The WKB triangulation with the given label for each strip.
pub fn wkb_with_labels<T: Real>(
    q: &QuadraticDifferential<T>,
    dec: &StripDecomposition<T>,
    labels: &[String],
) -> Result<WkbTriangulation, DiffError> {
    let mut side: BTreeMap<(usize, usize), String> = BTreeMap::new();
    for (i, s) in dec.strips.iter().enumerate() {
        for &sec in &s.sectors {
            side.insert(sec, labels[i].clone());
        }
    }
    let mut segments = Vec::new();
    for h in &dec.half_planes {
        let v = dec.vertex_of(h.separatrices[0]);
        let label = format!("s{}", &vertex_label(q, v)[1..]);
        side.insert(h.sector, label.clone());
        segments.push(label);
    }
    let zeros: Vec<usize> = {
        let mut z: Vec<usize> = dec.separatrices.ids.iter().map(|id| id.0).collect();
        z.dedup();
        z
    };
    let mut triangles = Vec::new();
    let mut corners = Vec::new();
    for &k in &zeros {
        let mut tri: [String; 3] = Default::default();
        let mut cor: [String; 3] = Default::default();
        for j in 0..3 {
            tri[j] = side
                .get(&(k, j))
                .cloned()
                .ok_or_else(|| DiffError::DecompositionMismatch(format!("sector ({k}, {j}) not covered")))?;
            let r = dec.separatrices.index(k, j).expect("ray exists");
            cor[j] = vertex_label(q, dec.vertex_of(r));
        }
        triangles.push(tri);
        corners.push(cor);
    }
    let mut punctures = 0;
    let mut boundary = Vec::new();
    let mut signs = BTreeMap::new();
    for (id, m) in q.big_poles() {
        if m == 2 {
            punctures += 1;
            signs.insert(format!("p{}", id.label()), puncture_sign(q, id)?);
        } else {
            boundary.push(m - 2);
        }
    }
    let surface = MarkedSurface::new(0, punctures, boundary)?;
    let t = IdealTriangulation::from_labels(surface, labels, &segments, &triangles, &corners)?;
    let signed = SignedTriangulation::new(t, &signs)?;
    Ok(WkbTriangulation { signed, arc_strip: (0..labels.len()).collect() })
}

/// Standard periods by arc label.
pub fn standard_periods<T: Real>(dec: &StripDecomposition<T>, wkb: &WkbTriangulation) -> BTreeMap<String, C<T>> {
    let t = wkb.triangulation();
    (0..t.n()).map(|a| (t.arc_label(a).to_string(), dec.strips[wkb.arc_strip[a]].period)).collect()
}
