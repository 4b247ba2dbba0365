use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::SurfaceError;
use crate::triangulation::IdealTriangulation;

/// A triangulation with a sign at every puncture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedTriangulation {
    pub triangulation: IdealTriangulation,
    signs: BTreeMap<usize, i8>,
}

impl SignedTriangulation {
    pub fn all_plus(t: IdealTriangulation) -> Self {
        let signs = t.punctures().into_iter().map(|p| (p, 1)).collect();
        SignedTriangulation { triangulation: t, signs }
    }

    /// Signs keyed by puncture label; missing punctures default to +1.
    pub fn new(t: IdealTriangulation, by_label: &BTreeMap<String, i8>) -> Result<Self, SurfaceError> {
        let mut st = Self::all_plus(t);
        for (label, &s) in by_label {
            let v = st
                .triangulation
                .vertex_index(label)
                .filter(|&v| st.triangulation.is_puncture(v))
                .ok_or_else(|| SurfaceError::UnknownLabel(format!("puncture {label}")))?;
            if s != 1 && s != -1 {
                return Err(SurfaceError::Invalid(format!("sign {s} at {label}")));
            }
            st.signs.insert(v, s);
        }
        Ok(st)
    }

    pub fn sign(&self, p: usize) -> i8 {
        self.signs.get(&p).copied().unwrap_or(1)
    }

    pub fn signs(&self) -> &BTreeMap<usize, i8> {
        &self.signs
    }

    pub fn signs_by_label(&self) -> BTreeMap<String, i8> {
        self.signs
            .iter()
            .map(|(&v, &s)| (self.triangulation.vertices()[v].clone(), s))
            .collect()
    }

    pub fn with_sign(&self, p: usize, s: i8) -> Self {
        let mut out = self.clone();
        out.signs.insert(p, s);
        out
    }

    /// Representative with sign +1 at every puncture of valency one.
    pub fn normalized(&self) -> Self {
        let mut out = self.clone();
        for sf in self.triangulation.self_folded() {
            out.signs.insert(sf.puncture, 1);
        }
        out
    }
}

/// Negates the sign at a puncture of valency one.
pub fn pop(st: &SignedTriangulation, q: usize) -> Result<SignedTriangulation, SurfaceError> {
    let t = &st.triangulation;
    let label = t.vertices().get(q).cloned().unwrap_or_else(|| format!("#{q}"));
    if q >= t.vertices().len() || !t.is_puncture(q) {
        return Err(SurfaceError::InvalidPop(label, 0));
    }
    let v = t.valency(q);
    if v != 1 {
        return Err(SurfaceError::InvalidPop(label, v));
    }
    Ok(st.with_sign(q, -st.sign(q)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndTag {
    Plain,
    Tagged,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TaggedArc {
    pub underlying: String,
    pub ends: [(String, EndTag); 2],
}

/// Tagged arcs compared as a multiset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaggedArcSet {
    pub arcs: Vec<TaggedArc>,
}

impl PartialEq for TaggedArcSet {
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.arcs.clone();
        let mut b = other.arcs.clone();
        a.sort();
        b.sort();
        a == b
    }
}

impl Eq for TaggedArcSet {}

/// The tagged arc attached to every arc of a signed triangulation.
pub fn tagged_arcs(st: &SignedTriangulation) -> TaggedArcSet {
    let t = &st.triangulation;
    let tag_at = |v: usize, flip: bool| {
        let tagged = t.is_puncture(v) && ((st.sign(v) == -1) != flip);
        if tagged {
            EndTag::Tagged
        } else {
            EndTag::Plain
        }
    };
    let folded = t.self_folded();
    let mut arcs = Vec::with_capacity(t.n());
    for a in 0..t.n() {
        let loop_of = folded.iter().find(|s| s.encircling == a);
        let (underlying, x, y, special) = match loop_of {
            Some(sf) => {
                let (x, y) = t.endpoints(sf.folded);
                (sf.folded, x, y, Some(sf.puncture))
            }
            None => {
                let (x, y) = t.endpoints(a);
                (a, x, y, None)
            }
        };
        let end = |v: usize| (t.vertices()[v].clone(), tag_at(v, special == Some(v)));
        let mut ends = [end(x), end(y)];
        ends.sort();
        arcs.push(TaggedArc { underlying: t.arc_label(underlying).to_string(), ends });
    }
    TaggedArcSet { arcs }
}

/// Equality of the tagged triangulations represented, up to arc relabelling.
pub fn tagged_equal(a: &SignedTriangulation, b: &SignedTriangulation) -> bool {
    a.triangulation.surface() == b.triangulation.surface()
        && a.normalized().canonical_code() == b.normalized().canonical_code()
}

/// Flip in the tagged arc at position `k`. At a folded arc the enclosed
/// puncture is popped, the loop and folded arc exchange positions and the
/// loop is flipped, so position `k` is the one replaced.
pub fn tagged_flip(st: &SignedTriangulation, k: usize) -> Result<SignedTriangulation, SurfaceError> {
    let t = &st.triangulation;
    if let Some(sf) = t.self_folded().into_iter().find(|s| s.folded == k) {
        let popped = st.with_sign(sf.puncture, -st.sign(sf.puncture));
        let swapped = popped.triangulation.swap_arcs(sf.encircling, sf.folded);
        let flipped = swapped.flip(k)?;
        return Ok(SignedTriangulation { triangulation: flipped, signs: popped.signs });
    }
    Ok(SignedTriangulation { triangulation: t.flip(k)?, signs: st.signs.clone() })
}
