use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::SurfaceError;

/// A compact oriented surface with marked points: `punctures` interior marks
/// and `boundary[i]` marks on the i-th boundary component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedSurface {
    pub genus: u32,
    pub punctures: u32,
    pub boundary: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceClass {
    Amenable,
    ExcludedNoTriangulation,
    ExcludedAssumption,
    SpecialWeiwen,
    SpecialFreely,
    ClosedOnePuncture,
}

impl SurfaceClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SurfaceClass::Amenable => "amenable",
            SurfaceClass::ExcludedNoTriangulation => "excluded_no_triangulation",
            SurfaceClass::ExcludedAssumption => "excluded_assumption",
            SurfaceClass::SpecialWeiwen => "special_weiwen",
            SurfaceClass::SpecialFreely => "special_freely",
            SurfaceClass::ClosedOnePuncture => "closed_one_puncture",
        }
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl MarkedSurface {
    pub fn new(genus: u32, punctures: u32, boundary: Vec<u32>) -> Result<Self, SurfaceError> {
        let s = MarkedSurface { genus, punctures, boundary };
        s.check()?;
        Ok(s)
    }

    pub fn disc(marks: u32) -> Self {
        MarkedSurface { genus: 0, punctures: 0, boundary: vec![marks] }
    }

    pub fn check(&self) -> Result<(), SurfaceError> {
        if self.boundary.contains(&0) {
            return Err(SurfaceError::InvalidSurface(format!("{self}: empty boundary component")));
        }
        if self.marked_points() == 0 {
            return Err(SurfaceError::InvalidSurface(format!("{self}: no marked points")));
        }
        Ok(())
    }

    pub fn marked_points(&self) -> u32 {
        self.punctures + self.boundary.iter().sum::<u32>()
    }

    pub fn boundary_components(&self) -> u32 {
        self.boundary.len() as u32
    }

    /// Euler characteristic of the compact surface.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary.len() as i64
    }

    fn is_sphere(&self) -> bool {
        self.genus == 0 && self.boundary.is_empty()
    }

    fn is_disc(&self) -> bool {
        self.genus == 0 && self.boundary.len() == 1
    }

    /// True when ideal triangulations may be built and manipulated.
    /// Spheres with four or five punctures are refused.
    pub fn admits_triangulation(&self) -> bool {
        match classify_surface(self) {
            SurfaceClass::ExcludedNoTriangulation => false,
            SurfaceClass::ExcludedAssumption => !(self.is_sphere() && self.punctures >= 4),
            _ => true,
        }
    }
}

impl fmt::Display for MarkedSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, p={}, boundary={:?})", self.genus, self.punctures, self.boundary)
    }
}

pub fn classify_surface(s: &MarkedSurface) -> SurfaceClass {
    let p = s.punctures;
    let b = &s.boundary[..];
    if (s.is_sphere() && p <= 2) || (s.is_disc() && p == 0 && b[0] <= 2) {
        return SurfaceClass::ExcludedNoTriangulation;
    }
    if (s.is_sphere() && p <= 5)
        || (s.is_disc() && p == 0 && b[0] == 3)
        || (s.is_disc() && p == 1 && b[0] == 1)
    {
        return SurfaceClass::ExcludedAssumption;
    }
    if b.is_empty() && p == 1 {
        return SurfaceClass::ClosedOnePuncture;
    }
    if s.is_disc() && ((p == 1 && (b[0] == 2 || b[0] == 4)) || (p == 2 && b[0] == 2)) {
        return SurfaceClass::SpecialWeiwen;
    }
    let annulus11 = s.genus == 0 && p == 0 && b == [1, 1];
    if (s.is_disc() && p == 0 && b[0] == 4) || annulus11 {
        return SurfaceClass::SpecialFreely;
    }
    SurfaceClass::Amenable
}

/// Number of arcs in any ideal triangulation.
pub fn arc_count(s: &MarkedSurface) -> Result<usize, SurfaceError> {
    s.check()?;
    if !s.admits_triangulation() {
        return Err(SurfaceError::NoTriangulation(s.to_string()));
    }
    let n = 6 * s.genus as i64 - 6
        + 3 * s.punctures as i64
        + s.boundary.iter().map(|&k| k as i64 + 3).sum::<i64>();
    Ok(n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(g: u32, p: u32, b: &[u32]) -> MarkedSurface {
        MarkedSurface { genus: g, punctures: p, boundary: b.to_vec() }
    }

    #[test]
    fn classification_table() {
        use SurfaceClass::*;
        assert_eq!(classify_surface(&s(0, 0, &[5])), Amenable);
        assert_eq!(classify_surface(&s(0, 1, &[1])), ExcludedAssumption);
        assert_eq!(classify_surface(&s(1, 1, &[])), ClosedOnePuncture);
        assert_eq!(classify_surface(&s(0, 2, &[])), ExcludedNoTriangulation);
        assert_eq!(classify_surface(&s(0, 0, &[2])), ExcludedNoTriangulation);
        assert_eq!(classify_surface(&s(0, 3, &[])), ExcludedAssumption);
        assert_eq!(classify_surface(&s(0, 6, &[])), Amenable);
        assert_eq!(classify_surface(&s(0, 0, &[3])), ExcludedAssumption);
        assert_eq!(classify_surface(&s(0, 1, &[2])), SpecialWeiwen);
        assert_eq!(classify_surface(&s(0, 1, &[4])), SpecialWeiwen);
        assert_eq!(classify_surface(&s(0, 2, &[2])), SpecialWeiwen);
        assert_eq!(classify_surface(&s(0, 1, &[3])), Amenable);
        assert_eq!(classify_surface(&s(0, 0, &[4])), SpecialFreely);
        assert_eq!(classify_surface(&s(0, 0, &[1, 1])), SpecialFreely);
        assert_eq!(classify_surface(&s(0, 0, &[2, 1])), Amenable);
        assert_eq!(classify_surface(&s(2, 1, &[])), ClosedOnePuncture);
        assert_eq!(classify_surface(&s(1, 2, &[])), Amenable);
    }

    #[test]
    fn arc_counts() {
        assert_eq!(arc_count(&s(0, 0, &[5])).unwrap(), 2);
        assert_eq!(arc_count(&s(0, 0, &[1, 1])).unwrap(), 2);
        assert_eq!(arc_count(&s(0, 3, &[])).unwrap(), 3);
        assert_eq!(arc_count(&s(1, 1, &[])).unwrap(), 3);
        assert_eq!(arc_count(&s(0, 1, &[4])).unwrap(), 4);
        assert!(arc_count(&s(0, 2, &[])).is_err());
        assert!(arc_count(&s(0, 4, &[])).is_err());
        assert!(s(0, 0, &[0]).check().is_err());
    }
}
