use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::DiffError;
use crate::poly;
use crate::real::{Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole<T> {
    pub z: C<T>,
    pub order: u32,
}

/// `P(z) / prod (z - p_j)^{m_j} dz^2` on the Riemann sphere together with a
/// phase. Horizontal trajectories of phase `theta` satisfy `int sqrt(R) dz` in
/// `e^{i pi theta} R`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticDifferential<T> {
    pub numerator: Vec<C<T>>,
    pub poles: Vec<Pole<T>>,
    pub theta: T,
}

/// Identifies a pole. Finite poles are numbered in input order and the pole
/// at infinity comes last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PoleId {
    Finite(usize),
    Infinity,
}

impl PoleId {
    pub fn label(self) -> String {
        match self {
            PoleId::Finite(i) => i.to_string(),
            PoleId::Infinity => "inf".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiniteCritKind {
    Zero,
    SimplePole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteCrit<T> {
    pub z: C<T>,
    pub kind: FiniteCritKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointReport<T> {
    pub zeros: Vec<C<T>>,
    pub poles: Vec<Pole<T>>,
    /// Order of the pole at infinity; zero when infinity is a regular point.
    pub infinity_order: i64,
    pub finite_critical: Vec<FiniteCrit<T>>,
    /// Poles of order at least two.
    pub infinite_critical: Vec<(PoleId, u32)>,
    pub hat_rank: usize,
}

impl<T: Real> QuadraticDifferential<T> {
    pub fn new(numerator: Vec<C<T>>, poles: Vec<Pole<T>>, theta: T) -> Result<Self, DiffError> {
        let q = QuadraticDifferential { numerator: poly::trim(&numerator), poles, theta };
        q.critical_points()?;
        Ok(q)
    }

    /// Builds from real parts and imaginary parts of coefficients.
    pub fn from_coeffs(numerator: &[(f64, f64)], poles: &[((f64, f64), u32)], theta: f64) -> Result<Self, DiffError> {
        let num = numerator.iter().map(|&(a, b)| Complex::new(T::lit(a), T::lit(b))).collect();
        let ps = poles
            .iter()
            .map(|&((a, b), m)| Pole { z: Complex::new(T::lit(a), T::lit(b)), order: m })
            .collect();
        Self::new(num, ps, T::lit(theta))
    }

    pub fn with_theta(&self, theta: T) -> Self {
        QuadraticDifferential { theta, ..self.clone() }
    }

    /// Multiplies the numerator by a complex constant.
    pub fn scaled(&self, c: C<T>) -> Self {
        QuadraticDifferential {
            numerator: self.numerator.iter().map(|&a| a * c).collect(),
            ..self.clone()
        }
    }

    pub fn degree(&self) -> usize {
        poly::degree(&self.numerator)
    }

    pub fn infinity_order(&self) -> i64 {
        self.degree() as i64 - self.poles.iter().map(|p| p.order as i64).sum::<i64>() + 4
    }

    /// Evaluates `R(z) = P(z) / prod (z - p_j)^{m_j}`.
    pub fn r(&self, z: C<T>) -> C<T> {
        let mut v = poly::eval(&self.numerator, z);
        for p in &self.poles {
            v = v / (z - p.z).powu(p.order);
        }
        v
    }

    pub fn pole_location(&self, id: PoleId) -> Option<C<T>> {
        match id {
            PoleId::Finite(i) => self.poles.get(i).map(|p| p.z),
            PoleId::Infinity => None,
        }
    }

    pub fn pole_order(&self, id: PoleId) -> i64 {
        match id {
            PoleId::Finite(i) => self.poles.get(i).map_or(0, |p| p.order as i64),
            PoleId::Infinity => self.infinity_order(),
        }
    }

    /// Poles of order at least two, finite ones first.
    pub fn big_poles(&self) -> Vec<(PoleId, u32)> {
        let mut v: Vec<(PoleId, u32)> = self
            .poles
            .iter()
            .enumerate()
            .filter(|(_, p)| p.order >= 2)
            .map(|(i, p)| (PoleId::Finite(i), p.order))
            .collect();
        let m = self.infinity_order();
        if m >= 2 {
            v.push((PoleId::Infinity, m as u32));
        }
        v
    }

    /// Finds the zeros and checks the standing assumptions.
    pub fn critical_points(&self) -> Result<CriticalPointReport<T>, DiffError> {
        if self.numerator.iter().any(|c| !c.re.is_finite() || !c.im.is_finite())
            || self.poles.iter().any(|p| !p.z.re.is_finite() || !p.z.im.is_finite())
            || !self.theta.is_finite()
        {
            return Err(DiffError::Invalid("non-finite input".into()));
        }
        if self.numerator.iter().all(|c| c.norm() == T::zero()) {
            return Err(DiffError::Invalid("numerator vanishes".into()));
        }
        if self.poles.iter().any(|p| p.order == 0) {
            return Err(DiffError::Invalid("pole of order zero".into()));
        }
        for (i, a) in self.poles.iter().enumerate() {
            for b in &self.poles[i + 1..] {
                if (a.z - b.z).norm() == T::zero() {
                    return Err(DiffError::Invalid(format!("repeated pole at {}", a.z)));
                }
            }
        }
        let zeros = poly::roots(&self.numerator);
        let scale = T::one()
            + zeros
                .iter()
                .map(|z| z.norm())
                .chain(self.poles.iter().map(|p| p.z.norm()))
                .fold(T::zero(), T::max);
        let sep = T::lit(1e-7) * scale;
        for (i, a) in zeros.iter().enumerate() {
            for b in &zeros[i + 1..] {
                if (a - b).norm() < sep {
                    return Err(DiffError::NonSimpleZero(format!("{a}")));
                }
            }
            for p in &self.poles {
                if (a - p.z).norm() < sep {
                    return Err(DiffError::NonSimpleZero(format!("{a}")));
                }
            }
        }
        let m_inf = self.infinity_order();
        if m_inf < 0 {
            return Err(DiffError::ZeroAtInfinity);
        }
        let mut orders: Vec<i64> = self.poles.iter().map(|p| p.order as i64).collect();
        if m_inf > 0 {
            orders.push(m_inf);
        }
        if orders.is_empty() {
            return Err(DiffError::NoPole);
        }
        let mut sorted = orders.clone();
        sorted.sort();
        if zeros.is_empty() && (sorted == [2, 2] || sorted == [4]) {
            return Err(DiffError::DegeneratePolarType(format!("{sorted:?}")));
        }
        let mut finite_critical: Vec<FiniteCrit<T>> =
            zeros.iter().map(|&z| FiniteCrit { z, kind: FiniteCritKind::Zero }).collect();
        finite_critical.extend(
            self.poles
                .iter()
                .filter(|p| p.order == 1)
                .map(|p| FiniteCrit { z: p.z, kind: FiniteCritKind::SimplePole }),
        );
        if m_inf == 1 {
            return Err(DiffError::Invalid("simple pole at infinity is not supported".into()));
        }
        if finite_critical.is_empty() {
            return Err(DiffError::NoFiniteCritical);
        }
        let rank = -6 + orders.iter().map(|m| m + 1).sum::<i64>();
        Ok(CriticalPointReport {
            zeros,
            poles: self.poles.clone(),
            infinity_order: m_inf,
            finite_critical,
            infinite_critical: self.big_poles(),
            hat_rank: rank.max(0) as usize,
        })
    }

    /// Leading coefficient `a` with `R ~ a u^{-m}` in the local coordinate `u`
    /// at the pole (`u = 1/z` at infinity).
    pub fn leading_coefficient(&self, id: PoleId) -> C<T> {
        match id {
            PoleId::Finite(i) => {
                let p = self.poles[i];
                let mut v = poly::eval(&self.numerator, p.z);
                for (j, q) in self.poles.iter().enumerate() {
                    if j != i {
                        v = v / (p.z - q.z).powu(q.order);
                    }
                }
                v
            }
            PoleId::Infinity => *poly::trim(&self.numerator).last().unwrap(),
        }
    }

    /// Residue of an even order pole with argument in `[0, pi)`.
    pub fn residue(&self, id: PoleId) -> Result<C<T>, DiffError> {
        let m = self.pole_order(id);
        if m < 2 {
            return Err(DiffError::NotAPole(id.label()));
        }
        if m % 2 == 1 {
            return Err(DiffError::OddOrderPole(id.label()));
        }
        let four_pi_i = Complex::new(T::zero(), T::lit(4.0) * T::PI());
        let raw = if m == 2 {
            four_pi_i * self.leading_coefficient(id).sqrt()
        } else {
            self.contour_residue(id)
        };
        Ok(canonical_sign(raw))
    }

    fn contour_residue(&self, id: PoleId) -> C<T> {
        let geom = crate::chart::Geometry::new(self);
        let (chart, centre) = match id {
            PoleId::Finite(i) => (crate::chart::Chart::Z, self.poles[i].z),
            PoleId::Infinity => (crate::chart::Chart::W, Complex::new(T::zero(), T::zero())),
        };
        let radius = geom.isolation(chart, centre) * T::lit(0.5);
        let two = T::lit(2.0);
        geom.circle_integral(chart, centre, radius, 256) * two
    }
}

/// Representative of `{z, -z}` with argument in `[0, pi)`.
pub fn canonical_sign<T: Real>(z: C<T>) -> C<T> {
    if z.im < T::zero() || (z.im == T::zero() && z.re < T::zero()) {
        -z
    } else {
        z
    }
}

#[derive(Serialize, Deserialize)]
struct PoleFile {
    z: [f64; 2],
    order: u32,
}

#[derive(Serialize, Deserialize)]
struct DifferentialFile {
    numerator: Vec<[f64; 2]>,
    #[serde(default)]
    poles: Vec<PoleFile>,
    #[serde(default)]
    theta: f64,
}

impl<T: Real> QuadraticDifferential<T> {
    pub fn from_json(text: &str) -> Result<Self, DiffError> {
        let f: DifferentialFile = serde_json::from_str(text).map_err(|e| DiffError::Parse(e.to_string()))?;
        let num: Vec<(f64, f64)> = f.numerator.iter().map(|c| (c[0], c[1])).collect();
        let poles: Vec<((f64, f64), u32)> = f.poles.iter().map(|p| ((p.z[0], p.z[1]), p.order)).collect();
        Self::from_coeffs(&num, &poles, f.theta)
    }

    pub fn to_json(&self) -> String {
        let f = DifferentialFile {
            numerator: self.numerator.iter().map(|c| [c.re.to_f64(), c.im.to_f64()]).collect(),
            poles: self
                .poles
                .iter()
                .map(|p| PoleFile { z: [p.z.re.to_f64(), p.z.im.to_f64()], order: p.order })
                .collect(),
            theta: self.theta.to_f64(),
        };
        serde_json::to_string_pretty(&f).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = QuadraticDifferential<f64>;

    #[test]
    fn z_squared_plus_one() {
        let q = Q::from_coeffs(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)], &[], 0.0).unwrap();
        let r = q.critical_points().unwrap();
        assert_eq!(r.infinity_order, 6);
        assert_eq!(r.hat_rank, 1);
        assert_eq!(r.zeros.len(), 2);
        for z in &r.zeros {
            assert!((z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12);
        }
    }

    #[test]
    fn linear_has_rank_zero() {
        let q = Q::from_coeffs(&[(0.0, 0.0), (1.0, 0.0)], &[], 0.0).unwrap();
        let r = q.critical_points().unwrap();
        assert_eq!(r.hat_rank, 0);
        assert_eq!(r.infinity_order, 5);
    }

    #[test]
    fn excluded_types() {
        let e = Q::from_coeffs(&[(1.0, 0.0)], &[((0.0, 0.0), 2)], 0.0).unwrap_err();
        assert!(matches!(e, DiffError::DegeneratePolarType(_)));
        let e = Q::from_coeffs(&[(1.0, 0.0), (2.0, 0.0), (1.0, 0.0)], &[], 0.0).unwrap_err();
        assert!(matches!(e, DiffError::NonSimpleZero(_)));
        let e = Q::from_coeffs(&[(1.0, 0.0)], &[((0.0, 0.0), 1), ((1.0, 0.0), 1), ((2.0, 0.0), 1), ((3.0, 0.0), 2)], 0.0)
            .unwrap_err();
        assert!(matches!(e, DiffError::ZeroAtInfinity));
    }

    #[test]
    fn double_pole_residue() {
        let q = Q::from_coeffs(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)], &[((0.0, 0.0), 2)], 0.0).unwrap();
        let r = q.residue(PoleId::Finite(0)).unwrap();
        assert!((r - Complex::new(0.0, 4.0 * std::f64::consts::PI)).norm() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let q = Q::from_coeffs(&[(1.0, 0.5), (0.0, 0.0), (1.0, 0.0)], &[((0.2, 0.0), 2)], 0.25).unwrap();
        let back = Q::from_json(&q.to_json()).unwrap();
        assert_eq!(q, back);
    }
}
