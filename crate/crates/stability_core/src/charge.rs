use std::cmp::Ordering;

use differential_core::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::StabilityError;

/// Values of a central charge on the simple classes, all in the semi-closed
/// upper half plane `{r e^{i pi phi} : r > 0, 0 < phi <= 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralCharge<T> {
    pub values: Vec<Complex<T>>,
}

pub fn in_half_plane<T: Real>(z: Complex<T>) -> bool {
    z.im > T::zero() || (z.im == T::zero() && z.re < T::zero())
}

/// `Im(conj(a) b)`: positive when `b` has the larger phase.
pub fn cross<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    a.re * b.im - a.im * b.re
}

impl<T: Real> CentralCharge<T> {
    pub fn new(values: Vec<Complex<T>>) -> Result<Self, StabilityError> {
        for (i, z) in values.iter().enumerate() {
            if !in_half_plane(*z) {
                return Err(StabilityError::InvalidCharge(format!("value {i} = {z} is not in the upper half plane")));
            }
        }
        Ok(CentralCharge { values })
    }

    pub fn from_pairs(values: &[(f64, f64)]) -> Result<Self, StabilityError> {
        Self::new(values.iter().map(|&(re, im)| Complex::new(T::lit(re), T::lit(im))).collect())
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn z(&self, d: &[i64]) -> Complex<T> {
        self.values.iter().zip(d).fold(Complex::new(T::zero(), T::zero()), |acc, (z, &k)| acc + *z * T::lit(k as f64))
    }

    /// Phase in `(0, 1]` of a nonzero nonnegative class.
    pub fn phase(&self, d: &[i64]) -> T {
        let z = self.z(d);
        if z.im == T::zero() {
            T::one()
        } else {
            z.arg() / T::PI()
        }
    }

    /// Compares the phases of two nonzero nonnegative classes by the sign of
    /// a cross product; no angles are computed.
    pub fn compare(&self, a: &[i64], b: &[i64]) -> Ordering {
        let c = cross(self.z(a), self.z(b));
        if c > T::zero() {
            Ordering::Less
        } else if c < T::zero() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    pub fn scaled(&self, t: T) -> Self {
        CentralCharge { values: self.values.iter().map(|z| *z * t).collect() }
    }
}
