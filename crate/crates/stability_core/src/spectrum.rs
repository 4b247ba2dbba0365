//! Closed-form stable spectra of the Kronecker, affine A2 and linear A_n
//! quivers.

use std::cmp::Ordering;

use differential_core::Real;
use serde::{Deserialize, Serialize};

use crate::charge::{cross, CentralCharge};
use crate::rep::Direction;
use crate::StabilityError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry<T> {
    pub class: Vec<i64>,
    pub phase: T,
    /// 0 for a rigid stable, 1 for a family parametrized by a line.
    pub family_dim: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StableSpectrum<T> {
    pub entries: Vec<SpectrumEntry<T>>,
}

impl<T: Real> StableSpectrum<T> {
    fn from_classes(z: &CentralCharge<T>, classes: Vec<(Vec<i64>, u8)>) -> Self {
        let mut entries: Vec<SpectrumEntry<T>> =
            classes.into_iter().map(|(class, family_dim)| SpectrumEntry { phase: z.phase(&class), class, family_dim }).collect();
        entries.sort_by(|a, b| a.class.iter().sum::<i64>().cmp(&b.class.iter().sum()).then(a.class.cmp(&b.class)));
        StableSpectrum { entries }
    }

    pub fn classes(&self) -> Vec<Vec<i64>> {
        self.entries.iter().map(|e| e.class.clone()).collect()
    }

    pub fn get(&self, class: &[i64]) -> Option<&SpectrumEntry<T>> {
        self.entries.iter().find(|e| e.class == class)
    }

    /// Entries whose phase is within `tol` of `phase`.
    pub fn at_phase(&self, phase: T, tol: T) -> Vec<&SpectrumEntry<T>> {
        self.entries.iter().filter(|e| (e.phase - phase).abs() <= tol).collect()
    }
}

impl StableSpectrum<f64> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, StabilityError> {
        let s: Self = serde_json::from_str(text).map_err(|e| StabilityError::Parse(e.to_string()))?;
        if s.entries.iter().any(|e| e.family_dim > 1) {
            return Err(StabilityError::Parse("family_dim must be 0 or 1".into()));
        }
        Ok(s)
    }
}

fn check_rank<T: Real>(z: &CentralCharge<T>, n: usize) -> Result<(), StabilityError> {
    if z.rank() != n {
        return Err(StabilityError::Shape(format!("central charge needs {n} values, got {}", z.rank())));
    }
    Ok(())
}

/// Stable classes of the Kronecker quiver `1 => 2` of total dimension at
/// most `bound`.
pub fn kronecker_spectrum<T: Real>(z: &CentralCharge<T>, bound: usize) -> Result<StableSpectrum<T>, StabilityError> {
    check_rank(z, 2)?;
    // Im(Z1 / Z2) has the sign of Im(Z1 conj(Z2)) = -cross(Z1, Z2).
    let c = -cross(z.values[0], z.values[1]);
    if c == T::zero() {
        return Err(StabilityError::CollinearCharge);
    }
    let mut classes = vec![(vec![1, 0], 0), (vec![0, 1], 0)];
    if c > T::zero() {
        let mut n = 1i64;
        while 2 * n < bound as i64 {
            classes.push((vec![n, n + 1], 0));
            classes.push((vec![n + 1, n], 0));
            n += 1;
        }
        if bound >= 2 {
            classes.push((vec![1, 1], 1));
        }
    }
    Ok(StableSpectrum::from_classes(z, classes))
}

/// Stables of the affine A2 quiver (`a: 1 -> 2`, `b: 1 -> 3`, `c: 3 -> 2`)
/// with central charge on the imaginary axis, and the vertex simples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineA2Spectrum<T> {
    pub imaginary: StableSpectrum<T>,
    pub simples: StableSpectrum<T>,
}

fn near_imaginary<T: Real>(w: num_complex::Complex<T>, scale: T) -> bool {
    w.re.abs() <= T::lit(1e-9) * scale
}

pub fn affine_a2_spectrum<T: Real>(z: &CentralCharge<T>) -> Result<AffineA2Spectrum<T>, StabilityError> {
    check_rank(z, 3)?;
    let [z1, z2, z3] = [z.values[0], z.values[1], z.values[2]];
    let scale = z1.norm() + z2.norm() + z3.norm();
    if !near_imaginary(z1 + z2, scale) {
        return Err(StabilityError::PreconditionViolated("Z(S1) + Z(S2) is not imaginary".into()));
    }
    if !near_imaginary(z3, scale) {
        return Err(StabilityError::PreconditionViolated("Z(S3) is not imaginary".into()));
    }
    if -cross(z1, z2) <= T::zero() {
        return Err(StabilityError::PreconditionViolated("Im Z(S1)/Z(S2) is not positive".into()));
    }
    let imaginary = StableSpectrum::from_classes(z, vec![(vec![1, 1, 0], 0), (vec![0, 0, 1], 0), (vec![1, 1, 1], 1)]);
    let simples = StableSpectrum::from_classes(z, vec![(vec![1, 0, 0], 0), (vec![0, 1, 0], 0), (vec![0, 0, 1], 0)]);
    Ok(AffineA2Spectrum { imaginary, simples })
}

/// Stable interval modules of a linear quiver with `orientation.len() + 1`
/// vertices, of total dimension at most `bound`.
pub fn a_n_spectrum<T: Real>(orientation: &[Direction], z: &CentralCharge<T>, bound: usize) -> Result<StableSpectrum<T>, StabilityError> {
    let n = orientation.len() + 1;
    check_rank(z, n)?;
    let interval = |i: usize, j: usize| -> Vec<i64> { (0..n).map(|k| (i <= k && k <= j) as i64).collect() };
    let mut classes = Vec::new();
    for i in 0..n {
        for j in i..n {
            if j - i + 1 > bound {
                continue;
            }
            let d = interval(i, j);
            // Subrepresentations of an interval module are sums of
            // sub-intervals closed under the arrows; a sum has phase at most
            // the largest phase of its pieces, so sub-intervals suffice.
            let closed = |k: usize, l: usize| {
                (k == i || orientation[k - 1] != Direction::Left) && (l == j || orientation[l] != Direction::Right)
            };
            let stable = (i..=j)
                .flat_map(|k| (k..=j).map(move |l| (k, l)))
                .filter(|&(k, l)| (k, l) != (i, j) && closed(k, l))
                .all(|(k, l)| z.compare(&interval(k, l), &d) == Ordering::Less);
            if stable {
                classes.push((d, 0));
            }
        }
    }
    Ok(StableSpectrum::from_classes(z, classes))
}
