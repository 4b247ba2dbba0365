//! Complex polynomials in ascending coefficient order.

use num_complex::Complex;

use crate::real::{Real, C};

pub fn eval<T: Real>(coeffs: &[C<T>], z: C<T>) -> C<T> {
    coeffs.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
}

/// Value and first derivative.
pub fn eval_d<T: Real>(coeffs: &[C<T>], z: C<T>) -> (C<T>, C<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    let mut p = zero;
    let mut d = zero;
    for &c in coeffs.iter().rev() {
        d = d * z + p;
        p = p * z + c;
    }
    (p, d)
}

/// Drops trailing zero coefficients.
pub fn trim<T: Real>(coeffs: &[C<T>]) -> Vec<C<T>> {
    let mut v = coeffs.to_vec();
    while v.len() > 1 && v.last().is_some_and(|c| c.norm() == T::zero()) {
        v.pop();
    }
    v
}

pub fn degree<T: Real>(coeffs: &[C<T>]) -> usize {
    trim(coeffs).len().saturating_sub(1)
}

/// Roots by the Aberth iteration followed by Newton polishing.
pub fn roots<T: Real>(coeffs: &[C<T>]) -> Vec<C<T>> {
    let p = trim(coeffs);
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let monic: Vec<C<T>> = p.iter().map(|&c| c / lead).collect();
    // Cauchy bound for the initial circle.
    let bound = T::one() + monic[..n].iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let radius = bound.min(T::lit(1.0) + monic[0].norm().powf(T::one() / T::lit(n as f64)));
    let mut z: Vec<C<T>> = (0..n)
        .map(|k| {
            let a = T::TAU() * T::lit(k as f64) / T::lit(n as f64) + T::lit(0.4);
            Complex::from_polar(radius, a)
        })
        .collect();
    let eps = T::epsilon() * T::lit(16.0);
    for _ in 0..500 {
        let mut moved = T::zero();
        for i in 0..n {
            let (v, d) = eval_d(&monic, z[i]);
            if v.norm() == T::zero() {
                continue;
            }
            let ratio = v / d;
            let mut sum = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                if j != i {
                    sum = sum + Complex::new(T::one(), T::zero()) / (z[i] - z[j]);
                }
            }
            let w = ratio / (Complex::new(T::one(), T::zero()) - ratio * sum);
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            z[i] = z[i] - w;
            moved = moved.max(w.norm() / (T::one() + z[i].norm()));
        }
        if moved < eps {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..5 {
            let (v, d) = eval_d(&monic, *r);
            if d.norm() == T::zero() {
                break;
            }
            let step = v / d;
            *r = *r - step;
            if step.norm() <= eps * (T::one() + r.norm()) {
                break;
            }
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        let c = |re: f64, im: f64| Complex::new(re, im);
        // (z-1)(z+2)(z-i) = z^3 + (1-i) z^2 + (-2-i) z + 2i
        let p = [c(0.0, 2.0), c(-2.0, -1.0), c(1.0, -1.0), c(1.0, 0.0)];
        let mut r = roots(&p);
        r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let want = [c(-2.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)];
        for (a, b) in r.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn derivative() {
        let p = [Complex::new(1.0, 0.0), Complex::new(0.0, 2.0), Complex::new(3.0, 0.0)];
        let z = Complex::new(0.3, -0.7);
        let (_, d) = eval_d(&p, z);
        assert!((d - (Complex::new(0.0, 2.0) + z * 6.0)).norm() < 1e-14);
    }
}
