//! Monodromy of the residue at a double pole as a zero encircles it.
//!
//! The family is `(z - a)(1 - z/b) dz^2 / z^2` with `b` fixed. Its residue at
//! the origin is `4 pi i sqrt(-a)`, the same as for `(z - a) dz^2 / z^2`; the
//! second zero `b` carries a saddle class from `b` to `a` whose period is
//! continued along the loop.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::chart::{Anchor, Chart, Geometry};
use crate::differential::{Pole, QuadraticDifferential};
use crate::real::{nearest_branch, Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LoopKind {
    /// `a` goes once around the pole.
    Single,
    /// `a` goes twice around the pole.
    Double,
    /// `a` goes around a circle not enclosing the pole.
    Contractible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopReport<T> {
    pub kind: LoopKind,
    pub steps: usize,
    pub residue_start: C<T>,
    pub residue_end: C<T>,
    /// Period of the tracked saddle class from `b` to `a`.
    pub period_start: C<T>,
    pub period_end: C<T>,
    /// `(period_end - period_start) / residue_start`.
    pub shift_in_residues: C<T>,
}

impl<T: Real> LoopReport<T> {
    pub fn residue_flipped(&self, tol: T) -> bool {
        (self.residue_end + self.residue_start).norm() <= tol * self.residue_start.norm()
    }
    pub fn residue_restored(&self, tol: T) -> bool {
        (self.residue_end - self.residue_start).norm() <= tol * self.residue_start.norm()
    }
    pub fn period_restored(&self, tol: T) -> bool {
        (self.period_end - self.period_start).norm() <= tol * (T::one() + self.period_start.norm())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyTranscript<T> {
    pub radius: T,
    pub far_zero: T,
    pub loops: Vec<LoopReport<T>>,
}

impl<T: Real> MonodromyTranscript<T> {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!(
            "family (z - a)(1 - z/{}) dz^2 / z^2, residue at 0 = 4 pi i sqrt(-a), |a| = {}",
            self.far_zero, self.radius
        )];
        for l in &self.loops {
            out.push(format!(
                "{:?}: Res {:.6} -> {:.6}, Z(saddle) {:.6} -> {:.6}, shift / Res = {:.6}",
                l.kind, l.residue_start, l.residue_end, l.period_start, l.period_end, l.shift_in_residues
            ));
        }
        out
    }
}

fn family<T: Real>(a: C<T>, b: T) -> QuadraticDifferential<T> {
    let one = Complex::new(T::one(), T::zero());
    let inv_b = one / Complex::new(b, T::zero());
    // (z - a)(1 - z/b) = -a + (1 + a/b) z - z^2/b
    let numerator = vec![-a, one + a * inv_b, -inv_b];
    QuadraticDifferential { numerator, poles: vec![Pole { z: Complex::new(T::zero(), T::zero()), order: 2 }], theta: T::zero() }
}

fn crit_index<T: Real>(geom: &Geometry<T>, z: C<T>) -> usize {
    (0..geom.finite.len())
        .min_by(|&i, &j| crate::real::cmp(&(geom.finite[i].z - z).norm(), &(geom.finite[j].z - z).norm()))
        .expect("finite critical points")
}

/// Position of the moving zero after the fraction `s` of the loop.
fn position<T: Real>(kind: LoopKind, r: T, s: T) -> C<T> {
    let tau = T::TAU() * s;
    match kind {
        LoopKind::Single => Complex::from_polar(r, tau),
        LoopKind::Double => Complex::from_polar(r, tau * T::lit(2.0)),
        LoopKind::Contractible => Complex::new(T::lit(2.0) * r, T::zero()) + Complex::from_polar(r / T::lit(2.0), tau - T::PI()),
    }
}

/// Angle swept around the pole after the fraction `s` of the loop.
fn swept<T: Real>(kind: LoopKind, s: T) -> T {
    match kind {
        LoopKind::Single => T::TAU() * s,
        LoopKind::Double => T::TAU() * s * T::lit(2.0),
        LoopKind::Contractible => T::zero(),
    }
}

/// Saddle period from `b` to `a(s)` along a path deformed continuously with
/// `s`: out from `b` to the circle of radius `rr`, around that circle by the
/// swept angle, then straight to `a(s)`. Returns the period and the branch at
/// the anchor point on the circle.
fn saddle_period<T: Real>(kind: LoopKind, r: T, b: T, s: T, s_anchor: C<T>) -> (C<T>, C<T>) {
    let a = position(kind, r, s);
    let q = family(a, b);
    let geom = Geometry::new(&q);
    let ia = crit_index(&geom, a);
    let ib = crit_index(&geom, Complex::new(b, T::zero()));
    let rr = match kind {
        LoopKind::Contractible => T::lit(4.0) * r,
        _ => T::lit(1.5) * r,
    };
    let p = Complex::new(rr, T::zero());
    let sp = nearest_branch(geom.value(Chart::Z, p).sqrt(), s_anchor);
    let (first, _) = geom.from_crit(ib, p, Anchor::End(sp));
    let (arc, q_end, sq) = match kind {
        LoopKind::Contractible => (Complex::new(T::zero(), T::zero()), p, sp),
        _ => {
            let total = swept(kind, s);
            let panels = 16 + (64.0 * s.to_f64()).ceil() as usize;
            let (i, s1) = geom.path_integral(
                Chart::Z,
                |t| {
                    let e = Complex::from_polar(rr, total * t);
                    (e, e * Complex::new(T::zero(), total))
                },
                sp,
                panels,
            );
            (i, Complex::from_polar(rr, total), s1)
        }
    };
    let (last, _) = geom.from_crit(ia, q_end, Anchor::End(sq));
    (Complex::new(T::lit(2.0), T::zero()) * (first + arc - last), sp)
}

fn run_loop<T: Real>(kind: LoopKind, r: T, b: T, steps: usize) -> LoopReport<T> {
    let four_pi_i = Complex::new(T::zero(), T::lit(4.0) * T::PI());
    let mut root = (-position(kind, r, T::zero())).sqrt();
    let residue_start = four_pi_i * root;
    let seed = family(position(kind, r, T::zero()), b).r(Complex::new(T::lit(1.5) * r, T::zero())).sqrt();
    let (period_start, mut anchor) = saddle_period(kind, r, b, T::zero(), seed);
    let mut period = period_start;
    for k in 1..=steps {
        let s = T::lit(k as f64) / T::lit(steps as f64);
        let a = position(kind, r, s);
        root = nearest_branch((-a).sqrt(), root);
        let (z, sp) = saddle_period(kind, r, b, s, anchor);
        anchor = sp;
        period = z;
    }
    let residue_end = four_pi_i * root;
    LoopReport {
        kind,
        steps,
        residue_start,
        residue_end,
        period_start,
        period_end: period,
        shift_in_residues: (period - period_start) / residue_start,
    }
}

/// Continues the residue at the origin and the tracked saddle period along a
/// single loop, a double loop and a contractible loop of the zero `a`.
pub fn residue_monodromy_demo<T: Real>() -> MonodromyTranscript<T> {
    let (r, b) = (T::lit(0.5), T::lit(4.0));
    let loops = [LoopKind::Single, LoopKind::Double, LoopKind::Contractible]
        .into_iter()
        .map(|k| run_loop(k, r, b, 256))
        .collect();
    MonodromyTranscript { radius: r, far_zero: b, loops }
}
