//! Saddle trajectories and ring domains of a differential against stable
//! objects of the central charge given by its periods.
//!
//! Periods are taken at a saddle-free phase `theta0` just below
//! `theta - 1/2`, where the strips give the simple objects and the WKB
//! quiver. Rotating the periods by `e^{-i pi (theta - 1/2)}` puts classes
//! with saddles at `theta` on the imaginary axis, so they are compared with
//! the stable classes of phase `1/2`.

use differential_core::{
    finite_trajectories, strip_decomposition, wkb_triangulation, DiffError, QuadraticDifferential, Real, TraceConfig,
};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::charge::CentralCharge;
use crate::rep::{Direction, RepQuiver};
use crate::spectrum::{a_n_spectrum, affine_a2_spectrum, kronecker_spectrum};
use crate::StabilityError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExampleFamily {
    A1,
    Kronecker,
    AffineA2,
}

impl ExampleFamily {
    pub fn rank(self) -> usize {
        match self {
            ExampleFamily::A1 => 1,
            ExampleFamily::Kronecker => 2,
            ExampleFamily::AffineA2 => 3,
        }
    }

    fn quiver(self) -> RepQuiver {
        match self {
            ExampleFamily::A1 => RepQuiver::linear(&[]),
            ExampleFamily::Kronecker => RepQuiver::kronecker(),
            ExampleFamily::AffineA2 => RepQuiver::affine_a2(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport<T> {
    pub example: ExampleFamily,
    pub theta: T,
    /// Saddle-free phase at which the simple objects were read off.
    pub reference_theta: T,
    /// Arc of the WKB triangulation used for each vertex of the example quiver.
    pub vertex_arcs: Vec<usize>,
    /// Periods of the simples rotated so that phase `theta` becomes `1/2`.
    pub charge: CentralCharge<T>,
    pub non_closed_saddles: usize,
    pub closed_saddles: usize,
    pub non_degenerate_rings: usize,
    pub degenerate_rings: usize,
    /// Stable classes of phase `1/2`.
    pub rigid: Vec<Vec<i64>>,
    pub families: Vec<Vec<i64>>,
    /// Nonnegative classes whose period matches each non-closed saddle.
    pub saddle_classes: Vec<Vec<Vec<i64>>>,
    pub ring_classes: Vec<Vec<Vec<i64>>>,
}

impl<T: Real> ComparisonReport<T> {
    pub fn counts_agree(&self) -> bool {
        self.non_closed_saddles == self.rigid.len() && self.non_degenerate_rings == self.families.len()
    }

    /// Every stable class is matched by some trajectory and every trajectory
    /// by some stable class of the right kind.
    pub fn classes_agree(&self) -> bool {
        let covers = |found: &[Vec<Vec<i64>>], listed: &[Vec<i64>]| {
            found.iter().all(|cands| cands.iter().any(|c| listed.contains(c)))
                && listed.iter().all(|l| found.iter().any(|cands| cands.contains(l)))
        };
        covers(&self.saddle_classes, &self.rigid) && covers(&self.ring_classes, &self.families)
    }

    /// Classes with more than one matching candidate.
    pub fn ambiguous(&self) -> usize {
        self.saddle_classes.iter().chain(&self.ring_classes).filter(|c| c.len() > 1).count()
    }

    pub fn agree(&self) -> bool {
        self.counts_agree() && self.classes_agree()
    }

    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("{:?} at theta = {}, simples read at theta0 = {:.6}", self.example, self.theta, self.reference_theta),
            format!("rotated charges: {:?}", self.charge.values.iter().map(|z| format!("{z:.6}")).collect::<Vec<_>>()),
            format!(
                "trajectories: {} non-closed saddles, {} closed saddles, {} non-degenerate rings, {} degenerate rings",
                self.non_closed_saddles, self.closed_saddles, self.non_degenerate_rings, self.degenerate_rings
            ),
            format!("stables of phase 1/2: rigid {:?}, families {:?}", self.rigid, self.families),
            format!("saddle classes {:?}, ring classes {:?}", self.saddle_classes, self.ring_classes),
            format!("counts agree: {}, classes agree: {}", self.counts_agree(), self.classes_agree()),
        ]
    }
}

/// Orders the arcs so that the quiver of the triangulation becomes the
/// example quiver, if possible.
fn match_vertices(found: &RepQuiver, target: &RepQuiver) -> Option<Vec<usize>> {
    let n = found.vertices;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sorted_target = target.arrows.clone();
    sorted_target.sort();
    loop {
        // perm[v] = arc used for vertex v of the target.
        let mut inv = vec![0; n];
        for (v, &a) in perm.iter().enumerate() {
            inv[a] = v;
        }
        let mut mapped: Vec<(usize, usize)> = found.arrows.iter().map(|&(s, t)| (inv[s], inv[t])).collect();
        mapped.sort();
        if mapped == sorted_target {
            return Some(perm);
        }
        // Next permutation.
        let i = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1])?;
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("successor");
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

/// Nonnegative classes of total dimension at most `max_total` whose period
/// equals `target`.
fn classes_with_period<T: Real>(z: &[Complex<T>], target: Complex<T>, max_total: i64) -> Vec<Vec<i64>> {
    let n = z.len();
    let mut out = Vec::new();
    let mut d = vec![0i64; n];
    loop {
        let total: i64 = d.iter().sum();
        if total > 0 && total <= max_total {
            let w = z.iter().zip(&d).fold(Complex::new(T::zero(), T::zero()), |acc, (zi, &k)| acc + *zi * T::lit(k as f64));
            if (w - target).norm() <= T::lit(1e-6) * (T::one() + target.norm()) {
                out.push(d.clone());
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            d[i] += 1;
            if d[i] <= max_total {
                break;
            }
            d[i] = 0;
            i += 1;
        }
    }
}

fn snap<T: Real>(w: Complex<T>) -> Complex<T> {
    if w.im.abs() <= T::lit(1e-9) * w.norm() && w.re < T::zero() {
        Complex::new(w.re, T::zero())
    } else {
        w
    }
}

pub fn saddle_vs_stable<T: Real>(
    example: ExampleFamily,
    q: &QuadraticDifferential<T>,
    theta: T,
    cfg: &TraceConfig<T>,
) -> Result<ComparisonReport<T>, StabilityError> {
    let report = q.critical_points()?;
    if report.hat_rank != example.rank() {
        return Err(StabilityError::PreconditionViolated(format!(
            "lattice rank {} does not fit the {example:?} family",
            report.hat_rank
        )));
    }
    let inventory = finite_trajectories(&q.with_theta(theta), cfg)?;
    let reference = theta - T::lit(0.5);
    let rotate = Complex::from_polar(T::one(), -T::PI() * reference);
    let mut chosen = None;
    for eps in [1e-4, 1e-3, 5e-3, 2e-2] {
        let theta0 = reference - T::lit(eps);
        let q0 = q.with_theta(theta0);
        let dec = match strip_decomposition(&q0, cfg) {
            Ok(d) => d,
            Err(DiffError::NotSaddleFree(_)) | Err(DiffError::Inconclusive(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let wkb = wkb_triangulation(&q0, &dec)?;
        let periods: Vec<Complex<T>> = wkb.arc_strip.iter().map(|&s| dec.strips[s].period).collect();
        let rotated: Vec<Complex<T>> = periods.iter().map(|z| snap(*z * rotate)).collect();
        if let Ok(charge) = CentralCharge::new(rotated) {
            chosen = Some((theta0, wkb, periods, charge));
            break;
        }
    }
    let Some((theta0, wkb, periods, charge)) = chosen else {
        return Err(StabilityError::PreconditionViolated("no saddle-free reference phase next to theta - 1/2".into()));
    };
    // Arrows of the heart's Ext quiver run against those of the triangulation.
    let found = RepQuiver::from_exchange(&quiver_core::quiver(wkb.triangulation())).opposite();
    let order = match_vertices(&found, &example.quiver()).ok_or_else(|| {
        StabilityError::PreconditionViolated(format!("WKB quiver {:?} is not the {example:?} quiver", found.arrows))
    })?;
    let charge = CentralCharge::new(order.iter().map(|&a| charge.values[a]).collect())?;
    let z: Vec<Complex<T>> = order.iter().map(|&a| periods[a]).collect();

    let bound = 7;
    let spectrum = match example {
        ExampleFamily::A1 => a_n_spectrum(&[] as &[Direction], &charge, bound)?,
        ExampleFamily::Kronecker => kronecker_spectrum(&charge, bound)?,
        ExampleFamily::AffineA2 => affine_a2_spectrum(&charge)?.imaginary,
    };
    let half = spectrum.at_phase(T::lit(0.5), T::lit(1e-7));
    let rigid: Vec<Vec<i64>> = half.iter().filter(|e| e.family_dim == 0).map(|e| e.class.clone()).collect();
    let families: Vec<Vec<i64>> = half.iter().filter(|e| e.family_dim == 1).map(|e| e.class.clone()).collect();

    let saddle_classes = inventory.saddles.iter().filter(|s| !s.closed).map(|s| classes_with_period(&z, s.period, bound as i64)).collect();
    let ring_classes = inventory
        .rings
        .iter()
        .filter(|r| !r.degenerate)
        .map(|r| classes_with_period(&z, r.period, bound as i64))
        .collect();
    Ok(ComparisonReport {
        example,
        theta,
        reference_theta: theta0,
        vertex_arcs: order,
        charge,
        non_closed_saddles: inventory.non_closed_saddles(),
        closed_saddles: inventory.closed_saddles(),
        non_degenerate_rings: inventory.non_degenerate_rings(),
        degenerate_rings: inventory.rings.len() - inventory.non_degenerate_rings(),
        rigid,
        families,
        saddle_classes,
        ring_classes,
    })
}
