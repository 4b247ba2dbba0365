//! Finite-length trajectories at a fixed phase: saddle trajectories and ring
//! domains of closed trajectories.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chart::{Chart, Geometry};
use crate::decomposition::trace_rays_with;
use crate::differential::{PoleId, QuadraticDifferential};
use crate::error::{DiffError, Inconclusive};
use crate::real::{phase, Real, C};
use crate::trace::{ray_directions, End, TraceConfig, Tracer, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Saddle<T> {
    /// The two ends as `(finite critical point, ray)`.
    pub ends: [(usize, usize); 2],
    pub closed: bool,
    /// Period of the saddle class, twice the flat length times `e^{i pi theta}`.
    pub period: C<T>,
    /// Flat length of the trajectory.
    pub length: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingDomain<T> {
    /// Flat length of the closed trajectories.
    pub length: T,
    /// Period of the class of the closed trajectories, twice their flat
    /// length times `e^{i pi theta}`.
    pub period: C<T>,
    /// Degenerate rings surround a single double pole and nothing else.
    pub degenerate: bool,
    pub pole: Option<PoleId>,
    /// A closed trajectory of the ring.
    pub loop_samples: Vec<C<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryInventory<T> {
    pub theta: T,
    pub saddles: Vec<Saddle<T>>,
    pub rings: Vec<RingDomain<T>>,
}

impl<T: Real> TrajectoryInventory<T> {
    pub fn non_closed_saddles(&self) -> usize {
        self.saddles.iter().filter(|s| !s.closed).count()
    }
    pub fn closed_saddles(&self) -> usize {
        self.saddles.iter().filter(|s| s.closed).count()
    }
    pub fn non_degenerate_rings(&self) -> usize {
        self.rings.iter().filter(|r| !r.degenerate).count()
    }
}

/// Ray of `crit` along which the trajectory ending at `x` arrives.
fn arriving_ray<T: Real>(geom: &Geometry<T>, crit: usize, theta: T, x: C<T>) -> usize {
    let v = x - geom.finite[crit].z;
    let dirs = ray_directions(geom, crit, theta);
    (0..dirs.len())
        .min_by(|&i, &j| crate::real::cmp(&(v / dirs[i]).arg().abs(), &(v / dirs[j]).arg().abs()))
        .unwrap_or(0)
}

/// Winding number of the closed polyline `pts` around `c`.
fn winding<T: Real>(pts: &[C<T>], c: C<T>) -> i64 {
    let mut total = T::zero();
    for k in 0..pts.len() {
        let (a, b) = (pts[k] - c, pts[(k + 1) % pts.len()] - c);
        total = total + (b / a).arg();
    }
    (total / T::TAU()).round().to_f64() as i64
}

/// Saddle trajectories and ring domains of `q` at its phase. Rings are found
/// by seeding trajectories just off each saddle and following them until
/// they close up.
pub fn finite_trajectories<T: Real>(
    q: &QuadraticDifferential<T>,
    cfg: &TraceConfig<T>,
) -> Result<TrajectoryInventory<T>, DiffError> {
    let geom = Geometry::with_settings(q, cfg.chart_radius, cfg.trap_factor);
    let theta = q.theta;
    let u = phase(theta);
    let set = trace_rays_with(&geom, cfg, theta)?;
    let mut saddles: Vec<(Saddle<T>, &Trajectory<T>)> = Vec::new();
    for (&(a, ra), traj) in set.ids.iter().zip(&set.rays) {
        match traj.end {
            End::NearZero { crit: b, distance } => {
                let x = *traj.samples.last().expect("samples");
                let rb = arriving_ray(&geom, b, theta, x);
                let mut ends = [(a, ra), (b, rb)];
                ends.sort();
                if saddles.iter().any(|(s, _)| s.ends == ends) {
                    continue;
                }
                let length = *traj.flat.last().expect("samples") + distance;
                saddles.push((Saddle { ends, closed: a == b, period: u * length * T::lit(2.0), length }, traj));
            }
            End::BudgetExceeded | End::Closed { .. } => return Err(DiffError::Inconclusive(Inconclusive::Budget)),
            End::Pole { .. } => {}
        }
    }

    let tracer = Tracer::new(&geom, cfg, theta);
    let mut seeds: Vec<(C<T>, C<T>)> = Vec::new();
    for (s, traj) in &saddles {
        let half = s.length / T::lit(2.0);
        let k = traj.flat.iter().position(|&t| t >= half).unwrap_or(traj.flat.len() / 2).max(1);
        let (z, sq) = (traj.samples[k], traj.branch[k]);
        // Unit flat speed along the trajectory is dz = u / sqrt(R).
        let along = traj.unit() / sq;
        let eps = T::lit(1e-3) * s.length.min(T::one());
        for side in [T::one(), -T::one()] {
            let z0 = z + along * Complex::new(T::zero(), side * eps);
            seeds.push((z0, geom.sqrt_near(Chart::Z, z0, sq)));
        }
    }
    let loops: Vec<Option<(T, Vec<C<T>>)>> = seeds
        .par_iter()
        .map(|&(z0, s0)| match tracer.seed(z0, s0, 1, true) {
            Ok(t) => match t.end {
                End::Closed { period } => Some((period, t.samples)),
                _ => None,
            },
            Err(_) => None,
        })
        .collect();

    let mut rings: Vec<RingDomain<T>> = Vec::new();
    for (length, samples) in loops.into_iter().flatten() {
        if rings.iter().any(|r| (r.length - length).abs() <= T::lit(1e-6) * (T::one() + length)) {
            continue;
        }
        let (degenerate, pole) = classify_ring(q, &geom, &samples);
        rings.push(RingDomain { length, period: u * length * T::lit(2.0), degenerate, pole, loop_samples: samples });
    }
    Ok(TrajectoryInventory { theta, saddles: saddles.into_iter().map(|(s, _)| s).collect(), rings })
}

/// A ring is degenerate when one complementary disc holds a single double
/// pole and no other critical point.
fn classify_ring<T: Real>(q: &QuadraticDifferential<T>, geom: &Geometry<T>, samples: &[C<T>]) -> (bool, Option<PoleId>) {
    let mut points: Vec<(C<T>, Option<(PoleId, u32)>)> = geom.finite.iter().map(|c| (c.z, None)).collect();
    for (i, p) in q.poles.iter().enumerate() {
        if p.order >= 2 {
            points.push((p.z, Some((PoleId::Finite(i), p.order))));
        }
    }
    let inside: Vec<&(C<T>, Option<(PoleId, u32)>)> = points.iter().filter(|(z, _)| winding(samples, *z) != 0).collect();
    let mut outside: Vec<Option<(PoleId, u32)>> =
        points.iter().filter(|(z, _)| winding(samples, *z) == 0).map(|p| p.1).collect();
    let m_inf = q.infinity_order();
    if m_inf != 0 {
        outside.push(if m_inf >= 2 { Some((PoleId::Infinity, m_inf as u32)) } else { None });
    }
    let lone = |side: Vec<Option<(PoleId, u32)>>| match side.as_slice() {
        [Some((id, 2))] => Some(*id),
        _ => None,
    };
    match lone(inside.iter().map(|p| p.1).collect()).or_else(|| lone(outside)) {
        Some(id) => (true, Some(id)),
        None => (false, None),
    }
}
