//! Saddle-free tests and horizontal strip decompositions.

use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chart::{Chart, Geometry};
use crate::differential::{FiniteCritKind, PoleId, QuadraticDifferential};
use crate::error::{DiffError, Inconclusive};
use crate::real::{Real, C};
use crate::trace::{ray_directions, End, TraceConfig, Tracer, Trajectory};

/// Rays of all finite critical points, indexed by `(crit, ray)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RaySet<T> {
    pub theta: T,
    pub ids: Vec<(usize, usize)>,
    pub rays: Vec<Trajectory<T>>,
}

impl<T: Real> RaySet<T> {
    pub fn index(&self, crit: usize, ray: usize) -> Option<usize> {
        self.ids.iter().position(|&p| p == (crit, ray))
    }

    /// Smallest distance by which a ray missed or hit a zero.
    pub fn min_distance(&self) -> T {
        self.rays
            .iter()
            .map(|r| match r.end {
                End::NearZero { distance, .. } => distance.min(r.min_approach),
                _ => r.min_approach,
            })
            .fold(T::infinity(), T::min)
    }
}

pub fn trace_rays<T: Real>(q: &QuadraticDifferential<T>, cfg: &TraceConfig<T>) -> Result<RaySet<T>, DiffError> {
    let geom = Geometry::with_settings(q, cfg.chart_radius, cfg.trap_factor);
    trace_rays_with(&geom, cfg, q.theta)
}

pub(crate) fn trace_rays_with<T: Real>(geom: &Geometry<T>, cfg: &TraceConfig<T>, theta: T) -> Result<RaySet<T>, DiffError> {
    let mut ids = Vec::new();
    for k in 0..geom.finite.len() {
        let count = ray_directions(geom, k, theta).len();
        for j in 0..count {
            ids.push((k, j));
        }
    }
    let tracer = Tracer::new(geom, cfg, theta);
    let rays: Result<Vec<_>, _> = ids.par_iter().map(|&(k, j)| tracer.ray(k, j, 1)).collect();
    Ok(RaySet { theta, ids, rays: rays? })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SaddleFreeReport<T> {
    pub saddle_free: bool,
    pub min_distance: T,
    pub separatrices: RaySet<T>,
}

fn verdict<T: Real>(set: &RaySet<T>, cfg: &TraceConfig<T>) -> Result<bool, DiffError> {
    if set.rays.iter().any(|r| matches!(r.end, End::NearZero { .. })) {
        return Ok(false);
    }
    if set.rays.iter().any(|r| matches!(r.end, End::BudgetExceeded | End::Closed { .. })) {
        return Err(DiffError::Inconclusive(Inconclusive::Budget));
    }
    let d = set.min_distance();
    if d <= cfg.hysteresis * cfg.delta_saddle {
        return Err(DiffError::Inconclusive(Inconclusive::NearSaddle(d.to_f64())));
    }
    Ok(true)
}

/// Whether every ray ends at a pole, with all closest approaches to zeros
/// outside the hysteresis band.
pub fn is_saddle_free<T: Real>(q: &QuadraticDifferential<T>, cfg: &TraceConfig<T>) -> Result<SaddleFreeReport<T>, DiffError> {
    let report = q.critical_points()?;
    if report.infinite_critical.is_empty() {
        return Err(DiffError::Invalid("no pole of order at least two".into()));
    }
    let set = trace_rays(q, cfg)?;
    let ok = verdict(&set, cfg)?;
    Ok(SaddleFreeReport { saddle_free: ok, min_distance: set.min_distance(), separatrices: set })
}

/// A marked point: a double pole, or one asymptotic direction of a higher
/// order pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub pole: PoleId,
    pub cluster: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Strip<T> {
    /// The sectors `(zero, sector)` on the two sides; sector `j` lies between
    /// rays `j` and `j + 1` counterclockwise.
    pub sectors: [(usize, usize); 2],
    /// Bounding rays in face order: out of the first zero, into the second,
    /// out of the second, into the first.
    pub separatrices: [usize; 4],
    pub poles: [PoleId; 2],
    /// Period of the standard saddle class, `Im(e^{-i pi theta} Z) > 0`.
    pub period: C<T>,
    /// Difference between the two contour evaluations of the period.
    pub period_check: T,
    /// A generic trajectory crossing the strip, empty unless requested.
    pub generic: Vec<C<T>>,
}

impl<T> Strip<T> {
    pub fn degenerate(&self) -> bool {
        self.sectors[0].0 == self.sectors[1].0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HalfPlane {
    pub sector: (usize, usize),
    pub separatrices: [usize; 2],
    pub pole: PoleId,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleRotation {
    pub pole: PoleId,
    /// Rays ending at the pole in counterclockwise order.
    pub rays: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StripDecomposition<T> {
    pub theta: T,
    pub separatrices: RaySet<T>,
    pub strips: Vec<Strip<T>>,
    pub half_planes: Vec<HalfPlane>,
    pub rotation: Vec<PoleRotation>,
}

impl<T: Real> StripDecomposition<T> {
    pub fn vertex_of(&self, ray: usize) -> Vertex {
        match self.separatrices.rays[ray].end {
            End::Pole { pole, cluster } => Vertex { pole, cluster },
            _ => unreachable!("decomposition rays end at poles"),
        }
    }

    /// Zero from which a ray starts.
    pub fn zero_of(&self, ray: usize) -> usize {
        self.separatrices.ids[ray].0
    }
}

/// Splits the surface into horizontal strips and half-planes.
pub fn strip_decomposition<T: Real>(q: &QuadraticDifferential<T>, cfg: &TraceConfig<T>) -> Result<StripDecomposition<T>, DiffError> {
    decompose(q, cfg, true)
}

pub(crate) fn decompose<T: Real>(
    q: &QuadraticDifferential<T>,
    cfg: &TraceConfig<T>,
    generic: bool,
) -> Result<StripDecomposition<T>, DiffError> {
    let report = q.critical_points()?;
    if report.finite_critical.iter().any(|c| c.kind == FiniteCritKind::SimplePole) {
        return Err(DiffError::Incomplete);
    }
    if report.infinite_critical.is_empty() {
        return Err(DiffError::Invalid("no pole of order at least two".into()));
    }
    let geom = Geometry::with_settings(q, cfg.chart_radius, cfg.trap_factor);
    let set = trace_rays_with(&geom, cfg, q.theta)?;
    if !verdict(&set, cfg)? {
        return Err(DiffError::NotSaddleFree(q.theta.to_f64()));
    }
    let n_rays = set.rays.len();

    // Rotation system at each pole.
    let mut at_pole: BTreeMap<PoleId, Vec<usize>> = BTreeMap::new();
    for (r, ray) in set.rays.iter().enumerate() {
        if let End::Pole { pole, .. } = ray.end {
            at_pole.entry(pole).or_default().push(r);
        }
    }
    let mut rotation = Vec::new();
    let mut pos: Vec<(PoleId, usize)> = vec![(PoleId::Infinity, 0); n_rays];
    for (&pole, rays) in at_pole.iter_mut() {
        if rays.iter().any(|&r| set.rays[r].terminal.is_none()) {
            return Err(DiffError::DecompositionMismatch(format!("ray without crossing data at pole {}", pole.label())));
        }
        let a = cyclic_order(&geom, &set, pole, rays, |t| t.outer);
        let b = cyclic_order(&geom, &set, pole, rays, |t| t.inner);
        if !same_cycle(&a, &b) {
            return Err(DiffError::DecompositionMismatch(format!("unstable cyclic order at pole {}", pole.label())));
        }
        for (i, &r) in a.iter().enumerate() {
            pos[r] = (pole, i);
        }
        *rays = a.clone();
        rotation.push(PoleRotation { pole, rays: a });
    }
    let cw_next = |r: usize| -> usize {
        let (p, i) = pos[r];
        let list = &at_pole[&p];
        list[(i + list.len() - 1) % list.len()]
    };
    let ray_count = |k: usize| set.ids.iter().filter(|id| id.0 == k).count();

    // Darts: 2r leaves the zero along ray r, 2r+1 returns along it.
    let next = |d: usize| -> usize {
        let r = d / 2;
        if d.is_multiple_of(2) {
            2 * cw_next(r) + 1
        } else {
            let (k, j) = set.ids[r];
            let m = ray_count(k);
            2 * set.index(k, (j + m - 1) % m).unwrap()
        }
    };
    let mut seen = vec![false; 2 * n_rays];
    let mut strips = Vec::new();
    let mut half_planes = Vec::new();
    for d0 in 0..2 * n_rays {
        if seen[d0] || d0 % 2 == 1 {
            continue;
        }
        let mut face = Vec::new();
        let mut d = d0;
        loop {
            seen[d] = true;
            face.push(d);
            d = next(d);
            if d == d0 {
                break;
            }
            if face.len() > 2 * n_rays {
                return Err(DiffError::DecompositionMismatch("face walk does not close".into()));
            }
        }
        let pole_of = |r: usize| match set.rays[r].end {
            End::Pole { pole, .. } => pole,
            _ => unreachable!(),
        };
        match face.len() {
            2 => {
                let (a, b) = (face[0] / 2, face[1] / 2);
                half_planes.push(HalfPlane { sector: set.ids[a], separatrices: [a, b], pole: pole_of(a) });
            }
            4 => {
                let rays = [face[0] / 2, face[1] / 2, face[2] / 2, face[3] / 2];
                strips.push(Strip {
                    sectors: [set.ids[rays[0]], set.ids[rays[2]]],
                    separatrices: rays,
                    poles: [pole_of(rays[0]), pole_of(rays[2])],
                    period: Complex::new(T::zero(), T::zero()),
                    period_check: T::zero(),
                    generic: Vec::new(),
                });
            }
            k => {
                return Err(DiffError::DecompositionMismatch(format!("face with {k} sides")));
            }
        }
    }
    for d in 0..2 * n_rays {
        if !seen[d] {
            return Err(DiffError::DecompositionMismatch("dart outside every face".into()));
        }
    }
    let expected_half: i64 = report.infinite_critical.iter().map(|&(_, m)| m as i64 - 2).sum();
    if strips.len() != report.hat_rank || half_planes.len() as i64 != expected_half {
        return Err(DiffError::DecompositionMismatch(format!(
            "{} strips and {} half-planes, expected {} and {}",
            strips.len(),
            half_planes.len(),
            report.hat_rank,
            expected_half
        )));
    }
    for s in strips.iter_mut() {
        if s.sectors[1] < s.sectors[0] {
            let r = s.separatrices;
            s.sectors.swap(0, 1);
            s.separatrices = [r[2], r[3], r[0], r[1]];
            s.poles.swap(0, 1);
        }
    }
    strips.sort_by_key(|a| a.sectors);
    half_planes.sort_by_key(|a| a.sector);

    let u = crate::real::phase(q.theta);
    let results: Vec<Result<(C<T>, T, Vec<C<T>>), DiffError>> = strips
        .par_iter()
        .map(|s| {
            let r = s.separatrices;
            let (h1, mid1) = half_period(&geom, &set, r[0], r[1], s.poles[0])?;
            let (h2, _) = half_period(&geom, &set, r[2], r[3], s.poles[1])?;
            // Each ray carries its own branch, so the two contours agree up to sign.
            let upper = |w: C<T>| if (w / u).im < T::zero() { -w } else { w };
            let z = upper(h1 * T::lit(2.0));
            let check = (z - upper(h2 * T::lit(2.0))).norm();
            let gen = if generic { generic_trajectory(&geom, cfg, q.theta, mid1)? } else { Vec::new() };
            Ok((z, check, gen))
        })
        .collect();
    for (s, res) in strips.iter_mut().zip(results) {
        let (z, check, gen) = res?;
        let scale = T::one() + z.norm();
        if check > T::lit(1e-6) * scale {
            return Err(DiffError::Quadrature(format!("contours disagree by {}", check)));
        }
        s.period = z;
        s.period_check = check;
        s.generic = gen;
    }
    Ok(StripDecomposition { theta: q.theta, separatrices: set, strips, half_planes, rotation })
}

/// Angular separation below which two rays are ordered by their flat
/// transverse coordinate instead of their crossing angles.
const CLOSE_F: f64 = 0.1;

fn close<T: Real>() -> T {
    T::lit(CLOSE_F)
}

/// Counterclockwise order of the rays ending at `pole`, using the crossing
/// selected by `pick`.
fn cyclic_order<T: Real, F>(geom: &Geometry<T>, set: &RaySet<T>, pole: PoleId, rays: &[usize], pick: F) -> Vec<usize>
where
    F: Fn(&crate::trace::Terminal<T>) -> crate::trace::Crossing<T>,
{
    let angle = |r: usize| pick(&set.rays[r].terminal.unwrap()).angle;
    let mut order = rays.to_vec();
    order.sort_by(|x, y| crate::real::cmp(&angle(*x), &angle(*y)));
    let n = order.len();
    if n < 2 {
        return order;
    }
    // Chains of rays whose crossing angles are closer than the threshold are
    // sorted by their flat transverse offset from the first ray of the chain.
    let gap = |i: usize| crate::real::rem_euclid(angle(order[(i + 1) % n]) - angle(order[i]), T::TAU());
    let breaks: Vec<usize> = (0..n).filter(|&i| gap(i) >= close()).collect();
    let first = match breaks.first() {
        Some(_) => (breaks[breaks.len() - 1] + 1) % n,
        None => (0..n).max_by(|&i, &j| crate::real::cmp(&gap(i), &gap(j))).map(|i| (i + 1) % n).unwrap(),
    };
    let rotated: Vec<usize> = (0..n).map(|k| order[(first + k) % n]).collect();
    let mut out = Vec::with_capacity(n);
    let mut chain = vec![rotated[0]];
    let flush = |chain: &mut Vec<usize>, out: &mut Vec<usize>| {
        let a0 = chain[0];
        let mut keyed: Vec<(T, usize)> =
            chain.iter().map(|&r| (if r == a0 { T::zero() } else { ccw_offset(geom, set, pole, a0, r, &pick) }, r)).collect();
        keyed.sort_by(|x, y| crate::real::cmp(&x.0, &y.0));
        out.extend(keyed.into_iter().map(|(_, r)| r));
        chain.clear();
    };
    for k in 1..n {
        let (prev, cur) = (rotated[k - 1], rotated[k]);
        if crate::real::rem_euclid(angle(cur) - angle(prev), T::TAU()) >= close() {
            flush(&mut chain, &mut out);
        }
        chain.push(cur);
    }
    flush(&mut chain, &mut out);
    out
}

/// Whether ray `b` lies counterclockwise of the nearby ray `a` at the pole.
fn ccw_before<T: Real, F>(geom: &Geometry<T>, set: &RaySet<T>, pole: PoleId, a: usize, b: usize, pick: &F) -> bool
where
    F: Fn(&crate::trace::Terminal<T>) -> crate::trace::Crossing<T>,
{
    ccw_offset(geom, set, pole, a, b, pick) > T::zero()
}

/// Flat transverse offset of ray `b` from the nearby ray `a`, positive when
/// `b` lies counterclockwise of `a` at the pole.
fn ccw_offset<T: Real, F>(geom: &Geometry<T>, set: &RaySet<T>, pole: PoleId, a: usize, b: usize, pick: &F) -> T
where
    F: Fn(&crate::trace::Terminal<T>) -> crate::trace::Crossing<T>,
{
    let bp = geom.big.iter().find(|p| p.id == pole).expect("pole with rays");
    let (chart, centre) = (bp.chart, bp.centre);
    let (ra, rb) = (&set.rays[a], &set.rays[b]);
    let (ca, cb) = (pick(&ra.terminal.unwrap()), pick(&rb.terminal.unwrap()));
    let pa = chart_point(chart, ra.samples[ca.before], ra.branch[ca.before]);
    let pb = chart_point(chart, rb.samples[cb.before], rb.branch[cb.before]);
    let (i1, s1) = geom.segment(chart, pa.x, pa.s, ca.point, 2);
    let radius = (ca.point - centre).norm();
    let d = crate::real::wrap_angle(cb.angle - ca.angle);
    let arc = |tau: T| {
        let e = Complex::from_polar(radius, ca.angle + d * tau);
        (centre + e, e * Complex::new(T::zero(), d))
    };
    let (i2, s2) = geom.path_integral(chart, arc, s1, 4);
    let (i3, _) = geom.segment(chart, cb.point, s2, pb.x, 2);
    let u = ra.unit();
    let transverse = ((i1 + i2 + i3) / u).im;
    // Rate of change of the transverse coordinate moving counterclockwise.
    let rate = (s1 * Complex::new(T::zero(), T::one()) * (ca.point - centre) / u).im;
    if rate > T::zero() {
        transverse
    } else {
        -transverse
    }
}

fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let Some(shift) = b.iter().position(|&x| x == a[0]) else {
        return false;
    };
    (0..a.len()).all(|i| a[i] == b[(i + shift) % b.len()])
}

struct Point<T> {
    x: C<T>,
    s: C<T>,
}

fn chart_point<T: Real>(chart: Chart, z: C<T>, s_z: C<T>) -> Point<T> {
    match chart {
        Chart::Z => Point { x: z, s: s_z },
        Chart::W => Point { x: Complex::new(T::one(), T::zero()) / z, s: -s_z * z * z },
    }
}

/// `W(end zero of b) - W(start zero of a)` along ray `a`, clockwise around the
/// pole to ray `b`, and back along `b`. Also returns a point in the middle of
/// the connecting arc with its branch.
fn half_period<T: Real>(
    geom: &Geometry<T>,
    set: &RaySet<T>,
    a: usize,
    b: usize,
    pole: PoleId,
) -> Result<(C<T>, (C<T>, C<T>)), DiffError> {
    let bp = geom.big.iter().find(|p| p.id == pole).expect("pole with rays");
    let chart = bp.chart;
    let centre = bp.centre;
    let ra = &set.rays[a];
    let rb = &set.rays[b];
    let ta = ra.terminal.unwrap().outer;
    let tb = rb.terminal.unwrap().outer;
    let u = ra.unit();

    let pa = chart_point(chart, ra.samples[ta.before], ra.branch[ta.before]);
    let (ia, sa) = geom.segment(chart, pa.x, pa.s, ta.point, 2);
    let wa = u * ra.flat[ta.before] + ia;

    let pb = chart_point(chart, rb.samples[tb.before], rb.branch[tb.before]);
    let (ib, sb) = geom.segment(chart, pb.x, pb.s, tb.point, 2);
    let wb = u * rb.flat[tb.before] + ib;

    let near = crate::real::wrap_angle(ta.angle - tb.angle);
    let gap = if a == b {
        T::TAU()
    } else if near.abs() < close() {
        // The side of `a` on which `b` lies decides between the short arc and
        // almost a full turn.
        if ccw_before(geom, set, pole, a, b, &|t: &crate::trace::Terminal<T>| t.outer) {
            T::TAU() + near
        } else {
            near
        }
    } else {
        crate::real::rem_euclid(ta.angle - tb.angle, T::TAU())
    };
    let radius = bp.trap / T::lit(2.0);
    let phi0 = ta.angle;
    let panels = ((gap / T::lit(0.1)).ceil().to_f64() as usize).max(2);
    let arc = |tau: T| {
        let e = Complex::from_polar(radius, phi0 - gap * tau);
        (centre + e, e * Complex::new(T::zero(), -gap))
    };
    let (iarc, s_end) = geom.path_integral(chart, arc, sa, panels);
    let sigma = if (s_end - sb).norm() <= (s_end + sb).norm() { T::one() } else { -T::one() };
    let (xm, _) = arc(T::lit(0.5));
    let (_, smid) = geom.path_integral(chart, |t: T| arc(t * T::lit(0.5)), sa, panels);
    let (zm, szm) = match chart {
        Chart::Z => (xm, smid),
        Chart::W => (Complex::new(T::one(), T::zero()) / xm, -smid * xm * xm),
    };
    Ok((wa + iarc - wb * sigma, (zm, szm)))
}

fn generic_trajectory<T: Real>(
    geom: &Geometry<T>,
    cfg: &TraceConfig<T>,
    theta: T,
    seed: (C<T>, C<T>),
) -> Result<Vec<C<T>>, DiffError> {
    let tr = Tracer::new(geom, cfg, theta);
    let f = tr.seed(seed.0, seed.1, 1, false)?;
    let b = tr.seed(seed.0, seed.1, -1, false)?;
    let mut pts: Vec<C<T>> = b.samples.into_iter().rev().collect();
    pts.extend(f.samples.into_iter().skip(1));
    Ok(pts)
}
