//! Walls under phase rotation and the transport of periods across them.
//!
//! Inside a chamber of saddle-free phases the standard periods are constant.
//! As the phase grows the chamber ends when the first standard period becomes
//! parallel to the trajectory direction, so walls are found by walking from
//! chamber to chamber.

use std::collections::BTreeMap;

use num_complex::Complex;
use quiver_core::{flip_lattice_map, pop_lattice_map, FlipSign, LatticeMap};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{decompose, StripDecomposition};
use crate::differential::{PoleId, QuadraticDifferential};
use crate::error::{DiffError, Inconclusive};
use crate::real::{phase, rem_euclid, Real, C};
use crate::trace::TraceConfig;
use crate::wkb::{wkb_with_labels, WkbTriangulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WallKind {
    Flip,
    Pop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallEvent<T> {
    pub theta: T,
    pub kind: WallKind,
    /// Zeros joined by the saddle trajectory; one zero for a closed saddle.
    pub zeros: Vec<usize>,
    /// The double pole encircled by the saddle of a pop wall.
    pub pole: Option<PoleId>,
    /// Period of the saddle class, a positive multiple of `e^{i pi theta}`.
    pub period: C<T>,
    pub length: T,
    /// Part of a run of walls accumulating at a phase.
    pub accumulating: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Accumulation<T> {
    /// Phase interval that could not be resolved.
    pub interval: (T, T),
    pub walls_below: usize,
    pub walls_above: usize,
    /// Phase of the common period step `Z_{k+1} - Z_k` of the accumulating
    /// walls, when the steps agree. This is the phase of the ring domain.
    pub limit: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseScan<T> {
    /// Walls in `[0, 1)`, sorted by phase.
    pub walls: Vec<WallEvent<T>>,
    /// Phase intervals left unresolved, for example around a ring domain.
    pub unresolved: Vec<(T, T)>,
    pub accumulations: Vec<Accumulation<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSettings<T> {
    pub grid: usize,
    /// Walls closer than this are not separated.
    pub tol: T,
    /// Saddle threshold used for chamber probes.
    pub probe_delta: T,
    /// Largest number of walls followed from one grid point.
    pub max_walls: usize,
}

impl<T: Real> Default for ScanSettings<T> {
    fn default() -> Self {
        ScanSettings { grid: 8, tol: T::lit(1e-9), probe_delta: T::lit(1e-11), max_walls: 16 }
    }
}

impl<T: Real> ScanSettings<T> {
    pub fn with_grid(grid: usize) -> Self {
        ScanSettings { grid, ..Self::default() }
    }
}

/// Strip data of one saddle-free chamber.
#[derive(Debug, Clone)]
struct Chamber<T> {
    theta: T,
    strips: Vec<(C<T>, [usize; 2])>,
}

impl<T: Real> Chamber<T> {
    fn offsets(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        let u = phase(self.theta);
        self.strips.iter().enumerate().map(move |(i, s)| (i, (s.0 / u).arg()))
    }

    /// Next wall above the probe phase and the strip that collapses there.
    fn up(&self) -> (T, usize) {
        let (i, a) = self.offsets().min_by(|x, y| crate::real::cmp(&x.1, &y.1)).expect("at least one strip");
        (self.theta + a / T::PI(), i)
    }

    fn down(&self) -> (T, usize) {
        let (i, a) = self.offsets().max_by(|x, y| crate::real::cmp(&x.1, &y.1)).expect("at least one strip");
        (self.theta - (T::PI() - a) / T::PI(), i)
    }
}

fn probe_config<T: Real>(cfg: &TraceConfig<T>, s: &ScanSettings<T>) -> TraceConfig<T> {
    TraceConfig { delta_saddle: s.probe_delta, ..*cfg }
}

fn probe<T: Real>(q: &QuadraticDifferential<T>, cfg: &TraceConfig<T>, theta: T) -> Result<Chamber<T>, DiffError> {
    let dec = decompose(&q.with_theta(theta), cfg, false)?;
    let strips = dec.strips.iter().map(|s| (s.period, [s.sectors[0].0, s.sectors[1].0])).collect();
    Ok(Chamber { theta, strips })
}

fn probe_near<T: Real>(q: &QuadraticDifferential<T>, cfg: &TraceConfig<T>, theta: T, step: T) -> Option<Chamber<T>> {
    (0..6).find_map(|j| probe(q, cfg, theta + step * T::lit(j as f64)).ok())
}

/// Double pole whose residue is real at `theta`.
fn pop_pole<T: Real>(q: &QuadraticDifferential<T>, theta: T, tol: T) -> Option<PoleId> {
    let u = phase(theta);
    q.big_poles().into_iter().filter(|&(_, m)| m == 2).map(|(id, _)| id).find(|&id| match q.residue(id) {
        Ok(r) => (r / u).im.abs() <= tol * r.norm(),
        Err(_) => false,
    })
}

fn event<T: Real>(q: &QuadraticDifferential<T>, theta: T, strip: (C<T>, [usize; 2])) -> WallEvent<T> {
    let u = phase(theta);
    let period = if (strip.0 / u).re < T::zero() { -strip.0 } else { strip.0 };
    let pole = pop_pole(q, theta, T::lit(1e-7));
    let mut zeros = vec![strip.1[0], strip.1[1]];
    zeros.dedup();
    WallEvent {
        theta,
        kind: if pole.is_some() { WallKind::Pop } else { WallKind::Flip },
        zeros,
        pole,
        period,
        length: period.norm(),
        accumulating: false,
    }
}

enum WalkEnd<T> {
    Reached,
    Stalled(T),
}

/// Follows chambers from `from` towards `to`, upward or downward.
fn walk<T: Real>(
    q: &QuadraticDifferential<T>,
    cfg: &TraceConfig<T>,
    s: &ScanSettings<T>,
    start: Chamber<T>,
    to: T,
    upward: bool,
) -> (Vec<WallEvent<T>>, WalkEnd<T>) {
    let mut walls: Vec<WallEvent<T>> = Vec::new();
    let mut ch = start;
    loop {
        let (w, i) = if upward { ch.up() } else { ch.down() };
        if (upward && w >= to) || (!upward && w <= to) {
            return (walls, WalkEnd::Reached);
        }
        if let Some(last) = walls.last().map(|l| l.theta) {
            if (w - last).abs() < s.tol || walls.len() >= s.max_walls {
                return (walls, WalkEnd::Stalled(last));
            }
        }
        walls.push(event(q, w, ch.strips[i]));
        let mut next = None;
        // Larger offsets first: next to a pop wall trajectories spiral slowly.
        let mut eps = T::lit(1e-4);
        while eps >= s.tol {
            let t = if upward { w + eps } else { w - eps };
            if let Ok(c) = probe(q, cfg, t) {
                // The wall just crossed must bound the new chamber.
                let (back, _) = if upward { c.down() } else { c.up() };
                if (back - w).abs() <= T::lit(1e3) * s.tol.max(T::lit(1e-12)) {
                    next = Some(c);
                    break;
                }
            }
            eps = eps / T::lit(10.0);
        }
        match next {
            Some(c) => ch = c,
            None => return (walls, WalkEnd::Stalled(w)),
        }
    }
}

/// Walls of `q` for phases in `[0, 1)`.
pub fn saddle_phase_scan<T: Real>(
    q: &QuadraticDifferential<T>,
    cfg: &TraceConfig<T>,
    settings: &ScanSettings<T>,
) -> Result<PhaseScan<T>, DiffError> {
    let m = settings.grid.max(1);
    let pcfg = probe_config(cfg, settings);
    let mf = T::lit(m as f64);
    let nudge = T::lit(1e-3) / mf;
    let grid: Vec<T> = (0..=m).map(|k| (T::lit(0.37) + T::lit(k as f64)) / mf).collect();
    let chambers: Vec<Option<Chamber<T>>> = grid[..m].par_iter().map(|&g| probe_near(q, &pcfg, g, nudge)).collect();
    if chambers.iter().all(Option::is_none) {
        return Err(DiffError::Inconclusive(Inconclusive::Budget));
    }
    let mut chambers = chambers;
    chambers.push(chambers[0].as_ref().map(|c| Chamber { theta: c.theta + T::one(), strips: c.strips.clone() }));

    let pieces: Vec<(Vec<WallEvent<T>>, Option<(T, T)>)> = (0..m)
        .into_par_iter()
        .map(|k| {
            let (lo, hi) = (&chambers[k], &chambers[k + 1]);
            let (lo_t, hi_t) = (grid[k], grid[k + 1]);
            match (lo, hi) {
                (Some(a), Some(b)) => {
                    let (mut up, end) = walk(q, &pcfg, settings, a.clone(), b.theta, true);
                    match end {
                        WalkEnd::Reached => (up, None),
                        WalkEnd::Stalled(at) => {
                            let (down, end2) = walk(q, &pcfg, settings, b.clone(), at, false);
                            let gap_hi = match end2 {
                                WalkEnd::Reached => None,
                                WalkEnd::Stalled(t) => Some(t),
                            };
                            up.extend(down.into_iter().filter(|w| w.theta > at + settings.tol));
                            (up, gap_hi.map(|h| (at, h)))
                        }
                    }
                }
                _ => (Vec::new(), Some((lo_t, hi_t))),
            }
        })
        .collect();

    let mut walls = Vec::new();
    let mut unresolved = Vec::new();
    let mut accumulations = Vec::new();
    for (ws, gap) in pieces {
        if let Some((a, b)) = gap {
            let mut below: Vec<T> = ws.iter().filter(|w| w.theta <= a).map(|w| w.theta).collect();
            let mut above: Vec<T> = ws.iter().filter(|w| w.theta >= b).map(|w| w.theta).collect();
            below.sort_by(crate::real::cmp);
            above.sort_by(crate::real::cmp);
            let run_below = shrinking_run(below.iter().rev().copied().collect());
            let run_above = shrinking_run(above.clone());
            if run_below >= 5 || run_above >= 5 {
                let (a_wrapped, b_wrapped) = (rem_euclid(a, T::one()), rem_euclid(b, T::one()));
                let limit = ring_phase(&ws, &below[below.len() - run_below..]).or_else(|| ring_phase(&ws, &above[..run_above]));
                accumulations.push(Accumulation {
                    interval: (a_wrapped, b_wrapped),
                    walls_below: run_below,
                    walls_above: run_above,
                    limit,
                });
                let marked: Vec<T> = below.iter().rev().take(run_below).chain(above.iter().take(run_above)).copied().collect();
                let mut ws = ws;
                for w in ws.iter_mut() {
                    if marked.contains(&w.theta) {
                        w.accumulating = true;
                    }
                }
                walls.extend(ws);
            } else {
                walls.extend(ws);
            }
            unresolved.push((rem_euclid(a, T::one()), rem_euclid(b, T::one())));
        } else {
            walls.extend(ws);
        }
    }
    for w in walls.iter_mut() {
        let mut k = w.theta.floor();
        if w.theta - k >= T::one() - settings.tol {
            k = k + T::one();
        }
        w.theta = (w.theta - k).max(T::zero());
        // Shifting the phase by an odd integer reverses the trajectory direction.
        if rem_euclid(k, T::lit(2.0)) > T::lit(0.5) {
            w.period = -w.period;
        }
    }
    walls.sort_by(|a, b| crate::real::cmp(&a.theta, &b.theta));
    walls.dedup_by(|a, b| (a.theta - b.theta).abs() < settings.tol);
    Ok(PhaseScan { walls, unresolved, accumulations })
}

/// Phase of the common difference of consecutive wall periods at the phases
/// `run`, if at least three walls agree on it.
fn ring_phase<T: Real>(ws: &[WallEvent<T>], run: &[T]) -> Option<T> {
    if run.len() < 3 {
        return None;
    }
    let z: Vec<C<T>> = run.iter().filter_map(|t| ws.iter().find(|w| w.theta == *t).map(|w| w.period)).collect();
    let steps: Vec<C<T>> = z.windows(2).map(|p| p[1] - p[0]).collect();
    let first = steps[0];
    let agree = steps.iter().all(|d| (*d - first).norm() <= T::lit(1e-6) * (T::one() + first.norm()));
    agree.then(|| rem_euclid(first.arg() / T::PI(), T::one()))
}

/// Length of the initial run of points, ordered towards a limit, whose gaps
/// strictly shrink.
fn shrinking_run<T: Real>(pts: Vec<T>) -> usize {
    if pts.len() < 2 {
        return pts.len();
    }
    // `pts` is ordered from the limit outward, so gaps grow along it.
    let gaps: Vec<T> = pts.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let mut run = 1;
    for k in 0..gaps.len() {
        if k > 0 && gaps[k] <= gaps[k - 1] {
            break;
        }
        run = k + 2;
    }
    run
}

/// Result of crossing a wall by lowering the phase from `theta + offset` to
/// `theta - offset`.
#[derive(Debug, Clone)]
pub struct WallCrossing<T> {
    pub theta: T,
    pub kind: WallKind,
    /// Flipped arc label, or the popped puncture label.
    pub site: String,
    pub before: WkbTriangulation,
    pub after: WkbTriangulation,
    /// Periods of the arcs on each side, by label.
    pub periods_before: BTreeMap<String, C<T>>,
    pub periods_after: BTreeMap<String, C<T>>,
    /// Lattice map in the arc order of `before`: column `f` expresses the class
    /// of arc `f` before the wall in the arcs after it.
    pub transport: LatticeMap,
    /// Largest mismatch `|Z_before([f]) - sum_g F_gf Z_after([g])|`.
    pub residual: T,
}

impl<T: Real> WallCrossing<T> {
    pub fn verified(&self, tol: T) -> bool {
        self.residual <= tol
    }
}

/// Whether the chamber probed at `at` ends at `wall`, above it when `up`.
fn adjacent<T: Real>(d: &StripDecomposition<T>, at: T, wall: T, up: bool) -> bool {
    let ch = Chamber { theta: at, strips: d.strips.iter().map(|s| (s.period, [0, 0])).collect() };
    let next = if up { ch.up().0 } else { ch.down().0 };
    let gap = rem_euclid(next - wall + T::lit(0.5), T::one()) - T::lit(0.5);
    gap.abs() <= T::lit(1e-6)
}

/// Decomposes at `theta +- offset` (before, after), relates the two WKB triangulations by a
/// flip or a pop, and checks the period transport.
pub fn wall_cross_check<T: Real>(
    q: &QuadraticDifferential<T>,
    theta: T,
    offset: T,
    cfg: &TraceConfig<T>,
) -> Result<WallCrossing<T>, DiffError> {
    let pcfg = TraceConfig { delta_saddle: cfg.delta_saddle.min(T::lit(1e-11)), ..*cfg };
    // Next to a pop wall trajectories spiral slowly, so widen the offset
    // while the integrator runs out of steps. A widened offset is accepted
    // only if both probes still lie in the chambers adjacent to the wall.
    let mut offset = offset;
    let (qm, qp, dm, dp) = loop {
        // Crossing runs toward decreasing phase, which rotates the
        // differential by a positive angle.
        let qm = q.with_theta(theta + offset);
        let qp = q.with_theta(theta - offset);
        match (decompose(&qm, &pcfg, false), decompose(&qp, &pcfg, false)) {
            (Ok(dm), Ok(dp)) => {
                if !adjacent(&dm, theta + offset, theta, false) || !adjacent(&dp, theta - offset, theta, true) {
                    return Err(DiffError::MismatchedWallKind("no wall next to the probe phases".into()));
                }
                break (qm, qp, dm, dp);
            }
            (Err(DiffError::Inconclusive(_)), _) | (_, Err(DiffError::Inconclusive(_))) if offset < T::lit(0.05) => {
                offset = offset * T::lit(10.0);
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    };
    let n = dm.strips.len();
    if dp.strips.len() != n {
        return Err(DiffError::MismatchedWallKind("strip counts differ across the wall".into()));
    }
    let labels_m: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    // The wall lies somewhere between the probes.
    let expected_pop = pop_pole(q, theta, T::lit(1e-7).max(T::PI() * offset));
    let u = phase(theta);
    let collapsing = |d: &StripDecomposition<T>| {
        (0..n)
            .min_by(|&i, &j| {
                let f = |k: usize| (d.strips[k].period / u).im.abs() / d.strips[k].period.norm();
                crate::real::cmp(&f(i), &f(j))
            })
            .expect("at least one strip")
    };
    let (em, ep) = (collapsing(&dm), collapsing(&dp));
    let mut labels_p: Vec<Option<String>> = vec![None; n];
    // Away from the collapsing strip, periods change by multiples of the
    // saddle period.
    let gamma = dm.strips[em].period;
    labels_p[ep] = Some(labels_m[em].clone());
    for (j, lp) in labels_p.iter_mut().enumerate() {
        if j == ep {
            continue;
        }
        let fits: Vec<usize> = (0..n)
            .filter(|&i| i != em)
            .filter(|&i| {
                let k = (dm.strips[i].period - dp.strips[j].period) / gamma;
                (k - Complex::new(k.re.round(), T::zero())).norm() < T::lit(1e-6) && k.re.abs() <= T::lit(8.0)
            })
            .collect();
        if fits.len() == 1 {
            *lp = Some(labels_m[fits[0]].clone());
        }
    }
    if labels_p.iter().any(Option::is_none) {
        return Err(DiffError::MismatchedWallKind("arcs cannot be matched across the wall".into()));
    }
    let labels_p: Vec<String> = labels_p.into_iter().map(Option::unwrap).collect();
    let mut distinct = labels_p.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != n {
        return Err(DiffError::MismatchedWallKind("arcs cannot be matched across the wall".into()));
    }
    let before = wkb_with_labels(&qm, &dm, &labels_m)?;
    let after = wkb_with_labels(&qp, &dp, &labels_p)?;
    let tm = before.triangulation();
    let tp = after.triangulation();
    let by_label = |d: &StripDecomposition<T>, w: &WkbTriangulation, labels: &[String]| -> BTreeMap<String, C<T>> {
        let t = w.triangulation();
        (0..t.n())
            .map(|a| {
                let label = t.arc_label(a).to_string();
                let strip = labels.iter().position(|l| *l == label).expect("label of a strip");
                (label, d.strips[strip].period)
            })
            .collect()
    };
    let zm = by_label(&dm, &before, &labels_m);
    let zp = by_label(&dp, &after, &labels_p);

    let (kind, site, transport) = if expected_pop.is_none() {
        let i = em;
        let e = tm.arc_index(&labels_m[i]).expect("arc label");
        let flipped = tm.flip(e).map_err(|err| DiffError::MismatchedWallKind(err.to_string()))?;
        if flipped.labelled_key() != tp.labelled_key() {
            return Err(DiffError::MismatchedWallKind("triangulations are not related by a flip".into()));
        }
        (WallKind::Flip, labels_m[i].clone(), flip_lattice_map(tm, e, FlipSign::Plus)?)
    } else {
        if tm.labelled_key() != tp.labelled_key() {
            return Err(DiffError::MismatchedWallKind("triangulations differ at a real residue phase".into()));
        }
        let sm = before.signed.signs_by_label();
        let sp = after.signed.signs_by_label();
        let changed: Vec<&String> = sm.keys().filter(|k| sm[*k] != sp[*k]).collect();
        if changed.len() != 1 {
            return Err(DiffError::MismatchedWallKind(format!("{} puncture signs change", changed.len())));
        }
        let p = tm.vertex_index(changed[0]).expect("puncture label");
        (WallKind::Pop, changed[0].clone(), pop_lattice_map(&before.signed, p)?)
    };
    let mut residual = T::zero();
    for f in 0..tm.n() {
        let mut sum = Complex::new(T::zero(), T::zero());
        for g in 0..tm.n() {
            let c = transport.matrix.get(g, f);
            if c != 0 {
                sum = sum + zp[tm.arc_label(g)] * T::lit(c as f64);
            }
        }
        let err = (zm[tm.arc_label(f)] - sum).norm();
        residual = residual.max(err / (T::one() + zm[tm.arc_label(f)].norm()));
    }
    Ok(WallCrossing { theta, kind, site, before, after, periods_before: zm, periods_after: zp, transport, residual })
}
