//! Horizontal trajectories by stepping in the flat coordinate with a Newton
//! corrector on the quadrature of `sqrt(R)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::chart::{Anchor, Chart, Geometry};
use crate::differential::{FiniteCritKind, PoleId, QuadraticDifferential};
use crate::error::DiffError;
use crate::real::{cis, phase, Real, C};

/// Numerical settings of the integrator and the saddle tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig<T> {
    /// Flat distance below which a ray counts as hitting a zero.
    pub delta_saddle: T,
    /// Saddle-free verdicts need every closest approach above `hysteresis * delta_saddle`.
    pub hysteresis: T,
    pub chart_radius: T,
    /// Largest step as a fraction of the distance to the nearest critical point.
    pub step_factor: T,
    pub max_steps: usize,
    pub position_tol: T,
    /// Trapping radius of a pole as a fraction of its isolation distance.
    pub trap_factor: T,
    /// Relative transverse mismatch accepted as a closed trajectory.
    pub closure_tol: T,
}

impl<T: Real> Default for TraceConfig<T> {
    fn default() -> Self {
        TraceConfig {
            delta_saddle: T::lit(1e-6),
            hysteresis: T::lit(10.0),
            chart_radius: T::lit(10.0),
            step_factor: T::lit(0.2),
            max_steps: 200_000,
            position_tol: T::lit(1e-10),
            trap_factor: T::lit(0.2),
            closure_tol: T::lit(1e-7),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Start<T> {
    /// Ray `ray` of finite critical point `crit`.
    Ray { crit: usize, ray: usize },
    Seed { point: C<T> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum End<T> {
    Pole { pole: PoleId, cluster: usize },
    NearZero { crit: usize, distance: T },
    Closed { period: T },
    BudgetExceeded,
}

/// Where a trapped trajectory crosses a circle around its pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing<T> {
    /// Index of the last sample outside the circle.
    pub before: usize,
    /// Crossing point in the chart of the pole.
    pub point: C<T>,
    pub angle: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Terminal<T> {
    pub radius: T,
    pub outer: Crossing<T>,
    pub inner: Crossing<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub theta: T,
    /// `+1` follows `e^{i pi theta}`, `-1` the opposite direction.
    pub direction: i8,
    pub start: Start<T>,
    pub samples: Vec<C<T>>,
    /// Flat length from the start to each sample.
    pub flat: Vec<T>,
    /// `sqrt(R)` in the `z` chart at each sample.
    pub branch: Vec<C<T>>,
    pub end: End<T>,
    pub terminal: Option<Terminal<T>>,
    /// Smallest transverse flat distance to a zero that was passed.
    pub min_approach: T,
}

impl<T: Real> Trajectory<T> {
    pub fn unit(&self) -> C<T> {
        let u = phase(self.theta);
        if self.direction > 0 {
            u
        } else {
            -u
        }
    }

    /// Largest `|Im(e^{-i pi theta} int sqrt(R) dz)|` over consecutive samples,
    /// recomputed by independent quadrature in the `z` chart.
    pub fn horizontality_residual(&self, geom: &Geometry<T>) -> T {
        let u = self.unit();
        let mut worst = T::zero();
        let first = match self.start {
            Start::Ray { .. } => 1,
            Start::Seed { .. } => 0,
        };
        for k in first..self.samples.len().saturating_sub(1) {
            let (a, b) = (self.samples[k], self.samples[k + 1]);
            let (i, _) = geom.segment(Chart::Z, a, self.branch[k], b, 2);
            let r = (i / u).im.abs() / (T::one() + (self.flat[k + 1] - self.flat[k]).abs());
            worst = worst.max(r);
        }
        worst
    }
}

/// Unit tangent directions of the horizontal rays at a finite critical point,
/// in counterclockwise order.
pub fn ray_directions<T: Real>(geom: &Geometry<T>, crit: usize, theta: T) -> Vec<C<T>> {
    let c = geom.finite[crit].z;
    match geom.finite[crit].kind {
        FiniteCritKind::Zero => {
            let g = geom.deriv(Chart::Z, c).sqrt();
            let base = T::lit(2.0 / 3.0) * (T::PI() * theta - g.arg());
            (0..3).map(|j| cis(base + T::TAU() * T::lit(j as f64) / T::lit(3.0))).collect()
        }
        FiniteCritKind::SimplePole => {
            let g = simple_pole_coefficient(geom, crit).sqrt();
            vec![cis(T::lit(2.0) * (T::PI() * theta - g.arg()))]
        }
    }
}

fn simple_pole_coefficient<T: Real>(geom: &Geometry<T>, crit: usize) -> C<T> {
    let c = geom.finite[crit].z;
    let h = geom.isolation(Chart::Z, c) * T::lit(1e-4);
    let x = c + Complex::new(h, T::zero());
    geom.value(Chart::Z, x) * (x - c)
}

struct Proximity<T> {
    prev_a: Option<T>,
}

pub(crate) struct Tracer<'a, T> {
    pub geom: &'a Geometry<T>,
    pub cfg: &'a TraceConfig<T>,
    pub theta: T,
}

enum StepOutcome<T> {
    Ok(C<T>, C<T>),
    Fail,
}

impl<'a, T: Real> Tracer<'a, T> {
    pub fn new(geom: &'a Geometry<T>, cfg: &'a TraceConfig<T>, theta: T) -> Self {
        Tracer { geom, cfg, theta }
    }

    fn newton_step(&self, chart: Chart, x: C<T>, s: C<T>, h: T, u: C<T>) -> StepOutcome<T> {
        let target = u * h;
        let mut x1 = x + target / s;
        let limit = (target / s).norm() * T::lit(3.0);
        let tol = self.cfg.position_tol * T::lit(1e-2);
        for _ in 0..12 {
            let (i, s1) = self.geom.segment(chart, x, s, x1, 1);
            let corr = (i - target) / s1;
            x1 = x1 - corr;
            if !(x1.re.is_finite() && x1.im.is_finite()) || (x1 - x).norm() > limit {
                return StepOutcome::Fail;
            }
            if corr.norm() <= tol.max(T::epsilon() * T::lit(8.0) * x1.norm()) {
                let (_, s_fin) = self.geom.segment(chart, x, s, x1, 1);
                return StepOutcome::Ok(x1, s_fin);
            }
        }
        StepOutcome::Fail
    }

    /// Traces ray `ray` of finite critical point `crit`.
    pub fn ray(&self, crit: usize, ray: usize, direction: i8) -> Result<Trajectory<T>, DiffError> {
        let geom = self.geom;
        let c = geom.finite[crit].z;
        let kind = geom.finite[crit].kind;
        let dirs = ray_directions(geom, crit, self.theta);
        if ray >= dirs.len() {
            return Err(DiffError::Invalid(format!("ray {ray} does not exist")));
        }
        let u = if direction > 0 { phase(self.theta) } else { -phase(self.theta) };
        let v = if direction > 0 { dirs[ray] } else { -dirs[ray] };
        let rho = geom.isolation(Chart::Z, c) * T::lit(0.02);
        let (g0, flat0) = match kind {
            FiniteCritKind::Zero => {
                let g = geom.deriv(Chart::Z, c).sqrt();
                (g, T::lit(2.0 / 3.0) * g.norm() * rho.powf(T::lit(1.5)))
            }
            FiniteCritKind::SimplePole => {
                let g = simple_pole_coefficient(geom, crit).sqrt();
                (g, T::lit(2.0) * g.norm() * rho.sqrt())
            }
        };
        let mut uu = Complex::from_polar(rho.sqrt(), v.arg() / T::lit(2.0));
        let target = u * flat0;
        let lead = match kind {
            FiniteCritKind::Zero => target * T::lit(1.5) / uu.powu(3),
            FiniteCritKind::SimplePole => target / (uu * T::lit(2.0)),
        };
        let g = crate::real::nearest_branch(g0, lead);
        // `from_crit` integrates along the principal square root of `x - c`;
        // results for the opposite root change sign.
        let eval = |uu: C<T>| {
            let (i, s) = geom.from_crit(crit, c + uu * uu, Anchor::Origin(g));
            let root = (uu * uu).sqrt();
            if (root - uu).norm() > (root + uu).norm() {
                (-i, -s)
            } else {
                (i, s)
            }
        };
        let mut s = Complex::new(T::zero(), T::zero());
        for _ in 0..30 {
            let (i, s1) = eval(uu);
            s = s1;
            let corr = (i - target) / (uu * s1 * T::lit(2.0));
            uu = uu - corr;
            if corr.norm() < T::epsilon() * T::lit(64.0) * uu.norm() {
                break;
            }
        }
        let (_, s_fin) = eval(uu);
        if (s_fin - s).norm() > T::lit(1e-6) * s.norm() {
            return Err(DiffError::IntegrationFailure("ray start did not converge".into()));
        }
        let mut traj = Trajectory {
            theta: self.theta,
            direction,
            start: Start::Ray { crit, ray },
            samples: vec![c],
            flat: vec![T::zero()],
            branch: vec![Complex::new(T::zero(), T::zero())],
            end: End::BudgetExceeded,
            terminal: None,
            min_approach: T::infinity(),
        };
        self.run(&mut traj, c + uu * uu, s_fin, flat0, Some(crit), None)?;
        Ok(traj)
    }

    /// Traces from a regular point with `sqrt(R)` fixed to `s0`.
    pub fn seed(&self, z0: C<T>, s0: C<T>, direction: i8, detect_closure: bool) -> Result<Trajectory<T>, DiffError> {
        let mut traj = Trajectory {
            theta: self.theta,
            direction,
            start: Start::Seed { point: z0 },
            samples: Vec::new(),
            flat: Vec::new(),
            branch: Vec::new(),
            end: End::BudgetExceeded,
            terminal: None,
            min_approach: T::infinity(),
        };
        let seed = if detect_closure { Some(z0) } else { None };
        self.run(&mut traj, z0, s0, T::zero(), None, seed)?;
        Ok(traj)
    }

    fn run(
        &self,
        traj: &mut Trajectory<T>,
        z0: C<T>,
        s0: C<T>,
        t0: T,
        own: Option<usize>,
        seed: Option<C<T>>,
    ) -> Result<(), DiffError> {
        let geom = self.geom;
        let cfg = self.cfg;
        let u = traj.unit();
        let one = Complex::new(T::one(), T::zero());
        let big_r = geom.switch_radius;
        let (mut chart, mut x, mut s) = if z0.norm() > big_r {
            let w = one / z0;
            (Chart::W, w, -s0 * z0 * z0)
        } else {
            (Chart::Z, z0, s0)
        };
        let mut t = t0;
        let push = |traj: &mut Trajectory<T>, chart: Chart, x: C<T>, s: C<T>, t: T| {
            let (z, sz) = match chart {
                Chart::Z => (x, s),
                Chart::W => (one / x, -s * x * x),
            };
            traj.samples.push(z);
            traj.flat.push(t);
            traj.branch.push(sz);
        };
        push(traj, chart, x, s, t);
        let mut left_own = own.is_none();
        let mut prox: Vec<Proximity<T>> = geom.finite.iter().map(|_| Proximity { prev_a: None }).collect();
        let seed_radius = seed.map(|z| T::lit(0.3) * geom.dist_crit(Chart::Z, z));
        let mut seed_left = false;
        let mut seed_prev: Option<T> = None;
        let mut trapped: Option<usize> = None;
        let mut outer: Option<Crossing<T>> = None;
        let mut inner: Option<Crossing<T>> = None;
        let tiny = T::min_positive_value().sqrt();
        for _step in 0..cfg.max_steps {
            let d = geom.dist_crit(chart, x);
            let cap = match chart {
                Chart::Z => T::lit(0.25) * big_r,
                Chart::W => T::lit(0.25) / big_r,
            };
            let dx = (cfg.step_factor * d).min(cap);
            let mut h = s.norm() * dx;
            let (x1, s1) = loop {
                if h < tiny {
                    return Err(DiffError::IntegrationFailure(format!("step underflow near {}", traj.samples.last().unwrap())));
                }
                match self.newton_step(chart, x, s, h, u) {
                    StepOutcome::Ok(a, b) => break (a, b),
                    StepOutcome::Fail => h = h / T::lit(2.0),
                }
            };
            let prev_x = x;
            let prev_chart = chart;
            x = x1;
            s = s1;
            t = t + h;
            match chart {
                Chart::Z if x.norm() > big_r => {
                    chart = Chart::W;
                    s = -s * x * x;
                    x = one / x;
                }
                Chart::W if x.norm() > T::lit(2.0) / big_r => {
                    chart = Chart::Z;
                    s = -s * x * x;
                    x = one / x;
                }
                _ => {}
            }
            push(traj, chart, x, s, t);
            let idx = traj.samples.len() - 1;

            // Trapping at poles of order at least two.
            if trapped.is_none() {
                for (k, bp) in geom.big.iter().enumerate() {
                    if bp.chart != chart || prev_chart != chart {
                        continue;
                    }
                    let r = (x - bp.centre).norm();
                    if r < bp.trap && r < (prev_x - bp.centre).norm() {
                        trapped = Some(k);
                    }
                }
            }
            if let Some(k) = trapped {
                let bp = &geom.big[k];
                if chart != bp.chart {
                    trapped = None;
                    outer = None;
                    inner = None;
                } else {
                    let r = (x - bp.centre).norm();
                    let r_prev = (prev_x - bp.centre).norm();
                    let r0 = bp.trap / T::lit(2.0);
                    let r1 = bp.trap / T::lit(4.0);
                    if prev_chart == chart {
                        for (radius, slot) in [(r0, &mut outer), (r1, &mut inner)] {
                            if r_prev >= radius && r < radius {
                                let lam = (r_prev - radius) / (r_prev - r);
                                let angle = (prev_x + (x - prev_x) * lam - bp.centre).arg();
                                let p = bp.centre + Complex::from_polar(radius, angle);
                                *slot = Some(Crossing { before: idx - 1, point: p, angle });
                            }
                        }
                    }
                    if r > bp.trap * T::lit(1.5) {
                        trapped = None;
                        outer = None;
                        inner = None;
                    } else if r < r1 {
                        let cluster = cluster_index(bp.order, (x - bp.centre).arg(), self.theta, bp.lead);
                        traj.end = End::Pole { pole: bp.id, cluster };
                        if let (Some(o), Some(i)) = (outer, inner) {
                            traj.terminal = Some(Terminal { radius: r0, outer: o, inner: i });
                        }
                        return Ok(());
                    }
                    continue;
                }
            }

            if chart != Chart::Z {
                continue;
            }
            // Closest approach to zeros and simple poles.
            for (k, fc) in geom.finite.iter().enumerate() {
                let dist = (x - fc.z).norm();
                if dist >= geom.near_radius[k] {
                    if own == Some(k) {
                        left_own = true;
                    }
                    prox[k].prev_a = None;
                    continue;
                }
                if own == Some(k) && !left_own {
                    continue;
                }
                let (i, _) = geom.from_crit(k, x, Anchor::End(s));
                let q = -i / u;
                let flat = q.norm();
                if flat < cfg.delta_saddle {
                    traj.end = End::NearZero { crit: k, distance: flat };
                    return Ok(());
                }
                if let Some(pa) = prox[k].prev_a {
                    if pa > T::zero() && q.re <= T::zero() {
                        traj.min_approach = traj.min_approach.min(q.im.abs());
                    }
                }
                prox[k].prev_a = Some(q.re);
            }
            // Return to the seed.
            if let (Some(z0), Some(rad)) = (seed, seed_radius) {
                let dist = (x - z0).norm();
                if dist > rad {
                    seed_left = true;
                    seed_prev = None;
                } else if seed_left {
                    let (i, _) = geom.segment(Chart::Z, x, s, z0, 8);
                    let q = i / u;
                    if let Some(pa) = seed_prev {
                        if pa > T::zero() && q.re <= T::zero()
                            && q.im.abs() < cfg.closure_tol * t.max(T::one()) {
                                traj.end = End::Closed { period: t + q.re };
                                return Ok(());
                            }
                    }
                    seed_prev = Some(q.re);
                }
            }
        }
        traj.end = End::BudgetExceeded;
        Ok(())
    }
}

/// Index of the asymptotic direction of a pole of order `m >= 3` nearest to
/// the angle `angle`; zero for double poles.
pub fn cluster_index<T: Real>(order: u32, angle: T, theta: T, lead: C<T>) -> usize {
    if order <= 2 {
        return 0;
    }
    let m = T::lit(order as f64);
    let k = ((T::one() - m / T::lit(2.0)) * angle - T::PI() * theta + lead.sqrt().arg()) / T::PI();
    let n = (order - 2) as i64;
    let r = k.round().to_f64() as i64;
    r.rem_euclid(n) as usize
}

/// Traces a ray of a zero of `q` at its own phase.
pub fn trace_ray<T: Real>(
    q: &QuadraticDifferential<T>,
    zero: usize,
    ray: usize,
    cfg: &TraceConfig<T>,
) -> Result<Trajectory<T>, DiffError> {
    let geom = Geometry::with_settings(q, cfg.chart_radius, cfg.trap_factor);
    if zero >= geom.finite.len() || geom.finite[zero].kind != FiniteCritKind::Zero {
        return Err(DiffError::NotAZero(zero.to_string()));
    }
    Tracer::new(&geom, cfg, q.theta).ray(zero, ray, 1)
}

/// The three unit directions of horizontal rays at the zero `z0`.
pub fn zero_ray_directions<T: Real>(q: &QuadraticDifferential<T>, z0: C<T>) -> Result<Vec<C<T>>, DiffError> {
    let geom = Geometry::new(q);
    let k = geom
        .finite
        .iter()
        .position(|c| c.kind == FiniteCritKind::Zero && (c.z - z0).norm() < T::lit(1e-8) * (T::one() + z0.norm()))
        .ok_or_else(|| DiffError::NotAZero(format!("{z0}")))?;
    Ok(ray_directions(&geom, k, q.theta))
}

/// Traces the trajectory through a regular point in both directions.
pub fn trace_through<T: Real>(
    q: &QuadraticDifferential<T>,
    z0: C<T>,
    cfg: &TraceConfig<T>,
) -> Result<(Trajectory<T>, Trajectory<T>), DiffError> {
    let geom = Geometry::with_settings(q, cfg.chart_radius, cfg.trap_factor);
    let tr = Tracer::new(&geom, cfg, q.theta);
    let s0 = q.r(z0).sqrt();
    Ok((tr.seed(z0, s0, 1, true)?, tr.seed(z0, s0, -1, true)?))
}
