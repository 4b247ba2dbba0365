//! Evaluation of `sqrt(R)` in the two coordinate charts and path quadrature
//! with continuous branch selection.

use num_complex::Complex;

use crate::differential::{FiniteCrit, FiniteCritKind, PoleId, QuadraticDifferential};
use crate::poly;
use crate::real::{nearest_branch, Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// The coordinate `z`.
    Z,
    /// The coordinate `w = 1/z` near infinity.
    W,
}

const GL_X: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_W: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Pole of order at least two with its trapping data.
#[derive(Debug, Clone)]
pub struct BigPole<T> {
    pub id: PoleId,
    pub order: u32,
    pub chart: Chart,
    pub centre: C<T>,
    pub lead: C<T>,
    pub trap: T,
}

/// Precomputed data of a differential used by the integrator.
#[derive(Debug, Clone)]
pub struct Geometry<T> {
    num: Vec<C<T>>,
    num_rev: Vec<C<T>>,
    poles: Vec<(C<T>, u32)>,
    inf_order: i64,
    pub finite: Vec<FiniteCrit<T>>,
    pub near_radius: Vec<T>,
    pub big: Vec<BigPole<T>>,
    crit_z: Vec<C<T>>,
    crit_w: Vec<C<T>>,
    pub switch_radius: T,
}

fn zero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> Geometry<T> {
    pub fn new(q: &QuadraticDifferential<T>) -> Self {
        Self::with_settings(q, T::lit(10.0), T::lit(0.2))
    }

    pub fn with_settings(q: &QuadraticDifferential<T>, chart_radius: T, trap_factor: T) -> Self {
        let num = poly::trim(&q.numerator);
        let num_rev: Vec<C<T>> = num.iter().rev().cloned().collect();
        let zeros = poly::roots(&num);
        let mut finite: Vec<FiniteCrit<T>> =
            zeros.iter().map(|&z| FiniteCrit { z, kind: FiniteCritKind::Zero }).collect();
        finite.extend(
            q.poles
                .iter()
                .filter(|p| p.order == 1)
                .map(|p| FiniteCrit { z: p.z, kind: FiniteCritKind::SimplePole }),
        );
        let mut crit_z: Vec<C<T>> = zeros.clone();
        crit_z.extend(q.poles.iter().map(|p| p.z));
        let reach = crit_z.iter().map(|c| c.norm()).fold(T::zero(), T::max);
        let switch_radius = chart_radius.max(reach * T::lit(4.0));
        let inf_order = q.infinity_order();
        let mut crit_w: Vec<C<T>> = crit_z
            .iter()
            .filter(|c| c.norm() > T::zero())
            .map(|&c| Complex::new(T::one(), T::zero()) / c)
            .collect();
        if inf_order >= 2 {
            crit_w.push(zero());
        }
        let mut g = Geometry {
            num,
            num_rev,
            poles: q.poles.iter().map(|p| (p.z, p.order)).collect(),
            inf_order,
            finite,
            near_radius: Vec::new(),
            big: Vec::new(),
            crit_z,
            crit_w,
            switch_radius,
        };
        g.near_radius = g.finite.iter().map(|c| T::lit(0.3) * g.isolation(Chart::Z, c.z)).collect();
        for (id, order) in q.big_poles() {
            let (chart, centre) = match id {
                PoleId::Finite(i) => (Chart::Z, q.poles[i].z),
                PoleId::Infinity => (Chart::W, zero()),
            };
            let mut trap = trap_factor * g.isolation(chart, centre);
            if chart == Chart::W {
                trap = trap.min(T::lit(0.5) / switch_radius);
            }
            g.big.push(BigPole { id, order, chart, centre, lead: q.leading_coefficient(id), trap });
        }
        g
    }

    pub fn crit(&self, chart: Chart) -> &[C<T>] {
        match chart {
            Chart::Z => &self.crit_z,
            Chart::W => &self.crit_w,
        }
    }

    /// Distance from `x` to the nearest critical point other than `x` itself.
    pub fn isolation(&self, chart: Chart, x: C<T>) -> T {
        let tiny = T::epsilon() * (T::one() + x.norm()) * T::lit(100.0);
        let d = self
            .crit(chart)
            .iter()
            .map(|c| (c - x).norm())
            .filter(|&d| d > tiny)
            .fold(T::infinity(), T::min);
        if d.is_finite() {
            d
        } else {
            T::one()
        }
    }

    pub fn dist_crit(&self, chart: Chart, x: C<T>) -> T {
        self.crit(chart).iter().map(|c| (c - x).norm()).fold(T::infinity(), T::min)
    }

    /// `R` in the given chart.
    pub fn value(&self, chart: Chart, x: C<T>) -> C<T> {
        match chart {
            Chart::Z => {
                let mut v = poly::eval(&self.num, x);
                for &(p, m) in &self.poles {
                    v = v / (x - p).powu(m);
                }
                v
            }
            Chart::W => {
                let one = Complex::new(T::one(), T::zero());
                let mut v = poly::eval(&self.num_rev, x) * x.powi(-(self.inf_order as i32));
                for &(p, m) in &self.poles {
                    v = v / (one - p * x).powu(m);
                }
                v
            }
        }
    }

    /// Derivative of `R` in the given chart.
    pub fn deriv(&self, chart: Chart, x: C<T>) -> C<T> {
        let one = Complex::new(T::one(), T::zero());
        match chart {
            Chart::Z => {
                let (p, dp) = poly::eval_d(&self.num, x);
                let mut g = one;
                let mut lg = zero();
                for &(c, m) in &self.poles {
                    g = g / (x - c).powu(m);
                    lg = lg - Complex::new(T::lit(m as f64), T::zero()) / (x - c);
                }
                dp * g + p * g * lg
            }
            Chart::W => {
                let (p, dp) = poly::eval_d(&self.num_rev, x);
                let mut h = x.powi(-(self.inf_order as i32));
                let mut lh = -Complex::new(T::lit(self.inf_order as f64), T::zero()) / x;
                if self.inf_order == 0 {
                    lh = zero();
                }
                for &(c, m) in &self.poles {
                    h = h / (one - c * x).powu(m);
                    lh = lh + c * T::lit(m as f64) / (one - c * x);
                }
                dp * h + p * h * lh
            }
        }
    }

    pub fn sqrt_near(&self, chart: Chart, x: C<T>, prev: C<T>) -> C<T> {
        nearest_branch(self.value(chart, x).sqrt(), prev)
    }

    /// Integral of `sqrt(R)` along a parametrized path `tau -> (x, dx/dtau)`
    /// on `[0, 1]`, split into `panels` Gauss-Legendre panels. The branch is
    /// continued from `s0` at `tau = 0`; returns the integral and the branch at
    /// `tau = 1`.
    pub fn path_integral<F>(&self, chart: Chart, path: F, s0: C<T>, panels: usize) -> (C<T>, C<T>)
    where
        F: Fn(T) -> (C<T>, C<T>),
    {
        let mut total = zero();
        let mut s = s0;
        let np = T::lit(panels as f64);
        let half = T::lit(0.5);
        for k in 0..panels {
            let a = T::lit(k as f64) / np;
            let hw = half / np;
            let mid = a + hw;
            for (xi, wi) in GL_X.iter().zip(GL_W.iter()) {
                let tau = mid + hw * T::lit(*xi);
                let (x, dx) = path(tau);
                s = self.sqrt_near(chart, x, s);
                total = total + s * dx * (hw * T::lit(*wi));
            }
        }
        let (x1, _) = path(T::one());
        let s1 = self.sqrt_near(chart, x1, s);
        (total, s1)
    }

    /// Integral along the straight segment from `a` to `b`.
    pub fn segment(&self, chart: Chart, a: C<T>, s_a: C<T>, b: C<T>, panels: usize) -> (C<T>, C<T>) {
        let d = b - a;
        self.path_integral(chart, |t| (a + d * t, d), s_a, panels)
    }

    /// Integral over the full circle of the given radius, counterclockwise.
    pub fn circle_integral(&self, chart: Chart, centre: C<T>, radius: T, panels: usize) -> C<T> {
        let start = centre + Complex::new(radius, T::zero());
        let s0 = self.value(chart, start).sqrt();
        let tau_scale = T::TAU();
        self.path_integral(
            chart,
            |t| {
                let e = Complex::from_polar(radius, tau_scale * t);
                (centre + e, e * Complex::new(T::zero(), tau_scale))
            },
            s0,
            panels,
        )
        .0
    }

    /// Integral from the finite critical point `c` to `x` in the `z` chart
    /// through the substitution `z = c + u^2`. `anchor` fixes the branch either
    /// at `x` or through the leading coefficient at `c`.
    pub fn from_crit(&self, crit: usize, x: C<T>, anchor: Anchor<T>) -> (C<T>, C<T>) {
        let c = self.finite[crit].z;
        let kind = self.finite[crit].kind;
        let u_end = (x - c).sqrt();
        let panels = 4usize;
        let mut nodes: Vec<(T, T)> = Vec::with_capacity(panels * 8);
        let np = T::lit(panels as f64);
        let hw = T::lit(0.5) / np;
        for k in 0..panels {
            let mid = T::lit(k as f64) / np + hw;
            for (xi, wi) in GL_X.iter().zip(GL_W.iter()) {
                nodes.push((mid + hw * T::lit(*xi), hw * T::lit(*wi)));
            }
        }
        let two = T::lit(2.0);
        let mut total: C<T> = zero();
        let integrand = |u: C<T>, s: C<T>| u * s * two;
        match anchor {
            Anchor::End(s_x) => {
                let mut s = s_x;
                for &(tau, w) in nodes.iter().rev() {
                    let u = u_end * tau;
                    s = self.sqrt_near(Chart::Z, c + u * u, s);
                    total = total + integrand(u, s) * w;
                }
                (total * u_end, s_x)
            }
            Anchor::Origin(g0) => {
                let mut s = zero();
                for (i, &(tau, w)) in nodes.iter().enumerate() {
                    let u = u_end * tau;
                    let guess = if i == 0 {
                        match kind {
                            FiniteCritKind::Zero => u * g0,
                            FiniteCritKind::SimplePole => g0 / u,
                        }
                    } else {
                        s
                    };
                    s = self.sqrt_near(Chart::Z, c + u * u, guess);
                    total = total + integrand(u, s) * w;
                }
                let s_x = self.sqrt_near(Chart::Z, x, s);
                (total * u_end, s_x)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Anchor<T> {
    /// Branch value of `sqrt(R)` at the far end.
    End(C<T>),
    /// `sqrt(R(c + u^2)) ~ u g0` at a zero and `~ g0 / u` at a simple pole.
    Origin(C<T>),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuadraticDifferential<f64> {
        QuadraticDifferential::from_coeffs(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)], &[((0.5, 0.5), 2)], 0.0).unwrap()
    }

    #[test]
    fn chart_values_agree() {
        let q = q();
        let g = Geometry::new(&q);
        let z = Complex::new(3.0, -2.0);
        let w = 1.0 / z;
        let lhs = g.value(Chart::W, w);
        let rhs = q.r(z) / w.powi(4);
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm());
        let h = 1e-6;
        for chart in [Chart::Z, Chart::W] {
            let x = Complex::new(0.07, 0.03);
            let num = (g.value(chart, x + h) - g.value(chart, x - h)) / (2.0 * h);
            assert!((num - g.deriv(chart, x)).norm() < 1e-5 * (1.0 + num.norm()), "{chart:?}");
        }
    }

    #[test]
    fn substitution_matches_closed_form() {
        // R = z, integral from 0 to x of sqrt(z) is (2/3) x^{3/2}.
        let q = QuadraticDifferential::from_coeffs(&[(0.0, 0.0), (1.0, 0.0)], &[], 0.0).unwrap();
        let g = Geometry::new(&q);
        let x = Complex::new(0.3, 0.4);
        let s = x.sqrt();
        let (i, _) = g.from_crit(0, x, Anchor::End(s));
        assert!((i - x.powf(1.5) * (2.0 / 3.0)).norm() < 1e-13);
        let (i2, s2) = g.from_crit(0, x, Anchor::Origin(Complex::new(1.0, 0.0)));
        assert!((i2 - i).norm() < 1e-13 && (s2 - s).norm() < 1e-13);
    }

    #[test]
    fn double_pole_circle() {
        let q = QuadraticDifferential::from_coeffs(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)], &[((0.0, 0.0), 2)], 0.0).unwrap();
        let g = Geometry::new(&q);
        let i = g.circle_integral(Chart::Z, Complex::new(0.0, 0.0), 0.3, 64);
        assert!((i.norm() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }
}
