//! Reproducible example suites: short composed checks per example family.

use std::f64::consts::PI;

use differential_core::{
    finite_trajectories, saddle_phase_scan, strip_decomposition, wall_cross_check, Config, Differential, PoleId,
    WallKind,
};
use num_complex::Complex64 as C;
use quiver_core::{flip_lattice_map, mcg_equivalent, mutate, potential, quiver, FlipSign, Quiver};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stability_core::{
    a_n_spectrum, jacobi_indecomposables_3punct, kronecker_spectrum, saddle_vs_stable, stable_class_count, Charge,
    Direction, ExampleFamily, RepQuiver, Spectrum,
};
use surface_core::{annulus, bfs_tagged, bfs_triangulations, flip_corpus, once_punctured_disc, polygon, three_punctured_sphere, IdealTriangulation, SignedTriangulation};

use crate::config::Settings;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    An,
    Dn,
    Kronecker,
    Sphere3,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::An => "an",
            Suite::Dn => "dn",
            Suite::Kronecker => "kronecker",
            Suite::Sphere3 => "sphere3",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Check = Result<String, String>;
type Checks<'a> = Vec<(&'static str, Box<dyn Fn() -> Check + 'a>)>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn catalan(m: u64) -> u64 {
    let mut c = vec![1u64];
    for k in 0..m as usize {
        c.push((0..=k).map(|i| c[i] * c[k - i]).sum());
    }
    c[m as usize]
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Tagged triangulations of a once-punctured disc with `n` marks.
pub fn type_d_count(n: u64) -> u64 {
    (3 * n - 2) * binom(2 * n - 2, n - 1) / n
}

/// Degrees of the underlying simple graph, or `None` with a multiple edge.
fn simple_degrees(q: &Quiver) -> Option<(Vec<usize>, usize)> {
    let n = q.n();
    let mut deg = vec![0; n];
    let mut edges = 0;
    for i in 0..n {
        for j in i + 1..n {
            match q.matrix.get(i, j).abs() {
                0 => {}
                1 => {
                    deg[i] += 1;
                    deg[j] += 1;
                    edges += 1;
                }
                _ => return None,
            }
        }
    }
    Some((deg, edges))
}

fn connected(q: &Quiver) -> bool {
    let n = q.n();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        if std::mem::replace(&mut seen[i], true) {
            continue;
        }
        stack.extend((0..n).filter(|&j| q.matrix.get(i, j) != 0 && !seen[j]));
    }
    seen.into_iter().all(|s| s)
}

/// Orientation of the path Dynkin diagram.
pub fn is_type_a(q: &Quiver) -> bool {
    match simple_degrees(q) {
        Some((deg, edges)) => edges + 1 == q.n() && deg.iter().all(|&d| d <= 2) && connected(q),
        None => false,
    }
}

/// Orientation of the D_n Dynkin diagram, n at least 4.
pub fn is_type_d(q: &Quiver) -> bool {
    let Some((deg, edges)) = simple_degrees(q) else { return false };
    if edges + 1 != q.n() || !connected(q) {
        return false;
    }
    let branch: Vec<usize> = (0..q.n()).filter(|&i| deg[i] == 3).collect();
    if branch.len() != 1 || deg.iter().any(|&d| d > 3) {
        return false;
    }
    let b = branch[0];
    (0..q.n()).filter(|&j| q.matrix.get(b, j) != 0 && deg[j] == 1).count() >= 2
}

fn flips_are_mutations(seeds: &[IdealTriangulation], depth: usize) -> Check {
    let mut count = 0;
    for seed in seeds {
        for t in flip_corpus(seed, depth) {
            let q = quiver(&t);
            for e in (0..t.n()).filter(|&e| !t.is_self_folded_edge(e)) {
                let flipped = t.flip(e).map_err(err)?;
                ensure(quiver(&flipped) == mutate(&q, e).map_err(err)?, format!("flip of {} differs", t.arc_label(e)))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} flips"))
}

/// Every class of total dimension at most `total`, checked against counts
/// of absolutely stable classes over F_2 and F_3.
pub fn oracle_check(q: &RepQuiver, z: &Charge, spectrum: &Spectrum, total: usize, keep: impl Fn(&[usize]) -> bool) -> Check {
    let n = q.vertices;
    let mut d = vec![0usize; n];
    let mut checked = 0;
    loop {
        let s: usize = d.iter().sum();
        if s > 0 && s <= total && keep(&d) {
            let class: Vec<i64> = d.iter().map(|&x| x as i64).collect();
            for p in [2u8, 3] {
                let count = stable_class_count(q, &d, z, p).map_err(err)?;
                let ok = match spectrum.get(&class).map(|e| e.family_dim) {
                    Some(0) => count == 1,
                    Some(_) => count == p as u64 || count == p as u64 + 1,
                    None => count == 0,
                };
                ensure(ok, format!("class {d:?} over F_{p}: {count} stable classes"))?;
            }
            checked += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(format!("{checked} classes"));
            }
            d[i] += 1;
            if d[i] <= total {
                break;
            }
            d[i] = 0;
            i += 1;
        }
    }
}

pub fn random_charge(rng: &mut ChaCha8Rng, n: usize) -> Charge {
    let vals: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let phi: f64 = rng.gen_range(0.02..0.98);
            let r: f64 = rng.gen_range(0.5..3.0);
            (r * (PI * phi).cos(), r * (PI * phi).sin())
        })
        .collect();
    Charge::from_pairs(&vals).expect("upper half plane")
}

pub fn quadratic(c: C) -> Differential {
    Differential::from_coeffs(&[(c.re, c.im), (0.0, 0.0), (1.0, 0.0)], &[], 0.0).expect("valid")
}

/// `(z^2 + b z + 1) dz^2 / z^3`: `b = 3` has a ring domain, `b = 1` does not.
pub fn annulus_differential(b: f64) -> Differential {
    Differential::from_coeffs(&[(1.0, 0.0), (b, 0.0), (1.0, 0.0)], &[((0.0, 0.0), 3)], 0.0).expect("valid")
}

/// `(z^2 + 2 z + 0.3 + 0.1 i) dz^2 / z^2`, a once-punctured disc whose
/// puncture residue crosses the real axis.
pub fn egg_differential() -> Differential {
    Differential::from_coeffs(&[(0.3, 0.1), (2.0, 0.0), (1.0, 0.0)], &[((0.0, 0.0), 2)], 0.0).expect("valid")
}

/// `(z + 0.3)(z - 3/11)(z + 3) dz^2 / z^4`, with two saddles and a ring
/// domain at phase 1/2.
pub fn affine_differential() -> Differential {
    let (p, q, r) = (0.3f64, -3.0 / 11.0, 3.0);
    Differential::from_coeffs(
        &[(p * q * r, 0.0), (p * q + p * r + q * r, 0.0), (p + q + r, 0.0), (1.0, 0.0)],
        &[((0.0, 0.0), 4)],
        0.0,
    )
    .expect("valid")
}

/// `(a z^2 + b z + c) dz^2 / (z^2 (z - 1)^2)`.
pub fn sphere3_differential(a: C, b: C, c: C) -> Differential {
    Differential::from_coeffs(&[(c.re, c.im), (b.re, b.im), (a.re, a.im)], &[((0.0, 0.0), 2), ((1.0, 0.0), 2)], 0.0)
        .expect("valid")
}

fn same_up_to_sign(a: C, b: C, tol: f64) -> bool {
    (a - b).norm().min((a + b).norm()) <= tol * (1.0 + b.norm())
}

fn saddle_free_period(q: &Differential, cfg: &Config) -> Result<(f64, C), String> {
    for k in 0..40 {
        let theta = 0.013 + k as f64 * 0.0247;
        if let Ok(dec) = strip_decomposition(&q.with_theta(theta), cfg) {
            return Ok((theta, dec.strips[0].period));
        }
    }
    Err("no saddle-free phase".into())
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn an_checks(s: &Settings) -> Checks<'_> {
    vec![
        (
            "an/catalan-and-regular",
            Box::new(|| {
                for n in 1..=5usize {
                    let (nodes, adj) = bfs_tagged(&SignedTriangulation::all_plus(polygon(n + 3)), 10_000);
                    ensure(nodes.len() as u64 == catalan(n as u64 + 1), format!("n = {n}: {} triangulations", nodes.len()))?;
                    ensure(adj.iter().all(|nb| nb.len() == n), format!("n = {n}: not regular"))?;
                }
                Ok("n = 1..5".into())
            }),
        ),
        (
            "an/linear-quiver-in-flip-class",
            Box::new(|| {
                for n in 1..=5usize {
                    let (nodes, _) = bfs_triangulations(&polygon(n + 3), 10_000);
                    ensure(nodes.iter().any(|t| is_type_a(&quiver(t))), format!("no path quiver for n = {n}"))?;
                    ensure(nodes.iter().all(|t| t.n() == n), format!("arc count differs from {n}"))?;
                }
                Ok("n = 1..5".into())
            }),
        ),
        ("an/flip-is-mutation", Box::new(|| flips_are_mutations(&[polygon(5), polygon(6), polygon(7)], 4))),
        (
            "an/stability-oracle",
            Box::new(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
                for n in 2..=3usize {
                    let orientation: Vec<Direction> =
                        (0..n - 1).map(|_| if rng.gen_bool(0.5) { Direction::Right } else { Direction::Left }).collect();
                    let z = random_charge(&mut rng, n);
                    let spectrum = a_n_spectrum(&orientation, &z, 6).map_err(err)?;
                    oracle_check(&RepQuiver::linear(&orientation), &z, &spectrum, 3, |_| true)?;
                }
                Ok("n = 2, 3".into())
            }),
        ),
        (
            "an/period-pi-i-c",
            Box::new(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(1));
                let cfg = s.trace();
                for _ in 0..3 {
                    let c = C::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0 * PI));
                    let (theta, z) = saddle_free_period(&quadratic(c), &cfg)?;
                    let mut want = C::new(0.0, PI) * c;
                    if (want * C::from_polar(1.0, -PI * theta)).im < 0.0 {
                        want = -want;
                    }
                    ensure((z - want).norm() <= 1e-8, format!("c = {c}: {z} vs {want}"))?;
                }
                Ok("3 random c".into())
            }),
        ),
        (
            "an/saddle-vs-stable",
            Box::new(move || {
                let r = saddle_vs_stable(ExampleFamily::A1, &quadratic(C::new(0.0, 1.0)), 0.0, &s.trace()).map_err(err)?;
                ensure(r.agree() && r.non_closed_saddles == 1, r.lines().join("; "))?;
                Ok("one saddle, one rigid stable".into())
            }),
        ),
    ]
}

fn dn_checks(s: &Settings) -> Checks<'_> {
    vec![
        (
            "dn/tagged-counts",
            Box::new(|| {
                for k in 2..=4u64 {
                    let (nodes, adj) = bfs_tagged(&SignedTriangulation::all_plus(once_punctured_disc(k as usize)), 10_000);
                    ensure(nodes.len() as u64 == type_d_count(k), format!("{k} marks: {} tagged triangulations", nodes.len()))?;
                    ensure(adj.iter().all(|nb| nb.len() == k as usize), format!("{k} marks: not regular"))?;
                }
                Ok("4, 14, 50".into())
            }),
        ),
        (
            "dn/dynkin-quiver-in-flip-class",
            Box::new(|| {
                for k in 4..=5usize {
                    let (nodes, _) = bfs_triangulations(&once_punctured_disc(k), 10_000);
                    ensure(nodes.iter().any(|t| is_type_d(&quiver(t))), format!("no D_{k} quiver"))?;
                }
                Ok("D4, D5".into())
            }),
        ),
        ("dn/flip-is-mutation", Box::new(|| flips_are_mutations(&[once_punctured_disc(3), once_punctured_disc(4)], 4))),
        (
            "dn/pop-wall",
            Box::new(move || {
                let q = egg_differential();
                let cfg = s.trace();
                let scan = saddle_phase_scan(&q, &cfg, &s.scan()).map_err(err)?;
                let pop = scan.walls.iter().find(|w| w.kind == WallKind::Pop).ok_or("no pop wall")?;
                let x = wall_cross_check(&q, pop.theta, s.wall_offset, &cfg).map_err(err)?;
                ensure(x.kind == WallKind::Pop && x.verified(1e-6), format!("residual {:.3e}", x.residual))?;
                Ok(format!("pop at theta = {:.8}", pop.theta))
            }),
        ),
        (
            "dn/double-pole-residue",
            Box::new(|| {
                let q = egg_differential();
                let r = q.residue(PoleId::Finite(0)).map_err(err)?;
                let want = C::new(0.0, 4.0 * PI) * C::new(0.3, 0.1).sqrt();
                ensure(same_up_to_sign(r, want, 1e-10), format!("{r} vs {want}"))?;
                Ok(format!("{r:.8}"))
            }),
        ),
    ]
}

fn kronecker_checks(s: &Settings) -> Checks<'_> {
    vec![
        (
            "kronecker/quiver",
            Box::new(|| {
                let t = annulus(1, 1);
                let q = quiver(&t);
                ensure(q.n() == 2 && q.matrix.get(0, 1).abs() == 2, format!("{:?}", q.matrix))?;
                let other = t.flip(0).map_err(err)?;
                ensure(mcg_equivalent(&t, &other).map_err(err)?, "the two triangulations are not equivalent")?;
                Ok("double arrow".into())
            }),
        ),
        (
            "kronecker/spectrum-examples",
            Box::new(|| {
                let z = Charge::from_pairs(&[(-1.0, 1.0), (1.0, 1.0)]).map_err(err)?;
                let s = kronecker_spectrum(&z, 5).map_err(err)?;
                ensure(s.entries.len() == 7 && s.get(&[1, 1]).map(|e| e.family_dim) == Some(1), format!("{:?}", s.classes()))?;
                let w = Charge::from_pairs(&[(1.0, 1.0), (-1.0, 1.0)]).map_err(err)?;
                ensure(kronecker_spectrum(&w, 5).map_err(err)?.entries.len() == 2, "opposite side has more than the simples")?;
                Ok("ratio i and -i".into())
            }),
        ),
        (
            "kronecker/stability-oracle",
            Box::new(|| {
                for vals in [[(-1.0, 1.0), (1.0, 1.0)], [(1.0, 1.0), (-1.0, 1.0)]] {
                    let z = Charge::from_pairs(&vals).map_err(err)?;
                    let spectrum = kronecker_spectrum(&z, 4).map_err(err)?;
                    oracle_check(&RepQuiver::kronecker(), &z, &spectrum, 4, |_| true)?;
                }
                Ok("total dimension <= 4".into())
            }),
        ),
        (
            "kronecker/ring-side-accumulation",
            Box::new(move || {
                let q = annulus_differential(3.0);
                let scan = saddle_phase_scan(&q, &s.trace(), &s.scan()).map_err(err)?;
                let acc = scan.accumulations.first().ok_or("no accumulation")?;
                ensure(acc.walls_below >= 5 && acc.walls_above >= 5, format!("{acc:?}"))?;
                let limit = acc.limit.ok_or("no limit phase")?;
                ensure(circular_gap(limit, 0.5) < 1e-6, format!("limit {limit}"))?;
                let inv = finite_trajectories(&q.with_theta(limit), &s.trace()).map_err(err)?;
                ensure(inv.non_degenerate_rings() == 1, "no ring domain at the limit")?;
                Ok(format!("{} + {} walls, ring at {limit:.8}", acc.walls_below, acc.walls_above))
            }),
        ),
        (
            "kronecker/other-side-two-walls",
            Box::new(move || {
                let scan = saddle_phase_scan(&annulus_differential(1.0), &s.trace(), &s.scan()).map_err(err)?;
                ensure(scan.walls.len() == 2 && scan.accumulations.is_empty(), format!("{} walls", scan.walls.len()))?;
                Ok("2 walls".into())
            }),
        ),
        (
            "kronecker/flip-transport",
            Box::new(move || {
                let q = annulus_differential(3.0);
                let x = wall_cross_check(&q, 0.0, s.wall_offset, &s.trace()).map_err(err)?;
                ensure(x.kind == WallKind::Flip && x.verified(1e-6), format!("residual {:.3e}", x.residual))?;
                let before = x.before.triangulation();
                let e = before.arc_index(&x.site).ok_or("site")?;
                ensure(x.transport == flip_lattice_map(before, e, FlipSign::Plus).map_err(err)?, "transport is not F+")?;
                Ok(format!("residual {:.2e}", x.residual))
            }),
        ),
        (
            "kronecker/saddle-vs-stable",
            Box::new(move || {
                for b in [3.0, 1.0] {
                    let r = saddle_vs_stable(ExampleFamily::Kronecker, &annulus_differential(b), 0.5, &s.trace()).map_err(err)?;
                    ensure(r.agree(), r.lines().join("; "))?;
                }
                Ok("ring side and other side".into())
            }),
        ),
    ]
}

fn sphere3_checks(s: &Settings) -> Checks<'_> {
    vec![
        (
            "sphere3/triangulation",
            Box::new(|| {
                let t = three_punctured_sphere();
                ensure(t.n() == 3, format!("{} arcs", t.n()))?;
                let q = quiver(&t);
                ensure(q.matrix.0.iter().flatten().all(|&x| x == 0), "reduced quiver is not empty")?;
                ensure(potential(&SignedTriangulation::all_plus(t)).is_err(), "valency-two punctures accepted")?;
                Ok("3 arcs, valency 2".into())
            }),
        ),
        (
            "sphere3/residues",
            Box::new(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(2));
                let mut done = 0;
                while done < 5 {
                    let mut draw = || C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                    let (a, b, c) = (draw(), draw(), draw());
                    if (b * b - a * c * 4.0).norm() < 0.1 || c.norm() < 0.1 || (a + b + c).norm() < 0.1 || a.norm() < 0.1 {
                        continue;
                    }
                    let q = sphere3_differential(a, b, c);
                    let f = C::new(0.0, 4.0 * PI);
                    for (id, want) in [(PoleId::Finite(0), f * c.sqrt()), (PoleId::Finite(1), f * (a + b + c).sqrt()), (PoleId::Infinity, f * a.sqrt())] {
                        let r = q.residue(id).map_err(err)?;
                        ensure(same_up_to_sign(r, want, 1e-8), format!("{id:?}: {r} vs {want}"))?;
                    }
                    done += 1;
                }
                Ok("5 random (a, b, c)".into())
            }),
        ),
        (
            "sphere3/jacobi-indecomposables",
            Box::new(|| {
                let found = jacobi_indecomposables_3punct([1, 1, 1], 2);
                ensure(found.len() == 4, format!("{} indecomposables", found.len()))?;
                let top = found.iter().find(|f| f.class == [1, 1, 1]).ok_or("no (1,1,1) indecomposable")?;
                ensure(top.loop_is_identity, "abc is not the identity")?;
                Ok("4 simples".into())
            }),
        ),
    ]
}

/// Runs every check of the suite in order.
pub fn run_suite(suite: Suite, s: &Settings) -> Vec<CheckResult> {
    let checks = match suite {
        Suite::An => an_checks(s),
        Suite::Dn => dn_checks(s),
        Suite::Kronecker => kronecker_checks(s),
        Suite::Sphere3 => sphere3_checks(s),
    };
    checks
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(_) => (false, "panicked".into()),
            };
            CheckResult { name: name.into(), passed, detail }
        })
        .collect()
}
