//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness and exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use differential_core::{
    finite_trajectories, residue_monodromy_demo, saddle_phase_scan, strip_decomposition, wall_cross_check, Config, DiffError,
    Differential, LoopKind, PoleId, ScanSettings, WallKind,
};
use num_complex::Complex64 as C;
use quiver_core::{edge_lattice, flip_lattice_map, flip_lattice_map_curly, mutate, quiver, FlipSign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stability_core::{
    a_n_spectrum, affine_a2_spectrum, find_stable, king_stable, kronecker_spectrum, saddle_vs_stable, stable_class_count, Charge,
    Direction, ExampleFamily, RepQuiver, Spectrum, Verdict,
};
use surface_core::{annulus, bfs_tagged, flip_corpus, once_punctured_disc, polygon, IdealTriangulation, SignedTriangulation};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn within(start: Instant, limit: f64) -> Result<(), String> {
    let t = start.elapsed().as_secs_f64();
    ensure(t < limit, format!("took {t:.1} s, limit {limit} s"))
}

fn same_up_to_sign(a: C, b: C, tol: f64) -> bool {
    (a - b).norm().min((a + b).norm()) <= tol * (1.0 + b.norm())
}

fn circular_gap(a: f64, b: f64) -> f64 {
    ((a - b + 0.5).rem_euclid(1.0) - 0.5).abs()
}

fn poly_from_roots(roots: &[C], lead: C) -> Vec<(f64, f64)> {
    let mut p = vec![lead];
    for r in roots {
        let mut next = vec![C::new(0.0, 0.0); p.len() + 1];
        for (i, a) in p.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * r;
        }
        p = next;
    }
    p.iter().map(|c| (c.re, c.im)).collect()
}

fn annulus_differential(b: f64) -> Differential {
    Differential::from_coeffs(&[(1.0, 0.0), (b, 0.0), (1.0, 0.0)], &[((0.0, 0.0), 3)], 0.0).unwrap()
}

fn egg() -> Differential {
    Differential::from_coeffs(&[(0.3, 0.1), (2.0, 0.0), (1.0, 0.0)], &[((0.0, 0.0), 2)], 0.0).unwrap()
}

fn period_closed_form() -> Outcome {
    let start = Instant::now();
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let c = C::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0 * PI));
        let q = Differential::from_coeffs(&[(c.re, c.im), (0.0, 0.0), (1.0, 0.0)], &[], 0.0).map_err(fail)?;
        // Phase 0 unless pi i c is nearly real, where the foliation has a saddle.
        let theta = (0..40)
            .map(|k| if k == 0 { 0.0 } else { 0.013 + k as f64 * 0.0247 })
            .find(|&t| strip_decomposition(&q.with_theta(t), &cfg).is_ok())
            .ok_or("no saddle-free phase")?;
        let dec = strip_decomposition(&q.with_theta(theta), &cfg).map_err(fail)?;
        ensure(dec.strips.len() == 1, format!("{} strips", dec.strips.len()))?;
        let raw = C::new(0.0, PI) * c;
        let expected = if (raw * C::from_polar(1.0, -PI * theta)).im > 0.0 { raw } else { -raw };
        let err = (dec.strips[0].period - expected).norm();
        ensure(err <= 1e-8, format!("c = {c}: error {err:.2e}"))?;
        worst = worst.max(err);
    }
    within(start, 10.0)?;
    Ok(format!("10 values of c, max error {worst:.1e}"))
}

fn residues() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut done = 0;
    let mut worst = 0.0f64;
    while done < 10 {
        let mut draw = || C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (a, b, c) = (draw(), draw(), draw());
        if (b * b - a * c * 4.0).norm() < 0.1 || c.norm() < 0.1 || (a + b + c).norm() < 0.1 || a.norm() < 0.1 {
            continue;
        }
        let q = Differential::from_coeffs(&[(c.re, c.im), (b.re, b.im), (a.re, a.im)], &[((0.0, 0.0), 2), ((1.0, 0.0), 2)], 0.0)
            .map_err(fail)?;
        let four_pi_i = C::new(0.0, 4.0 * PI);
        let expected = [four_pi_i * c.sqrt(), four_pi_i * (a + b + c).sqrt(), four_pi_i * a.sqrt()];
        for (id, e) in [PoleId::Finite(0), PoleId::Finite(1), PoleId::Infinity].into_iter().zip(expected) {
            let r = q.residue(id).map_err(fail)?;
            ensure(same_up_to_sign(r, e, 1e-8), format!("{id:?}: {r} vs {e}"))?;
            worst = worst.max((r - e).norm().min((r + e).norm()));
        }
        done += 1;
    }
    Ok(format!("10 triples, max error {worst:.1e}"))
}

fn strip_count() -> Outcome {
    let start = Instant::now();
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut checked = 0;
    for (poles, deg) in [
        (vec![], 3usize),
        (vec![], 4),
        (vec![((0.0, 0.0), 2u32)], 2),
        (vec![((0.0, 0.0), 3)], 2),
        (vec![((0.0, 0.0), 2), ((1.0, 0.0), 2)], 2),
    ] {
        let mut per_type = 0;
        let mut attempts = 0;
        while per_type < 4 {
            attempts += 1;
            ensure(attempts < 200, "too few saddle-free samples")?;
            let roots: Vec<C> = (0..deg).map(|_| C::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))).collect();
            let separated = roots.iter().enumerate().all(|(i, a)| {
                roots[i + 1..].iter().all(|b| (a - b).norm() > 0.3)
                    && poles.iter().all(|((x, y), _)| (a - C::new(*x, *y)).norm() > 0.3)
            });
            if !separated {
                continue;
            }
            let lead = C::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
            let Ok(q) = Differential::from_coeffs(&poly_from_roots(&roots, lead), &poles, rng.gen_range(0.0..1.0)) else {
                continue;
            };
            let dec = match strip_decomposition(&q, &cfg) {
                Ok(d) => d,
                Err(DiffError::NotSaddleFree(_)) | Err(DiffError::Inconclusive(_)) => continue,
                Err(e) => return Err(e.to_string()),
            };
            let mut orders: Vec<i64> = q.poles.iter().map(|p| p.order as i64).collect();
            orders.push(q.infinity_order());
            let n = (orders.iter().map(|m| m + 1).sum::<i64>() - 6) as usize;
            ensure(dec.strips.len() == n, format!("orders {orders:?}: {} strips, n = {n}", dec.strips.len()))?;
            per_type += 1;
            checked += 1;
        }
    }
    within(start, 120.0)?;
    Ok(format!("{checked} differentials over 5 polar types"))
}

fn flip_seeds() -> Vec<IdealTriangulation> {
    let mut v = vec![polygon(5), polygon(6), annulus(1, 1), annulus(2, 1)];
    v.extend((1..=6).map(once_punctured_disc));
    v
}

fn flip_corpus_all() -> Vec<IdealTriangulation> {
    flip_seeds().iter().flat_map(|s| flip_corpus(s, 6)).collect()
}

fn flip_mutation() -> Outcome {
    let mut flips = 0;
    let corpus = flip_corpus_all();
    for t in &corpus {
        let q = quiver(t);
        for e in (0..t.n()).filter(|&e| !t.is_self_folded_edge(e)) {
            let lhs = quiver(&t.flip(e).map_err(fail)?);
            ensure(lhs == mutate(&q, e).map_err(fail)?, format!("flip of {} differs from mutation", t.arc_label(e)))?;
            flips += 1;
        }
    }
    Ok(format!("{} triangulations, {flips} flips", corpus.len()))
}

fn lattice_transport() -> Outcome {
    let mut flips = 0;
    for t in &flip_corpus_all() {
        let l1 = edge_lattice(t);
        let p1inv = l1.change_of_basis.inverse_unimodular().ok_or("basis change not unimodular")?;
        for e in (0..t.n()).filter(|&e| !t.is_self_folded_edge(e)) {
            let t2 = t.flip(e).map_err(fail)?;
            let l2 = edge_lattice(&t2);
            for sign in [FlipSign::Plus, FlipSign::Minus] {
                let m = flip_lattice_map(t, e, sign).map_err(fail)?;
                ensure(m.is_isometry(&l1, &l2), "not an isometry")?;
                ensure(m.det().abs() == 1, format!("det {}", m.det()))?;
                let curly = flip_lattice_map_curly(t, e, sign).map_err(fail)?;
                ensure(l2.change_of_basis.mul(&curly).mul(&p1inv) == m.matrix, "bases disagree")?;
            }
            flips += 1;
        }
    }
    Ok(format!("{flips} flips, both signs"))
}

fn catalan(m: usize) -> usize {
    let mut c = vec![1usize];
    for k in 0..m {
        c.push((0..=k).map(|i| c[i] * c[k - i]).sum());
    }
    c[m]
}

fn tagged_counts() -> Outcome {
    let mut counts = Vec::new();
    for n in 0..=5usize {
        let (nodes, adj) = bfs_tagged(&SignedTriangulation::all_plus(polygon(n + 3)), 100_000);
        ensure(nodes.len() == catalan(n + 1), format!("n = {n}: {} nodes", nodes.len()))?;
        for (i, nb) in adj.iter().enumerate() {
            let mut d = nb.clone();
            d.sort();
            d.dedup();
            ensure(nb.len() == n && d.len() == n && !nb.contains(&i), format!("n = {n}: node {i} has degree {}", d.len()))?;
        }
        counts.push(nodes.len().to_string());
    }
    Ok(format!("counts {}", counts.join(", ")))
}

fn wall_crossing() -> Outcome {
    let cfg = Config::default();
    let q = annulus_differential(3.0);
    let scan = saddle_phase_scan(&q, &cfg, &ScanSettings::with_grid(8)).map_err(fail)?;
    let w = scan.walls.iter().find(|w| w.kind == WallKind::Flip).ok_or("no flip wall")?;
    let x = wall_cross_check(&q, w.theta, 1e-7, &cfg).map_err(fail)?;
    ensure(x.kind == WallKind::Flip, "flip wall read as pop")?;
    ensure(x.verified(1e-6), format!("flip residual {:.2e}", x.residual))?;
    let before = x.before.triangulation();
    let e = before.arc_index(&x.site).ok_or("flipped arc missing")?;
    ensure(before.flip(e).map_err(fail)?.labelled_key() == x.after.triangulation().labelled_key(), "sides not related by a flip")?;
    let plus = flip_lattice_map(before, e, FlipSign::Plus).map_err(fail)?;
    ensure(plus.matrix == x.transport.matrix, "transport differs from F_+")?;
    let flip_residual = x.residual;

    let q = egg();
    let scan = saddle_phase_scan(&q, &cfg, &ScanSettings::with_grid(8)).map_err(fail)?;
    let pop = scan.walls.iter().find(|w| w.kind == WallKind::Pop).ok_or("no pop wall")?;
    let res = q.residue(PoleId::Finite(0)).map_err(fail)?;
    ensure((res * C::from_polar(1.0, -PI * pop.theta)).im.abs() < 1e-6 * res.norm(), "residue not on the wall ray")?;
    let x = wall_cross_check(&q, pop.theta, 1e-7, &cfg).map_err(fail)?;
    ensure(x.kind == WallKind::Pop, "pop wall read as flip")?;
    ensure(x.verified(1e-6), format!("pop residual {:.2e}", x.residual))?;
    ensure(x.before.signed.signs() != x.after.signed.signs(), "signs unchanged")?;
    let t = x.before.triangulation();
    let l = edge_lattice(t);
    let curly = l.change_of_basis.inverse_unimodular().ok_or("basis change")?.mul(&x.transport.matrix).mul(&l.change_of_basis);
    let sf = t.self_folded();
    ensure(sf.len() == 1, format!("{} self-folded triangles", sf.len()))?;
    let (a, b) = (sf[0].encircling, sf[0].folded);
    for g in 0..t.n() {
        let want = if g == a {
            b
        } else if g == b {
            a
        } else {
            g
        };
        let col: Vec<i64> = (0..t.n()).map(|r| curly.get(r, g)).collect();
        ensure(col == (0..t.n()).map(|r| (r == want) as i64).collect::<Vec<_>>(), "pop does not swap the pair")?;
    }
    Ok(format!("flip residual {flip_residual:.1e}, pop residual {:.1e} at {:.8}", x.residual, pop.theta))
}

fn juggle() -> Outcome {
    let cfg = Config::default();
    let ring = annulus_differential(3.0);
    let scan = saddle_phase_scan(&ring, &cfg, &ScanSettings::with_grid(8)).map_err(fail)?;
    let acc = scan.accumulations.first().ok_or("no accumulation")?;
    ensure(acc.walls_below >= 5 && acc.walls_above >= 5, format!("{} + {} walls", acc.walls_below, acc.walls_above))?;
    let limit = acc.limit.ok_or("no limit phase")?;
    ensure(circular_gap(limit, 0.5) < 1e-6, format!("limit {limit}"))?;
    let inv = finite_trajectories(&ring.with_theta(limit), &cfg).map_err(fail)?;
    ensure(inv.non_degenerate_rings() == 1, format!("{} rings", inv.non_degenerate_rings()))?;

    let other = annulus_differential(1.0);
    let scan2 = saddle_phase_scan(&other, &cfg, &ScanSettings::with_grid(8)).map_err(fail)?;
    ensure(scan2.accumulations.is_empty(), "accumulation on the other side")?;
    ensure(scan2.walls.len() == 2, format!("{} walls on the other side", scan2.walls.len()))?;
    let mut classes: Vec<C> = Vec::new();
    for w in &scan2.walls {
        let inv = finite_trajectories(&other.with_theta(w.theta), &cfg).map_err(fail)?;
        ensure(inv.non_closed_saddles() == 1 && inv.rings.is_empty(), "unexpected trajectories")?;
        for s in &inv.saddles {
            if !classes.iter().any(|c| same_up_to_sign(*c, s.period, 1e-6)) {
                classes.push(s.period);
            }
        }
    }
    ensure(classes.len() == 2, format!("{} saddle classes", classes.len()))?;
    Ok(format!(
        "ring side {} walls ({} + {} accumulating at {limit:.8}), other side 2 walls and 2 classes",
        scan.walls.len(),
        acc.walls_below,
        acc.walls_above
    ))
}

fn classes_up_to(n: usize, total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut d = vec![0usize; n];
    loop {
        let s: usize = d.iter().sum();
        if s > 0 && s <= total {
            out.push(d.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
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

fn exhaustive(q: &RepQuiver, z: &Charge, s: &Spectrum, keep: impl Fn(&[usize]) -> bool) -> Result<usize, String> {
    let mut n = 0;
    for d in classes_up_to(q.vertices, 4).into_iter().filter(|d| keep(d)) {
        let class: Vec<i64> = d.iter().map(|&x| x as i64).collect();
        for p in [2u8, 3] {
            let count = stable_class_count(q, &d, z, p).map_err(fail)?;
            let ok = match s.get(&class).map(|e| e.family_dim) {
                Some(0) => count == 1,
                Some(_) => count == p as u64 || count == p as u64 + 1,
                None => count == 0,
            };
            ensure(ok, format!("{d:?} over F_{p}: {count} stable classes"))?;
        }
        n += 1;
    }
    Ok(n)
}

fn spot_check(q: &RepQuiver, z: &Charge, s: &Spectrum) -> Result<usize, String> {
    let mut n = 0;
    for class in s.classes().into_iter().filter(|c| c.iter().sum::<i64>() == 5) {
        let d: Vec<usize> = class.iter().map(|&x| x as usize).collect();
        for p in [2u8, 3] {
            let rep = find_stable(q, &d, z, p).map_err(fail)?.ok_or(format!("no stable rep in {d:?} over F_{p}"))?;
            ensure(king_stable(&rep, z).map_err(fail)? == Verdict::Stable, "found rep not stable")?;
        }
        n += 1;
    }
    Ok(n)
}

fn oracle() -> Outcome {
    let start = Instant::now();
    let mut classes = 0;
    let mut spots = 0;
    let kq = RepQuiver::kronecker();
    for vals in [[(-1.0, 1.0), (1.0, 1.0)], [(1.0, 1.0), (-1.0, 1.0)], [(-3.0, 0.5), (0.2, 2.0)]] {
        let z = Charge::from_pairs(&vals).map_err(fail)?;
        let s = kronecker_spectrum(&z, 5).map_err(fail)?;
        classes += exhaustive(&kq, &z, &s, |_| true)?;
        spots += spot_check(&kq, &z, &s)?;
    }
    let aq = RepQuiver::affine_a2();
    for vals in [[(-1.0, 1.0), (1.0, 1.0), (0.0, 2.0)], [(-0.5, 2.0), (0.5, 1.0), (0.0, 0.25)]] {
        let z = Charge::from_pairs(&vals).map_err(fail)?;
        let s = affine_a2_spectrum(&z).map_err(fail)?;
        classes += exhaustive(&aq, &z, &s.imaginary, |d| d[0] == d[1])?;
        classes += exhaustive(&aq, &z, &s.simples, |d| d.iter().sum::<usize>() == 1)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for n in 1..=5usize {
        let orientation: Vec<Direction> =
            (0..n - 1).map(|_| if rng.gen_bool(0.5) { Direction::Right } else { Direction::Left }).collect();
        let vals: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let phi: f64 = rng.gen_range(0.02..0.98);
                let r: f64 = rng.gen_range(0.5..3.0);
                (r * (PI * phi).cos(), r * (PI * phi).sin())
            })
            .collect();
        let z = Charge::from_pairs(&vals).map_err(fail)?;
        let s = a_n_spectrum(&orientation, &z, 6).map_err(fail)?;
        let q = RepQuiver::linear(&orientation);
        if n <= 4 {
            classes += exhaustive(&q, &z, &s, |_| true)?;
        }
        spots += spot_check(&q, &z, &s)?;
    }
    within(start, 300.0)?;
    Ok(format!("{classes} classes exhaustive, {spots} total-5 classes spot-checked"))
}

fn bijection() -> Outcome {
    let cfg = Config::default();
    let quad = Differential::from_coeffs(&[(0.0, 1.0), (0.0, 0.0), (1.0, 0.0)], &[], 0.0).map_err(fail)?;
    let (p, q, r) = (0.3f64, -3.0 / 11.0, 3.0);
    let affine = Differential::from_coeffs(
        &[(p * q * r, 0.0), (p * q + p * r + q * r, 0.0), (p + q + r, 0.0), (1.0, 0.0)],
        &[((0.0, 0.0), 4)],
        0.0,
    )
    .map_err(fail)?;
    let cases = [
        ("A1", ExampleFamily::A1, quad, 0.0),
        ("Kronecker ring side", ExampleFamily::Kronecker, annulus_differential(3.0), 0.5),
        ("Kronecker other side", ExampleFamily::Kronecker, annulus_differential(1.0), 0.0),
        ("Kronecker other side", ExampleFamily::Kronecker, annulus_differential(1.0), 0.5),
        ("affine A2", ExampleFamily::AffineA2, affine, 0.5),
    ];
    let mut parts = Vec::new();
    for (name, family, diff, theta) in cases {
        let c = saddle_vs_stable(family, &diff, theta, &cfg).map_err(fail)?;
        let saddles = c.non_closed_saddles;
        let rings = c.non_degenerate_rings + c.degenerate_rings;
        ensure(c.counts_agree(), format!("{name}: ({saddles}, {rings}) vs ({}, {})", c.rigid.len(), c.families.len()))?;
        ensure(saddles + rings > 0, format!("{name}: nothing at phase {theta}"))?;
        parts.push(format!("{name} ({saddles},{rings})"));
    }
    Ok(parts.join(", "))
}

fn jacobi() -> Outcome {
    let start = Instant::now();
    let found = stability_core::jacobi_indecomposables_3punct([1, 1, 1], 2);
    within(start, 5.0)?;
    let mut classes: Vec<Vec<usize>> = found.iter().map(|f| f.class.clone()).collect();
    classes.sort();
    ensure(
        classes == vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 1]],
        format!("found {classes:?}"),
    )?;
    Ok(format!("4 indecomposables in {:.2} s", start.elapsed().as_secs_f64()))
}

fn monodromy() -> Outcome {
    let t = residue_monodromy_demo::<f64>();
    let single = t.loops.iter().find(|l| l.kind == LoopKind::Single).ok_or("no single loop")?;
    let double = t.loops.iter().find(|l| l.kind == LoopKind::Double).ok_or("no double loop")?;
    ensure(single.residue_flipped(1e-9), "single loop keeps the residue")?;
    ensure(double.residue_restored(1e-9), "double loop changes the residue")?;
    ensure(double.period_restored(1e-8), "double loop changes the saddle period")?;
    Ok(format!("single: Res -> -Res, double: identity, period shift {:.6} residues", single.shift_in_residues.norm()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("period closed form", period_closed_form),
        ("residues", residues),
        ("strip count", strip_count),
        ("flip is mutation", flip_mutation),
        ("lattice transport", lattice_transport),
        ("tagged counts and regularity", tagged_counts),
        ("wall crossing", wall_crossing),
        ("juggle asymmetry", juggle),
        ("stability oracle", oracle),
        ("saddles and stables", bijection),
        ("jacobi indecomposables", jacobi),
        ("residue monodromy", monodromy),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
