//! Subcommand bodies. Each writes its report into a string so the binary and
//! the tests share them.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use differential_core::{
    finite_trajectories, is_saddle_free, saddle_phase_scan, standard_periods, strip_decomposition, trace_rays,
    wall_cross_check, DiffError, Differential, FiniteCritKind, PoleId, WallKind,
};
use num_complex::Complex64 as C;
use quiver_core::{edge_lattice, flip_lattice_map, mutate, quiver, FlipSign, IntMatrix, Quiver};
use stability_core::{
    a_n_spectrum, affine_a2_spectrum, kronecker_spectrum, saddle_vs_stable, Charge, Direction, ExampleFamily, Spectrum,
};
use surface_core::{SignedTriangulation, TriangulationFile};

use crate::config::Settings;
use crate::exit::{InconclusiveError, UsageError};
use crate::svg::{Marker, Picture, Stroke};

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())).into())
}

/// Line of the `k`-th entry of the JSON array under `key`, counting from 1.
fn entry_line(text: &str, key: &str, k: usize) -> Option<usize> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines.iter().position(|l| l.contains(&format!("\"{key}\"")))?;
    let first = &lines[start];
    // Entries written on the key's own line are not separated.
    if first.matches('[').count() > 1 {
        return Some(start + 1);
    }
    lines[start + 1..].iter().enumerate().filter(|(_, l)| l.trim_start().starts_with('[')).nth(k).map(|(i, _)| start + 2 + i)
}

fn with_line_context(text: &str, msg: String) -> String {
    for (key, what) in [("triangles", "triangle "), ("corners", "corner triple ")] {
        if let Some(rest) = msg.split(what).nth(1) {
            if let Some(k) = rest.split_whitespace().next().and_then(|w| w.parse::<usize>().ok()) {
                if let Some(line) = entry_line(text, key, k) {
                    return format!("{msg} (line {line})");
                }
            }
        }
    }
    msg
}

pub fn parse_triangulation(text: &str) -> Result<SignedTriangulation> {
    let file = TriangulationFile::from_json(text).map_err(|e| UsageError(e.to_string()))?;
    file.signed().map_err(|e| UsageError(with_line_context(text, e.to_string())).into())
}

pub fn load_triangulation(path: &Path) -> Result<SignedTriangulation> {
    parse_triangulation(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn load_differential(path: &Path) -> Result<Differential> {
    let text = read_text(path)?;
    Differential::from_json(&text).with_context(|| format!("in {}", path.display()))
}

/// A quiver file, or a triangulation file whose quiver is taken.
pub fn load_quiver(path: &Path) -> Result<Quiver> {
    let text = read_text(path)?;
    if let Ok(q) = Quiver::from_json(&text) {
        return Ok(q);
    }
    let st = parse_triangulation(&text).with_context(|| format!("{} is neither a quiver nor a triangulation", path.display()))?;
    Ok(quiver(&st.triangulation))
}

fn matrix_rows(out: &mut String, m: &IntMatrix) {
    for row in &m.0 {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

fn fmt_c(z: C) -> String {
    format!("{:.10} {:+.10}i", z.re, z.im)
}

pub fn cmd_quiver(path: &Path, json: bool) -> Result<String> {
    let st = load_triangulation(path)?;
    let t = &st.triangulation;
    let q = quiver(t);
    if json {
        return Ok(q.to_json() + "\n");
    }
    let l = edge_lattice(t);
    let mut out = String::new();
    let _ = writeln!(out, "arcs: {}", t.arcs().join(" "));
    let _ = writeln!(out, "exchange matrix (row i, column j: arrows i -> j minus arrows j -> i):");
    matrix_rows(&mut out, &q.matrix);
    let _ = writeln!(out, "skew form <[e],[f]>:");
    matrix_rows(&mut out, &l.skew);
    let kappa: Vec<String> = l.kappa.iter().enumerate().map(|(i, &k)| format!("{}->{}", t.arc_label(i), t.arc_label(k))).collect();
    let _ = writeln!(out, "kappa: {}", kappa.join(" "));
    let folded = t.self_folded();
    if folded.is_empty() {
        let _ = writeln!(out, "self-folded: none");
    }
    for s in folded {
        let _ = writeln!(
            out,
            "self-folded: loop {} around folded {} at puncture {}",
            t.arc_label(s.encircling),
            t.arc_label(s.folded),
            t.vertices()[s.puncture]
        );
    }
    Ok(out)
}

pub fn cmd_flip(path: &Path, arc: &str, out_path: Option<&Path>) -> Result<String> {
    let st = load_triangulation(path)?;
    let t = &st.triangulation;
    let e = t.arc_index(arc).ok_or_else(|| UsageError(format!("no arc labelled {arc}")))?;
    let flipped = t.flip(e)?;
    let signed = SignedTriangulation::new(flipped.clone(), &st.signs_by_label())?;
    let json = TriangulationFile::from_signed(&signed).to_json();
    let Some(p) = out_path else {
        return Ok(json + "\n");
    };
    std::fs::write(p, json + "\n").map_err(|err| UsageError(format!("cannot write {}: {err}", p.display())))?;
    let mut out = String::new();
    let _ = writeln!(out, "flipped {arc}, wrote {}", p.display());
    for (name, sign) in [("F+", FlipSign::Plus), ("F-", FlipSign::Minus)] {
        let _ = writeln!(out, "{name} (column f is the image of [f]):");
        matrix_rows(&mut out, &flip_lattice_map(t, e, sign)?.matrix);
    }
    Ok(out)
}

pub fn cmd_mutate(path: &Path, vertex: &str) -> Result<String> {
    let q = load_quiver(path)?;
    let k = q
        .vertices
        .iter()
        .position(|v| v == vertex)
        .or_else(|| vertex.parse::<usize>().ok().filter(|&k| k < q.n()))
        .ok_or_else(|| UsageError(format!("no vertex {vertex}")))?;
    Ok(mutate(&q, k)?.to_json() + "\n")
}

fn inconclusive(e: DiffError) -> anyhow::Error {
    match e {
        DiffError::Inconclusive(i) => InconclusiveError(format!("inconclusive numerics: {i}")).into(),
        other => other.into(),
    }
}

fn at_phase(q: Differential, theta: Option<f64>) -> Differential {
    match theta {
        Some(t) => q.with_theta(t),
        None => q,
    }
}

fn critical_summary(out: &mut String, q: &Differential) -> Result<()> {
    let rep = q.critical_points()?;
    let zeros: Vec<String> = rep.finite_critical.iter().filter(|c| c.kind == FiniteCritKind::Zero).map(|c| fmt_c(c.z)).collect();
    let _ = writeln!(out, "zeros ({}): {}", zeros.len(), zeros.join(", "));
    for p in &rep.poles {
        let _ = writeln!(out, "pole at {} of order {}", fmt_c(p.z), p.order);
    }
    let _ = writeln!(out, "order at infinity: {}", rep.infinity_order);
    let _ = writeln!(out, "n = {}", rep.hat_rank);
    for (id, order) in q.big_poles() {
        if order == 2 {
            let _ = writeln!(out, "residue at pole {}: {}", id.label(), fmt_c(q.residue(id)?));
        }
    }
    Ok(())
}

pub fn cmd_analyze(path: &Path, theta: Option<f64>, plot: Option<&Path>, s: &Settings) -> Result<String> {
    let q = at_phase(load_differential(path)?, theta);
    let cfg = s.trace();
    let mut out = String::new();
    let _ = writeln!(out, "theta = {}", q.theta);
    critical_summary(&mut out, &q)?;
    let report = is_saddle_free(&q, &cfg).map_err(inconclusive)?;
    if report.saddle_free {
        let dec = strip_decomposition(&q, &cfg).map_err(inconclusive)?;
        let wkb = differential_core::wkb_triangulation(&q, &dec)?;
        if report.min_distance.is_finite() {
            let _ = writeln!(out, "saddle-free: yes (closest approach to a zero {:.3e})", report.min_distance);
        } else {
            let _ = writeln!(out, "saddle-free: yes (no ray passes near a zero)");
        }
        let _ = writeln!(out, "strips: {}, half-planes: {}", dec.strips.len(), dec.half_planes.len());
        let t = wkb.triangulation();
        let _ = writeln!(out, "WKB triangulation arcs: {}", t.arcs().join(" "));
        for (name, sides) in t.describe() {
            let _ = writeln!(out, "  {name}: {}", sides.join(" "));
        }
        for (label, sign) in wkb.signed.signs_by_label() {
            let _ = writeln!(out, "  sign at {label}: {sign:+}");
        }
        let _ = writeln!(out, "standard periods:");
        for (label, z) in standard_periods(&dec, &wkb) {
            let _ = writeln!(out, "  {label}: {}", fmt_c(z));
        }
    } else {
        let inv = finite_trajectories(&q, &cfg).map_err(inconclusive)?;
        let _ = writeln!(out, "saddle-free: no, saddle trajectories at theta = {}", q.theta);
        for sd in &inv.saddles {
            let _ = writeln!(
                out,
                "  saddle {:?} -> {:?}{}, period {}",
                sd.ends[0],
                sd.ends[1],
                if sd.closed { " (closed)" } else { "" },
                fmt_c(sd.period)
            );
        }
        for r in &inv.rings {
            let _ = writeln!(out, "  ring domain{}, period {}", if r.degenerate { " (degenerate)" } else { "" }, fmt_c(r.period));
        }
    }
    if let Some(p) = plot {
        write_plot(&q, s, p)?;
        let _ = writeln!(out, "plot written to {}", p.display());
    }
    Ok(out)
}

/// Separatrices solid, one generic trajectory per strip dashed, zeros as open
/// dots and poles as filled dots.
pub fn picture(q: &Differential, s: &Settings) -> Result<Picture> {
    let cfg = s.trace();
    let rep = q.critical_points()?;
    let mut points: Vec<C> = rep.finite_critical.iter().map(|c| c.z).collect();
    points.extend(rep.poles.iter().map(|p| p.z));
    let mut pic = Picture::around(&points);
    match strip_decomposition(q, &cfg) {
        Ok(dec) => {
            for r in &dec.separatrices.rays {
                pic.line(&r.samples, Stroke::Solid);
            }
            for st in &dec.strips {
                pic.line(&st.generic, Stroke::Dashed);
            }
        }
        Err(DiffError::NotSaddleFree(_)) | Err(DiffError::Inconclusive(_)) => {
            for r in &trace_rays(q, &cfg).map_err(inconclusive)?.rays {
                pic.line(&r.samples, Stroke::Solid);
            }
        }
        Err(e) => return Err(e.into()),
    }
    for c in &rep.finite_critical {
        let m = match c.kind {
            FiniteCritKind::Zero => Marker::Zero,
            FiniteCritKind::SimplePole => Marker::Pole,
        };
        pic.marker(c.z, m);
    }
    for p in &rep.poles {
        if p.order >= 2 {
            pic.marker(p.z, Marker::Pole);
        }
    }
    Ok(pic)
}

fn write_plot(q: &Differential, s: &Settings, path: &Path) -> Result<()> {
    let svg = picture(q, s)?.render();
    std::fs::write(path, svg).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())).into())
}

pub fn cmd_plot(path: &Path, theta: Option<f64>, out_path: &Path, s: &Settings) -> Result<String> {
    let q = at_phase(load_differential(path)?, theta);
    write_plot(&q, s, out_path)?;
    Ok(format!("plot written to {}\n", out_path.display()))
}

pub fn cmd_scan(path: &Path, s: &Settings) -> Result<String> {
    let q = load_differential(path)?;
    let scan = saddle_phase_scan(&q, &s.trace(), &s.scan()).map_err(inconclusive)?;
    let mut out = String::new();
    let _ = writeln!(out, "walls: {}", scan.walls.len());
    let _ = writeln!(out, "{:>14}  {:<4}  {:<8}  {:<5}  {:>14}  accumulating", "theta", "kind", "zeros", "pole", "|Z|");
    for w in &scan.walls {
        let kind = match w.kind {
            WallKind::Flip => "flip",
            WallKind::Pop => "pop",
        };
        let zeros: Vec<String> = w.zeros.iter().map(|z| z.to_string()).collect();
        let pole = w.pole.map(PoleId::label).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:>14.10}  {:<4}  {:<8}  {:<5}  {:>14.8}  {}",
            w.theta,
            kind,
            zeros.join(","),
            pole,
            w.period.norm(),
            if w.accumulating { "yes" } else { "no" }
        );
    }
    for a in &scan.accumulations {
        let limit = a.limit.map(|l| format!("{l:.10}")).unwrap_or_else(|| "unknown".into());
        let _ = writeln!(
            out,
            "accumulation: {} walls below, {} above, limit phase {limit}, unresolved ({:.10}, {:.10})",
            a.walls_below, a.walls_above, a.interval.0, a.interval.1
        );
    }
    Ok(out)
}

pub fn cmd_wallcheck(path: &Path, theta: f64, s: &Settings) -> Result<String> {
    let q = load_differential(path)?;
    let x = wall_cross_check(&q, theta, s.wall_offset, &s.trace()).map_err(inconclusive)?;
    let kind = match x.kind {
        WallKind::Flip => "flip",
        WallKind::Pop => "pop",
    };
    let mut out = String::new();
    let _ = writeln!(out, "wall at theta = {} ({kind} at {})", x.theta, x.site);
    let _ = writeln!(out, "before: arcs {}", x.before.triangulation().arcs().join(" "));
    let _ = writeln!(out, "after:  arcs {}", x.after.triangulation().arcs().join(" "));
    let _ = writeln!(out, "transport (column f is the image of [f] before the wall):");
    matrix_rows(&mut out, &x.transport.matrix);
    let _ = writeln!(out, "residual {:.3e}", x.residual);
    if !x.verified(1e-6) {
        bail!("{kind}, transport residual {:.3e} exceeds 1e-6", x.residual);
    }
    let _ = writeln!(out, "{kind}, transport verified");
    Ok(out)
}

pub fn cmd_periods(path: &Path, theta: Option<f64>, s: &Settings) -> Result<String> {
    let q = at_phase(load_differential(path)?, theta);
    let cfg = s.trace();
    let dec = strip_decomposition(&q, &cfg).map_err(inconclusive)?;
    let wkb = differential_core::wkb_triangulation(&q, &dec)?;
    let mut out = String::new();
    let _ = writeln!(out, "theta = {}", q.theta);
    for (label, z) in standard_periods(&dec, &wkb) {
        let _ = writeln!(out, "{label}: {}", fmt_c(z));
    }
    for (id, order) in q.big_poles() {
        if order == 2 {
            let _ = writeln!(out, "residue {}: {}", id.label(), fmt_c(q.residue(id)?));
        }
    }
    Ok(out)
}

/// Parses `re,im;re,im;...` (spaces may replace the semicolons).
pub fn parse_charge(text: &str) -> Result<Charge> {
    let mut values = Vec::new();
    for part in text.split(|c: char| c == ';' || c.is_whitespace()).filter(|p| !p.is_empty()) {
        let (re, im) = part.split_once(',').ok_or_else(|| UsageError(format!("charge entry {part} is not re,im")))?;
        let re: f64 = re.trim().parse().map_err(|_| UsageError(format!("bad real part {re}")))?;
        let im: f64 = im.trim().parse().map_err(|_| UsageError(format!("bad imaginary part {im}")))?;
        values.push((re, im));
    }
    Charge::from_pairs(&values).map_err(|e| UsageError(e.to_string()).into())
}

pub fn parse_orientation(text: &str) -> Result<Vec<Direction>> {
    text.chars()
        .map(|c| match c {
            'R' | 'r' => Ok(Direction::Right),
            'L' | 'l' => Ok(Direction::Left),
            other => Err(UsageError(format!("orientation letter {other} is not R or L")).into()),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumQuiver {
    Kronecker,
    AffineA2,
    An,
}

pub fn cmd_stables(kind: SpectrumQuiver, charge: &str, orientation: &str, bound: usize) -> Result<String> {
    let z = parse_charge(charge)?;
    let spectrum: Spectrum = match kind {
        SpectrumQuiver::Kronecker => kronecker_spectrum(&z, bound)?,
        SpectrumQuiver::AffineA2 => {
            let s = affine_a2_spectrum(&z)?;
            Spectrum { entries: s.imaginary.entries.into_iter().chain(s.simples.entries).collect() }
        }
        SpectrumQuiver::An => {
            let o = parse_orientation(orientation)?;
            if o.len() + 1 != z.rank() {
                return Err(UsageError(format!("orientation has {} letters for {} charges", o.len(), z.rank())).into());
            }
            a_n_spectrum(&o, &z, bound)?
        }
    };
    Ok(spectrum.to_json() + "\n")
}

pub fn cmd_compare(family: ExampleFamily, path: &Path, theta: Option<f64>, s: &Settings) -> Result<String> {
    let q = load_differential(path)?;
    let theta = theta.unwrap_or(q.theta);
    let report = saddle_vs_stable(family, &q, theta, &s.trace())?;
    let mut out = report.lines().join("\n");
    out.push('\n');
    if !report.counts_agree() {
        return Err(anyhow!("{out}counts disagree"));
    }
    Ok(out)
}
