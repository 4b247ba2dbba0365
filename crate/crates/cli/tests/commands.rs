use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_saddlescope"))
        .args(args)
        .env_remove("SADDLESCOPE_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    stdout(&o)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn quiver_of_pentagon_and_annulus() {
    let out = ok(&["quiver", path(&data("pentagon.json")), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let m = &v["matrix"];
    assert_eq!(m[0][1].as_i64().unwrap().abs(), 1);
    assert_eq!(m[0][1].as_i64().unwrap(), -m[1][0].as_i64().unwrap());
    let out = ok(&["quiver", path(&data("annulus.json")), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["matrix"][0][1].as_i64().unwrap().abs(), 2);
    let text = ok(&["quiver", path(&data("punctured_disc.json"))]);
    assert!(text.contains("exchange matrix"));
    assert!(text.contains("self-folded"));
}

#[test]
fn flip_round_trip_and_mutation() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.json");
    let twice = dir.path().join("twice.json");
    let out = ok(&["flip", path(&data("annulus.json")), "--arc", "e0", "--out", once.to_str().unwrap()]);
    assert!(out.contains("F+") || out.contains("F_+"), "{out}");
    ok(&["flip", once.to_str().unwrap(), "--arc", "e0", "--out", twice.to_str().unwrap()]);
    let a = ok(&["quiver", path(&data("annulus.json")), "--json"]);
    let b = ok(&["quiver", twice.to_str().unwrap(), "--json"]);
    assert_eq!(a, b);
    let flipped = ok(&["quiver", once.to_str().unwrap(), "--json"]);
    let mutated = ok(&["mutate", path(&data("annulus.json")), "--vertex", "e0"]);
    assert_eq!(flipped.trim(), mutated.trim());

    let json = ok(&["flip", path(&data("pentagon.json")), "--arc", "e0"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(v["triangles"].is_array());
}

#[test]
fn mutate_quiver_file_is_involutive() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.json");
    std::fs::write(&q, ok(&["quiver", path(&data("pentagon.json")), "--json"])).unwrap();
    let once = ok(&["mutate", q.to_str().unwrap(), "--vertex", "1"]);
    let q1 = dir.path().join("q1.json");
    std::fs::write(&q1, &once).unwrap();
    let twice = ok(&["mutate", q1.to_str().unwrap(), "--vertex", "1"]);
    assert_eq!(twice.trim(), std::fs::read_to_string(&q).unwrap().trim());
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(data("pentagon.json")).unwrap()).unwrap();
    let t = v["triangles"][0].as_array().unwrap()[..2].to_vec();
    v["triangles"][0] = serde_json::Value::Array(t);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let o = run(&["quiver", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("triangle 0"), "{}", stderr(&o));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(run(&["analyze", garbage.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["quiver", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["flip", path(&data("pentagon.json")), "--arc", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["examples", "e8"]).status.code(), Some(2));
    assert_eq!(run(&["stables", "--quiver", "kronecker", "--charge", "1,x"]).status.code(), Some(2));
}

#[test]
fn analyze_quadratic_reports_one_strip_of_period_pi_i() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("q.svg");
    let out = ok(&["analyze", path(&data("quadratic.json")), "--theta", "0", "--plot", svg.to_str().unwrap()]);
    assert!(out.contains("n = 1"), "{out}");
    assert!(out.contains("saddle-free: yes"), "{out}");
    assert!(out.contains("3.1415926536i"), "{out}");
    let pic = std::fs::read_to_string(&svg).unwrap();
    assert!(pic.starts_with("<svg"));
    assert!(pic.matches("<polyline").count() >= 2);
    assert!(pic.contains("stroke-dasharray"));
    assert!(pic.matches("<circle").count() >= 2);
}

#[test]
fn analyze_reports_saddles_and_residues() {
    let out = ok(&["analyze", path(&data("tilted.json")), "--theta", "0"]);
    assert!(out.contains("saddle-free: no"), "{out}");
    let out = ok(&["periods", path(&data("sphere3.json")), "--theta", "0.1"]);
    assert_eq!(out.matches("residue").count(), 3, "{out}");
}

#[test]
fn periods_of_quadratic() {
    let out = ok(&["periods", path(&data("quadratic.json")), "--theta", "0"]);
    assert!(out.contains("0.0000000000 +3.1415926536i"), "{out}");
}

#[test]
fn scan_finds_the_single_wall() {
    let out = ok(&["scan", path(&data("quadratic.json"))]);
    assert!(out.contains("walls: 1"), "{out}");
    assert!(out.contains("0.5000000000"), "{out}");
}

#[test]
fn scan_reports_accumulation_on_the_ring_side() {
    let out = ok(&["scan", path(&data("ring_side.json"))]);
    assert!(out.contains("accumulat"), "{out}");
    assert!(out.contains("0.5"), "{out}");
}

#[test]
fn wallcheck_verifies_transport() {
    let out = ok(&["wallcheck", path(&data("ring_side.json")), "--theta", "0"]);
    assert!(out.contains("flip, transport verified"), "{out}");
    let out = ok(&["wallcheck", path(&data("egg.json")), "--theta", "0.5512081"]);
    assert!(out.contains("pop, transport verified"), "{out}");
    let o = run(&["wallcheck", path(&data("quadratic.json")), "--theta", "0.3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn stables_json_and_compare() {
    let out = ok(&["stables", "--quiver", "kronecker", "--charge", "1,1;-1,1"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    let out = ok(&["stables", "--quiver", "kronecker", "--charge", "-1,1;1,1", "--bound", "3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.as_array().unwrap().iter().any(|e| e["class"] == serde_json::json!([1, 1])));
    let out = ok(&["stables", "--quiver", "an", "--charge", "1,1;0,1;-1,1", "--orientation", "RR"]);
    assert!(serde_json::from_str::<serde_json::Value>(&out).is_ok());
    let out = ok(&["stables", "--compare", "kronecker", "--differential", path(&data("ring_side.json")), "--theta", "0.5"]);
    assert!(out.contains("counts agree: true"), "{out}");
    assert!(out.contains("families [[1, 1]]"), "{out}");
    let o = run(&["stables", "--compare", "a1", "--differential", path(&data("ring_side.json")), "--theta", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn example_suites_pass() {
    for suite in ["an", "kronecker", "sphere3"] {
        let out = ok(&["examples", suite]);
        assert!(out.contains("all") && out.contains("checks passed"), "{out}");
        assert!(!out.contains("FAIL"), "{out}");
    }
}

#[test]
fn config_file_env_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "seed = 7\ngrid = 64\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "quiver", path(&data("pentagon.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("seed = 7"));
    let o = run(&["--config", cfg.to_str().unwrap(), "--seed", "9", "quiver", path(&data("pentagon.json"))]);
    assert!(stderr(&o).contains("seed = 9"));
    let o = Command::new(env!("CARGO_BIN_EXE_saddlescope"))
        .args(["quiver", path(&data("pentagon.json"))])
        .env("SADDLESCOPE_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(stderr(&o).contains("seed = 7"));
    let o = run(&["quiver", path(&data("pentagon.json"))]);
    assert!(stderr(&o).contains("seed = 20140101"));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "no_such_key = 1\n").unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "quiver", path(&data("pentagon.json"))]).status.code(), Some(2));
    std::fs::write(&bad, "position_tol = -1.0\n").unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "quiver", path(&data("pentagon.json"))]).status.code(), Some(2));
    assert_eq!(run(&["--tol", "0", "quiver", path(&data("pentagon.json"))]).status.code(), Some(2));
}

#[test]
fn settings_toml_round_trip() {
    use saddlescope::config::Settings;
    let s = Settings { seed: 3, grid: 99, ..Settings::default() };
    assert_eq!(Settings::from_toml(&s.to_toml()).unwrap(), s);
    assert_eq!(Settings::from_toml("").unwrap(), Settings::default());
}

#[test]
fn differential_files_round_trip() {
    for name in ["quadratic.json", "tilted.json", "ring_side.json", "other_side.json", "egg.json", "affine.json", "sphere3.json"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let q = differential_core::Differential::from_json(&text).unwrap();
        let back = differential_core::Differential::from_json(&q.to_json()).unwrap();
        assert_eq!(q, back, "{name}");
    }
}

#[test]
fn triangulation_files_round_trip() {
    for name in ["pentagon.json", "annulus.json", "punctured_disc.json"] {
        let t = saddlescope::commands::load_triangulation(&data(name)).unwrap();
        let file = surface_core::TriangulationFile::from_signed(&t);
        let back = saddlescope::commands::parse_triangulation(&file.to_json()).unwrap();
        assert_eq!(file, surface_core::TriangulationFile::from_signed(&back), "{name}");
    }
}
