use differential_core::{Config, Differential};
use stability_core::*;

fn run(example: ExampleFamily, q: &Differential, theta: f64) -> Comparison {
    let report = saddle_vs_stable(example, q, theta, &Config::default()).unwrap();
    for line in report.lines() {
        println!("{line}");
    }
    report
}

fn quadratic(c: (f64, f64)) -> Differential {
    Differential::from_coeffs(&[c, (0.0, 0.0), (1.0, 0.0)], &[], 0.0).unwrap()
}

fn cubic_pole(b: f64) -> Differential {
    Differential::from_coeffs(&[(1.0, 0.0), (b, 0.0), (1.0, 0.0)], &[((0.0, 0.0), 3)], 0.0).unwrap()
}

fn affine_representative() -> Differential {
    let (p, q, r) = (0.3f64, -3.0 / 11.0, 3.0);
    Differential::from_coeffs(
        &[(p * q * r, 0.0), (p * q + p * r + q * r, 0.0), (p + q + r, 0.0), (1.0, 0.0)],
        &[((0.0, 0.0), 4)],
        0.0,
    )
    .unwrap()
}

#[test]
fn a1_saddle_is_the_simple() {
    let r = run(ExampleFamily::A1, &quadratic((0.0, 1.0)), 0.0);
    assert_eq!((r.non_closed_saddles, r.rigid.len(), r.families.len()), (1, 1, 0));
    assert!((r.charge.values[0] - num_complex::Complex::new(0.0, std::f64::consts::PI)).norm() < 1e-8);
    assert!(r.agree());
    let r = run(ExampleFamily::A1, &quadratic((1.0, 0.0)), 0.5);
    assert!(r.agree());
}

#[test]
fn a1_off_the_saddle_phase_has_nothing() {
    let r = run(ExampleFamily::A1, &quadratic((0.0, 1.0)), 0.3);
    assert_eq!((r.non_closed_saddles, r.rigid.len()), (0, 0));
    assert!(r.agree());
}

#[test]
fn kronecker_ring_side() {
    let r = run(ExampleFamily::Kronecker, &cubic_pole(3.0), 0.5);
    assert_eq!(r.non_closed_saddles, 0);
    assert_eq!(r.non_degenerate_rings, 1);
    assert_eq!(r.families, vec![vec![1, 1]]);
    assert!(r.rigid.is_empty());
    assert_eq!(r.ring_classes, vec![vec![vec![1, 1]]]);
    assert!(r.agree());
}

#[test]
fn kronecker_other_side() {
    for theta in [0.0, 0.5] {
        let r = run(ExampleFamily::Kronecker, &cubic_pole(1.0), theta);
        assert_eq!(r.non_degenerate_rings, 0);
        assert!(r.families.is_empty());
        assert_eq!(r.non_closed_saddles, 1);
        assert_eq!(r.rigid.len(), 1);
        assert!(!r.rigid.contains(&vec![1, 1]));
        assert!(r.agree());
    }
}

#[test]
fn affine_two_saddles_and_a_ring() {
    let r = run(ExampleFamily::AffineA2, &affine_representative(), 0.5);
    assert_eq!(r.non_closed_saddles, 2);
    assert_eq!(r.non_degenerate_rings, 1);
    let mut rigid = r.rigid.clone();
    rigid.sort();
    assert_eq!(rigid, vec![vec![0, 0, 1], vec![1, 1, 0]]);
    assert_eq!(r.families, vec![vec![1, 1, 1]]);
    // Both saddles have the same period, so their classes are ambiguous.
    assert!(r.ambiguous() >= 2);
    assert!(r.agree());
}

#[test]
fn wrong_family_is_rejected() {
    let err = saddle_vs_stable(ExampleFamily::Kronecker, &quadratic((0.0, 1.0)), 0.0, &Config::default()).unwrap_err();
    assert!(matches!(err, StabilityError::PreconditionViolated(_)));
}

#[test]
fn report_serializes() {
    let r = run(ExampleFamily::A1, &quadratic((0.0, 1.0)), 0.0);
    let text = serde_json::to_string(&r).unwrap();
    let back: Comparison = serde_json::from_str(&text).unwrap();
    assert_eq!(back.rigid, r.rigid);
}
