use differential_core::*;
use stability_core::*;
fn main() {
    let cfg = Config::default();
    let (p, q, r) = (0.3f64, -3.0 / 11.0, 3.0);
    let j2 = Differential::from_coeffs(&[(p * q * r, 0.0), (p * q + p * r + q * r, 0.0), (p + q + r, 0.0), (1.0, 0.0)], &[((0.0, 0.0), 4)], 0.0).unwrap();
    let cases = vec![
        (ExampleFamily::A1, Differential::from_coeffs(&[(0.0, 1.0), (0.0, 0.0), (1.0, 0.0)], &[], 0.0).unwrap(), 0.0),
        (ExampleFamily::A1, Differential::from_coeffs(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)], &[], 0.0).unwrap(), 0.5),
        (ExampleFamily::Kronecker, Differential::from_coeffs(&[(1.0, 0.0), (3.0, 0.0), (1.0, 0.0)], &[((0.0, 0.0), 3)], 0.0).unwrap(), 0.5),
        (ExampleFamily::Kronecker, Differential::from_coeffs(&[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0)], &[((0.0, 0.0), 3)], 0.0).unwrap(), 0.5),
        (ExampleFamily::Kronecker, Differential::from_coeffs(&[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0)], &[((0.0, 0.0), 3)], 0.0).unwrap(), 0.0),
        (ExampleFamily::AffineA2, j2, 0.5),
    ];
    for (ex, q, th) in cases {
        let t = std::time::Instant::now();
        match saddle_vs_stable(ex, &q, th, &cfg) {
            Ok(r) => { for l in r.lines() { println!("{l}"); } println!("  vertex arcs {:?} agree {} ({:?})", r.vertex_arcs, r.agree(), t.elapsed()); }
            Err(e) => println!("{ex:?} {th}: error {e}"),
        }
    }
}
