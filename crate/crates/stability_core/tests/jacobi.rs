use std::time::Instant;

use stability_core::*;

#[test]
fn four_indecomposables_at_unit_bound() {
    let start = Instant::now();
    let found = jacobi_indecomposables_3punct([1, 1, 1], 2);
    assert!(start.elapsed().as_secs_f64() < 5.0);
    let mut classes: Vec<Vec<usize>> = found.iter().map(|f| f.class.clone()).collect();
    classes.sort();
    assert_eq!(classes, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 1]]);
    let top = found.iter().find(|f| f.class == [1, 1, 1]).unwrap();
    assert!(top.loop_is_identity);
    assert!(top.rep.maps.iter().all(|m| m.get(0, 0) == 1));
    assert!(found.iter().all(|f| satisfies_relations(&f.rep)));
    // All four are simple: no proper nonzero subrepresentation.
    for f in &found {
        let subs = f.rep.subrepresentation_classes();
        assert_eq!(subs.len(), 2, "{:?}", f.class);
    }
}

#[test]
fn zero_rep_decomposes() {
    let q = three_punctured_sphere_quiver();
    let zero = FiniteRep::new(q, vec![1, 1, 1], 2, vec![FpMatrix::zeros(1, 1); 6]).unwrap();
    assert!(satisfies_relations(&zero));
    assert!(!zero.is_indecomposable());
    assert_eq!(zero.endomorphism_basis().len(), 3);
}

#[test]
fn relations_rule_out_a_nonidentity_loop() {
    // With a = b = 1 and c = 0 the relation a = abca fails.
    let q = three_punctured_sphere_quiver();
    let one = FpMatrix::from_rows(&[vec![1]]);
    let zero = FpMatrix::zeros(1, 1);
    let maps = vec![one.clone(), one.clone(), zero.clone(), zero.clone(), zero.clone(), one.clone()];
    let rep = FiniteRep::new(q, vec![1, 1, 1], 2, maps).unwrap();
    assert!(!satisfies_relations(&rep));
}

#[test]
fn same_count_over_f3() {
    let found = jacobi_indecomposables_3punct([1, 1, 1], 3);
    assert_eq!(found.len(), 4);
}
