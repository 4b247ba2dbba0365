use std::collections::BTreeMap;

use proptest::prelude::*;
use surface_core::*;

fn catalan(m: u64) -> u64 {
    // c_{k+1} = sum c_i c_{k-i}
    let mut c = vec![1u64];
    for k in 0..m as usize {
        c.push((0..=k).map(|i| c[i] * c[k - i]).sum());
    }
    c[m as usize]
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of tagged triangulations of a once-punctured disc with `n` marks.
fn type_d_clusters(n: u64) -> u64 {
    (3 * n - 2) * binom(2 * n - 2, n - 1) / n
}

#[test]
fn disc_counts_are_catalan_and_regular() {
    for n in 0..=5usize {
        let seed = SignedTriangulation::all_plus(polygon(n + 3));
        let (nodes, adj) = bfs_tagged(&seed, 10_000);
        assert_eq!(nodes.len() as u64, catalan(n as u64 + 1), "n={n}");
        for (i, nb) in adj.iter().enumerate() {
            assert_eq!(nb.len(), n);
            let mut d = nb.clone();
            d.sort();
            d.dedup();
            assert_eq!(d.len(), n);
            assert!(!nb.contains(&i));
        }
    }
}

#[test]
fn punctured_disc_tagged_counts() {
    for k in [2u64, 3, 4] {
        let seed = SignedTriangulation::all_plus(once_punctured_disc(k as usize));
        let (nodes, adj) = bfs_tagged(&seed, 10_000);
        assert_eq!(nodes.len() as u64, type_d_clusters(k), "k={k}");
        for nb in &adj {
            let mut d = nb.clone();
            d.sort();
            d.dedup();
            assert_eq!(d.len(), k as usize);
        }
    }
}

#[test]
fn tagged_flip_is_involutive_everywhere() {
    for seed in [once_punctured_disc(3), once_punctured_disc(4), polygon(6), annulus(2, 1)] {
        let (nodes, _) = bfs_tagged(&SignedTriangulation::all_plus(seed), 10_000);
        for st in &nodes {
            for k in 0..st.triangulation.n() {
                let back = tagged_flip(&tagged_flip(st, k).unwrap(), k).unwrap();
                assert!(tagged_equal(&back, st));
            }
        }
    }
}

#[test]
fn tagged_arcs_detect_exactly_pop_classes() {
    let (nodes, _) = bfs_triangulations(&once_punctured_disc(3), 10_000);
    let two = star_subdivide(&once_punctured_disc(3), 0, "p1");
    let (more, _) = bfs_triangulations(&two, 200);
    for t in nodes.iter().chain(more.iter()) {
        let ps = t.punctures();
        let signings: Vec<SignedTriangulation> = (0..1u32 << ps.len())
            .map(|mask| {
                let m: BTreeMap<String, i8> = ps
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| (t.vertices()[p].clone(), if mask >> i & 1 == 1 { -1 } else { 1 }))
                    .collect();
                SignedTriangulation::new(t.clone(), &m).unwrap()
            })
            .collect();
        for a in &signings {
            for b in &signings {
                let only_valency_one = ps
                    .iter()
                    .all(|&p| a.sign(p) == b.sign(p) || t.valency(p) == 1);
                assert_eq!(tagged_arcs(a) == tagged_arcs(b), only_valency_one);
                assert_eq!(tagged_equal(a, b), only_valency_one);
            }
        }
    }
}

#[test]
fn flip_graph_is_connected_and_arc_count_constant() {
    for seed in [polygon(7), once_punctured_disc(4), annulus(2, 1), annulus(1, 1)] {
        let (nodes, adj) = bfs_triangulations(&seed, 10_000);
        let n = arc_count(seed.surface()).unwrap();
        assert!(nodes.iter().all(|t| t.n() == n));
        assert!(adj.iter().all(|a| !a.is_empty()));
    }
    // Any triangulation reached from a different seed is already known.
    let (a, _) = bfs_triangulations(&polygon(6), 10_000);
    let other = polygon(6).flip(0).unwrap().flip(1).unwrap();
    let code = other.canonical_code();
    assert!(a.iter().any(|t| t.canonical_code() == code));
}

proptest! {
    #[test]
    fn random_flip_walks_stay_valid(steps in proptest::collection::vec(0usize..8, 0..40)) {
        let mut t = star_subdivide(&annulus(2, 1), 0, "p0");
        let n = t.n();
        for s in steps {
            let e = s % n;
            if let Ok(f) = t.flip(e) {
                prop_assert_eq!(f.flip(e).unwrap(), t.clone());
                t = f;
            } else {
                prop_assert!(t.is_self_folded_edge(e));
            }
            prop_assert_eq!(t.n(), n);
        }
    }
}

#[test]
fn once_punctured_monogon_arc_is_folded() {
    let t = once_punctured_disc(1);
    assert_eq!(t.n(), 1);
    assert!(t.is_self_folded_edge(0));
    assert!(t.self_folded().is_empty());
    assert!(matches!(t.flip(0), Err(SurfaceError::SelfFoldedFlip(_))));
}
