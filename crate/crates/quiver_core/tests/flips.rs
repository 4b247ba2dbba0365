use proptest::prelude::*;
use quiver_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surface_core::*;

fn corpus() -> Vec<IdealTriangulation> {
    let seeds = [
        polygon(5),
        polygon(6),
        annulus(1, 1),
        annulus(2, 1),
        once_punctured_disc(3),
        once_punctured_disc(4),
        once_punctured_disc(5),
    ];
    seeds.iter().flat_map(|s| flip_corpus(s, 4)).collect()
}

fn flippable(t: &IdealTriangulation) -> Vec<usize> {
    (0..t.n()).filter(|&e| !t.is_self_folded_edge(e)).collect()
}

#[test]
fn flip_is_mutation() {
    for t in corpus() {
        let q = quiver(&t);
        for e in flippable(&t) {
            assert_eq!(quiver(&t.flip(e).unwrap()), mutate(&q, e).unwrap());
        }
    }
}

#[test]
fn grass_relation() {
    for t in corpus() {
        let l = edge_lattice(&t);
        let q = quiver(&t);
        let cs = l.curly_skew();
        for e in 0..t.n() {
            for f in 0..t.n() {
                assert_eq!(cs.get(e, f), q.arrows(f, e) - q.arrows(e, f));
            }
        }
    }
}

fn reflection(l: &EdgeLattice, e: usize) -> IntMatrix {
    // x -> x - <[e], x>[e]
    let n = l.rank();
    let mut r = IntMatrix::identity(n);
    for x in 0..n {
        r.0[e][x] -= l.skew.get(e, x);
    }
    r
}

#[test]
fn transport_maps() {
    for t in corpus() {
        let l1 = edge_lattice(&t);
        for e in flippable(&t) {
            let t2 = t.flip(e).unwrap();
            let l2 = edge_lattice(&t2);
            let plus = flip_lattice_map(&t, e, FlipSign::Plus).unwrap();
            let minus = flip_lattice_map(&t, e, FlipSign::Minus).unwrap();
            for m in [&plus, &minus] {
                assert!(m.is_isometry(&l1, &l2));
                assert_eq!(m.det().abs(), 1);
            }
            for (sign, m) in [(FlipSign::Plus, &plus), (FlipSign::Minus, &minus)] {
                let curly = flip_lattice_map_curly(&t, e, sign).unwrap();
                let p1inv = l1.change_of_basis.inverse_unimodular().unwrap();
                assert_eq!(l2.change_of_basis.mul(&curly).mul(&p1inv), m.matrix);
            }
            assert_eq!(reflection(&l2, e).mul(&minus.matrix), plus.matrix);
            assert_eq!(minus.matrix.mul(&reflection(&l1, e)), plus.matrix);
            let back = flip_lattice_map(&t2, e, FlipSign::Minus).unwrap();
            assert_eq!(back.compose(&plus).matrix, IntMatrix::identity(t.n()));
        }
    }
}

#[test]
fn quiver_symmetric_under_pop_swap() {
    for t in corpus() {
        for sf in t.self_folded() {
            let swapped = t.swap_arcs(sf.encircling, sf.folded);
            assert_eq!(quiver(&swapped).matrix, quiver(&t).matrix);
        }
    }
}

#[test]
fn pop_maps_swap_curly_basis() {
    for t in corpus() {
        let st = SignedTriangulation::all_plus(t.clone());
        let l = edge_lattice(&t);
        for sf in t.self_folded() {
            let m = pop_lattice_map(&st, sf.puncture).unwrap();
            let curly = l.change_of_basis.inverse_unimodular().unwrap().mul(&m.matrix).mul(&l.change_of_basis);
            for g in 0..t.n() {
                let want = if g == sf.encircling {
                    sf.folded
                } else if g == sf.folded {
                    sf.encircling
                } else {
                    g
                };
                let col: Vec<i64> = (0..t.n()).map(|r| curly.get(r, g)).collect();
                assert_eq!(col, (0..t.n()).map(|r| (r == want) as i64).collect::<Vec<_>>());
            }
            assert!(m.is_isometry(&l, &l));
        }
    }
}

#[test]
fn random_walks_keep_quivers_reduced() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in [polygon(8), annulus(2, 2), once_punctured_disc(5), star_subdivide(&annulus(2, 1), 0, "p0")] {
        let mut t = seed.clone();
        let mut q = quiver(&t);
        for _ in 0..50 {
            let e = rng.gen_range(0..t.n());
            if t.is_self_folded_edge(e) {
                continue;
            }
            t = t.flip(e).unwrap();
            q = mutate(&q, e).unwrap();
            assert_eq!(q, quiver(&t));
            assert!(Quiver::new(q.vertices.clone(), q.matrix.clone()).is_ok());
        }
    }
}

fn arb_quiver() -> impl Strategy<Value = Quiver> {
    (2usize..6).prop_flat_map(|n| {
        proptest::collection::vec(-3i64..=3, n * (n - 1) / 2).prop_map(move |upper| {
            let mut m = IntMatrix::zeros(n);
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    m.0[i][j] = upper[k];
                    m.0[j][i] = -upper[k];
                    k += 1;
                }
            }
            Quiver::new((0..n).map(|i| i.to_string()).collect(), m).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn mutation_is_involution(q in arb_quiver(), k in 0usize..6) {
        let k = k % q.n();
        let m = mutate(&q, k).unwrap();
        prop_assert_eq!(mutate(&m, k).unwrap(), q);
    }

    #[test]
    fn quiver_json_round_trip(q in arb_quiver()) {
        prop_assert_eq!(Quiver::from_json(&q.to_json()).unwrap(), q);
    }
}
