mod common;

use std::collections::HashMap;
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pgequiv::equiv::{ceimpg_equiv, cesimpg_equiv, classify, code_aut_group, verify_witness, Algorithm, EquivOptions, Geometry};
use pgequiv::gfield::Field;
use pgequiv::gfmatrix::Matrix;
use pgequiv::lincode::random_code_with;

use common::*;

fn gl(q: u64, k: usize) -> &'static [Matrix] {
    static CACHE: OnceLock<HashMap<(u64, usize), Vec<Matrix>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let mut m = HashMap::new();
        for q in [2u64, 3] {
            for k in 1..=3 {
                m.insert((q, k), general_linear_group(&Field::new(q).unwrap(), k));
            }
        }
        m
    });
    &cache[&(q, k)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdicts_match_gl_oracle(
        q in prop::sample::select(vec![2u64, 3]),
        k in 1usize..=3,
        extra in 0usize..=3,
        seed in any::<u64>(),
        related in any::<bool>(),
    ) {
        let n = k + extra;
        let geom = Geometry::new(&Field::new(q).unwrap(), k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g1 = random_code_with(&mut rng, geom.table(), n, false).unwrap();
        let g2 = if related {
            random_equivalent(&g1, &mut rng, false)
        } else {
            random_code_with(&mut rng, geom.table(), n, false).unwrap()
        };
        let truth = brute_force_equivalent(gl(q, k), g1.matrix(), g2.matrix());
        let opts = EquivOptions::default();
        let a = ceimpg_equiv(&g1, &g2, &geom, &opts).unwrap();
        let b = cesimpg_equiv(&g1, &g2, &geom, &opts).unwrap();
        prop_assert_eq!(a.is_equivalent(), truth);
        prop_assert_eq!(b.is_equivalent(), truth);
        if let Some(w) = b.witness() {
            prop_assert!(verify_witness(&g1, &g2, w));
        }
    }

    #[test]
    fn min_distance_matches_codewords(
        q in prop::sample::select(vec![2u64, 3, 4, 5]),
        k in 1usize..=3,
        extra in 0usize..=5,
        seed in any::<u64>(),
    ) {
        let geom = Geometry::new(&Field::new(q).unwrap(), k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_code_with(&mut rng, geom.table(), k + extra, false).unwrap();
        let chi = g.characteristic_vector(geom.table()).unwrap();
        prop_assert_eq!(chi.min_distance(geom.incidence().unwrap()).unwrap(), brute_force_min_distance(g.matrix()));
    }

    #[test]
    fn chi_multiset_invariant_under_monomials(
        q in prop::sample::select(vec![2u64, 3, 5, 7]),
        k in 2usize..=4,
        seed in any::<u64>(),
    ) {
        // without a field automorphism the point multiset is fixed up to a
        // collineation, so its sorted multiplicities are too
        let geom = Geometry::new(&Field::new(q).unwrap(), k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_code_with(&mut rng, geom.table(), k + 4, false).unwrap();
        let h = random_equivalent(&g, &mut rng, false);
        let sorted = |m: &Matrix| {
            let mut v = point_multiset(m).into_iter().fold(HashMap::<Vec<u16>, usize>::new(), |mut acc, p| {
                *acc.entry(p).or_default() += 1;
                acc
            }).into_values().collect::<Vec<_>>();
            v.sort();
            v
        };
        let mut a: Vec<u32> = g.characteristic_vector(geom.table()).unwrap().counts().iter().copied().filter(|&c| c > 0).collect();
        let mut b: Vec<u32> = h.characteristic_vector(geom.table()).unwrap().counts().iter().copied().filter(|&c| c > 0).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(sorted(g.matrix()).len(), a.len());
    }
}

#[test]
fn classify_partitions_like_the_oracle() {
    let geom = Geometry::new(&Field::new(3).unwrap(), 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut batch = Vec::new();
    for _ in 0..12 {
        let g = random_code_with(&mut rng, geom.table(), 5, false).unwrap();
        batch.push(random_equivalent(&g, &mut rng, false));
        batch.push(g);
    }
    let gl = gl(3, 2);
    for algo in [Algorithm::Ceimpg, Algorithm::Cesimpg] {
        let c = classify(&batch, algo, &geom, &EquivOptions::default(), 3).unwrap();
        for i in 0..batch.len() {
            for j in 0..batch.len() {
                let same = c.class_of[i] == c.class_of[j];
                assert_eq!(same, brute_force_equivalent(gl, batch[i].matrix(), batch[j].matrix()), "{:?} {} {}", algo, i, j);
            }
        }
        for class in &c.classes {
            assert_eq!(class.representative, class.members[0]);
        }
    }
}

/// |MAut(C)| over a prime field: each Q in GL(k, q) contributes one
/// monomial map per way of matching the columns of Q·G to those of G,
/// which is the product of factorials of the point multiplicities.
fn brute_force_aut_order(gl: &[Matrix], g: &Matrix) -> u64 {
    let target = point_multiset(g);
    let mut per_q: u64 = 1;
    let mut i = 0;
    while i < target.len() {
        let j = (i..target.len()).find(|&j| target[j] != target[i]).unwrap_or(target.len());
        per_q *= (1..=(j - i) as u64).product::<u64>();
        i = j;
    }
    gl.iter().filter(|q| point_multiset(&q.mul(g).unwrap()) == target).count() as u64 * per_q
}

#[test]
fn automorphism_orders_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    for (q, k, n) in [(2u64, 3usize, 6usize), (3, 2, 4), (3, 3, 6), (2, 3, 8), (3, 3, 5), (3, 2, 6)] {
        let geom = Geometry::new(&Field::new(q).unwrap(), k).unwrap();
        for _ in 0..6 {
            let g = random_code_with(&mut rng, geom.table(), n, false).unwrap();
            let r = code_aut_group(&g, &geom, &EquivOptions::default()).unwrap();
            let Some(order) = r.code_order else { continue };
            assert_eq!(order, brute_force_aut_order(gl(q, k), g.matrix()).into(), "{:?}", g);
            checked += 1;
        }
    }
    assert!(checked >= 30, "only {} codes lifted completely", checked);
}
