//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pgequiv::bmcanon::{canonical_form, ColoredBinaryMatrix};
use pgequiv::codefile::{emit_codes, parse_codes};
use pgequiv::equiv::{
    build_ceimpg_matrix, build_shortened, ceimpg_equiv, cesimpg_equiv, code_aut_group, verify_witness, EquivOptions,
    Geometry, Verdict,
};
use pgequiv::gfield::Field;
use pgequiv::gfmatrix::Matrix;
use pgequiv::lincode::{random_code_with, CharacteristicVector, GeneratorMatrix};
use pgequiv::report::{bench_row, BenchSpec};

use common::*;

const EXAMPLE_LIMIT: Duration = Duration::from_secs(5);
const BENCH_LIMIT: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example_pair() -> (GeneratorMatrix, GeneratorMatrix) {
    let f = Field::new(3).unwrap();
    (
        GeneratorMatrix::from_rows(&f, &[vec![1, 0, 0, 1, 2, 0], vec![0, 1, 0, 1, 1, 1], vec![0, 0, 1, 1, 1, 0]])
            .unwrap(),
        GeneratorMatrix::from_rows(&f, &[vec![1, 0, 0, 1, 1, 0], vec![0, 1, 0, 1, 2, 0], vec![0, 0, 1, 1, 0, 2]])
            .unwrap(),
    )
}

fn simplex(q: u64, k: usize) -> (Geometry, GeneratorMatrix) {
    let geom = Geometry::new(&Field::new(q).unwrap(), k).unwrap();
    let s = GeneratorMatrix::new(geom.table().simplex_generator()).unwrap();
    (geom, s)
}

fn example_pair_criterion() -> Outcome {
    let (g1, g2) = example_pair();
    let geom = Geometry::for_code(&g1).unwrap();
    let start = Instant::now();
    let v = cesimpg_equiv(&g1, &g2, &geom, &EquivOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let w = v.witness().ok_or("no explicit witness")?;
    ensure(verify_witness(&g1, &g2, w), || "witness does not verify".into())?;
    let gl = general_linear_group(g1.field(), 3);
    ensure(gl.len() == 11_232, || format!("|GL(3,3)| = {}", gl.len()))?;
    ensure(brute_force_equivalent(&gl, g1.matrix(), g2.matrix()), || "oracle disagrees".into())?;
    ensure(elapsed < EXAMPLE_LIMIT, || format!("took {:?}", elapsed))?;
    Ok(format!("equivalent, witness verified, GL(3,3) oracle agrees, {:?} (limit 5s)", elapsed))
}

fn agreement_criterion() -> Outcome {
    let opts = EquivOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut equivalent = 0;
    let mut shortened_distinct = 0;
    for (k, pairs) in [(3usize, 500), (4, 500)] {
        let geom = Geometry::new(&Field::new(3).unwrap(), k).unwrap();
        for i in 0..pairs {
            let g1 = random_code_with(&mut rng, geom.table(), 10, false).unwrap();
            let g2 = if rng.gen_bool(0.4) {
                random_equivalent(&g1, &mut rng, false)
            } else {
                random_code_with(&mut rng, geom.table(), 10, false).unwrap()
            };
            let a = ceimpg_equiv(&g1, &g2, &geom, &opts).map_err(|e| e.to_string())?;
            let b = cesimpg_equiv(&g1, &g2, &geom, &opts).map_err(|e| e.to_string())?;
            ensure(a.is_equivalent() == b.is_equivalent(), || format!("k={} pair {} disagrees", k, i))?;
            if let Some(w) = b.witness() {
                ensure(verify_witness(&g1, &g2, w), || format!("k={} pair {}: bad witness", k, i))?;
            }
            let s1 = canonical_form(&build_shortened(&g1, geom.table(), true).unwrap()).unwrap();
            let s2 = canonical_form(&build_shortened(&g2, geom.table(), true).unwrap()).unwrap();
            if s1.canonical != s2.canonical {
                shortened_distinct += 1;
                ensure(!a.is_equivalent(), || format!("k={} pair {}: shortened differ but equivalent", k, i))?;
            }
            equivalent += a.is_equivalent() as usize;
        }
    }
    Ok(format!(
        "1000/1000 verdicts agree ({} equivalent, {} separated by shortened matrices)",
        equivalent, shortened_distinct
    ))
}

fn small_oracle_criterion() -> Outcome {
    let opts = EquivOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut gl_cache: HashMap<(u64, usize), Vec<Matrix>> = HashMap::new();
    let mut equivalent = 0;
    for i in 0..200 {
        let q = [2u64, 3][rng.gen_range(0..2)];
        let k = rng.gen_range(1..=3usize);
        let n = rng.gen_range(k..=6);
        let field = Field::new(q).unwrap();
        let geom = Geometry::new(&field, k).unwrap();
        let g1 = random_code_with(&mut rng, geom.table(), n, false).unwrap();
        let g2 = if rng.gen_bool(0.3) {
            random_equivalent(&g1, &mut rng, false)
        } else {
            random_code_with(&mut rng, geom.table(), n, false).unwrap()
        };
        let gl = gl_cache.entry((q, k)).or_insert_with(|| general_linear_group(&field, k));
        let truth = brute_force_equivalent(gl, g1.matrix(), g2.matrix());
        let a = ceimpg_equiv(&g1, &g2, &geom, &opts).map_err(|e| e.to_string())?;
        let b = cesimpg_equiv(&g1, &g2, &geom, &opts).map_err(|e| e.to_string())?;
        ensure(a.is_equivalent() == truth && b.is_equivalent() == truth, || {
            format!("pair {} (q={}, k={}, n={}): oracle {} ceimpg {:?} cesimpg {:?}", i, q, k, n, truth, a, b)
        })?;
        if let Verdict::Equivalent(w) = &b {
            ensure(verify_witness(&g1, &g2, w), || format!("pair {}: bad witness", i))?;
        }
        equivalent += truth as usize;
    }
    Ok(format!("200/200 match the GL oracle ({} equivalent)", equivalent))
}

fn group_order_criterion() -> Outcome {
    let mut parts = Vec::new();
    for (q, p, m, k, expected) in [(2u64, 2u64, 1u32, 3usize, 168u128), (3, 3, 1, 3, 5616), (2, 2, 1, 4, 20_160)] {
        let (geom, _) = simplex(q, k);
        let n = geom.incidence().unwrap();
        let c = canonical_form(&ColoredBinaryMatrix::uncolored(n.bits().clone())).unwrap();
        let formula = pgaml_order(k as u32, p, m);
        ensure(formula == expected, || format!("formula gives {}", formula))?;
        ensure(c.group_order == BigUint::from(expected), || {
            format!("|Aut(N(A_{}))| over GF({}) = {}", k, q, c.group_order)
        })?;
        parts.push(format!("{}", c.group_order));
    }
    let (_, s) = simplex(2, 3);
    let rows: Vec<Vec<u8>> = (0..7).map(|r| Geometry::for_code(&s).unwrap().incidence().unwrap().bits().row_vec(r)).collect();
    let brute = brute_force_group_order(&rows, &[0; 7], &[0; 7]);
    ensure(brute == 168, || format!("7! brute force gives {}", brute))?;
    let (geom, s) = simplex(2, 3);
    let r = code_aut_group(&s, &geom, &EquivOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.code_order == Some(BigUint::from(168u32)), || format!("code_aut_group gives {:?}", r.code_order))?;
    Ok(format!("{} (7! brute force 168), code automorphisms of S(2,3) = 168", parts.join(", ")))
}

fn invariance_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for (q, k, n) in [(3u64, 3usize, 10usize), (2, 4, 9), (4, 3, 8)] {
        let geom = Geometry::new(&Field::new(q).unwrap(), k).unwrap();
        let g = random_code_with(&mut rng, geom.table(), n, false).unwrap();
        let chi = g.characteristic_vector(geom.table()).unwrap();
        let m = build_ceimpg_matrix(&chi, geom.incidence().unwrap()).unwrap();
        let reference = canonical_form(&m).unwrap().canonical.serialize();
        for _ in 0..100 {
            let mut perm: Vec<usize> = (0..m.cols()).collect();
            let mut order: Vec<usize> = (0..m.rows()).collect();
            for i in (1..perm.len()).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let shuffled = m.permute_columns(&perm).reorder_rows(&order);
            let s = canonical_form(&shuffled).unwrap().canonical.serialize();
            ensure(s == reference, || format!("GF({}) k={}: serialization changed", q, k))?;
            checked += 1;
        }
    }
    Ok(format!("{} shuffled matrices, serializations identical", checked))
}

fn soundness_criterion() -> Outcome {
    let opts = EquivOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let settings = [(2u64, 4usize, 9usize), (3, 3, 10), (3, 4, 10), (4, 3, 8), (5, 3, 7)];
    let geoms: Vec<Geometry> = settings
        .iter()
        .map(|&(q, k, _)| Geometry::new(&Field::new(q).unwrap(), k).unwrap())
        .collect();
    let mut frobenius = 0;
    for i in 0..1000 {
        let s = i % settings.len();
        let (q, _, n) = settings[s];
        let geom = &geoms[s];
        let g1 = random_code_with(&mut rng, geom.table(), n, false).unwrap();
        let g2 = random_equivalent(&g1, &mut rng, q == 4);
        let v = cesimpg_equiv(&g1, &g2, geom, &opts).map_err(|e| e.to_string())?;
        let w = v.witness().ok_or_else(|| format!("case {} over GF({}): {:?}", i, q, v))?;
        ensure(verify_witness(&g1, &g2, w), || format!("case {}: witness fails", i))?;
        frobenius += (w.rho != 0) as usize;
    }
    Ok(format!("1000/1000 equivalent with verified witnesses ({} use a Frobenius map), 0 false negatives", frobenius))
}

fn simplex_criterion() -> Outcome {
    for (q, k) in [(2u64, 3usize), (3, 3), (2, 4), (4, 2), (5, 3)] {
        let (geom, s) = simplex(q, k);
        let chi = s.characteristic_vector(geom.table()).unwrap();
        ensure(chi.counts().iter().all(|&c| c == 1), || format!("chi(S({},{})) not all ones", q, k))?;
    }
    let mut found = Vec::new();
    for (q, expected) in [(3u64, 9usize), (2, 4)] {
        let (geom, s) = simplex(q, 3);
        let chi = s.characteristic_vector(geom.table()).unwrap();
        let d = chi.min_distance(geom.incidence().unwrap()).unwrap();
        let brute = brute_force_min_distance(s.matrix());
        ensure(d == expected && brute == expected, || format!("S({},3): {} vs exhaustive {}", q, d, brute))?;
        found.push(d);
    }
    Ok(format!("chi all ones, d(S(3,3)) = {}, d(S(2,3)) = {}, exhaustive search agrees", found[0], found[1]))
}

fn bench_criterion() -> Outcome {
    let spec = BenchSpec {
        q: 3,
        k: 3,
        n: 10,
        count: 10_000,
        projective: false,
    };
    let opts = EquivOptions::default();
    let mut rows = Vec::new();
    for _ in 0..2 {
        let start = Instant::now();
        let row = bench_row(spec, 1, &opts, 0).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(elapsed <= BENCH_LIMIT, || format!("run took {:?}", elapsed))?;
        ensure(row.failures == 0, || format!("{} failures", row.failures))?;
        ensure(row.cesimpg_classes == row.ceimpg_classes, || {
            format!("cesimpg {} vs ceimpg {} classes", row.cesimpg_classes, row.ceimpg_classes)
        })?;
        rows.push((row, elapsed));
    }
    ensure(rows[0].0.cesimpg_classes == rows[1].0.cesimpg_classes, || "class counts differ between runs".into())?;
    Ok(format!(
        "10000 [10,3]_3 codes, {} classes from both algorithms in both runs, {:.1}s and {:.1}s (limit 60s)",
        rows[0].0.cesimpg_classes,
        rows[0].1.as_secs_f64(),
        rows[1].1.as_secs_f64()
    ))
}

fn round_trip_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let settings = [(2u64, 3usize), (3, 3), (4, 2), (5, 2), (2, 4)];
    let geoms: Vec<Geometry> = settings
        .iter()
        .map(|&(q, k)| Geometry::new(&Field::new(q).unwrap(), k).unwrap())
        .collect();
    let mut done = 0;
    while done < 1000 {
        let s = done % settings.len();
        let (q, k) = settings[s];
        let table = geoms[s].table();
        let counts: Vec<u32> = (0..table.len()).map(|_| rng.gen_range(0..=2)).collect();
        let chi = CharacteristicVector::new(k, q as u32, counts);
        let Ok(code) = chi.to_code(table) else {
            // support does not span the space
            continue;
        };
        let back = code.characteristic_vector(table).unwrap();
        ensure(back == chi, || format!("chi round trip {} failed", done))?;
        done += 1;
    }
    let mut codes = Vec::new();
    for (q, k, n) in [(2u64, 3usize, 7usize), (3, 4, 10), (4, 3, 9), (9, 2, 6), (8, 3, 5), (7, 2, 8)] {
        let geom = Geometry::new(&Field::new(q).unwrap(), k).unwrap();
        for _ in 0..5 {
            codes.push(random_code_with(&mut rng, geom.table(), n, false).unwrap());
        }
    }
    let text = emit_codes(&codes);
    let parsed = parse_codes(&text).map_err(|e| e.to_string())?;
    ensure(parsed.len() == codes.len(), || "code count changed".into())?;
    for (a, b) in codes.iter().zip(&parsed) {
        ensure(a.matrix() == b.matrix(), || "matrix changed in file round trip".into())?;
    }
    ensure(emit_codes(&parsed) == text, || "emitted text changed".into())?;
    Ok(format!("1000 chi round trips, {} codes through the file format bit-exact", codes.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("example pair equivalence", example_pair_criterion),
        ("CEIMPG/CESIMPG agreement on [10,3]_3 and [10,4]_3", agreement_criterion),
        ("small-instance GL oracle", small_oracle_criterion),
        ("group orders", group_order_criterion),
        ("canonical invariance", invariance_criterion),
        ("constructed-equivalence soundness", soundness_criterion),
        ("simplex properties", simplex_criterion),
        ("random batch benchmark", bench_criterion),
        ("round trips", round_trip_criterion),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {}", msg))
        });
        match outcome {
            Ok(detail) => println!("criterion {} PASS {}: {}", i + 1, name, detail),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {}: {}", i + 1, name, detail);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
