//! Brute-force oracles shared by the integration tests. None of these use
//! the search engine or the equivalence pipeline.
#![allow(dead_code)]

use std::sync::Arc;

use pgequiv::gfield::{Elem, Field};
use pgequiv::gfmatrix::Matrix;
use pgequiv::lincode::{apply_monomial, GeneratorMatrix};

/// Every permutation of `0..n`, as image arrays.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Colored row multiset after sending column `c` to `perm[c]`.
pub fn row_multiset(rows: &[Vec<u8>], row_colors: &[u32], perm: &[usize]) -> Vec<(u32, Vec<u8>)> {
    let mut out: Vec<(u32, Vec<u8>)> = rows
        .iter()
        .zip(row_colors)
        .map(|(r, &color)| {
            let mut moved = vec![0u8; r.len()];
            for (c, &b) in r.iter().enumerate() {
                moved[perm[c]] = b;
            }
            (color, moved)
        })
        .collect();
    out.sort();
    out
}

/// Number of color-preserving column permutations fixing the row multiset.
pub fn brute_force_group_order(rows: &[Vec<u8>], row_colors: &[u32], col_colors: &[u32]) -> usize {
    let n = col_colors.len();
    let id: Vec<usize> = (0..n).collect();
    let base = row_multiset(rows, row_colors, &id);
    permutations(n)
        .iter()
        .filter(|p| (0..n).all(|c| col_colors[c] == col_colors[p[c]]))
        .filter(|p| row_multiset(rows, row_colors, p) == base)
        .count()
}

pub fn brute_force_isomorphic(
    a: (&[Vec<u8>], &[u32], &[u32]),
    b: (&[Vec<u8>], &[u32], &[u32]),
) -> bool {
    let n = a.2.len();
    if n != b.2.len() || a.0.len() != b.0.len() {
        return false;
    }
    let id: Vec<usize> = (0..n).collect();
    let target = row_multiset(b.0, b.1, &id);
    permutations(n).iter().any(|p| {
        (0..n).all(|c| a.2[c] == b.2[p[c]]) && row_multiset(a.0, a.1, p) == target
    })
}

/// |PΓL_k(q)| = m · |GL_k(q)| / (q - 1).
pub fn pgaml_order(k: u32, p: u64, m: u32) -> u128 {
    let q = p.pow(m) as u128;
    let gl: u128 = (0..k).map(|i| q.pow(k) - q.pow(i)).product();
    m as u128 * gl / (q - 1)
}

/// All invertible k×k matrices over a small field.
pub fn general_linear_group(field: &Arc<Field>, k: usize) -> Vec<Matrix> {
    let q = field.q() as u64;
    let total = q.pow((k * k) as u32);
    (0..total)
        .filter_map(|mut code| {
            let mut rows = vec![vec![0 as Elem; k]; k];
            for r in rows.iter_mut() {
                for x in r.iter_mut() {
                    *x = (code % q) as Elem;
                    code /= q;
                }
            }
            let m = Matrix::from_rows(field, &rows).unwrap();
            (m.rank() == k).then_some(m)
        })
        .collect()
}

/// Normalized columns of `m`, sorted: the multiset of points.
pub fn point_multiset(m: &Matrix) -> Vec<Vec<Elem>> {
    let f = m.field();
    let mut cols: Vec<Vec<Elem>> = (0..m.cols())
        .map(|c| f.normalize_vector(&m.column(c)).unwrap().0)
        .collect();
    cols.sort();
    cols
}

/// Prime-field equivalence by trying every Q in GL(k, q): the codes are
/// monomially equivalent iff some Q·G1 has the point multiset of G2.
pub fn brute_force_equivalent(gl: &[Matrix], g1: &Matrix, g2: &Matrix) -> bool {
    if g1.rows() != g2.rows() || g1.cols() != g2.cols() {
        return false;
    }
    let target = point_multiset(g2);
    gl.iter().any(|q| point_multiset(&q.mul(g1).unwrap()) == target)
}

/// Minimum nonzero weight over all q^k codewords.
pub fn brute_force_min_distance(g: &Matrix) -> usize {
    let f = g.field();
    let q = f.q() as u64;
    let k = g.rows();
    (1..q.pow(k as u32))
        .map(|mut code| {
            let msg: Vec<Elem> = (0..k)
                .map(|_| {
                    let d = (code % q) as Elem;
                    code /= q;
                    d
                })
                .collect();
            (0..g.cols())
                .filter(|&c| f.dot(&msg, &g.column(c)) != 0)
                .count()
        })
        .min()
        .unwrap()
}

/// `R·ρ(G·P_σ·diag(λ))` for random σ, λ, ρ and invertible R: a code
/// equivalent to `g` by construction.
pub fn random_equivalent<R: rand::Rng>(g: &GeneratorMatrix, rng: &mut R, frobenius: bool) -> GeneratorMatrix {
    let f = g.field();
    let n = g.n();
    let mut sigma: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        sigma.swap(i, rng.gen_range(0..=i));
    }
    let lambdas: Vec<Elem> = (0..n).map(|_| rng.gen_range(1..f.q()) as Elem).collect();
    let rho = if frobenius { rng.gen_range(0..f.m()) } else { 0 };
    let moved = apply_monomial(g.matrix(), &sigma, &lambdas, rho).unwrap();
    let mixer = loop {
        let rows: Vec<Vec<Elem>> = (0..g.k())
            .map(|_| (0..g.k()).map(|_| rng.gen_range(0..f.q()) as Elem).collect())
            .collect();
        let m = Matrix::from_rows(f, &rows).unwrap();
        if m.rank() == g.k() {
            break m;
        }
    };
    GeneratorMatrix::new(mixer.mul(&moved).unwrap()).unwrap()
}
