//! Code equivalence through colored binary matrices.
//!
//! Two routes are offered. [`ceimpg_equiv`] canonicalizes the full
//! point/hyperplane incidence matrix of PG(k-1, q) extended by the
//! characteristic vector of each code; equal canonical forms mean the point
//! multisets lie in one orbit of the collineation group. [`cesimpg_equiv`]
//! works on the much smaller θ×n matrix of codeword supports, then recovers an
//! explicit monomial map by solving a linear system per candidate column
//! permutation.
//!
//! Witnesses use the orientation `Q·G2 = ρ(G1·P_σ·diag(λ))`, see
//! [`EquivalenceWitness`].

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::bits::BitMatrix;
use crate::bmcanon::{self, CanonOptions, CanonResult, ColoredBinaryMatrix};
use crate::error::{Error, Result};
use crate::gfield::{Elem, Field};
use crate::gfmatrix::{all_nonzero_in_span, Matrix, SpanSearch, DEFAULT_SPAN_CAP};
use crate::lincode::{apply_monomial, is_permutation, CharacteristicVector, GeneratorMatrix, Systematic};
use crate::projgeom::{IncidenceMatrix, PointTable};

/// Largest automorphism group whose elements are enumerated when trying
/// candidate permutations.
pub const DEFAULT_COSET_CAP: usize = 1_000_000;

/// Search limits shared by every algorithm in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivOptions {
    pub canon: CanonOptions,
    pub span_cap: u64,
    pub coset_cap: usize,
    /// Drop rows of weight n from shortened matrices.
    pub strip_full_rows: bool,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions {
            canon: CanonOptions::default(),
            span_cap: DEFAULT_SPAN_CAP,
            coset_cap: DEFAULT_COSET_CAP,
            strip_full_rows: true,
        }
    }
}

/// Point table of PG(k-1, q), with the incidence matrix built on first use.
#[derive(Debug)]
pub struct Geometry {
    table: PointTable,
    incidence: OnceLock<Result<IncidenceMatrix>>,
}

impl Geometry {
    pub fn new(field: &Arc<Field>, k: usize) -> Result<Geometry> {
        Ok(Geometry {
            table: PointTable::new(field, k)?,
            incidence: OnceLock::new(),
        })
    }

    pub fn for_code(g: &GeneratorMatrix) -> Result<Geometry> {
        Self::new(g.field(), g.k())
    }

    pub fn field(&self) -> &Arc<Field> {
        self.table.field()
    }

    pub fn k(&self) -> usize {
        self.table.k()
    }

    pub fn table(&self) -> &PointTable {
        &self.table
    }

    pub fn incidence(&self) -> Result<&IncidenceMatrix> {
        self.incidence
            .get_or_init(|| IncidenceMatrix::new(&self.table))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn check(&self, g: &GeneratorMatrix) -> Result<()> {
        if g.k() != self.k() || **g.field() != **self.field() {
            return Err(Error::DimensionMismatch(format!(
                "code with k = {} over GF({}) in PG({}, {})",
                g.k(),
                g.field().q(),
                self.k() - 1,
                self.field().q()
            )));
        }
        Ok(())
    }
}

/// `(σ, λ, ρ, Q)` with `Q·G2 = ρ(G1·P_σ·diag(λ))`.
///
/// Column `j` of `G1` moves to position `sigma[j]`; position `s` is then
/// scaled by `lambdas[s]`; `rho` is the exponent of the Frobenius map
/// `a -> a^(p^rho)`, always 0 over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub sigma: Vec<usize>,
    pub lambdas: Vec<Elem>,
    pub rho: u32,
    pub q: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent(EquivalenceWitness),
    /// Canonical forms agree but no monomial map was constructed. Holds the
    /// point mapping on the support of the first code, as 1-based pairs.
    EquivalentByCeimpg { point_map: Vec<(usize, usize)> },
    Inequivalent,
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        !matches!(self, Verdict::Inequivalent)
    }

    pub fn witness(&self) -> Option<&EquivalenceWitness> {
        match self {
            Verdict::Equivalent(w) => Some(w),
            _ => None,
        }
    }
}

/// Checks `Q·G2 = ρ(G1·P_σ·diag(λ))` entrywise, with `Q` invertible and
/// every `λ` nonzero.
pub fn verify_witness(g1: &GeneratorMatrix, g2: &GeneratorMatrix, w: &EquivalenceWitness) -> bool {
    let (k, n) = (g1.k(), g1.n());
    if g2.k() != k || g2.n() != n || **g1.field() != **g2.field() {
        return false;
    }
    if w.sigma.len() != n || w.lambdas.len() != n || !is_permutation(&w.sigma) {
        return false;
    }
    if w.lambdas.contains(&0) || w.rho >= g1.field().m() {
        return false;
    }
    if w.q.rows() != k || w.q.cols() != k || **w.q.field() != **g1.field() || w.q.inverse().is_none() {
        return false;
    }
    let Ok(lhs) = w.q.mul(g2.matrix()) else {
        return false;
    };
    apply_monomial(g1.matrix(), &w.sigma, &w.lambdas, w.rho).is_ok_and(|rhs| rhs == lhs)
}

// ---------------------------------------------------------------------------
// matrix constructions

/// Incidence matrix of PG(k-1, q) with the support of `chi` appended as an
/// extra row of color 1. Columns carry their multiplicity as color when
/// `chi` is not 0/1.
pub fn build_ceimpg_matrix(chi: &CharacteristicVector, n: &IncidenceMatrix) -> Result<ColoredBinaryMatrix> {
    if chi.k() != n.k() || chi.q() != n.q() {
        return Err(Error::DimensionMismatch(format!(
            "characteristic vector for (k, q) = ({}, {}) against incidence ({}, {})",
            chi.k(),
            chi.q(),
            n.k(),
            n.q()
        )));
    }
    let theta = n.size();
    let mut bits = n.bits().clone();
    let support: Vec<u8> = chi.counts().iter().map(|&c| (c > 0) as u8).collect();
    bits.push_row(&support);
    let mut row_colors = vec![0; theta];
    row_colors.push(1);
    let col_colors = if chi.is_projective() {
        vec![0; theta]
    } else {
        chi.counts().to_vec()
    };
    ColoredBinaryMatrix::new(bits, row_colors, col_colors)
}

/// The θ×n matrix with a 1 at `(i, j)` iff `u_i·g_j ≠ 0`.
///
/// Row `i` is the support of the codeword `u_i·G`, so the rows list the
/// supports of all codewords up to scalars. With `strip_full_rows`, rows of
/// weight n are dropped. Columns of a non-projective code are colored by
/// the multiplicity of their point.
pub fn build_shortened(g: &GeneratorMatrix, table: &PointTable, strip_full_rows: bool) -> Result<ColoredBinaryMatrix> {
    let points = g.column_points(table)?;
    let f = g.field();
    let n = g.n();
    let columns: Vec<Vec<Elem>> = (0..n).map(|j| g.column(j)).collect();
    let mut bits = BitMatrix::new(0, n);
    let mut row = vec![0u8; n];
    for (_, u) in table.iter() {
        for (x, c) in row.iter_mut().zip(&columns) {
            *x = (f.dot(u, c) != 0) as u8;
        }
        if strip_full_rows && row.iter().all(|&x| x == 1) {
            continue;
        }
        bits.push_row(&row);
    }
    let mut mult: HashMap<usize, u32> = HashMap::new();
    for &p in &points {
        *mult.entry(p).or_default() += 1;
    }
    let col_colors = if mult.len() == n {
        vec![0; n]
    } else {
        points.iter().map(|p| mult[p]).collect()
    };
    let rows = bits.rows();
    ColoredBinaryMatrix::new(bits, vec![0; rows], col_colors)
}

// ---------------------------------------------------------------------------
// CEIMPG

fn ceimpg_canon(g: &GeneratorMatrix, geom: &Geometry, opts: &EquivOptions) -> Result<CanonResult> {
    let chi = g.characteristic_vector(geom.table())?;
    let m = build_ceimpg_matrix(&chi, geom.incidence()?)?;
    bmcanon::canonical_form_with(&m, opts.canon)
}

/// Canonical key of a code: the serialized canonical form of its CEIMPG
/// matrix. Two codes are equivalent iff their keys are equal.
pub fn ceimpg_key(g: &GeneratorMatrix, geom: &Geometry, opts: &EquivOptions) -> Result<String> {
    geom.check(g)?;
    Ok(ceimpg_canon(g, geom, opts)?.canonical.serialize())
}

pub fn ceimpg_equiv(g1: &GeneratorMatrix, g2: &GeneratorMatrix, geom: &Geometry, opts: &EquivOptions) -> Result<Verdict> {
    check_pair(g1, g2, geom)?;
    let c1 = ceimpg_canon(g1, geom, opts)?;
    let c2 = ceimpg_canon(g2, geom, opts)?;
    let Some(sigma) = bmcanon::isomorphism_from(&c1, &c2) else {
        return Ok(Verdict::Inequivalent);
    };
    let chi = g1.characteristic_vector(geom.table())?;
    let point_map = chi.support().into_iter().map(|p| (p, sigma[p - 1] + 1)).collect();
    Ok(Verdict::EquivalentByCeimpg { point_map })
}

fn check_pair(g1: &GeneratorMatrix, g2: &GeneratorMatrix, geom: &Geometry) -> Result<()> {
    geom.check(g1)?;
    geom.check(g2)?;
    if g1.n() != g2.n() {
        return Err(Error::DimensionMismatch(format!("lengths {} and {}", g1.n(), g2.n())));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// monomial recovery

/// Outcome of [`monomial_from_sigma`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lift {
    /// `q·ρ⁻¹(G2) = G1·P_σ·diag(lambdas)`.
    Found { q: Matrix, lambdas: Vec<Elem> },
    NoLift,
    BudgetExceeded,
}

/// Linear system in `λ_1..λ_n` expressing `Q·E = (λ_{k+1} g_{i_{k+1}}, ...)`
/// with `Q = (λ_1 g_{i_1}, ..., λ_k g_{i_k})`, `i_s = σ⁻¹(s)`.
fn lift_system(g1: &GeneratorMatrix, e: &Matrix, inv_sigma: &[usize]) -> Matrix {
    let f = g1.field();
    let (k, n) = (g1.k(), g1.n());
    let cols: Vec<Vec<Elem>> = inv_sigma.iter().map(|&i| g1.column(i)).collect();
    let mut sys = Matrix::zeros(f, k * (n - k), n);
    for t in k..n {
        for r in 0..k {
            let row = (t - k) * k + r;
            for s in 0..k {
                sys[(row, s)] = f.mul(cols[s][r], e[(s, t)]);
            }
            sys[(row, t)] = f.neg(cols[t][r]);
        }
    }
    sys
}

/// Finds `Q` and `λ` with `Q·ρ⁻¹(G2) = G1·P_σ·diag(λ)`, where `G2` is in
/// the form `(I_k | E)`.
pub fn monomial_from_sigma(
    g1: &GeneratorMatrix,
    g2: &GeneratorMatrix,
    sigma: &[usize],
    rho: u32,
    span_cap: u64,
) -> Result<Lift> {
    let f = g1.field();
    let (k, n) = (g1.k(), g1.n());
    if g2.k() != k || g2.n() != n || **g2.field() != **f {
        return Err(Error::DimensionMismatch("codes of different parameters".into()));
    }
    if sigma.len() != n || !is_permutation(sigma) {
        return Err(Error::Domain("sigma is not a permutation of the coordinates".into()));
    }
    if rho >= f.m() {
        return Err(Error::Domain(format!("field automorphism index {} out of range", rho)));
    }
    let g2m = g2.matrix();
    if (0..k).any(|r| (0..k).any(|c| g2m[(r, c)] != (r == c) as Elem)) {
        return Err(Error::Domain("second generator matrix is not of the form (I | E)".into()));
    }
    let e = g2m.map_frobenius((f.m() - rho) % f.m());
    let inv_sigma = crate::lincode::invert_permutation(sigma);
    let sys = lift_system(g1, &e, &inv_sigma);
    let basis = sys.nullspace_basis();
    let lambdas = match all_nonzero_in_span(f, &basis, span_cap)? {
        SpanSearch::Found(v) => v,
        SpanSearch::NoneExists => return Ok(Lift::NoLift),
        SpanSearch::BudgetExceeded => return Ok(Lift::BudgetExceeded),
    };
    let mut q = Matrix::zeros(f, k, k);
    for s in 0..k {
        let col: Vec<Elem> = g1.column(inv_sigma[s]).iter().map(|&x| f.mul(lambdas[s], x)).collect();
        q.set_column(s, &col);
    }
    if q.inverse().is_none() {
        return Ok(Lift::NoLift);
    }
    Ok(Lift::Found { q, lambdas })
}

/// Lifts a column permutation `sigma` between `g1` and the original `g2`,
/// going through the systematic form `sys2` of `g2`.
fn lift_witness(
    g1: &GeneratorMatrix,
    sys2: &Systematic,
    sigma: &[usize],
    rho: u32,
    span_cap: u64,
) -> Result<Option<std::result::Result<EquivalenceWitness, ()>>> {
    let f = g1.field();
    let sigma_s: Vec<usize> = sigma.iter().map(|&j| sys2.perm[j]).collect();
    match monomial_from_sigma(g1, &sys2.matrix, &sigma_s, rho, span_cap)? {
        Lift::NoLift => Ok(None),
        Lift::BudgetExceeded => Ok(Some(Err(()))),
        Lift::Found { q, lambdas } => {
            let back = (f.m() - rho) % f.m();
            let lambdas = (0..sigma.len())
                .map(|s| {
                    let t = sys2.perm[s];
                    let mu = f.frobenius(sys2.scales[t], back);
                    f.div(lambdas[t], mu)
                })
                .collect::<Result<Vec<_>>>()?;
            let q = q.map_frobenius(rho).mul(&sys2.transform)?;
            Ok(Some(Ok(EquivalenceWitness {
                sigma: sigma.to_vec(),
                lambdas,
                rho,
                q,
            })))
        }
    }
}

// ---------------------------------------------------------------------------
// CESIMPG

/// Support matrix over the distinct points of a code: one column per point,
/// colored by multiplicity when some point repeats. `point_columns[c]`
/// lists the code columns on point `c`, in order.
fn build_point_support(
    g: &GeneratorMatrix,
    table: &PointTable,
    strip_full_rows: bool,
) -> Result<(ColoredBinaryMatrix, Vec<Vec<usize>>)> {
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut point_columns: Vec<Vec<usize>> = Vec::new();
    let mut points: Vec<usize> = Vec::new();
    for (j, p) in g.column_points(table)?.into_iter().enumerate() {
        let c = *slot.entry(p).or_insert_with(|| {
            points.push(p);
            point_columns.push(Vec::new());
            points.len() - 1
        });
        point_columns[c].push(j);
    }
    let f = g.field();
    let mut bits = BitMatrix::new(0, points.len());
    let mut row = vec![0u8; points.len()];
    for (_, u) in table.iter() {
        for (x, &p) in row.iter_mut().zip(&points) {
            *x = (f.dot(u, table.point(p)) != 0) as u8;
        }
        if strip_full_rows && row.iter().all(|&x| x == 1) {
            continue;
        }
        bits.push_row(&row);
    }
    let col_colors = if points.len() == g.n() {
        vec![0; points.len()]
    } else {
        point_columns.iter().map(|c| c.len() as u32).collect()
    };
    let rows = bits.rows();
    Ok((ColoredBinaryMatrix::new(bits, vec![0; rows], col_colors)?, point_columns))
}

/// Column permutation sending the columns of point `c` of `from`, in order,
/// to those of point `map[c]` of `to`.
fn expand(map: &[usize], from: &[Vec<usize>], to: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut sigma = vec![0; n];
    for (c, cols) in from.iter().enumerate() {
        for (&j, &t) in cols.iter().zip(&to[map[c]]) {
            sigma[j] = t;
        }
    }
    sigma
}

/// Per-code data reused across comparisons.
///
/// Columns on the same point give identical columns of the support matrix,
/// and swapping them never changes whether a permutation lifts to a
/// monomial map, so the support matrix is canonicalized over distinct
/// points only.
#[derive(Debug, Clone)]
pub struct PreparedCode {
    pub code: GeneratorMatrix,
    systematic: Systematic,
    point_columns: Vec<Vec<usize>>,
    support: CanonResult,
}

impl PreparedCode {
    pub fn new(g: &GeneratorMatrix, geom: &Geometry, opts: &EquivOptions) -> Result<PreparedCode> {
        geom.check(g)?;
        let (m, point_columns) = build_point_support(g, geom.table(), opts.strip_full_rows)?;
        Ok(PreparedCode {
            code: g.clone(),
            systematic: g.systematic_form(),
            point_columns,
            support: bmcanon::canonical_form_with(&m, opts.canon)?,
        })
    }

    /// Serialized canonical form of the support matrix; equal for
    /// equivalent codes.
    pub fn shortened_key(&self) -> String {
        self.support.canonical.serialize()
    }

    /// Order of the automorphism group of the shortened matrix.
    pub fn shortened_group_order(&self) -> BigUint {
        let mut order = self.support.group_order.clone();
        for cols in &self.point_columns {
            for i in 2..=cols.len() {
                order *= i;
            }
        }
        order
    }

    /// Generators of the automorphism group of the shortened matrix, as
    /// column permutations.
    pub fn shortened_generators(&self) -> Vec<Vec<usize>> {
        let n = self.code.n();
        let pc = &self.point_columns;
        let mut gens: Vec<Vec<usize>> = self.support.generators.iter().map(|g| expand(g, pc, pc, n)).collect();
        for cols in pc.iter().filter(|c| c.len() > 1) {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(cols[0], cols[1]);
            gens.push(swap);
            if cols.len() > 2 {
                let mut cycle: Vec<usize> = (0..n).collect();
                for (i, &j) in cols.iter().enumerate() {
                    cycle[j] = cols[(i + 1) % cols.len()];
                }
                gens.push(cycle);
            }
        }
        gens
    }
}

enum Attempt {
    Decided(Verdict),
    Undecided,
}

fn cesimpg_prepared(a: &PreparedCode, b: &PreparedCode, opts: &EquivOptions) -> Result<Attempt> {
    let Some(sigma) = bmcanon::isomorphism_from(&a.support, &b.support) else {
        return Ok(Attempt::Decided(Verdict::Inequivalent));
    };
    let points = a.point_columns.len();
    let Some(group) = bmcanon::group_elements(&a.support.generators, points, opts.coset_cap) else {
        return Ok(Attempt::Undecided);
    };
    let n = a.code.n();
    let m = a.code.field().m();
    let mut budget_hit = false;
    for tau in &group {
        let map: Vec<usize> = tau.iter().map(|&t| sigma[t]).collect();
        let candidate = expand(&map, &a.point_columns, &b.point_columns, n);
        for rho in 0..m {
            match lift_witness(&a.code, &b.systematic, &candidate, rho, opts.span_cap)? {
                Some(Ok(w)) => {
                    debug_assert!(verify_witness(&a.code, &b.code, &w));
                    return Ok(Attempt::Decided(Verdict::Equivalent(w)));
                }
                Some(Err(())) => budget_hit = true,
                None => {}
            }
        }
    }
    Ok(if budget_hit {
        Attempt::Undecided
    } else {
        Attempt::Decided(Verdict::Inequivalent)
    })
}

fn is_budget(e: &Error) -> bool {
    matches!(e, Error::BudgetExceeded(_))
}

/// Equivalence through shortened matrices only; `None` when a search limit
/// was hit before a conclusive answer.
pub fn cesimpg_only(
    g1: &GeneratorMatrix,
    g2: &GeneratorMatrix,
    geom: &Geometry,
    opts: &EquivOptions,
) -> Result<Option<Verdict>> {
    check_pair(g1, g2, geom)?;
    let prepared = PreparedCode::new(g1, geom, opts).and_then(|a| Ok((a, PreparedCode::new(g2, geom, opts)?)));
    let attempt = match prepared {
        Ok((a, b)) => cesimpg_prepared(&a, &b, opts),
        Err(e) if is_budget(&e) => Ok(Attempt::Undecided),
        Err(e) => Err(e),
    };
    Ok(match attempt? {
        Attempt::Decided(v) => Some(v),
        Attempt::Undecided => None,
    })
}

/// Equivalence through shortened matrices, with an explicit witness when the
/// codes are equivalent. Falls back to [`ceimpg_equiv`] when a search limit
/// is hit.
pub fn cesimpg_equiv(g1: &GeneratorMatrix, g2: &GeneratorMatrix, geom: &Geometry, opts: &EquivOptions) -> Result<Verdict> {
    match cesimpg_only(g1, g2, geom, opts)? {
        Some(v) => Ok(v),
        None => ceimpg_equiv(g1, g2, geom, opts),
    }
}

// ---------------------------------------------------------------------------
// automorphisms

#[derive(Debug, Clone)]
pub struct AutGenerator {
    /// Generator of the shortened matrix's group; `tau[j]` is the image of `j`.
    pub tau: Vec<usize>,
    /// A monomial automorphism `Q·G = ρ(G·P_τ·D)` over it, if one was found.
    pub witness: Option<EquivalenceWitness>,
}

#[derive(Debug, Clone)]
pub struct AutomorphismReport {
    pub generators: Vec<AutGenerator>,
    /// Order of the column permutation group of the shortened matrix.
    pub permutation_group_order: BigUint,
    /// Order of the group of diagonal automorphisms `diag(λ)` with `Q·G = G·diag(λ)`.
    pub scalar_group_order: BigUint,
    /// Every generator lifted to a monomial automorphism.
    pub complete: bool,
    /// Order of the monomial automorphism group; only for prime fields with
    /// a complete lift.
    pub code_order: Option<BigUint>,
}

pub fn code_aut_group(g: &GeneratorMatrix, geom: &Geometry, opts: &EquivOptions) -> Result<AutomorphismReport> {
    let prepared = PreparedCode::new(g, geom, opts)?;
    let f = g.field();
    let mut complete = true;
    let mut generators = Vec::new();
    for tau in prepared.shortened_generators() {
        let mut witness = None;
        for rho in 0..f.m() {
            match lift_witness(g, &prepared.systematic, &tau, rho, opts.span_cap)? {
                Some(Ok(w)) => {
                    witness = Some(w);
                    break;
                }
                Some(Err(())) => return Err(Error::BudgetExceeded("all-nonzero span search".into())),
                None => {}
            }
        }
        complete &= witness.is_some();
        generators.push(AutGenerator { tau, witness });
    }
    let sys = &prepared.systematic;
    let sigma_s: Vec<usize> = (0..g.n()).map(|j| sys.perm[j]).collect();
    let e = sys.matrix.matrix().clone();
    let kernel_dim = lift_system(g, &e, &crate::lincode::invert_permutation(&sigma_s))
        .nullspace_basis()
        .len();
    let scalar_group_order = BigUint::from(f.q() - 1).pow(kernel_dim as u32);
    let permutation_group_order = prepared.shortened_group_order();
    let code_order = (complete && f.is_prime_field()).then(|| &scalar_group_order * &permutation_group_order);
    Ok(AutomorphismReport {
        generators,
        permutation_group_order,
        scalar_group_order,
        complete,
        code_order,
    })
}

// ---------------------------------------------------------------------------
// batch classification

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ceimpg,
    Cesimpg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeClass {
    /// Index of the first member in the batch.
    pub representative: usize,
    pub members: Vec<usize>,
    /// Canonical key shared by the members. For CESIMPG this is the
    /// shortened key followed by `#` and a discriminator within it.
    pub key: String,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub classes: Vec<CodeClass>,
    /// Class index of every batch item, `None` for failed items.
    pub class_of: Vec<Option<usize>>,
    pub failures: Vec<(usize, Error)>,
}

fn in_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    Ok(pool.install(work))
}

/// Partitions `batch` into equivalence classes. Class order and
/// representatives follow first occurrence; `jobs` threads (0 for one per
/// core) only affect speed.
pub fn classify(
    batch: &[GeneratorMatrix],
    algorithm: Algorithm,
    geom: &Geometry,
    opts: &EquivOptions,
    jobs: usize,
) -> Result<Classification> {
    for g in batch {
        geom.check(g)?;
    }
    if let Some(g) = batch.iter().find(|g| g.n() != batch[0].n()) {
        return Err(Error::DimensionMismatch(format!("batch mixes lengths {} and {}", batch[0].n(), g.n())));
    }
    if algorithm == Algorithm::Ceimpg {
        geom.incidence()?;
    }
    let mut out = Classification {
        classes: Vec::new(),
        class_of: vec![None; batch.len()],
        failures: Vec::new(),
    };
    match algorithm {
        Algorithm::Ceimpg => {
            let keys: Vec<Result<String>> =
                in_pool(jobs, || batch.par_iter().map(|g| ceimpg_key(g, geom, opts)).collect())?;
            let mut index: HashMap<String, usize> = HashMap::new();
            for (i, key) in keys.into_iter().enumerate() {
                match key {
                    Ok(key) => {
                        let c = *index.entry(key.clone()).or_insert_with(|| {
                            out.classes.push(CodeClass {
                                representative: i,
                                members: Vec::new(),
                                key,
                            });
                            out.classes.len() - 1
                        });
                        out.classes[c].members.push(i);
                        out.class_of[i] = Some(c);
                    }
                    Err(e) => out.failures.push((i, e)),
                }
            }
        }
        Algorithm::Cesimpg => {
            let prepared: Vec<Result<PreparedCode>> =
                in_pool(jobs, || batch.par_iter().map(|g| PreparedCode::new(g, geom, opts)).collect())?;
            let mut buckets: HashMap<String, Vec<usize>> = HashMap::new();
            let mut fallback_keys: HashMap<usize, Result<String>> = HashMap::new();
            for (i, p) in prepared.iter().enumerate() {
                let p = match p {
                    Ok(p) => p,
                    Err(e) => {
                        out.failures.push((i, e.clone()));
                        continue;
                    }
                };
                let skey = p.shortened_key();
                let reps = buckets.entry(skey.clone()).or_default();
                let mut found = None;
                let mut error = None;
                for &c in reps.iter() {
                    let rep = out.classes[c].representative;
                    let a = prepared[rep].as_ref().expect("representatives are prepared");
                    let same = match cesimpg_prepared(a, p, opts) {
                        Ok(Attempt::Decided(v)) => Ok(v.is_equivalent()),
                        Ok(Attempt::Undecided) => {
                            let mut key = |j: usize| {
                                fallback_keys
                                    .entry(j)
                                    .or_insert_with(|| ceimpg_key(&batch[j], geom, opts))
                                    .clone()
                            };
                            key(rep).and_then(|kr| Ok(kr == key(i)?))
                        }
                        Err(e) => Err(e),
                    };
                    match same {
                        Ok(true) => {
                            found = Some(c);
                            break;
                        }
                        Ok(false) => {}
                        Err(e) => {
                            error = Some(e);
                            break;
                        }
                    }
                }
                if let Some(e) = error {
                    out.failures.push((i, e));
                    continue;
                }
                let c = match found {
                    Some(c) => c,
                    None => {
                        out.classes.push(CodeClass {
                            representative: i,
                            members: Vec::new(),
                            key: format!("{}#{}", skey, reps.len()),
                        });
                        reps.push(out.classes.len() - 1);
                        out.classes.len() - 1
                    }
                };
                out.classes[c].members.push(i);
                out.class_of[i] = Some(c);
            }
        }
    }
    Ok(out)
}
