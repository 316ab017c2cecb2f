//! Linear codes as generator matrices and as characteristic vectors over the
//! points of PG(k-1, q).

use std::sync::Arc;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gfield::{Elem, Field};
use crate::gfmatrix::Matrix;
use crate::projgeom::{IncidenceMatrix, PointTable};

/// Generator matrix of a full-length `[n, k]_q` code: rank `k`, no zero column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    matrix: Matrix,
}

/// A code of dimension `k` as a multiset of points: `counts[u - 1]` is the
/// number of columns representing point `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacteristicVector {
    k: usize,
    q: u32,
    counts: Vec<u32>,
}

/// `(I_k | E)` form of a generator matrix.
///
/// With `P` the permutation matrix of `perm` and `D = diag(scales)`,
/// `matrix = transform · G · P · D`: original column `j` ends up at position
/// `perm[j]`, multiplied by `scales[perm[j]]`.
#[derive(Debug, Clone)]
pub struct Systematic {
    pub matrix: GeneratorMatrix,
    pub perm: Vec<usize>,
    pub scales: Vec<Elem>,
    pub transform: Matrix,
}

/// `ρ(G · P_σ · diag(λ))`: column `j` of `g` moves to position `sigma[j]`,
/// position `s` is scaled by `lambdas[s]`, then the Frobenius power `rho` is
/// applied entrywise.
pub fn apply_monomial(g: &Matrix, sigma: &[usize], lambdas: &[Elem], rho: u32) -> Result<Matrix> {
    let n = g.cols();
    if sigma.len() != n || lambdas.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "monomial of size {}/{} applied to {} columns",
            sigma.len(),
            lambdas.len(),
            n
        )));
    }
    if !is_permutation(sigma) {
        return Err(Error::Domain("sigma is not a permutation".into()));
    }
    let f = g.field();
    let mut out = Matrix::zeros(f, g.rows(), n);
    for (j, &s) in sigma.iter().enumerate() {
        for r in 0..g.rows() {
            out[(r, s)] = f.frobenius(f.mul(g[(r, j)], lambdas[s]), rho);
        }
    }
    Ok(out)
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

pub fn invert_permutation(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

impl GeneratorMatrix {
    pub fn new(matrix: Matrix) -> Result<GeneratorMatrix> {
        if matrix.rows() == 0 || matrix.cols() == 0 {
            return Err(Error::Domain("a code needs k >= 1 and n >= 1".into()));
        }
        if let Some(c) = (0..matrix.cols()).find(|&c| (0..matrix.rows()).all(|r| matrix[(r, c)] == 0)) {
            return Err(Error::Domain(format!("column {} is zero; the code is not of full length", c + 1)));
        }
        let rank = matrix.rank();
        if rank != matrix.rows() {
            return Err(Error::Domain(format!("rank {} is less than the number of rows {}", rank, matrix.rows())));
        }
        Ok(GeneratorMatrix { matrix })
    }

    pub fn from_rows(field: &Arc<Field>, rows: &[Vec<Elem>]) -> Result<GeneratorMatrix> {
        Self::new(Matrix::from_rows(field, rows)?)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn field(&self) -> &Arc<Field> {
        self.matrix.field()
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        self.matrix.column(j)
    }

    /// The same code with every column normalized.
    pub fn column_normalized(&self) -> GeneratorMatrix {
        let f = self.field();
        let mut m = self.matrix.clone();
        for j in 0..self.n() {
            let mut c = m.column(j);
            f.normalize_in_place(&mut c).expect("full-length code has no zero column");
            m.set_column(j, &c);
        }
        GeneratorMatrix { matrix: m }
    }

    /// Point index (1-based) of every column.
    pub fn column_points(&self, table: &PointTable) -> Result<Vec<usize>> {
        self.check_table(table)?;
        (0..self.n()).map(|j| table.locate(&self.column(j)).map(|(i, _)| i)).collect()
    }

    fn check_table(&self, table: &PointTable) -> Result<()> {
        if table.k() != self.k() || **table.field() != **self.field() {
            return Err(Error::DimensionMismatch(format!(
                "code over GF({}) with k = {} against PG({}, {})",
                self.field().q(),
                self.k(),
                table.k() - 1,
                table.field().q()
            )));
        }
        Ok(())
    }

    pub fn characteristic_vector(&self, table: &PointTable) -> Result<CharacteristicVector> {
        let mut counts = vec![0u32; table.len()];
        for i in self.column_points(table)? {
            counts[i - 1] += 1;
        }
        Ok(CharacteristicVector {
            k: self.k(),
            q: self.field().q(),
            counts,
        })
    }

    pub fn is_projective(&self, table: &PointTable) -> Result<bool> {
        Ok(self.characteristic_vector(table)?.is_projective())
    }

    /// Brings the matrix to `(I_k | E)` with normalized columns in `E`.
    ///
    /// Pivots are chosen row by row, taking the first column (in original
    /// order) with a nonzero entry in the current row, so an input already
    /// of the form `(I_k | E)` keeps the identity permutation.
    pub fn systematic_form(&self) -> Systematic {
        let f = self.field().clone();
        let (k, n) = (self.k(), self.n());
        let mut r = self.matrix.clone();
        let mut t = Matrix::identity(&f, k);
        let mut pivots = Vec::with_capacity(k);
        let mut used = vec![false; n];
        for s in 0..k {
            let c = (0..n)
                .find(|&c| !used[c] && r[(s, c)] != 0)
                .expect("rank k leaves a nonzero entry in every row");
            used[c] = true;
            pivots.push(c);
            let inv = f.inv(r[(s, c)]).expect("pivot is nonzero");
            for row in [&mut r, &mut t] {
                for x in row.row_mut(s) {
                    *x = f.mul(*x, inv);
                }
            }
            for i in (0..k).filter(|&i| i != s) {
                let factor = f.neg(r[(i, c)]);
                if factor == 0 {
                    continue;
                }
                for m in [&mut r, &mut t] {
                    for col in 0..m.cols() {
                        let v = f.mul(m[(s, col)], factor);
                        m[(i, col)] = f.add(m[(i, col)], v);
                    }
                }
            }
        }
        let order: Vec<usize> = pivots.iter().copied().chain((0..n).filter(|&c| !used[c])).collect();
        let perm = invert_permutation(&order);
        let mut out = Matrix::zeros(&f, k, n);
        let mut scales = vec![1; n];
        for (s, &c) in order.iter().enumerate() {
            let mut col = r.column(c);
            if s >= k {
                let lambda = f.normalize_in_place(&mut col).expect("no zero column");
                scales[s] = f.inv(lambda).expect("nonzero");
            }
            out.set_column(s, &col);
        }
        Systematic {
            matrix: GeneratorMatrix { matrix: out },
            perm,
            scales,
            transform: t,
        }
    }

    /// All `q^k` codewords, in the order of their message vectors.
    pub fn codewords(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        let q = self.field().q() as u64;
        let k = self.k();
        let t = self.matrix.transpose();
        (0..q.pow(k as u32)).map(move |mut code| {
            let msg: Vec<Elem> = (0..k)
                .map(|_| {
                    let d = (code % q) as Elem;
                    code /= q;
                    d
                })
                .collect();
            t.mul_vec(&msg).expect("dimensions agree")
        })
    }
}

impl CharacteristicVector {
    pub fn new(k: usize, q: u32, counts: Vec<u32>) -> CharacteristicVector {
        CharacteristicVector { k, q, counts }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Code length: the sum of all multiplicities.
    pub fn n(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_projective(&self) -> bool {
        self.counts.iter().all(|&c| c <= 1)
    }

    /// 1-based indices of the points with nonzero multiplicity.
    pub fn support(&self) -> Vec<usize> {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, _)| i + 1).collect()
    }

    /// Generator matrix listing every point `u` `counts[u-1]` times, in index order.
    pub fn to_code(&self, table: &PointTable) -> Result<GeneratorMatrix> {
        if table.len() != self.counts.len() || table.k() != self.k || table.field().q() != self.q {
            return Err(Error::DimensionMismatch(format!(
                "characteristic vector of length {} against a table of {} points",
                self.counts.len(),
                table.len()
            )));
        }
        let columns: Vec<Vec<Elem>> = self
            .counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(table.point(i + 1).to_vec(), c as usize))
            .collect();
        if columns.is_empty() {
            return Err(Error::Domain("empty characteristic vector".into()));
        }
        let m = Matrix::from_columns(table.field(), self.k, &columns)?;
        if m.rank() < self.k {
            return Err(Error::Domain(format!("support does not span GF({})^{}", self.q, self.k)));
        }
        GeneratorMatrix::new(m)
    }

    /// Minimum distance from hyperplane multiplicities: the smallest number of
    /// points (with multiplicity) off any hyperplane.
    ///
    /// A result of 0 means some hyperplane contains every point, i.e. the
    /// points do not span the space and there is no dimension-k code.
    pub fn min_distance(&self, incidence: &IncidenceMatrix) -> Result<usize> {
        if incidence.size() != self.counts.len() {
            return Err(Error::DimensionMismatch(format!(
                "incidence of size {} against characteristic vector of length {}",
                incidence.size(),
                self.counts.len()
            )));
        }
        let bits = incidence.bits();
        Ok((0..bits.rows())
            .map(|i| bits.row_ones(i).map(|j| self.counts[j] as usize).sum())
            .min()
            .unwrap_or(0))
    }
}

/// A random full-length code of rank `k` whose columns are normalized points
/// drawn uniformly, with replacement unless `projective`.
pub fn random_code_with<R: Rng>(
    rng: &mut R,
    table: &PointTable,
    n: usize,
    projective: bool,
) -> Result<GeneratorMatrix> {
    let k = table.k();
    let theta = table.len();
    if n < k {
        return Err(Error::Domain(format!("length {} cannot carry a code of dimension {}", n, k)));
    }
    if projective && n > theta {
        return Err(Error::Domain(format!("a projective code in PG({}, q) has at most {} points", k - 1, theta)));
    }
    const ATTEMPTS: usize = 10_000;
    for _ in 0..ATTEMPTS {
        let picks: Vec<usize> = if projective {
            index::sample(rng, theta, n).into_vec()
        } else {
            (0..n).map(|_| rng.gen_range(0..theta)).collect()
        };
        let columns: Vec<Vec<Elem>> = picks.iter().map(|&i| table.point(i + 1).to_vec()).collect();
        let m = Matrix::from_columns(table.field(), k, &columns)?;
        if m.rank() == k {
            return GeneratorMatrix::new(m);
        }
    }
    Err(Error::Domain(format!("no rank-{} draw after {} attempts", k, ATTEMPTS)))
}

/// Seeded wrapper around [`random_code_with`].
pub fn random_code(table: &PointTable, n: usize, seed: u64, projective: bool) -> Result<GeneratorMatrix> {
    random_code_with(&mut ChaCha8Rng::seed_from_u64(seed), table, n, projective)
}

/// `count` codes from one seeded stream.
pub fn random_codes(table: &PointTable, n: usize, count: usize, seed: u64, projective: bool) -> Result<Vec<GeneratorMatrix>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_code_with(&mut rng, table, n, projective)).collect()
}
