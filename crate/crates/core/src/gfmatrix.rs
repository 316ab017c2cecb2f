//! Dense matrices over GF(q): products, reduced row echelon form, inverse,
//! nullspace, and the search for an all-nonzero vector in a subspace.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gfield::{Elem, Field};

/// Default number of candidates [`all_nonzero_in_span`] may examine.
pub const DEFAULT_SPAN_CAP: u64 = 1_000_000;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix over GF({}) {}x{}", self.field.q(), self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Output of [`Matrix::rref`]: `transform · A = reduced`.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub transform: Matrix,
}

impl Matrix {
    pub fn zeros(field: &Arc<Field>, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Arc<Field>, n: usize) -> Matrix {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(field: &Arc<Field>, rows: &[Vec<Elem>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    r.len(),
                    cols
                )));
            }
            if let Some(&bad) = r.iter().find(|&&x| x as u32 >= field.q()) {
                return Err(Error::Domain(format!("entry {} is not an element of GF({})", bad, field.q())));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_columns(field: &Arc<Field>, height: usize, columns: &[Vec<Elem>]) -> Result<Matrix> {
        let mut m = Self::zeros(field, height, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != height {
                return Err(Error::DimensionMismatch(format!("column {} has length {}, expected {}", j, c.len(), height)));
            }
            m.set_column(j, c);
        }
        Ok(m)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[Elem]) {
        for (r, &v) in values.iter().enumerate() {
            self[(r, c)] = v;
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch(self.field.q(), other.field.q()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0 {
                    continue;
                }
                let brow = other.row(l);
                let orow = out.row_mut(i);
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = f.add(*o, f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{} columns vs vector of length {}", self.cols, x.len())));
        }
        Ok((0..self.rows).map(|r| self.field.dot(self.row(r), x)).collect())
    }

    /// Applies a field automorphism `a -> a^(p^i)` to every entry.
    pub fn map_frobenius(&self, i: u32) -> Matrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = self.field.frobenius(*x, i);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn rref(&self) -> Echelon {
        let f = &self.field;
        let mut r = self.clone();
        let mut t = Self::identity(f, self.rows);
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(pr) = (lead..self.rows).find(|&i| r[(i, c)] != 0) else {
                continue;
            };
            r.swap_rows(pr, lead);
            t.swap_rows(pr, lead);
            let inv = f.inv(r[(lead, c)]).expect("pivot is nonzero");
            r.scale_row(lead, inv);
            t.scale_row(lead, inv);
            for i in 0..self.rows {
                if i != lead && r[(i, c)] != 0 {
                    let factor = f.neg(r[(i, c)]);
                    r.add_row_multiple(i, lead, factor);
                    t.add_row_multiple(i, lead, factor);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        Echelon {
            reduced: r,
            rank: pivots.len(),
            pivots,
            transform: t,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let e = self.rref();
        (e.rank == self.rows).then_some(e.transform)
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, in reduced form:
    /// basis vector `i` is 1 at its own free column and 0 at every other free column.
    pub fn nullspace_basis(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let e = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &e.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![0; self.cols];
                x[free] = 1;
                for (row, &pc) in e.pivots.iter().enumerate() {
                    x[pc] = f.neg(e.reduced[(row, free)]);
                }
                x
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: Elem) {
        let f = self.field.clone();
        for x in self.row_mut(r) {
            *x = f.mul(*x, s);
        }
    }

    /// row[dst] += s · row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, s: Elem) {
        let f = self.field.clone();
        for c in 0..self.cols {
            let v = f.mul(self.data[src * self.cols + c], s);
            let d = &mut self.data[dst * self.cols + c];
            *d = f.add(*d, v);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;

    fn index(&self, (r, c): (usize, usize)) -> &Elem {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Elem {
        &mut self.data[r * self.cols + c]
    }
}

/// Outcome of [`all_nonzero_in_span`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanSearch {
    Found(Vec<Elem>),
    /// The search was exhaustive and no vector of the span has all coordinates nonzero.
    NoneExists,
    /// More than `cap` candidates would be needed.
    BudgetExceeded,
}

/// Looks for a vector in the span of `basis` with every coordinate nonzero.
///
/// The basis is first brought to reduced echelon form, so each coefficient
/// of a combination appears verbatim at a pivot coordinate. Only combinations
/// with all coefficients nonzero can qualify, and since the property is
/// invariant under scaling the first coefficient is fixed to 1. Coefficients
/// are assigned by backtracking; every other coordinate is checked as soon as
/// all coefficients it depends on are known.
///
/// The search is exhaustive, and never reports [`SpanSearch::BudgetExceeded`],
/// whenever `(q-1)^(dim-1) <= cap`.
pub fn all_nonzero_in_span(field: &Arc<Field>, basis: &[Vec<Elem>], cap: u64) -> Result<SpanSearch> {
    let Some(len) = basis.first().map(Vec::len) else {
        return Ok(SpanSearch::NoneExists);
    };
    if len == 0 {
        // the empty vector vacuously has no zero coordinate
        return Ok(SpanSearch::Found(Vec::new()));
    }
    let e = Matrix::from_rows(field, basis)?.rref();
    let reduced: Vec<&[Elem]> = (0..e.rank).map(|r| e.reduced.row(r)).collect();
    let dim = reduced.len();
    if dim == 0 {
        return Ok(SpanSearch::NoneExists);
    }
    // last[j]: the deepest basis vector touching coordinate j
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for j in 0..len {
        match (0..dim).rev().find(|&i| reduced[i][j] != 0) {
            Some(i) => checks[i].push(j),
            None => return Ok(SpanSearch::NoneExists),
        }
    }

    let q1 = (field.q() - 1) as u64;
    let exhaustive_leaves = q1.checked_pow(dim as u32 - 1).unwrap_or(u64::MAX);
    // interior nodes at most double the leaf count for q >= 3
    let node_limit = if exhaustive_leaves <= cap {
        u64::MAX
    } else {
        cap.saturating_mul(2).saturating_add(dim as u64)
    };

    struct Frame {
        coeff: Elem,
        partial: Vec<Elem>,
    }
    let mut nodes = 0u64;
    let mut stack: Vec<Frame> = Vec::with_capacity(dim);
    let mut partial = vec![0 as Elem; len];
    let mut coeff: Elem = 1;
    loop {
        // try assigning `coeff` at depth stack.len()
        let depth = stack.len();
        nodes += 1;
        if nodes > node_limit {
            return Ok(SpanSearch::BudgetExceeded);
        }
        let mut next = partial.clone();
        for (x, &b) in next.iter_mut().zip(reduced[depth].iter()) {
            if b != 0 {
                *x = field.add(*x, field.mul(coeff, b));
            }
        }
        let ok = checks[depth].iter().all(|&j| next[j] != 0);
        if ok && depth + 1 == dim {
            return Ok(SpanSearch::Found(next));
        }
        if ok {
            stack.push(Frame {
                coeff,
                partial: std::mem::replace(&mut partial, next),
            });
            coeff = 1;
            continue;
        }
        // advance to the next coefficient, backtracking as needed
        loop {
            let depth = stack.len();
            if depth > 0 && (coeff as u32) + 1 < field.q() {
                coeff += 1;
                break;
            }
            let Some(frame) = stack.pop() else {
                return Ok(SpanSearch::NoneExists);
            };
            partial = frame.partial;
            coeff = frame.coeff;
            if stack.is_empty() {
                // the first coefficient stays fixed at 1
                return Ok(SpanSearch::NoneExists);
            }
        }
    }
}
