//! Points and hyperplanes of PG(k-1, q).
//!
//! Points are represented by normalized vectors (first nonzero coordinate 1)
//! and listed in lexicographic order of their coordinates, leftmost
//! coordinate most significant, each coordinate compared by its integer
//! encoding. Point indices in this API are 1-based.

use std::sync::Arc;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::gfield::{Elem, Field};
use crate::gfmatrix::Matrix;

/// Largest point table that will be built.
pub const MAX_POINTS: u64 = 1 << 22;
/// Largest θ for which the θ×θ incidence matrix will be built.
pub const MAX_INCIDENCE: u64 = 1 << 14;

/// Number of points of PG(r, q): `(q^(r+1) - 1) / (q - 1)`.
///
/// Saturates at `u64::MAX`.
pub fn theta(r: u32, q: u64) -> u64 {
    let mut sum: u64 = 0;
    let mut power: u64 = 1;
    for _ in 0..=r {
        sum = sum.saturating_add(power);
        power = power.saturating_mul(q);
    }
    sum
}

#[derive(Debug, Clone)]
pub struct PointTable {
    field: Arc<Field>,
    k: usize,
    /// θ·k coordinates, point after point.
    coords: Vec<Elem>,
}

impl PointTable {
    pub fn new(field: &Arc<Field>, k: usize) -> Result<PointTable> {
        if k == 0 {
            return Err(Error::Domain("projective dimension requires k >= 1".into()));
        }
        let q = field.q() as u64;
        let count = theta(k as u32 - 1, q);
        if count > MAX_POINTS {
            return Err(Error::Resource(format!("PG({}, {}) has {} points, limit is {}", k - 1, q, count, MAX_POINTS)));
        }
        let mut coords = Vec::with_capacity(count as usize * k);
        for lead in (0..k).rev() {
            let tail = k - 1 - lead;
            for t in 0..q.pow(tail as u32) {
                coords.extend(std::iter::repeat_n(0, lead));
                coords.push(1);
                let start = coords.len();
                coords.extend(std::iter::repeat_n(0, tail));
                let mut t = t;
                for i in (0..tail).rev() {
                    coords[start + i] = (t % q) as Elem;
                    t /= q;
                }
            }
        }
        Ok(PointTable {
            field: field.clone(),
            k,
            coords,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinates of point `index` (1-based).
    pub fn point(&self, index: usize) -> &[Elem] {
        let i = index - 1;
        &self.coords[i * self.k..(i + 1) * self.k]
    }

    /// Points in table order, paired with their 1-based index.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &[Elem])> {
        self.coords.chunks_exact(self.k).enumerate().map(|(i, p)| (i + 1, p))
    }

    /// 1-based index of a normalized vector, computed from its coordinates.
    pub fn index_of(&self, v: &[Elem]) -> Option<usize> {
        if v.len() != self.k {
            return None;
        }
        let lead = v.iter().position(|&x| x != 0)?;
        if v[lead] != 1 {
            return None;
        }
        let q = self.field.q() as u64;
        let before = theta((self.k - 1 - lead) as u32, q) - q.pow((self.k - 1 - lead) as u32);
        let tail = v[lead + 1..].iter().fold(0u64, |acc, &x| acc * q + x as u64);
        Some((before + tail) as usize + 1)
    }

    /// Index of the point represented by any nonzero vector, and the scalar λ
    /// with `v = λ · point`.
    pub fn locate(&self, v: &[Elem]) -> Result<(usize, Elem)> {
        if v.len() != self.k {
            return Err(Error::DimensionMismatch(format!("vector of length {} in PG({}, q)", v.len(), self.k - 1)));
        }
        let (n, lambda) = self.field.normalize_vector(v)?;
        Ok((self.index_of(&n).expect("normalized vectors are points"), lambda))
    }

    /// The k×θ matrix whose columns are the points in table order; it
    /// generates the simplex code.
    pub fn simplex_generator(&self) -> Matrix {
        let mut g = Matrix::zeros(&self.field, self.k, self.len());
        for (i, p) in self.iter() {
            g.set_column(i - 1, p);
        }
        g
    }
}

/// The normalized Gram matrix of the simplex generator: entry `(i, j)` is 1
/// iff `u_i · u_j ≠ 0`, i.e. iff point `j` is off the hyperplane `π(u_i)`.
#[derive(Debug, Clone)]
pub struct IncidenceMatrix {
    k: usize,
    q: u32,
    bits: BitMatrix,
}

impl IncidenceMatrix {
    pub fn new(table: &PointTable) -> Result<IncidenceMatrix> {
        let n = table.len();
        if n as u64 > MAX_INCIDENCE {
            return Err(Error::Resource(format!("incidence matrix of {} points exceeds limit {}", n, MAX_INCIDENCE)));
        }
        let f = table.field();
        let mut bits = BitMatrix::new(n, n);
        for (i, u) in table.iter() {
            for (j, v) in table.iter().skip(i - 1) {
                if f.dot(u, v) != 0 {
                    bits.set(i - 1, j - 1, true);
                    bits.set(j - 1, i - 1, true);
                }
            }
        }
        Ok(IncidenceMatrix {
            k: table.k(),
            q: f.q(),
            bits,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn size(&self) -> usize {
        self.bits.rows()
    }

    /// True iff point `j` lies on hyperplane `π(u_i)` (both 1-based).
    pub fn on_hyperplane(&self, i: usize, j: usize) -> bool {
        !self.bits.get(i - 1, j - 1)
    }
}

/// Convenience: point table and incidence matrix for `(k, q)`.
pub fn incidence(field: &Arc<Field>, k: usize) -> Result<IncidenceMatrix> {
    IncidenceMatrix::new(&PointTable::new(field, k)?)
}
