//! Arithmetic in GF(q), q = p^m, for q up to 2^16.
//!
//! An element is a [`Elem`] integer `v` in `0..q`. For prime fields it is the
//! residue itself. For extension fields `v = c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! encodes the polynomial `c_0 + c_1 α + ... + c_{m-1} α^{m-1}`, where α is a
//! root of the field's modulus. The modulus is encoded the same way, leading
//! coefficient included, so `x^2 + x + 1` over GF(2) is `7`.
//!
//! Multiplication, inversion and Frobenius maps are table lookups; tables are
//! built once in [`Field::new`] and the field is immutable afterwards.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A field element under the base-p digit encoding.
pub type Elem = u16;

pub const MAX_ORDER: u32 = 1 << 16;

/// Default moduli for the small extension fields, as `(q, encoded modulus)`.
///
/// | q  | modulus           |
/// |----|-------------------|
/// | 4  | x^2 + x + 1       |
/// | 8  | x^3 + x + 1       |
/// | 9  | x^2 + 2x + 2      |
/// | 16 | x^4 + x + 1       |
/// | 25 | x^2 + 4x + 2      |
/// | 27 | x^3 + 2x + 1      |
///
/// Other extension fields default to the irreducible monic polynomial with
/// the smallest encoding.
pub const DEFAULT_MODULI: [(u32, u64); 6] = [(4, 7), (8, 11), (9, 17), (16, 19), (25, 47), (27, 34)];

#[derive(Clone)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    /// Modulus coefficients `c_0..=c_m`; empty for prime fields.
    modulus: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    neg: Vec<Elem>,
    /// Full addition table, only for q <= 256.
    add: Option<Vec<Elem>>,
    /// `frob[i][a] = a^(p^i)`.
    frob: Vec<Vec<Elem>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("q", &self.q)
            .field("modulus", &self.modulus_encoded())
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q` into `(p, m)` with `q = p^m`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 || q > MAX_ORDER as u64 {
        return None;
    }
    let q = q as u32;
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut m) = (q, 0);
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    (r == 1 && is_prime(p)).then_some((p, m))
}

fn digits(mut v: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = (v % p as u64) as u32;
        v /= p as u64;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u64 {
    ds.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d as u64)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is small; Fermat is fine.
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo the monic-or-not polynomial `f` over GF(p).
/// Coefficient vectors are lowest degree first.
fn poly_rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let df = f.iter().rposition(|&c| c != 0).expect("nonzero divisor");
    let lead_inv = inv_mod(f[df], p);
    loop {
        let Some(dr) = r.iter().rposition(|&c| c != 0) else {
            return r;
        };
        if dr < df {
            return r;
        }
        let c = r[dr] * lead_inv % p;
        let shift = dr - df;
        for (i, &fc) in f.iter().enumerate().take(df + 1) {
            r[i + shift] = (r[i + shift] + p - c * fc % p) % p;
        }
    }
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    if f[m] != 1 {
        return false;
    }
    if m <= 1 {
        return m == 1;
    }
    // Trial division by every monic polynomial of degree 1..=m/2.
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = digits(low, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// GF(q) with the default modulus when q is not prime.
    pub fn new(q: u64) -> Result<Arc<Field>> {
        let (p, m) = prime_power(q).ok_or(Error::InvalidFieldOrder(q))?;
        if m == 1 {
            return Ok(Arc::new(Self::build(p, 1, Vec::new())));
        }
        let modulus = match DEFAULT_MODULI.iter().find(|(dq, _)| *dq as u64 == q) {
            Some(&(_, enc)) => enc,
            None => Self::smallest_irreducible(p, m),
        };
        Self::with_modulus(q, modulus)
    }

    /// GF(q) with an explicit encoded modulus. For prime `q` the modulus is ignored.
    pub fn with_modulus(q: u64, modulus: u64) -> Result<Arc<Field>> {
        let (p, m) = prime_power(q).ok_or(Error::InvalidFieldOrder(q))?;
        if m == 1 {
            return Ok(Arc::new(Self::build(p, 1, Vec::new())));
        }
        let bad = Error::InvalidModulus { modulus, degree: m, p };
        let max = (p as u64).pow(m + 1);
        if modulus >= max {
            return Err(bad);
        }
        let coeffs = digits(modulus, p, m as usize + 1);
        if !is_irreducible(&coeffs, p) {
            return Err(bad);
        }
        Ok(Arc::new(Self::build(p, m, coeffs)))
    }

    fn smallest_irreducible(p: u32, m: u32) -> u64 {
        let base = (p as u64).pow(m);
        (0..base)
            .map(|low| low + base)
            .find(|&enc| is_irreducible(&digits(enc, p, m as usize + 1), p))
            .expect("an irreducible polynomial exists for every degree")
    }

    fn slow_mul(p: u32, m: u32, modulus: &[u32], a: u32, b: u32) -> u32 {
        if m == 1 {
            return ((a as u64 * b as u64) % p as u64) as u32;
        }
        let da = digits(a as u64, p, m as usize);
        let db = digits(b as u64, p, m as usize);
        let mut prod = vec![0u32; 2 * m as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let r = poly_rem(&prod, modulus, p);
        undigits(&r[..m as usize], p) as u32
    }

    fn slow_pow(p: u32, m: u32, modulus: &[u32], a: u32, mut e: u64) -> u32 {
        let (mut r, mut b) = (1u32, a);
        while e > 0 {
            if e & 1 == 1 {
                r = Self::slow_mul(p, m, modulus, r, b);
            }
            b = Self::slow_mul(p, m, modulus, b, b);
            e >>= 1;
        }
        r
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>) -> Field {
        let q = p.pow(m);
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| {
                order == 1
                    || factors
                        .iter()
                        .all(|&r| Self::slow_pow(p, m, &modulus, g, (order / r) as u64) != 1)
            })
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0 as Elem; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x as Elem;
            exp[(i + order) as usize] = x as Elem;
            log[x as usize] = i;
            x = Self::slow_mul(p, m, &modulus, x, generator);
        }

        let neg: Vec<Elem> = (0..q)
            .map(|a| {
                let ds: Vec<u32> = digits(a as u64, p, m as usize).iter().map(|&d| (p - d) % p).collect();
                undigits(&ds, p) as Elem
            })
            .collect();

        let add_digits = |a: u32, b: u32| -> Elem {
            if m == 1 {
                return ((a + b) % p) as Elem;
            }
            if p == 2 {
                return (a ^ b) as Elem;
            }
            let da = digits(a as u64, p, m as usize);
            let db = digits(b as u64, p, m as usize);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            undigits(&s, p) as Elem
        };
        let add = (q <= 256).then(|| {
            let mut t = vec![0 as Elem; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b);
                }
            }
            t
        });

        let mut field = Field {
            p,
            m,
            q,
            modulus,
            exp,
            log,
            neg,
            add,
            frob: Vec::new(),
        };
        field.frob = (0..m)
            .map(|i| {
                let e = p.pow(i) as u64;
                (0..q).map(|a| field.pow(a as Elem, e)).collect()
            })
            .collect();
        field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    /// The modulus under the base-p encoding, or `None` for prime fields.
    pub fn modulus_encoded(&self) -> Option<u64> {
        (self.m > 1).then(|| undigits(&self.modulus, self.p))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.add {
            return t[a as usize * self.q as usize + b as usize];
        }
        if self.m == 1 {
            return ((a as u32 + b as u32) % self.p) as Elem;
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (p, mut a, mut b) = (self.p, a as u32, b as u32);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.m {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out as Elem
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        let order = self.q - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// `a^(p^i)`, the i-th power of the Frobenius automorphism. `i` is taken mod m.
    #[inline]
    pub fn frobenius(&self, a: Elem, i: u32) -> Elem {
        self.frob[(i % self.m) as usize][a as usize]
    }

    /// Scales a nonzero vector so its first nonzero coordinate is 1.
    ///
    /// Returns the normalized vector and the removed scalar λ, so that
    /// `v = λ · normalized`.
    pub fn normalize_vector(&self, v: &[Elem]) -> Result<(Vec<Elem>, Elem)> {
        let mut out = v.to_vec();
        let lambda = self.normalize_in_place(&mut out)?;
        Ok((out, lambda))
    }

    pub fn normalize_in_place(&self, v: &mut [Elem]) -> Result<Elem> {
        let lambda = *v.iter().find(|&&x| x != 0).ok_or(Error::ZeroVector)?;
        if lambda != 1 {
            let li = self.inv(lambda)?;
            for x in v.iter_mut() {
                *x = self.mul(*x, li);
            }
        }
        Ok(lambda)
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}
