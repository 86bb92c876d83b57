//! Exact linear algebra over the rationals.
//!
//! Determinants and ranks are computed fraction-free: rows are cleared of
//! denominators and eliminated with Bareiss' integer-preserving update.
//! Large integer determinants switch to a multimodular route (one
//! elimination per 62-bit prime, Chinese remaindering up to the Hadamard
//! bound), which is exact and much cheaper than growing big integers.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type ExactScalar = BigRational;

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ExactScalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ExactScalar::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| int(x)).collect())
    }

    /// Builds a matrix from integer rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| int(x)).collect();
        Ok(ExactMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[ExactScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn block_diag(&self, other: &ExactMatrix) -> ExactMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Rows scaled by the lcm of their denominators, and the product of the
    /// scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            out.push(
                row.iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect(),
            );
            scale *= lcm;
        }
        (out, scale)
    }

    pub fn det_exact(&self) -> Result<ExactScalar> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let (rows, scale) = self.integer_rows();
        Ok(BigRational::new(det_integer(rows), scale))
    }

    pub fn rank_exact(&self) -> usize {
        rank_bareiss(self.integer_rows().0)
    }

    /// Dimension of the right kernel.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank_exact()
    }

    /// Basis of the right kernel, read off the reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<ExactScalar>> {
        let (rref, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![ExactScalar::zero(); self.cols];
            v[free] = ExactScalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, ExactScalar::one());
        }
        let (rref, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, rref.get(r, n + c).clone());
            }
        }
        Some(out)
    }
}

pub fn int(x: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact determinant of an integer matrix, choosing the cheaper route.
pub fn det_integer(rows: Vec<Vec<BigInt>>) -> BigInt {
    let n = rows.len();
    if n >= 6 {
        if let Some(small) = to_i64_rows(&rows) {
            if let Some(d) = det_multimodular(&small) {
                return d;
            }
        }
    }
    det_bareiss(rows)
}

fn to_i64_rows(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
        .collect()
}

/// Bareiss fraction-free elimination; every intermediate entry is a minor of
/// the input, so all divisions are exact.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let v = (&row[j] * &pivot_row[k] - &row[k] * &pivot_row[j]) / &prev;
                row[j] = v;
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rank by fraction-free echelon reduction.
pub fn rank_bareiss(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            for j in c + 1..cols {
                let v = (&row[j] * &pivot_row[c] - &row[c] * &pivot_row[j]) / &prev;
                row[j] = v;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

const PRIME_POOL: usize = 96;

/// The largest primes below 2^62, descending.
pub fn large_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_POOL);
        let mut c = (1u64 << 62) - 1;
        while out.len() < PRIME_POOL {
            if is_prime(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce_i64(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

fn reduce_big(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// Determinant modulo a prime `p` (< 2^63).
pub fn det_mod(rows: &[Vec<BigInt>], p: u64) -> u64 {
    let m = rows
        .iter()
        .map(|r| r.iter().map(|x| reduce_big(x, p)).collect())
        .collect();
    det_mod_reduced(m, p)
}

fn det_mod_reduced(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| m[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            m.swap(piv, k);
            det = (p - det) % p;
        }
        det = mul_mod(det, m[k][k], p);
        let inv = inv_mod(m[k][k], p);
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let f = mul_mod(row[k], inv, p);
            for j in k + 1..n {
                let t = mul_mod(f, pivot_row[j], p);
                row[j] = if row[j] >= t { row[j] - t } else { row[j] + p - t };
            }
            row[k] = 0;
        }
    }
    det
}

/// Rank modulo a prime; never exceeds the rank over the rationals.
pub fn rank_mod(rows: &[Vec<BigInt>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| reduce_big(x, p)).collect())
        .collect();
    let nrows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(piv, r);
        let inv = inv_mod(m[r][c], p);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv, p);
            for j in c..cols {
                let t = mul_mod(f, pivot_row[j], p);
                row[j] = if row[j] >= t { row[j] - t } else { row[j] + p - t };
            }
        }
        r += 1;
    }
    r
}

/// `log2` of the Hadamard bound on `|det|`, or `None` for a zero row.
fn hadamard_log2(rows: &[Vec<i64>]) -> Option<f64> {
    let mut bits = 0.0;
    for r in rows {
        let norm2: f64 = r.iter().map(|&x| (x as f64) * (x as f64)).sum();
        if norm2 == 0.0 {
            return None;
        }
        bits += 0.5 * norm2.log2();
    }
    Some(bits)
}

/// Exact determinant by Chinese remaindering over enough 62-bit primes to
/// exceed twice the Hadamard bound. `None` if the prime pool is too small.
pub fn det_multimodular(rows: &[Vec<i64>]) -> Option<BigInt> {
    let Some(bound) = hadamard_log2(rows) else {
        return Some(BigInt::zero());
    };
    let needed = ((bound + 2.0) / 61.0).ceil() as usize + 1;
    let primes = large_primes();
    if needed > primes.len() {
        return None;
    }
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for &p in &primes[..needed] {
        let m = rows
            .iter()
            .map(|r| r.iter().map(|&x| reduce_i64(x, p)).collect())
            .collect();
        let r = det_mod_reduced(m, p);
        // Garner step: value += modulus * ((r - value) / modulus mod p)
        let cur = reduce_big(&value, p);
        let diff = (r + p - cur) % p;
        let mod_p = reduce_big(&modulus, p);
        let t = mul_mod(diff, inv_mod(mod_p, p), p);
        value += &modulus * BigInt::from(t);
        modulus *= BigInt::from(p);
    }
    let half = &modulus >> 1;
    if value > half {
        value -= &modulus;
    }
    Some(value)
}

/// Integer rows of a rational matrix after clearing row denominators; rank
/// and vanishing of the determinant are unchanged.
pub fn cleared_rows(m: &ExactMatrix) -> Vec<Vec<BigInt>> {
    m.integer_rows().0
}

/// Rank with an optional modular screen: if the rank modulo `p` is already
/// maximal, it is the exact rank; otherwise fall back to exact elimination.
pub fn rank_screened(m: &ExactMatrix, modulus: Option<u64>) -> usize {
    let rows = cleared_rows(m);
    if let Some(p) = modulus {
        let r = rank_mod(&rows, p);
        if r == m.rows().min(m.cols()) {
            return r;
        }
    }
    rank_bareiss(rows)
}

/// Vanishing test for a determinant with an optional modular screen: a
/// nonzero residue certifies a nonzero determinant.
pub fn det_is_zero_screened(m: &ExactMatrix, modulus: Option<u64>) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let rows = cleared_rows(m);
    if let Some(p) = modulus {
        if det_mod(&rows, p) != 0 {
            return Ok(false);
        }
    }
    Ok(det_integer(rows).is_zero())
}
