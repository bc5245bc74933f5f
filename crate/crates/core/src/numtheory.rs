//! Exact integer helpers: gcd folds, Euler's totient, divisor sums, Pillai's
//! arithmetical function, 2-adic valuations and unimodular completion.
//!
//! Nothing in here touches floating point.

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Greatest common divisor of a nonempty list that is not identically zero.
pub fn gcd_many(values: &[u64]) -> Result<u64> {
    if values.is_empty() {
        return Err(Error::domain("gcd of an empty list"));
    }
    let g = values.iter().fold(0u64, |acc, &v| acc.gcd(&v));
    if g == 0 {
        return Err(Error::domain("gcd of an all-zero list"));
    }
    Ok(g)
}

/// Pillai's arithmetical function `sum_{s=0}^{a-1} gcd(a, s)`, with `gcd(a, 0) = a`.
pub fn pillai(a: u64) -> Result<u128> {
    if a == 0 {
        return Err(Error::domain("pillai(0) is undefined"));
    }
    Ok((0..a).map(|s| u128::from(a.gcd(&s))).sum())
}

/// Pillai's function through the totient identity `a * sum_{d | a} phi(d) / d`.
///
/// The sum is accumulated as an exact rational; the result is checked to be
/// integral before it is returned.
pub fn pillai_via_totient(a: u64) -> Result<u128> {
    if a == 0 {
        return Err(Error::domain("pillai(0) is undefined"));
    }
    let mut sum = Ratio::<i128>::from_integer(0);
    for d in divisors(a)? {
        sum += Ratio::new(i128::from(totient(d)?), i128::from(d));
    }
    let total = sum * Ratio::from_integer(i128::from(a));
    if !total.is_integer() {
        return Err(Error::domain(format!(
            "non-integral totient sum for a = {a}"
        )));
    }
    Ok(total.to_integer() as u128)
}

/// Euler's totient by trial-division factorisation.
pub fn totient(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("totient(0) is undefined"));
    }
    let mut rest = n;
    let mut phi = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if rest > 1 {
        phi -= phi / rest;
    }
    Ok(phi)
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::domain("divisors of 0"));
    }
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            low.push(d);
            if d != n / d {
                high.push(n / d);
            }
        }
        d += 1;
    }
    low.extend(high.into_iter().rev());
    Ok(low)
}

/// `sigma(n)`, the sum of the positive divisors of `n`.
pub fn divisor_sigma(n: u64) -> Result<u128> {
    Ok(divisors(n)?.into_iter().map(u128::from).sum())
}

/// The exponent `v` with `2^v` exactly dividing `n`.
pub fn two_adic_valuation(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::domain("2-adic valuation of 0"));
    }
    Ok(n.trailing_zeros())
}

/// `|c|_2 < |d|_2` for the 2-adic norm, i.e. `c` carries strictly more factors of 2.
pub fn two_adic_norm_less(c: u64, d: u64) -> Result<bool> {
    Ok(two_adic_valuation(c)? > two_adic_valuation(d)?)
}

/// Binomial coefficient by Pascal's rule; row length bounded by the torus dimensions we see.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let mut row = vec![0u128; k as usize + 1];
    row[0] = 1;
    for i in 1..=n as usize {
        for j in (1..=i.min(k as usize)).rev() {
            row[j] = row[j]
                .checked_add(row[j - 1])
                .expect("binomial coefficient overflows u128");
        }
    }
    row[k as usize]
}

/// Extended Euclid on signed integers: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_x, mut x) = (1i128, 0i128);
    let (mut old_y, mut y) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_x, x) = (x, old_x - q * x);
        (old_y, y) = (y, old_y - q * y);
    }
    if old_r < 0 {
        (-old_r, -old_x, -old_y)
    } else {
        (old_r, old_x, old_y)
    }
}

/// A square integer matrix of determinant exactly `+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularMatrix {
    size: usize,
    entries: Vec<i128>,
}

impl UnimodularMatrix {
    /// Wraps a row-major square matrix, rejecting anything whose determinant is not `+1`.
    pub fn from_rows(rows: Vec<Vec<i128>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 || rows.iter().any(|r| r.len() != size) {
            return Err(Error::domain(
                "unimodular matrix must be square and nonempty",
            ));
        }
        let entries: Vec<i128> = rows.into_iter().flatten().collect();
        let m = UnimodularMatrix { size, entries };
        if m.determinant() != 1 {
            return Err(Error::domain("matrix determinant is not +1"));
        }
        Ok(m)
    }

    fn identity(size: usize) -> Self {
        let mut entries = vec![0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1;
        }
        UnimodularMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> i128 {
        self.entries[row * self.size + col]
    }

    pub fn rows(&self) -> Vec<Vec<i128>> {
        self.entries
            .chunks(self.size)
            .map(<[i128]>::to_vec)
            .collect()
    }

    pub fn column(&self, col: usize) -> Vec<i128> {
        (0..self.size).map(|r| self.get(r, col)).collect()
    }

    /// Fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        let n = self.size;
        let mut a = self.entries.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k] == 0 {
                let Some(swap) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                    return 0;
                };
                for c in 0..n {
                    a.swap(k * n + c, swap * n + c);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * pivot - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = pivot;
        }
        sign * a[n * n - 1]
    }

    /// Right-multiplies columns `(c, c + 1)` by the 2x2 block `[[p, q], [r, s]]`.
    fn mul_block_right(&mut self, c: usize, block: [[i128; 2]; 2]) {
        let n = self.size;
        for row in 0..n {
            let left = self.entries[row * n + c];
            let right = self.entries[row * n + c + 1];
            self.entries[row * n + c] = left * block[0][0] + right * block[1][0];
            self.entries[row * n + c + 1] = left * block[0][1] + right * block[1][1];
        }
    }
}

/// Completes the primitive part of `v` to a matrix in `SL_b(Z)` whose first
/// column is `v / gcd(v)`.
///
/// Adjacent entries are cleared bottom-up with 2x2 extended-Euclid blocks
/// `B_i` of determinant 1, so that `B_1 ... B_{b-1} v' = e_1`; the result is the
/// product of the inverse blocks in reverse order.
///
/// A vector of length one with a negative entry cannot be completed and is
/// rejected.
pub fn unimodular_completion(v: &[i64]) -> Result<UnimodularMatrix> {
    if v.iter().all(|&x| x == 0) {
        return Err(Error::domain("cannot complete the zero vector"));
    }
    let g = v.iter().fold(0i128, |acc, &x| acc.gcd(&i128::from(x)));
    let mut w: Vec<i128> = v.iter().map(|&x| i128::from(x) / g).collect();
    let size = w.len();
    if size == 1 && w[0] < 0 {
        return Err(Error::domain(format!(
            "({}) has no completion: the only 1x1 matrix of determinant 1 is (1)",
            v[0]
        )));
    }
    let mut result = UnimodularMatrix::identity(size);
    for i in (1..size).rev() {
        let (a, b) = (w[i - 1], w[i]);
        if b == 0 {
            continue;
        }
        let (d, x, y) = extended_gcd(a, b);
        // B = [[x, y], [-b/d, a/d]] sends (a, b) to (d, 0); B^{-1} = [[a/d, -y], [b/d, x]].
        let inverse = [[a / d, -y], [b / d, x]];
        result.mul_block_right(i - 1, inverse);
        w[i - 1] = d;
        w[i] = 0;
    }
    if w[0] < 0 {
        result.mul_block_right(0, [[-1, 0], [0, -1]]);
    }
    debug_assert_eq!(w[0].abs(), 1);
    Ok(result)
}
