//! Exact and modular linear algebra used by the Gram computations.
//!
//! Polynomial matrices are eliminated fraction-free over `ℤ[q]`; larger
//! matrices are handled modulo a Mersenne prime, with kernel vectors lifted
//! back to `ℤ[q, q⁻¹]` by rational function reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{mod_pow, RatFunc, ScalarError, ZLaurent};

/// The prime `2⁶¹ − 1`.
pub const PRIME: u64 = (1u64 << 61) - 1;

/// Multiplication modulo `p`.
#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Addition modulo `p`.
#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

/// Subtraction modulo `p`.
#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// Inverse modulo the prime `p` of a nonzero residue.
#[inline]
pub fn inv_mod(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

/// A dense polynomial in `q` with big integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    /// The constant one.
    pub fn one() -> Self {
        Self(vec![BigInt::one()])
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `q^shift · z`, which must be a polynomial.
    pub fn from_laurent(z: &ZLaurent, shift: i64) -> Self {
        let mut out = Vec::new();
        for (e, c) in z.terms() {
            let d = e + shift;
            assert!(d >= 0, "shift leaves a negative exponent");
            let d = d as usize;
            if out.len() <= d {
                out.resize(d + 1, BigInt::zero());
            }
            out[d] = BigInt::from(c);
        }
        Self(out).trim()
    }

    /// Product.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::default();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self(out).trim()
    }

    /// Difference.
    pub fn sub(&self, o: &Self) -> Self {
        let len = self.0.len().max(o.0.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in o.0.iter().enumerate() {
            out[i] -= b;
        }
        Self(out).trim()
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::default());
        }
        if self.0.len() < d.0.len() {
            return None;
        }
        let mut r = self.0.clone();
        let dl = d.0.len();
        let lead = &d.0[dl - 1];
        let mut q = vec![BigInt::zero(); r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let top = &r[i + dl - 1];
            if top.is_zero() {
                continue;
            }
            let (c, rem) = top.div_rem(lead);
            if !rem.is_zero() {
                return None;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[i + j] -= &c * dj;
            }
            q[i] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self(q).trim())
    }
}

/// Rank of a polynomial matrix over `ℚ(q)` by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut a: Vec<Vec<IntPoly>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev = IntPoly::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let p = a[r][c].clone();
        for i in r + 1..rows {
            let f = a[i][c].clone();
            for j in c + 1..cols {
                let t = p.mul(&a[i][j]).sub(&f.mul(&a[r][j]));
                a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = IntPoly::default();
        }
        prev = p;
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Row echelon data of a matrix modulo `p`.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    /// Rank modulo `p`.
    pub rank: usize,
    /// Rows that were used as pivots, in pivot order.
    pub pivot_rows: Vec<usize>,
    /// Pivot columns, in pivot order.
    pub pivot_cols: Vec<usize>,
}

/// Gaussian elimination modulo `p`, scanning columns in the given order.
pub fn echelon_mod(a: &[Vec<u64>], col_order: &[usize], p: u64) -> ModEchelon {
    let rows = a.len();
    let mut m: Vec<Vec<u64>> = a.to_vec();
    let mut row_id: Vec<usize> = (0..rows).collect();
    let mut r = 0;
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    for &c in col_order {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        row_id.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        let pivot_row = m[r].clone();
        for i in r + 1..rows {
            let f = mul_mod(m[i][c], inv, p);
            if f == 0 {
                continue;
            }
            for (x, &y) in m[i].iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        pivot_rows.push(row_id[r]);
        pivot_cols.push(c);
        r += 1;
    }
    ModEchelon { rank: r, pivot_rows, pivot_cols }
}

/// Solves the square system `a · x = b` modulo `p` for several right-hand
/// sides, or returns `None` when `a` is singular.
pub fn solve_mod(a: &[Vec<u64>], rhs: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let k = rhs.len();
    let mut m: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend(rhs.iter().map(|b| b[i]));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| m[i][c] != 0)?;
        m.swap(c, piv);
        let inv = inv_mod(m[c][c], p);
        for x in m[c].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == c || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
    }
    Some((0..k).map(|j| (0..n).map(|i| m[i][n + j]).collect()).collect())
}

/// Dense polynomials over `𝔽_p`, lowest degree first, kept trimmed.
pub mod fp {
    use super::{add_mod, inv_mod, mul_mod, sub_mod};

    /// Removes trailing zeros.
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// Degree, with `None` for zero.
    pub fn deg(a: &[u64]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    /// Product.
    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
            }
        }
        trim(out)
    }

    /// `a − c·b`.
    pub fn sub_scaled(a: &[u64], b: &[u64], c: u64, p: u64) -> Vec<u64> {
        let mut out = a.to_vec();
        if out.len() < b.len() {
            out.resize(b.len(), 0);
        }
        for (i, &y) in b.iter().enumerate() {
            out[i] = sub_mod(out[i], mul_mod(c, y, p), p);
        }
        trim(out)
    }

    /// Quotient and remainder.
    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let db = deg(b).expect("division by zero polynomial");
        let inv = inv_mod(b[db], p);
        let mut r = trim(a.to_vec());
        let mut q = vec![0u64; r.len().saturating_sub(db).max(1)];
        while let Some(dr) = deg(&r) {
            if dr < db {
                break;
            }
            let c = mul_mod(r[dr], inv, p);
            let s = dr - db;
            q[s] = c;
            for (i, &y) in b.iter().enumerate().take(db + 1) {
                r[s + i] = sub_mod(r[s + i], mul_mod(c, y, p), p);
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    /// Evaluation by Horner's rule.
    pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let (_, r) = divrem(&a, &b, p);
            a = b;
            b = r;
        }
        monic(&a, p)
    }

    /// Scales to leading coefficient one.
    pub fn monic(a: &[u64], p: u64) -> Vec<u64> {
        match deg(a) {
            None => Vec::new(),
            Some(d) => {
                let inv = inv_mod(a[d], p);
                a[..=d].iter().map(|&c| mul_mod(c, inv, p)).collect()
            }
        }
    }

    /// The interpolating polynomial through `(xs[i], ys[i])` (Newton form).
    pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
        let n = xs.len();
        let mut coef = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = sub_mod(coef[i], coef[i - 1], p);
                let den = sub_mod(xs[i], xs[i - j], p);
                coef[i] = mul_mod(num, inv_mod(den, p), p);
            }
        }
        let mut out = vec![0u64; 1];
        out[0] = coef[n - 1];
        for i in (0..n - 1).rev() {
            let mut next = vec![0u64; out.len() + 1];
            for (k, &c) in out.iter().enumerate() {
                next[k + 1] = add_mod(next[k + 1], c, p);
                next[k] = sub_mod(next[k], mul_mod(c, xs[i], p), p);
            }
            next[0] = add_mod(next[0], coef[i], p);
            out = next;
        }
        trim(out)
    }

    /// Rational function reconstruction: finds `(num, den)` with `den` monic,
    /// `num ≡ den · u (mod m)` and `deg num < bound`, `deg den ≤ deg m − bound`.
    pub fn rational_reconstruct(u: &[u64], m: &[u64], bound: usize, p: u64) -> Option<(Vec<u64>, Vec<u64>)> {
        let (mut r0, mut r1) = (trim(m.to_vec()), trim(u.to_vec()));
        let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while deg(&r1).is_some_and(|d| d >= bound) {
            let (q, r) = divrem(&r0, &r1, p);
            let qt = mul(&q, &t1, p);
            let t2 = trim(
                (0..t0.len().max(qt.len()))
                    .map(|i| sub_mod(*t0.get(i).unwrap_or(&0), *qt.get(i).unwrap_or(&0), p))
                    .collect(),
            );
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t2;
        }
        let dt = deg(&t1)?;
        if dt + bound > deg(m).unwrap_or(0) {
            return None;
        }
        if r1.is_empty() {
            return Some((Vec::new(), vec![1]));
        }
        if deg(&gcd(&r1, &t1, p)) != Some(0) {
            return None;
        }
        let inv = inv_mod(t1[dt], p);
        let num = r1.iter().map(|&c| mul_mod(c, inv, p)).collect::<Vec<_>>();
        let den = t1.iter().map(|&c| mul_mod(c, inv, p)).collect::<Vec<_>>();
        Some((trim(num), trim(den)))
    }
}

/// Recovers a rational number from its residue modulo `p` when numerator and
/// denominator are below `√(p/2)`.
pub fn rational_lift(a: u64, p: u64) -> Option<BigRational> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(BigInt::from(r1), BigInt::from(t1)))
}

/// Solves for the nullspace of a small matrix over `ℚ(q)`.
///
/// Returns a basis of the nullspace, each vector normalized so that its
/// coordinate at a free column is one.
pub fn nullspace_ratfunc(a: &[Vec<RatFunc>], cols: usize) -> Result<Vec<Vec<RatFunc>>, ScalarError> {
    let mut m: Vec<Vec<RatFunc>> = a.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let rows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].inv()?;
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![RatFunc::zero(); cols];
        v[free] = RatFunc::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -(m[i][free].clone());
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Integer value of a rational known to be integral.
pub fn to_i128(r: &BigRational) -> Option<i128> {
    if r.is_integer() {
        r.to_integer().to_i128()
    } else {
        None
    }
}

/// Least common multiple of the denominators of some rationals.
pub fn denominator_lcm<'a>(it: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom())).abs()
}
