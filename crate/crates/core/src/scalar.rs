//! Exact arithmetic in `ℤ[q, q⁻¹]` and its fraction field `ℚ(q)`.
//!
//! [`LaurentPoly`] stores sparse exact rational coefficients and [`RatFunc`]
//! is a fully reduced quotient of two of them in a canonical normal form, so
//! that structural equality coincides with equality in `ℚ(q)`.  The quantum
//! integers, factorials and binomials used throughout the engine live here
//! too.  [`ZLaurent`] is a dense machine-integer Laurent polynomial used on
//! the hot paths of the rewriting engine.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by scalar evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    /// The denominator vanishes at the requested point.
    #[error("pole at q = {0}")]
    PoleAtPoint(BigRational),
    /// Division by the zero rational function.
    #[error("division by zero")]
    DivisionByZero,
}

/// Builds an exact rational from an integer.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------------------
// LaurentPoly
// ---------------------------------------------------------------------------

/// A Laurent polynomial in `q` with exact rational coefficients.
///
/// No stored coefficient is zero; the zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The monomial `q`.
    pub fn q() -> Self {
        Self::monomial(1, BigRational::one())
    }

    /// The monomial `c·q^e`.
    pub fn monomial(e: i64, c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        Self { coeffs }
    }

    /// The monomial `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(e, BigRational::one())
    }

    /// The constant polynomial `c`.
    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    /// The constant polynomial with integer value `c`.
    pub fn from_int(c: i64) -> Self {
        Self::constant(rat(c))
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Read access to the sparse coefficient map.
    pub fn coeffs(&self) -> &BTreeMap<i64, BigRational> {
        &self.coeffs
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i64) -> BigRational {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for the constant `1`.
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Adds `c·q^e` in place.
    pub fn add_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let remove = match self.coeffs.get_mut(&e) {
            Some(v) => {
                *v += c;
                v.is_zero()
            }
            None => {
                self.coeffs.insert(e, c);
                false
            }
        };
        if remove {
            self.coeffs.remove(&e);
        }
    }

    /// Multiplies by `q^s`.
    pub fn shift(&self, s: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + s, c.clone())).collect(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Substitutes `q ↦ q^d`.
    pub fn substitute_power(&self, d: i64) -> Self {
        assert!(d != 0, "substitution exponent must be nonzero");
        Self::from_terms(self.coeffs.iter().map(|(e, c)| (e * d, c.clone())))
    }

    /// Substitutes `q ↦ q⁻¹`.
    pub fn bar(&self) -> Self {
        self.substitute_power(-1)
    }

    /// Raises to a nonnegative power.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at `q = r`.
    pub fn eval(&self, r: &BigRational) -> Result<BigRational, ScalarError> {
        if r.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return Err(ScalarError::PoleAtPoint(r.clone()));
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            acc += c * pow_rat(r, *e);
        }
        Ok(acc)
    }

    /// Dense coefficient vector of `q^{-min_exp}·self` (index = degree).
    fn to_dense(&self) -> (i64, Vec<BigRational>) {
        let Some(lo) = self.min_exp() else {
            return (0, Vec::new());
        };
        let hi = self.max_exp().unwrap_or(lo);
        let mut v = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.coeffs {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_dense(lo: i64, v: &[BigRational]) -> Self {
        Self::from_terms(v.iter().enumerate().map(|(i, c)| (lo + i as i64, c.clone())))
    }
}

fn pow_rat(r: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match *e {
                0 => String::new(),
                1 => "q".to_string(),
                e => format!("q^{e}"),
            };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c.clone());
        }
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned_binop!(LaurentPoly, Add, add);
forward_owned_binop!(LaurentPoly, Sub, sub);
forward_owned_binop!(LaurentPoly, Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

fn rat_to_string(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(BigRational::new(a, b))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            map.serialize_entry(&e.to_string(), &rat_to_string(c))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a map from exponent strings to \"p/q\" coefficient strings")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<LaurentPoly, A::Error> {
                let mut p = LaurentPoly::zero();
                while let Some((k, v)) = access.next_entry::<String, String>()? {
                    let e: i64 = k
                        .trim()
                        .parse()
                        .map_err(|_| de::Error::custom(format!("bad exponent {k:?}")))?;
                    let c = parse_rat(&v)
                        .ok_or_else(|| de::Error::custom(format!("bad coefficient {v:?}")))?;
                    p.add_term(e, c);
                }
                Ok(p)
            }
        }
        deserializer.deserialize_map(PolyVisitor)
    }
}

// ---------------------------------------------------------------------------
// dense univariate helpers over ℚ
// ---------------------------------------------------------------------------

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Remainder of `a` modulo `b` (both dense, `b` nonzero).
fn poly_rem(mut a: Vec<BigRational>, b: &[BigRational]) -> Vec<BigRational> {
    trim(&mut a);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    while a.len() > db && !a.is_empty() {
        let da = a.len() - 1;
        let factor = &a[da] * &lead_inv;
        let off = da - db;
        for (i, c) in b.iter().enumerate() {
            if !c.is_zero() {
                let t = &factor * c;
                a[off + i] -= t;
            }
        }
        trim(&mut a);
    }
    a
}

/// Exact quotient `a / b`, assuming `b` divides `a`.
fn poly_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = a.to_vec();
    trim(&mut a);
    if a.is_empty() {
        return Vec::new();
    }
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut quo = vec![BigRational::zero(); da - db + 1];
    let lead_inv = b[db].recip();
    for k in (0..=da - db).rev() {
        let factor = &a[k + db] * &lead_inv;
        if factor.is_zero() {
            continue;
        }
        for (i, c) in b.iter().enumerate() {
            if !c.is_zero() {
                a[k + i] -= &factor * c;
            }
        }
        quo[k] = factor;
    }
    debug_assert!(a.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quo
}

/// Monic gcd of two dense polynomials over ℚ.
fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &l;
        }
    }
    x
}

// ---------------------------------------------------------------------------
// RatFunc
// ---------------------------------------------------------------------------

/// An element of `ℚ(q)` in canonical form.
///
/// The fraction is fully reduced and the denominator has lowest exponent `0`
/// with lowest coefficient `1`, so two values are equal exactly when their
/// fields are equal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRatFunc")]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

#[derive(Deserialize)]
struct RawRatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl TryFrom<RawRatFunc> for RatFunc {
    type Error = ScalarError;
    fn try_from(raw: RawRatFunc) -> Result<Self, ScalarError> {
        RatFunc::new(raw.num, raw.den)
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFunc {
    /// Builds `num / den` in canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num_lo, num_dense) = num.to_dense();
        let (den_lo, den_dense) = den.to_dense();
        let (num_lo, num_dense, den_dense) = if den_dense.len() > 1 && num_dense.len() > 1 {
            let g = poly_gcd(&num_dense, &den_dense);
            if g.len() > 1 {
                (num_lo, poly_div_exact(&num_dense, &g), poly_div_exact(&den_dense, &g))
            } else {
                (num_lo, num_dense, den_dense)
            }
        } else {
            (num_lo, num_dense, den_dense)
        };
        let lead = den_dense[0].clone();
        let num = LaurentPoly::from_dense(num_lo - den_lo, &num_dense).scale(&lead.recip());
        let den = LaurentPoly::from_dense(0, &den_dense).scale(&lead.recip());
        Self { num, den }
    }

    /// The zero element.
    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    /// The unit element.
    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    /// The element `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// The element `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::from_poly(LaurentPoly::q_pow(e))
    }

    /// The integer constant `c`.
    pub fn from_int(c: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(c))
    }

    /// The rational constant `c`.
    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    /// Embeds a Laurent polynomial.
    pub fn from_poly(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }

    /// Numerator in canonical form.
    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    /// Denominator in canonical form.
    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    /// True for zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True for one.
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The Laurent polynomial this value equals, if its denominator is trivial.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    /// Quotient `self / rhs`.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Raises to an integer power.
    pub fn pow(&self, k: i32) -> Result<Self, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(Self::normalize(base.num.pow(k.unsigned_abs()), base.den.pow(k.unsigned_abs())))
    }

    /// Substitutes `q ↦ q^d`.
    pub fn substitute_power(&self, d: i64) -> Self {
        Self::normalize(self.num.substitute_power(d), self.den.substitute_power(d))
    }

    /// Exact evaluation at `q = r`.
    pub fn eval(&self, r: &BigRational) -> Result<BigRational, ScalarError> {
        let d = self.den.eval(r)?;
        if d.is_zero() {
            return Err(ScalarError::PoleAtPoint(r.clone()));
        }
        Ok(self.num.eval(r)? / d)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::normalize(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::normalize(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den)
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use [`RatFunc::checked_div`] to handle it.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero in ℚ(q)")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

forward_owned_binop!(RatFunc, Add, add);
forward_owned_binop!(RatFunc, Sub, sub);
forward_owned_binop!(RatFunc, Mul, mul);
forward_owned_binop!(RatFunc, Div, div);

impl AddAssign<&RatFunc> for RatFunc {
    fn add_assign(&mut self, rhs: &RatFunc) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&RatFunc> for RatFunc {
    fn sub_assign(&mut self, rhs: &RatFunc) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&RatFunc> for RatFunc {
    fn mul_assign(&mut self, rhs: &RatFunc) {
        *self = &*self * rhs;
    }
}

impl From<LaurentPoly> for RatFunc {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

// ---------------------------------------------------------------------------
// quantum numbers
// ---------------------------------------------------------------------------

/// The balanced quantum integer `[k] = (q^k − q^{−k})/(q − q^{−1})` as a Laurent polynomial.
pub fn qint_poly(k: i64) -> LaurentPoly {
    let sign = if k < 0 { -1 } else { 1 };
    let a = k.abs();
    LaurentPoly::from_terms((0..a).map(|j| (a - 1 - 2 * j, rat(sign))))
}

/// The quantum integer `[k]`.
pub fn qint(k: i64) -> RatFunc {
    RatFunc::from_poly(qint_poly(k))
}

/// The quantum integer `[k]` in the variable `q^d`.
pub fn qint_base(k: i64, d: i64) -> RatFunc {
    RatFunc::from_poly(qint_poly(k).substitute_power(d))
}

/// The quantum factorial `[k]! = [k][k−1]⋯[1]`.
pub fn qfact(k: u32) -> RatFunc {
    let mut acc = LaurentPoly::one();
    for j in 1..=k as i64 {
        acc = &acc * &qint_poly(j);
    }
    RatFunc::from_poly(acc)
}

/// The quantum binomial `∏_{j=1..k} [m−j+1]/[j]`, zero when `0 ≤ m < k`.
pub fn qbinom(m: i64, k: u32) -> RatFunc {
    let mut num = LaurentPoly::one();
    let mut den = LaurentPoly::one();
    for j in 1..=k as i64 {
        num = &num * &qint_poly(m - j + 1);
        den = &den * &qint_poly(j);
    }
    RatFunc::normalize(num, den)
}

/// Exact evaluation of a rational function at a rational point.
pub fn rat_eval(f: &RatFunc, r: &BigRational) -> Result<BigRational, ScalarError> {
    f.eval(r)
}

// ---------------------------------------------------------------------------
// ZLaurent
// ---------------------------------------------------------------------------

/// A dense Laurent polynomial with `i128` coefficients.
///
/// Every coefficient arising in the rewriting engine is an integral Laurent
/// polynomial; this type keeps that arithmetic allocation-light.  Overflow
/// is checked and aborts with a panic.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZLaurent {
    lo: i64,
    c: Vec<i128>,
}

impl ZLaurent {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant `1`.
    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// The monomial `c·q^e`.
    pub fn monomial(e: i64, c: i128) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Self { lo: e, c: vec![c] }
        }
    }

    /// The quantum integer `[k]`.
    pub fn qint(k: i64) -> Self {
        let sign = if k < 0 { -1 } else { 1 };
        let a = k.abs();
        if a == 0 {
            return Self::zero();
        }
        let mut c = vec![0i128; (2 * a - 1) as usize];
        for j in 0..a {
            c[(2 * j) as usize] = sign;
        }
        Self { lo: -(a - 1), c }
    }

    fn normalized(mut self) -> Self {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|&&x| x == 0).count();
        if lead == self.c.len() {
            return Self::zero();
        }
        if lead > 0 {
            self.c.drain(..lead);
            self.lo += lead as i64;
        }
        self
    }

    /// True for zero.
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// True for one.
    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.c == [1]
    }

    /// Lowest exponent, if nonzero.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.c.is_empty()).then_some(self.lo)
    }

    /// Iterates over `(exponent, coefficient)` pairs with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i128)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(i, &v)| (self.lo + i as i64, v))
    }

    /// Multiplies by `q^s`.
    pub fn shift(&self, s: i64) -> Self {
        Self { lo: self.lo + s, c: self.c.clone() }
    }

    /// Multiplies by an integer.
    pub fn scale(&self, k: i128) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self {
            lo: self.lo,
            c: self.c.iter().map(|x| x.checked_mul(k).expect("coefficient overflow")).collect(),
        }
    }

    /// Raises to a nonnegative power.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Adds `k·other` in place.
    pub fn add_scaled(&mut self, other: &Self, k: i128) {
        if other.is_zero() || k == 0 {
            return;
        }
        if self.is_zero() {
            *self = other.scale(k);
            return;
        }
        let lo = self.lo.min(other.lo);
        let hi = (self.lo + self.c.len() as i64).max(other.lo + other.c.len() as i64);
        if lo < self.lo || hi > self.lo + self.c.len() as i64 {
            let mut c = vec![0i128; (hi - lo) as usize];
            let off = (self.lo - lo) as usize;
            c[off..off + self.c.len()].copy_from_slice(&self.c);
            self.c = c;
            self.lo = lo;
        }
        let off = (other.lo - self.lo) as usize;
        for (i, x) in other.c.iter().enumerate() {
            let t = x.checked_mul(k).expect("coefficient overflow");
            self.c[off + i] = self.c[off + i].checked_add(t).expect("coefficient overflow");
        }
        let v = std::mem::take(self);
        *self = v.normalized();
    }

    /// Product, or `None` on coefficient overflow.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        if self.is_zero() || other.is_zero() {
            return Some(Self::zero());
        }
        let mut c = vec![0i128; self.c.len() + other.c.len() - 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.c.iter().enumerate() {
                c[i + j] = c[i + j].checked_add(x.checked_mul(y)?)?;
            }
        }
        Some(Self { lo: self.lo + other.lo, c }.normalized())
    }

    /// Sum, or `None` on coefficient overflow.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        let lo = self.lo.min(other.lo);
        let hi = (self.lo + self.c.len() as i64).max(other.lo + other.c.len() as i64);
        let mut c = vec![0i128; (hi - lo) as usize];
        for src in [self, other] {
            let off = (src.lo - lo) as usize;
            for (i, &x) in src.c.iter().enumerate() {
                c[off + i] = c[off + i].checked_add(x)?;
            }
        }
        Some(Self { lo, c }.normalized())
    }

    /// Converts into a rational-coefficient Laurent polynomial.
    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms().map(|(e, v)| (e, BigRational::from_integer(BigInt::from(v)))),
        )
    }

    /// Converts into `ℚ(q)`.
    pub fn to_ratfunc(&self) -> RatFunc {
        RatFunc::from_poly(self.to_laurent())
    }

    /// Converts from a Laurent polynomial with integer coefficients.
    pub fn from_laurent(p: &LaurentPoly) -> Option<Self> {
        let mut out = Self::zero();
        for (e, c) in p.coeffs() {
            if !c.is_integer() {
                return None;
            }
            out.add_scaled(&Self::monomial(*e, c.to_integer().to_i128()?), 1);
        }
        Some(out)
    }

    /// Evaluates modulo the prime `p` at the nonzero residue `x`.
    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        if self.is_zero() {
            return 0;
        }
        let xi = mod_pow(x, p - 2, p);
        let mut pw = if self.lo >= 0 {
            mod_pow(x, self.lo as u64, p)
        } else {
            mod_pow(xi, (-self.lo) as u64, p)
        };
        let mut acc: u64 = 0;
        for &c in &self.c {
            let cm = c.rem_euclid(p as i128) as u64;
            acc = ((acc as u128 + cm as u128 * pw as u128) % p as u128) as u64;
            pw = ((pw as u128 * x as u128) % p as u128) as u64;
        }
        acc
    }

    /// Exact evaluation at a nonzero rational point.
    pub fn eval(&self, r: &BigRational) -> Result<BigRational, ScalarError> {
        self.to_laurent().eval(r)
    }
}

/// Modular exponentiation.
pub fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

impl fmt::Debug for ZLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_laurent())
    }
}

impl fmt::Display for ZLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_laurent())
    }
}

impl Add<&ZLaurent> for &ZLaurent {
    type Output = ZLaurent;
    fn add(self, rhs: &ZLaurent) -> ZLaurent {
        let mut out = self.clone();
        out.add_scaled(rhs, 1);
        out
    }
}

impl Sub<&ZLaurent> for &ZLaurent {
    type Output = ZLaurent;
    fn sub(self, rhs: &ZLaurent) -> ZLaurent {
        let mut out = self.clone();
        out.add_scaled(rhs, -1);
        out
    }
}

impl Mul<&ZLaurent> for &ZLaurent {
    type Output = ZLaurent;
    fn mul(self, rhs: &ZLaurent) -> ZLaurent {
        if self.is_zero() || rhs.is_zero() {
            return ZLaurent::zero();
        }
        let mut c = vec![0i128; self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                let t = a.checked_mul(*b).expect("coefficient overflow");
                c[i + j] = c[i + j].checked_add(t).expect("coefficient overflow");
            }
        }
        ZLaurent { lo: self.lo + rhs.lo, c }.normalized()
    }
}

impl Neg for &ZLaurent {
    type Output = ZLaurent;
    fn neg(self) -> ZLaurent {
        self.scale(-1)
    }
}

impl Neg for ZLaurent {
    type Output = ZLaurent;
    fn neg(self) -> ZLaurent {
        self.scale(-1)
    }
}

impl AddAssign<&ZLaurent> for ZLaurent {
    fn add_assign(&mut self, rhs: &ZLaurent) {
        self.add_scaled(rhs, 1);
    }
}

forward_owned_binop!(ZLaurent, Add, add);
forward_owned_binop!(ZLaurent, Sub, sub);
forward_owned_binop!(ZLaurent, Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, rat(c))))
    }

    #[test]
    fn qint_small_values() {
        assert!(qint(0).is_zero());
        assert_eq!(qint(2), RatFunc::from_poly(lp(&[(1, 1), (-1, 1)])));
        assert_eq!(qint(-3), RatFunc::from_poly(lp(&[(2, -1), (0, -1), (-2, -1)])));
    }

    #[test]
    fn qint_matches_quotient_definition() {
        let qm = RatFunc::q() - RatFunc::q_pow(-1);
        for k in -6..=6 {
            let direct = (RatFunc::q_pow(k) - RatFunc::q_pow(-k)) / qm.clone();
            assert_eq!(qint(k), direct, "k = {k}");
        }
    }

    #[test]
    fn qfact_and_qbinom_spot_values() {
        assert_eq!(qfact(3), RatFunc::from_poly(lp(&[(3, 1), (1, 2), (-1, 2), (-3, 1)])));
        assert_eq!(
            qbinom(4, 2),
            RatFunc::from_poly(lp(&[(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)]))
        );
        assert!(qbinom(4, 0).is_one());
        assert!(qbinom(2, 3).is_zero());
        let via_fact = qfact(4) / (qfact(2) * qfact(2));
        assert_eq!(qbinom(4, 2), via_fact);
    }

    #[test]
    fn qint_base_relation() {
        for n in 1..6 {
            assert_eq!(qint_base(n, 2), qint(2 * n) / qint(2));
        }
        assert!(qint_base(1, 5).is_one());
    }

    #[test]
    fn rat_eval_values_and_poles() {
        assert_eq!(rat_eval(&qint(2), &rat(1)).unwrap(), rat(2));
        assert_eq!(rat_eval(&qint(3), &rat(2)).unwrap(), BigRational::new(21.into(), 4.into()));
        let f = RatFunc::one() / (RatFunc::q() - RatFunc::one());
        assert!(matches!(rat_eval(&f, &rat(1)), Err(ScalarError::PoleAtPoint(_))));
    }

    #[test]
    fn normalization_is_canonical() {
        let a = qint(6) / qint(3);
        let b = (qint(6) * qint(2)) / (qint(3) * qint(2));
        assert_eq!(a, b);
        assert!(a.den().is_one());
        let c = RatFunc::one() / (RatFunc::from_int(2) * RatFunc::q_pow(3) + RatFunc::from_int(4));
        assert_eq!(c.den().min_exp(), Some(0));
        assert!(c.den().coeff(0).is_one());
    }

    #[test]
    fn zlaurent_agrees_with_laurent() {
        let a = ZLaurent::qint(4);
        let b = ZLaurent::qint(3).shift(2);
        assert_eq!((&a * &b).to_laurent(), &qint_poly(4) * &qint_poly(3).shift(2));
        assert_eq!((&a - &a), ZLaurent::zero());
        assert_eq!((&a + &b).to_laurent(), &qint_poly(4) + &qint_poly(3).shift(2));
    }

    #[test]
    fn json_round_trip() {
        let f = qint(3) / qint(2);
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"num\"") && s.contains("\"1/1\""));
        let back: RatFunc = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
