//! BMW algebra words, their images as morphisms, the defining relations at
//! `r = −q^{2n+1}`, `z = q − q⁻¹`, and framed invariants of braid closures.
//!
//! A word `x₁ x₂ ⋯ x_m` denotes the product `x₁ ∘ x₂ ∘ ⋯ ∘ x_m`, so its last
//! letter is applied first. `G(i)` is the positive crossing on strands `i, i+1`,
//! `Ginv(i)` the negative one and `E(i)` the cap followed by the cup.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homspace::{self, compose, crossing_at, identity, morphism_equal, trace, CrossingSign, HomError};
use crate::scalar::{RatFunc, ScalarError};
use crate::skein::Morphism;

/// Errors raised by BMW words and braids.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BmwError {
    /// A generator index outside `1..=s−1`.
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange {
        /// Offending index.
        index: usize,
        /// Strand count.
        strands: usize,
    },
    /// Text that is not a braid word.
    #[error("cannot parse braid word: {0}")]
    Parse(String),
    /// Strand count outside the supported range.
    #[error("unsupported strand count {0}")]
    StrandCount(usize),
    /// Error from morphism algebra.
    #[error(transparent)]
    Hom(#[from] HomError),
    /// Error from scalar arithmetic.
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A BMW generator with a 1-based position.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum BmwLetter {
    /// `g_i`.
    G(usize),
    /// `g_i⁻¹`.
    Ginv(usize),
    /// `e_i`.
    E(usize),
}

impl BmwLetter {
    fn index(self) -> usize {
        match self {
            BmwLetter::G(i) | BmwLetter::Ginv(i) | BmwLetter::E(i) => i,
        }
    }
}

/// A word in the BMW generators on a fixed number of strands.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BmwWord {
    /// Number of strands.
    pub strands: usize,
    /// Letters, leftmost applied last.
    pub letters: Vec<BmwLetter>,
}

fn check_index(i: usize, strands: usize) -> Result<(), BmwError> {
    if i == 0 || i >= strands {
        return Err(BmwError::IndexOutOfRange { index: i, strands });
    }
    Ok(())
}

impl BmwWord {
    /// Builds a word, checking every index.
    pub fn new(strands: usize, letters: Vec<BmwLetter>) -> Result<Self, BmwError> {
        for l in &letters {
            check_index(l.index(), strands)?;
        }
        Ok(Self { strands, letters })
    }
}

impl fmt::Display for BmwWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| match l {
                BmwLetter::G(i) => format!("g{i}"),
                BmwLetter::Ginv(i) => format!("g{i}^-1"),
                BmwLetter::E(i) => format!("e{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A braid word: signed generators `±i` on a fixed number of strands.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BraidWord {
    /// Number of strands.
    pub strands: usize,
    /// Signed generators; `i > 0` is the positive crossing on strands `i, i+1`.
    pub letters: Vec<i32>,
}

impl BraidWord {
    /// Builds a braid word, checking every index.
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BmwError> {
        if strands == 0 {
            return Err(BmwError::StrandCount(0));
        }
        for &l in &letters {
            if l == 0 {
                return Err(BmwError::Parse("generator 0 is not allowed".into()));
            }
            check_index(l.unsigned_abs() as usize, strands)?;
        }
        Ok(Self { strands, letters })
    }

    /// Sum of the signs of the letters.
    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|&l| l.signum() as i64).sum()
    }

    /// The word rotated cyclically by `k` letters.
    pub fn rotated(&self, k: usize) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        Self { strands: self.strands, letters }
    }

    /// The BMW word of the braid.
    pub fn to_bmw(&self) -> BmwWord {
        let letters = self
            .letters
            .iter()
            .map(|&l| {
                let i = l.unsigned_abs() as usize;
                if l > 0 {
                    BmwLetter::G(i)
                } else {
                    BmwLetter::Ginv(i)
                }
            })
            .collect();
        BmwWord { strands: self.strands, letters }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for BraidWord {
    type Err = BmwError;

    /// Parses whitespace-separated signed integers; the strand count is one
    /// more than the largest index (at least 1).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters: Vec<i32> = s
            .split_whitespace()
            .map(|t| t.parse::<i32>().map_err(|_| BmwError::Parse(format!("bad letter {t:?}"))))
            .collect::<Result<_, _>>()?;
        let strands = letters.iter().map(|l| l.unsigned_abs() as usize + 1).max().unwrap_or(1);
        BraidWord::new(strands, letters)
    }
}

/// The parameter `r = −q^{2n+1}`.
pub fn bmw_r(n: u32) -> RatFunc {
    -RatFunc::q_pow(2 * n as i64 + 1)
}

/// The parameter `z = q − q⁻¹`.
pub fn bmw_z() -> RatFunc {
    &RatFunc::q_pow(1) - &RatFunc::q_pow(-1)
}

/// The coefficient `1 + (r − r⁻¹)/z` of `e_i² = (1 + (r − r⁻¹)/z)·e_i`.
pub fn e_squared_coefficient(n: u32) -> Result<RatFunc, BmwError> {
    let r = bmw_r(n);
    let diff = &r - &r.inv()?;
    Ok(&RatFunc::one() + &diff.checked_div(&bmw_z())?)
}

fn letter_morphism(l: BmwLetter, s: usize, n: u32) -> Result<Morphism, BmwError> {
    Ok(match l {
        BmwLetter::G(i) => crossing_at(s, i, n, CrossingSign::Positive)?,
        BmwLetter::Ginv(i) => crossing_at(s, i, n, CrossingSign::Negative)?,
        BmwLetter::E(i) => compose(&homspace::cup(s - 2, i, n)?, &homspace::cap(s, i, n)?)?,
    })
}

/// The morphism `s → s` of a BMW word.
pub fn rho(w: &BmwWord, n: u32) -> Result<Morphism, BmwError> {
    let mut acc = identity(w.strands, n)?;
    for &l in w.letters.iter().rev() {
        acc = compose(&letter_morphism(l, w.strands, n)?, &acc)?;
    }
    Ok(acc)
}

/// One checked instance of a defining relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BmwCheck {
    /// Relation number, 1 through 8.
    pub relation: u8,
    /// The instance, as an equation between words.
    pub instance: String,
    /// Whether both sides are Gram-equal.
    pub holds: bool,
}

/// All relation checks at rank `n` on `s` strands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BmwReport {
    /// Rank.
    pub n: u32,
    /// Strand count.
    pub strands: usize,
    /// Every checked instance.
    pub checks: Vec<BmwCheck>,
    /// True when every check holds.
    pub all_hold: bool,
}

type Combo = Vec<(RatFunc, Vec<BmwLetter>)>;

fn eval_combo(c: &Combo, s: usize, n: u32) -> Result<Morphism, BmwError> {
    let mut acc = Morphism::zero(n, s, s);
    for (coef, letters) in c {
        let m = rho(&BmwWord::new(s, letters.clone())?, n)?;
        acc.add_scaled(&m, coef).map_err(HomError::from)?;
    }
    Ok(acc)
}

fn word(letters: &[BmwLetter]) -> Combo {
    vec![(RatFunc::one(), letters.to_vec())]
}

fn scaled(c: RatFunc, letters: &[BmwLetter]) -> Combo {
    vec![(c, letters.to_vec())]
}

fn show(c: &Combo, s: usize) -> String {
    let parts: Vec<String> = c
        .iter()
        .map(|(coef, l)| {
            let w = BmwWord { strands: s, letters: l.clone() };
            if coef.is_one() {
                w.to_string()
            } else {
                format!("({coef})·{w}")
            }
        })
        .collect();
    parts.join(" + ")
}

/// Checks all eight relation families at rank `n` on `s ≤ 4` strands.
pub fn verify_bmw(n: u32, s: usize) -> Result<BmwReport, BmwError> {
    use BmwLetter::{Ginv, E, G};
    if !(2..=4).contains(&s) {
        return Err(BmwError::StrandCount(s));
    }
    let r = bmw_r(n);
    let r_inv = r.inv()?;
    let z = bmw_z();
    let mut eqs: Vec<(u8, Combo, Combo)> = Vec::new();
    for i in 1..s {
        eqs.push((
            1,
            vec![(RatFunc::one(), vec![G(i)]), (-RatFunc::one(), vec![Ginv(i)])],
            vec![(z.clone(), vec![]), (-z.clone(), vec![E(i)])],
        ));
        eqs.push((1, word(&[G(i), Ginv(i)]), word(&[])));
        eqs.push((1, word(&[Ginv(i), G(i)]), word(&[])));
        eqs.push((2, word(&[E(i), E(i)]), scaled(e_squared_coefficient(n)?, &[E(i)])));
        eqs.push((7, word(&[E(i), G(i)]), scaled(r_inv.clone(), &[E(i)])));
        eqs.push((7, word(&[G(i), E(i)]), scaled(r_inv.clone(), &[E(i)])));
        for j in i + 2..s {
            eqs.push((4, word(&[G(i), G(j)]), word(&[G(j), G(i)])));
        }
    }
    for i in 1..s.saturating_sub(1) {
        let j = i + 1;
        eqs.push((3, word(&[G(i), G(j), G(i)]), word(&[G(j), G(i), G(j)])));
        eqs.push((5, word(&[E(i), E(j), E(i)]), word(&[E(i)])));
        eqs.push((5, word(&[E(j), E(i), E(j)]), word(&[E(j)])));
        eqs.push((6, word(&[G(i), G(j), E(i)]), word(&[E(j), E(i)])));
        eqs.push((6, word(&[G(j), G(i), E(j)]), word(&[E(i), E(j)])));
        eqs.push((8, word(&[E(i), G(j), E(i)]), scaled(r.clone(), &[E(i)])));
        eqs.push((8, word(&[E(j), G(i), E(j)]), scaled(r.clone(), &[E(j)])));
    }
    eqs.sort_by_key(|e| e.0);
    let mut checks = Vec::with_capacity(eqs.len());
    for (rel, lhs, rhs) in eqs {
        let holds = morphism_equal(&eval_combo(&lhs, s, n)?, &eval_combo(&rhs, s, n)?)?;
        checks.push(BmwCheck { relation: rel, instance: format!("{} = {}", show(&lhs, s), show(&rhs, s)), holds });
    }
    let all_hold = checks.iter().all(|c| c.holds);
    Ok(BmwReport { n, strands: s, checks, all_hold })
}

/// The value of the closure of a braid at rank `n`.
///
/// With `framing_normalized` the value is multiplied by `(−q^{2n+1})^{−writhe}`,
/// which cancels the factor `−q^{2n+1}` contributed by each positive kink.
pub fn link_invariant(b: &BraidWord, n: u32, framing_normalized: bool) -> Result<RatFunc, BmwError> {
    let m = rho(&b.to_bmw(), n)?;
    let v = trace(&m)?;
    if !framing_normalized {
        return Ok(v);
    }
    let w = b.writhe();
    let sign = if w % 2 == 0 { RatFunc::one() } else { -RatFunc::one() };
    let factor = &sign * &RatFunc::q_pow(-(2 * n as i64 + 1) * w);
    Ok(&v * &factor)
}
