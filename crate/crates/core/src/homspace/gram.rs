//! Gram matrices of the trace pairing and their ranks over `ℚ(q)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use super::linalg::{self, fp, IntPoly, PRIME};
use super::{pair_value, HomError};
use crate::combinatorics::{enumerate_matchings, max_crossing};
use crate::diagram::Matching;
use crate::scalar::{RatFunc, ZLaurent};

/// The Gram matrix of the trace pairing on all matchings of `m` points.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    /// Rank.
    pub n: u32,
    /// Number of boundary points.
    pub m: usize,
    /// Row and column index, in lexicographic order.
    pub matchings: Vec<Matching>,
    /// Entries as integral Laurent polynomials.
    pub entries: Vec<Vec<ZLaurent>>,
}

impl GramMatrix {
    /// Matrix size `(m−1)!!`.
    pub fn size(&self) -> usize {
        self.matchings.len()
    }

    /// Entry as a rational function.
    pub fn entry(&self, i: usize, j: usize) -> RatFunc {
        self.entries[i][j].to_ratfunc()
    }

    /// True when the matrix equals its transpose.
    pub fn is_symmetric(&self) -> bool {
        let s = self.size();
        (0..s).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    fn eval_mod(&self, x: u64) -> Vec<Vec<u64>> {
        self.entries.iter().map(|row| row.iter().map(|z| z.eval_mod(x, PRIME)).collect()).collect()
    }
}

impl Serialize for GramMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<RatFunc>> =
            self.entries.iter().map(|r| r.iter().map(ZLaurent::to_ratfunc).collect()).collect();
        let mut st = s.serialize_struct("GramMatrix", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("matchings", &self.matchings)?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}

/// Computes the Gram matrix on `m` points, evaluating entries in parallel.
pub fn gram(m: usize, n: u32) -> Result<GramMatrix, HomError> {
    if m % 2 == 1 {
        return Err(HomError::OddPointCount(m));
    }
    if n == 0 {
        return Err(HomError::InvalidArgument("rank must be at least 1".into()));
    }
    let matchings = enumerate_matchings(m);
    let s = matchings.len();
    let pairs: Vec<(usize, usize)> = (0..s).flat_map(|i| (i..s).map(move |j| (i, j))).collect();
    let vals: Vec<ZLaurent> = pairs
        .par_iter()
        .map(|&(i, j)| pair_value(n, 0, &matchings[i], &matchings[j]))
        .collect::<Result<_, _>>()?;
    let mut entries = vec![vec![ZLaurent::zero(); s]; s];
    for (&(i, j), v) in pairs.iter().zip(vals) {
        entries[j][i] = v.clone();
        entries[i][j] = v;
    }
    Ok(GramMatrix { n, m, matchings, entries })
}

/// How a rank is to be computed.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum RankMode {
    /// Exact rank over `ℚ(q)`.
    Exact,
    /// Maximum rank over random evaluation points.
    Probabilistic {
        /// Random seed.
        seed: u64,
        /// Number of evaluation points (at least three are used).
        trials: usize,
    },
}

/// The outcome of a rank computation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RankReport {
    /// The rank.
    pub rank: usize,
    /// `"exact"` or `"probabilistic"`.
    pub mode: String,
    /// The algorithm used: `"bareiss"`, `"certificate"` or `"modular"`.
    pub method: String,
    /// Matrix size.
    pub size: usize,
}

/// Rank of the Gram matrix on `m` points.
pub fn gram_rank(m: usize, n: u32, mode: RankMode) -> Result<RankReport, HomError> {
    if m % 2 == 1 {
        return Err(HomError::OddPointCount(m));
    }
    if mode == RankMode::Exact && m > 8 {
        return Err(HomError::ExactTooLarge(m));
    }
    let g = gram(m, n)?;
    rank_of(&g, mode)
}

/// Rank of an already computed Gram matrix.
pub fn rank_of(g: &GramMatrix, mode: RankMode) -> Result<RankReport, HomError> {
    let size = g.size();
    let report = |rank, mode: &str, method: &str| RankReport {
        rank,
        mode: mode.to_string(),
        method: method.to_string(),
        size,
    };
    match mode {
        RankMode::Exact if g.m <= 6 => Ok(report(bareiss(g), "exact", "bareiss")),
        RankMode::Exact => Ok(report(certified_rank(g)?, "exact", "certificate")),
        RankMode::Probabilistic { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let order: Vec<usize> = (0..size).collect();
            let mut best = 0;
            for _ in 0..trials.max(3) {
                let x = random_point(&mut rng)?;
                best = best.max(linalg::echelon_mod(&g.eval_mod(x), &order, PRIME).rank);
            }
            Ok(report(best, "probabilistic", "modular"))
        }
    }
}

/// A random nonzero residue; entries are Laurent polynomials, so zero is the only pole.
fn random_point(rng: &mut ChaCha8Rng) -> Result<u64, HomError> {
    for _ in 0..16 {
        let x = rng.gen_range(2..PRIME);
        if x != 0 {
            return Ok(x);
        }
    }
    Err(HomError::PoleAtPoint)
}

fn bareiss(g: &GramMatrix) -> usize {
    let shift = -g.entries.iter().flatten().filter_map(ZLaurent::min_exp).min().unwrap_or(0);
    let a = g.entries.iter().map(|r| r.iter().map(|z| IntPoly::from_laurent(z, shift)).collect()).collect();
    linalg::bareiss_rank(a)
}

const MAX_SAMPLES: usize = 2048;

/// Exact rank by certificate.
///
/// A nonvanishing minor modulo a prime at one point bounds the rank from
/// below.  For the upper bound, one kernel vector per non-pivot column is
/// reconstructed from modular samples and then checked exactly in
/// `ℤ[q, q⁻¹]`; these vectors are independent because each has a one in its
/// own non-pivot column and zeros in the others.
fn certified_rank(g: &GramMatrix) -> Result<usize, HomError> {
    let size = g.size();
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by_key(|&i| (max_crossing(&g.matchings[i]), g.matchings[i].inversion_count(), i));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let x0 = random_point(&mut rng)?;
    let ech = linalg::echelon_mod(&g.eval_mod(x0), &order, PRIME);
    let r = ech.rank;
    if r == size {
        return Ok(r);
    }
    let rows = ech.pivot_rows.clone();
    let cols = ech.pivot_cols.clone();
    let free: Vec<usize> = (0..size).filter(|c| !cols.contains(c)).collect();

    let sample = |x: u64| -> Option<Vec<Vec<u64>>> {
        let a = g.eval_mod(x);
        let sub: Vec<Vec<u64>> = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j]).collect()).collect();
        let rhs: Vec<Vec<u64>> = free
            .iter()
            .map(|&j| rows.iter().map(|&i| linalg::sub_mod(0, a[i][j], PRIME)).collect())
            .collect();
        linalg::solve_mod(&sub, &rhs, PRIME)
    };

    let mut xs: Vec<u64> = Vec::new();
    let mut ys: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut target = 16;
    loop {
        while xs.len() < target {
            let x = random_point(&mut rng)?;
            if xs.contains(&x) {
                continue;
            }
            if let Some(y) = sample(x) {
                xs.push(x);
                ys.push(y);
            }
        }
        if let Some(vectors) = reconstruct(&xs, &ys, free.len(), r, &mut rng, &sample)? {
            verify_kernel(g, &cols, &free, &vectors)?;
            return Ok(r);
        }
        if target >= MAX_SAMPLES {
            return Err(HomError::CertificateFailed(format!(
                "kernel reconstruction did not stabilize with {MAX_SAMPLES} samples"
            )));
        }
        target *= 2;
    }
}

/// A kernel vector as `(numerators over the pivot columns, common denominator)`,
/// polynomials in `q` with rational coefficients.
type KernelVector = (Vec<Vec<BigRational>>, Vec<BigRational>);

fn reconstruct(
    xs: &[u64],
    ys: &[Vec<Vec<u64>>],
    nfree: usize,
    r: usize,
    rng: &mut ChaCha8Rng,
    sample: &dyn Fn(u64) -> Option<Vec<Vec<u64>>>,
) -> Result<Option<Vec<KernelVector>>, HomError> {
    let t = xs.len();
    let mut modulus = vec![1u64];
    for &x in xs {
        modulus = fp::mul(&modulus, &[linalg::sub_mod(0, x, PRIME), 1], PRIME);
    }
    let bound = t / 2;
    let mut checks: Vec<(u64, Vec<Vec<u64>>)> = Vec::new();
    while checks.len() < 4 {
        let x = random_point(rng)?;
        if let Some(y) = sample(x) {
            checks.push((x, y));
        }
    }
    let mut out = Vec::with_capacity(nfree);
    for j in 0..nfree {
        let mut fracs = Vec::with_capacity(r);
        for i in 0..r {
            let vals: Vec<u64> = ys.iter().map(|y| y[j][i]).collect();
            let u = fp::interpolate(xs, &vals, PRIME);
            let Some((num, den)) = fp::rational_reconstruct(&u, &modulus, bound, PRIME) else {
                return Ok(None);
            };
            for (x, y) in &checks {
                let d = fp::eval(&den, *x, PRIME);
                if d == 0 || linalg::mul_mod(y[j][i], d, PRIME) != fp::eval(&num, *x, PRIME) {
                    return Ok(None);
                }
            }
            fracs.push((num, den));
        }
        let mut l = vec![1u64];
        for (_, den) in &fracs {
            let gcd = fp::gcd(&l, den, PRIME);
            let (q, _) = fp::divrem(den, &gcd, PRIME);
            l = fp::mul(&l, &q, PRIME);
        }
        let lift = |p: &[u64]| -> Option<Vec<BigRational>> {
            p.iter().map(|&c| linalg::rational_lift(c, PRIME)).collect()
        };
        let mut nums = Vec::with_capacity(r);
        for (num, den) in &fracs {
            let (q, _) = fp::divrem(&l, den, PRIME);
            let Some(w) = lift(&fp::mul(num, &q, PRIME)) else {
                return Ok(None);
            };
            nums.push(w);
        }
        let Some(ld) = lift(&l) else {
            return Ok(None);
        };
        out.push((nums, ld));
    }
    Ok(Some(out))
}

fn to_zlaurent(p: &[BigRational], scale: &BigInt) -> Option<ZLaurent> {
    let mut z = ZLaurent::zero();
    for (e, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let v = c * BigRational::from_integer(scale.clone());
        z.add_scaled(&ZLaurent::monomial(e as i64, linalg::to_i128(&v)?), 1);
    }
    Some(z)
}

fn verify_kernel(g: &GramMatrix, cols: &[usize], free: &[usize], vectors: &[KernelVector]) -> Result<(), HomError> {
    let size = g.size();
    let fail = |why: String| HomError::CertificateFailed(why);
    let checks: Result<Vec<()>, HomError> = vectors
        .par_iter()
        .enumerate()
        .map(|(k, (nums, den))| {
            let scale = linalg::denominator_lcm(nums.iter().flatten().chain(den.iter()));
            let mut w = vec![ZLaurent::zero(); size];
            for (i, num) in nums.iter().enumerate() {
                w[cols[i]] = to_zlaurent(num, &scale).ok_or_else(|| fail("coefficient overflow".into()))?;
            }
            w[free[k]] = to_zlaurent(den, &scale).ok_or_else(|| fail("coefficient overflow".into()))?;
            for (s, row) in g.entries.iter().enumerate() {
                let mut acc = ZLaurent::zero();
                for (gi, wi) in row.iter().zip(&w) {
                    if wi.is_zero() || gi.is_zero() {
                        continue;
                    }
                    let t = gi.checked_mul(wi).ok_or_else(|| fail("coefficient overflow".into()))?;
                    acc = acc.checked_add(&t).ok_or_else(|| fail("coefficient overflow".into()))?;
                }
                if !acc.is_zero() {
                    return Err(fail(format!("kernel vector {k} fails at row {s}")));
                }
            }
            Ok(())
        })
        .collect();
    checks.map(|_| ())
}
