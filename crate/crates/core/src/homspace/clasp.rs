//! Clasps: the idempotents projecting `k` strands onto the top summand.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::linalg::nullspace_ratfunc;
use super::{cap, compose, morphism_equal, x_at, HomError};
use crate::combinatorics::enumerate_matchings;
use crate::diagram::Matching;
use crate::scalar::{qint, RatFunc};
use crate::skein::Morphism;

/// The clasp on `k` strands at rank `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clasp {
    /// Number of strands.
    pub k: usize,
    /// Rank.
    pub n: u32,
    /// The idempotent `k → k`.
    pub morphism: Morphism,
    /// False when the crossing eigenvalue constraint had to be dropped.
    pub eigen_constraint: bool,
}

fn unit(n: u32, k: usize, m: &Matching) -> Morphism {
    let mut f = Morphism::zero(n, k, k);
    f.coords.insert(m.clone(), RatFunc::one());
    f
}

/// Appends the rows `Σ_m c_m · coords(op ∘ m) − λ·c` (one per target matching).
fn add_rows(
    rows: &mut Vec<Vec<RatFunc>>,
    basis: &[Matching],
    images: &[Morphism],
    lambda: Option<&RatFunc>,
) {
    let mut targets: BTreeMap<Matching, Vec<RatFunc>> = BTreeMap::new();
    for (j, img) in images.iter().enumerate() {
        for (t, c) in &img.coords {
            targets.entry(t.clone()).or_insert_with(|| vec![RatFunc::zero(); basis.len()])[j] += c;
        }
    }
    if let Some(l) = lambda {
        for (j, m) in basis.iter().enumerate() {
            targets.entry(m.clone()).or_insert_with(|| vec![RatFunc::zero(); basis.len()])[j] -= l;
        }
    }
    rows.extend(targets.into_values());
}

/// Solves for the clasp on `k ≤ n` strands.
///
/// The clasp is the element of the span of all matchings on `(k, k)` that is
/// killed by every cap, has eigenvalue `[2]` under every quadrivalent vertex
/// (equivalently `−q^{∓1}` under the braiding crossings), and is idempotent.
pub fn clasp(k: usize, n: u32) -> Result<Clasp, HomError> {
    if k == 0 || k as u32 > n {
        return Err(HomError::InvalidArgument(format!("clasp needs 1 ≤ k ≤ n, got k={k}, n={n}")));
    }
    let basis = enumerate_matchings(2 * k);
    let units: Vec<Morphism> = basis.iter().map(|m| unit(n, k, m)).collect();
    let mut cap_rows = Vec::new();
    for i in 1..k {
        let c = cap(k, i, n)?;
        let imgs: Vec<Morphism> = units.iter().map(|u| compose(&c, u)).collect::<Result<_, _>>()?;
        add_rows(&mut cap_rows, &basis, &imgs, None);
    }
    let two = qint(2);
    let mut eigen_rows = cap_rows.clone();
    for i in 1..k {
        let x = x_at(k, i, n)?;
        let imgs: Vec<Morphism> = units.iter().map(|u| compose(&x, u)).collect::<Result<_, _>>()?;
        add_rows(&mut eigen_rows, &basis, &imgs, Some(&two));
    }
    let mut eigen_constraint = true;
    let mut sols = nullspace_ratfunc(&eigen_rows, basis.len())?;
    if sols.is_empty() {
        eigen_constraint = false;
        sols = nullspace_ratfunc(&cap_rows, basis.len())?;
    }
    match sols.len() {
        0 => return Err(HomError::NoSolution(format!("k={k}, n={n}"))),
        1 => {}
        d => return Err(HomError::NonUnique(format!("k={k}, n={n}: solution space of dimension {d}"))),
    }
    let mut f0 = Morphism::zero(n, k, k);
    for (m, c) in basis.iter().zip(&sols[0]) {
        if !c.is_zero() {
            f0.coords.insert(m.clone(), c.clone());
        }
    }
    let sq = compose(&f0, &f0)?;
    let (m0, c0) = f0.coords.iter().next().expect("nonzero solution");
    let lambda = sq.coord(m0).checked_div(c0)?;
    if lambda.is_zero() {
        return Err(HomError::NoSolution(format!("k={k}, n={n}: nilpotent solution")));
    }
    let f = f0.scale(&lambda.inv()?);
    if !morphism_equal(&compose(&f, &f)?, &f)? {
        return Err(HomError::NoSolution(format!("k={k}, n={n}: solution is not idempotent")));
    }
    Ok(Clasp { k, n, morphism: f, eigen_constraint })
}
