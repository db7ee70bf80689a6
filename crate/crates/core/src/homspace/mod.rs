//! Linear algebra over `ℚ(q)` on morphisms: composition, tensor product,
//! the trace pairing, Gram matrices and their ranks, equality in the
//! quotient category, and the clasp idempotents.

mod clasp;
pub mod gram;
pub mod linalg;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::enumerate_matchings;
use crate::diagram::{build_planar, canonical_reduced, DiagramError, Gen, Matching, PlanarDiagram, SliceWord};
use crate::scalar::{RatFunc, ScalarError, ZLaurent};
use crate::skein::{canonicalize, with_engine, Morphism, SkeinError};

pub use clasp::{clasp, Clasp};
pub use gram::{gram, gram_rank, GramMatrix, RankMode, RankReport};

/// Errors raised by morphism algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    /// Boundary widths or ranks do not agree.
    #[error("width mismatch: {0}")]
    WidthMismatch(String),
    /// The point count of a Gram matrix must be even.
    #[error("point count {0} is odd")]
    OddPointCount(usize),
    /// Exact rank computation is limited in size.
    #[error("exact rank is supported for at most 8 points, got {0}")]
    ExactTooLarge(usize),
    /// The rank certificate could not be completed.
    #[error("rank certificate failed: {0}")]
    CertificateFailed(String),
    /// Every sampled point was a pole.
    #[error("no admissible evaluation point found")]
    PoleAtPoint,
    /// The clasp system has no solution.
    #[error("clasp system has no solution: {0}")]
    NoSolution(String),
    /// The clasp system has more than one solution.
    #[error("clasp system is not uniquely solvable: {0}")]
    NonUnique(String),
    /// Arguments out of range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Error from skein evaluation.
    #[error(transparent)]
    Skein(#[from] SkeinError),
    /// Error from the diagram layer.
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    /// Error from scalar arithmetic.
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Sign of a braiding crossing.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum CrossingSign {
    /// The positive crossing.
    Positive,
    /// The negative crossing.
    Negative,
}

/// The morphism of a single diagram.
pub fn from_diagram(d: &PlanarDiagram, n: u32) -> Result<Morphism, HomError> {
    Ok(canonicalize(d, n)?)
}

/// The morphism of a slice word.
pub fn from_word(w: &SliceWord, n: u32) -> Result<Morphism, HomError> {
    from_diagram(&build_planar(w)?, n)
}

fn word(width: usize, gens: Vec<Gen>, n: u32) -> Result<Morphism, HomError> {
    from_word(&SliceWord::new(width, gens)?, n)
}

/// The identity on `k` strands.
pub fn identity(k: usize, n: u32) -> Result<Morphism, HomError> {
    from_diagram(&PlanarDiagram::identity(k), n)
}

/// The cap `k → k−2` joining strands `i, i+1` (1-based).
pub fn cap(k: usize, i: usize, n: u32) -> Result<Morphism, HomError> {
    word(k, vec![Gen::Cap(i)], n)
}

/// The cup `k → k+2` creating strands `i, i+1` (1-based).
pub fn cup(k: usize, i: usize, n: u32) -> Result<Morphism, HomError> {
    word(k, vec![Gen::Cup(i)], n)
}

/// The quadrivalent vertex on strands `i, i+1` (1-based) of `k` strands.
pub fn x_at(k: usize, i: usize, n: u32) -> Result<Morphism, HomError> {
    word(k, vec![Gen::Cross(i)], n)
}

/// Cap followed by cup on two strands.
pub fn cupcap(n: u32) -> Result<Morphism, HomError> {
    word(2, vec![Gen::Cap(1), Gen::Cup(1)], n)
}

/// The braiding crossing on two strands in the quadrivalent basis:
/// `q·id − X + q⁻¹·cupcap` for the positive sign and
/// `q⁻¹·id − X + q·cupcap` for the negative sign.
pub fn crossing(n: u32, sign: CrossingSign) -> Result<Morphism, HomError> {
    let e = match sign {
        CrossingSign::Positive => 1,
        CrossingSign::Negative => -1,
    };
    let mut out = identity(2, n)?.scale(&RatFunc::q_pow(e));
    out.add_scaled(&x_at(2, 1, n)?, &RatFunc::from_int(-1))?;
    out.add_scaled(&cupcap(n)?, &RatFunc::q_pow(-e))?;
    Ok(out)
}

/// The braiding crossing on strands `i, i+1` (1-based) of `k` strands.
pub fn crossing_at(k: usize, i: usize, n: u32, sign: CrossingSign) -> Result<Morphism, HomError> {
    if i == 0 || i + 1 > k {
        return Err(HomError::InvalidArgument(format!("position {i} on {k} strands")));
    }
    let left = identity(i - 1, n)?;
    let right = identity(k - i - 1, n)?;
    tensor(&tensor(&left, &crossing(n, sign)?)?, &right)
}

fn check_same_rank(f: &Morphism, g: &Morphism) -> Result<u32, HomError> {
    if f.n != g.n {
        return Err(HomError::WidthMismatch(format!("ranks {} and {}", f.n, g.n)));
    }
    Ok(f.n)
}

fn rep(m: &Matching, bottom: usize) -> PlanarDiagram {
    canonical_reduced(m).with_bottom(bottom)
}

/// Accumulates the normal forms of `terms` into a morphism.
fn collect_terms(
    n: u32,
    bottom: usize,
    top: usize,
    terms: impl IntoIterator<Item = (PlanarDiagram, RatFunc)>,
) -> Result<Morphism, HomError> {
    let mut acc: BTreeMap<Matching, RatFunc> = BTreeMap::new();
    for (d, c) in terms {
        let z = with_engine(n, |e| e.nf(&d))?;
        for (m, v) in z {
            let e = acc.entry(m).or_default();
            *e += &(&v.to_ratfunc() * &c);
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(Morphism { n, bottom, top, coords: acc })
}

/// The composite `f ∘ g`: `g` is applied first and `f` is stacked on top.
pub fn compose(f: &Morphism, g: &Morphism) -> Result<Morphism, HomError> {
    let n = check_same_rank(f, g)?;
    if g.top != f.bottom {
        return Err(HomError::WidthMismatch(format!(
            "cannot compose {}→{} after {}→{}",
            f.bottom, f.top, g.bottom, g.top
        )));
    }
    let mut terms = Vec::new();
    for (mg, cg) in &g.coords {
        let dg = rep(mg, g.bottom);
        for (mf, cf) in &f.coords {
            terms.push((dg.stack(&rep(mf, f.bottom))?, cf * cg));
        }
    }
    collect_terms(n, g.bottom, f.top, terms)
}

/// The tensor product, with `g` placed to the right of `f`.
pub fn tensor(f: &Morphism, g: &Morphism) -> Result<Morphism, HomError> {
    let n = check_same_rank(f, g)?;
    let mut terms = Vec::new();
    for (mf, cf) in &f.coords {
        let df = rep(mf, f.bottom);
        for (mg, cg) in &g.coords {
            terms.push((df.side_by_side(&rep(mg, g.bottom)), cf * cg));
        }
    }
    collect_terms(n, f.bottom + g.bottom, f.top + g.top, terms)
}

/// The transpose `k₂ → k₁`, given by rotating every diagram by 180°.
pub fn dual_flip(f: &Morphism) -> Result<Morphism, HomError> {
    let terms: Vec<_> = f.coords.iter().map(|(m, c)| (rep(m, f.bottom).transpose(), c.clone())).collect();
    collect_terms(f.n, f.top, f.bottom, terms)
}

/// The quantum trace of an endomorphism `k → k`.
pub fn trace(f: &Morphism) -> Result<RatFunc, HomError> {
    if f.bottom != f.top {
        return Err(HomError::WidthMismatch(format!("trace of {}→{}", f.bottom, f.top)));
    }
    let k = f.bottom;
    let close = Matching::from_pairs(2 * k, &(0..k).map(|i| (i, 2 * k - 1 - i)).collect::<Vec<_>>())
        .map_err(|e| HomError::InvalidArgument(e.to_string()))?;
    let mut acc = RatFunc::zero();
    for (m, c) in &f.coords {
        let d = rep(m, k).close_with(&close);
        let v = with_engine(f.n, |e| e.eval_closed(&d))?;
        acc += &(&v.to_ratfunc() * c);
    }
    Ok(acc)
}

type PairKey = (u32, usize, Matching, Matching);

fn pair_cache() -> &'static Mutex<HashMap<PairKey, ZLaurent>> {
    static CACHE: OnceLock<Mutex<HashMap<PairKey, ZLaurent>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The pairing of two canonical diagrams with the given bottom width:
/// the evaluation of the sphere obtained by gluing one to the flip of the other.
pub fn pair_value(n: u32, bottom: usize, a: &Matching, b: &Matching) -> Result<ZLaurent, HomError> {
    let key = if a <= b { (n, bottom, a.clone(), b.clone()) } else { (n, bottom, b.clone(), a.clone()) };
    if let Some(v) = pair_cache().lock().expect("cache lock").get(&key) {
        return Ok(v.clone());
    }
    let d = rep(a, bottom).pair_closure(&rep(b, bottom))?;
    let v = with_engine(n, |e| e.eval_closed(&d))?;
    pair_cache().lock().expect("cache lock").insert(key, v.clone());
    Ok(v)
}

/// The trace pairing `tr(dual_flip(g) ∘ f)` of two morphisms `k₁ → k₂`.
pub fn trace_pair(f: &Morphism, g: &Morphism) -> Result<RatFunc, HomError> {
    let n = check_same_rank(f, g)?;
    if (f.bottom, f.top) != (g.bottom, g.top) {
        return Err(HomError::WidthMismatch(format!(
            "pairing {}→{} with {}→{}",
            f.bottom, f.top, g.bottom, g.top
        )));
    }
    let mut acc = RatFunc::zero();
    for (a, ca) in &f.coords {
        for (b, cb) in &g.coords {
            let v = pair_value(n, f.bottom, a, b)?;
            acc += &(&v.to_ratfunc() * &(ca * cb));
        }
    }
    Ok(acc)
}

/// Equality in the quotient category: `f − g` pairs to zero with every
/// canonical diagram on the same boundary.
pub fn morphism_equal(f: &Morphism, g: &Morphism) -> Result<bool, HomError> {
    let n = check_same_rank(f, g)?;
    if (f.bottom, f.top) != (g.bottom, g.top) {
        return Err(HomError::WidthMismatch(format!(
            "comparing {}→{} with {}→{}",
            f.bottom, f.top, g.bottom, g.top
        )));
    }
    let mut diff = f.clone();
    diff.add_scaled(g, &RatFunc::from_int(-1))?;
    if diff.is_zero() {
        return Ok(true);
    }
    let basis = enumerate_matchings(f.bottom + f.top);
    let bottom = f.bottom;
    let nonzero = basis.par_iter().map(|s| -> Result<bool, HomError> {
        let mut acc = RatFunc::zero();
        for (m, c) in &diff.coords {
            let v = pair_value(n, bottom, m, s)?;
            acc += &(&v.to_ratfunc() * c);
        }
        Ok(!acc.is_zero())
    });
    let found: Result<Vec<bool>, HomError> = nonzero.collect();
    Ok(!found?.into_iter().any(|b| b))
}
