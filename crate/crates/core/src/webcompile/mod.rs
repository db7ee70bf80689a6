//! Labeled trivalent webs as terms, their compilation into morphisms on
//! 1-labeled strands by clasp substitution, and the relation ledger.
//!
//! An edge labeled `k` is represented by `k` parallel strands carrying the
//! clasp `P_k`. The generators compile as follows, with `[k]` the quantum
//! integer and `[k]!` its factorial:
//!
//! * `Id(k)` is `P_k`;
//! * `Merge(k,ℓ)` is `P_{k+ℓ}`;
//! * `Split(k,ℓ)` is `[k+ℓ choose k]·P_{k+ℓ}`;
//! * `CapW(k)` is `[k]!` times the nested caps precomposed with `P_k ⊗ id`;
//! * `CupW(k)` is `1/[k]!` times `P_k ⊗ id` after the nested cups;
//! * `Vertex3(k,ℓ,m)` expands into the triangle of a split on each leg, a
//!   cap on the inner edge, and a merge.
//!
//! Any label above `n` yields the zero morphism and 0-labeled edges are erased.

mod relations;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Gen, SliceWord};
use crate::homspace::{self, clasp, from_word, HomError};
use crate::scalar::{qbinom, qfact, qint, RatFunc};
use crate::skein::Morphism;

pub use relations::{instance_width, relation_instances, MAX_SUITE_WIDTH, run_suite, verify_relation, Relation, RelationReport};

/// Errors raised while building or compiling webs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WebError {
    /// The rank must be at least 1.
    #[error("rank n must be at least 1, got {0}")]
    LabelOutOfRange(u32),
    /// A general vertex with labels violating the triangle or parity constraints.
    #[error("labels ({0}, {1}, {2}) are not admissible for a trivalent vertex")]
    Inadmissible(usize, usize, usize),
    /// Boundary words of a composite do not agree.
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    /// Unknown relation name or parameters out of range.
    #[error("invalid relation request: {0}")]
    InvalidRelation(String),
    /// Error from morphism algebra.
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// A web term. Labels are edge labels; `Compose(a, b)` applies `b` first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Web {
    /// The identity on a `k`-labeled edge.
    Id(usize),
    /// The cap `k ⊗ k → 0`.
    CapW(usize),
    /// The cup `0 → k ⊗ k`.
    CupW(usize),
    /// The flow vertex `k ⊗ ℓ → k+ℓ`.
    Merge(usize, usize),
    /// The flow vertex `k+ℓ → k ⊗ ℓ`.
    Split(usize, usize),
    /// The general trivalent vertex `k ⊗ ℓ → m`.
    Vertex3(usize, usize, usize),
    /// Horizontal juxtaposition.
    Tensor(Box<Web>, Box<Web>),
    /// Vertical composition: the second term is applied first.
    Compose(Box<Web>, Box<Web>),
}

fn nz(labels: &[usize]) -> Vec<usize> {
    labels.iter().copied().filter(|&l| l > 0).collect()
}

/// Whether `(k, ℓ, m)` labels a general trivalent vertex.
pub fn admissible(k: usize, l: usize, m: usize) -> bool {
    m <= k + l && k <= l + m && l <= k + m && (k + l + m) % 2 == 0
}

impl Web {
    /// `a ⊗ b`.
    pub fn ten(a: Web, b: Web) -> Web {
        Web::Tensor(Box::new(a), Box::new(b))
    }

    /// `a ∘ b`, applying `b` first.
    pub fn cmp(a: Web, b: Web) -> Web {
        Web::Compose(Box::new(a), Box::new(b))
    }

    /// Tensor product of a nonempty list, left to right.
    pub fn ten_all(parts: impl IntoIterator<Item = Web>) -> Web {
        parts.into_iter().reduce(Web::ten).unwrap_or(Web::Id(0))
    }

    /// Composite of a nonempty list, read bottom to top.
    pub fn stack(parts: impl IntoIterator<Item = Web>) -> Web {
        parts.into_iter().reduce(|below, above| Web::cmp(above, below)).unwrap_or(Web::Id(0))
    }

    /// The identity on a word of labels.
    pub fn id_word(labels: &[usize]) -> Web {
        Web::ten_all(labels.iter().map(|&l| Web::Id(l)))
    }

    /// Source and target label words, with zero labels erased.
    pub fn boundary(&self) -> Result<(Vec<usize>, Vec<usize>), WebError> {
        Ok(match self {
            Web::Id(k) => (nz(&[*k]), nz(&[*k])),
            Web::CapW(k) => (nz(&[*k, *k]), vec![]),
            Web::CupW(k) => (vec![], nz(&[*k, *k])),
            Web::Merge(k, l) => (nz(&[*k, *l]), nz(&[k + l])),
            Web::Split(k, l) => (nz(&[k + l]), nz(&[*k, *l])),
            Web::Vertex3(k, l, m) => {
                if !admissible(*k, *l, *m) {
                    return Err(WebError::Inadmissible(*k, *l, *m));
                }
                (nz(&[*k, *l]), nz(&[*m]))
            }
            Web::Tensor(a, b) => {
                let (sa, ta) = a.boundary()?;
                let (sb, tb) = b.boundary()?;
                ([sa, sb].concat(), [ta, tb].concat())
            }
            Web::Compose(a, b) => {
                let (sa, ta) = a.boundary()?;
                let (sb, tb) = b.boundary()?;
                if tb != sa {
                    return Err(WebError::BoundaryMismatch(format!(
                        "cannot compose {sa:?}→{ta:?} after {sb:?}→{tb:?}"
                    )));
                }
                (sb, ta)
            }
        })
    }

    /// The largest label appearing anywhere in the term, including internal edges.
    pub fn max_label(&self) -> usize {
        match self {
            Web::Id(k) | Web::CapW(k) | Web::CupW(k) => *k,
            Web::Merge(k, l) | Web::Split(k, l) => k + l,
            Web::Vertex3(k, l, m) => *k.max(l).max(m),
            Web::Tensor(a, b) | Web::Compose(a, b) => a.max_label().max(b.max_label()),
        }
    }

    /// The 180° rotation `Y^rev → X^rev` of a term `X → Y`.
    pub fn rotate(&self) -> Result<Web, WebError> {
        let (x, y) = self.boundary()?;
        let xr: Vec<usize> = x.iter().rev().copied().collect();
        let yr: Vec<usize> = y.iter().rev().copied().collect();
        Ok(Web::stack([
            Web::ten(cup_nest(&x), Web::id_word(&yr)),
            Web::ten_all([Web::id_word(&xr), self.clone(), Web::id_word(&yr)]),
            Web::ten(Web::id_word(&xr), cap_nest(&y)),
        ]))
    }

    /// The general vertex `m → k ⊗ ℓ`, the rotation of `Vertex3(ℓ, k, m)`.
    pub fn vsplit(k: usize, l: usize, m: usize) -> Result<Web, WebError> {
        Web::Vertex3(l, k, m).rotate()
    }

    /// The H-shaped web `a ⊗ b → c ⊗ d` with a horizontal rung labeled `r`.
    pub fn h(a: usize, b: usize, c: usize, d: usize, r: usize) -> Result<Web, WebError> {
        Ok(Web::stack([
            Web::ten(Web::Id(a), Web::vsplit(r, d, b)?),
            Web::ten(Web::Vertex3(a, r, c), Web::Id(d)),
        ]))
    }

    /// The triangle expansion of a general vertex.
    fn expand_vertex3(k: usize, l: usize, m: usize) -> Web {
        let a = (k + l - m) / 2;
        let b = (k + m - l) / 2;
        let c = (l + m - k) / 2;
        Web::stack([
            Web::ten(Web::Split(b, a), Web::Split(a, c)),
            Web::ten_all([Web::Id(b), Web::CapW(a), Web::Id(c)]),
            Web::Merge(b, c),
        ])
    }
}

/// Nested cups `0 → X^rev ⊗ X`.
fn cup_nest(x: &[usize]) -> Web {
    let layers = (0..x.len()).rev().map(|j| {
        let inner: Vec<usize> = x[j + 1..].to_vec();
        let inner_rev: Vec<usize> = inner.iter().rev().copied().collect();
        Web::ten_all([Web::id_word(&inner_rev), Web::CupW(x[j]), Web::id_word(&inner)])
    });
    Web::stack(layers)
}

/// Nested caps `Y ⊗ Y^rev → 0`.
fn cap_nest(y: &[usize]) -> Web {
    let layers = (0..y.len()).rev().map(|j| {
        let outer: Vec<usize> = y[..j].to_vec();
        let outer_rev: Vec<usize> = outer.iter().rev().copied().collect();
        Web::ten_all([Web::id_word(&outer), Web::CapW(y[j]), Web::id_word(&outer_rev)])
    });
    Web::stack(layers)
}

impl fmt::Display for Web {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Web::Id(k) => write!(f, "(id {k})"),
            Web::CapW(k) => write!(f, "(cap {k})"),
            Web::CupW(k) => write!(f, "(cup {k})"),
            Web::Merge(k, l) => write!(f, "(m {k} {l})"),
            Web::Split(k, l) => write!(f, "(s {k} {l})"),
            Web::Vertex3(k, l, m) => write!(f, "(v3 {k} {l} {m})"),
            Web::Tensor(a, b) => write!(f, "(ten {a} {b})"),
            Web::Compose(a, b) => write!(f, "(cmp {a} {b})"),
        }
    }
}

/// A web together with its morphism on 1-labeled strands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompiledWeb {
    /// The source term.
    pub source: Web,
    /// Source label word.
    pub from: Vec<usize>,
    /// Target label word.
    pub to: Vec<usize>,
    /// The morphism; its widths are the label sums.
    pub morphism: Morphism,
}

type GenKey = (u32, Web);

fn gen_cache() -> &'static Mutex<HashMap<GenKey, Morphism>> {
    static CACHE: OnceLock<Mutex<HashMap<GenKey, Morphism>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn clasp_cache() -> &'static Mutex<HashMap<(usize, u32), Morphism>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Morphism>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The clasp `P_k` at rank `n`, with `P_0` the empty identity. Cached per `(k, n)`.
pub fn clasp_morphism(k: usize, n: u32) -> Result<Morphism, WebError> {
    if k == 0 {
        return Ok(homspace::identity(0, n)?);
    }
    if let Some(m) = clasp_cache().lock().expect("cache lock").get(&(k, n)) {
        return Ok(m.clone());
    }
    let p = clasp(k, n)?.morphism;
    clasp_cache().lock().expect("cache lock").insert((k, n), p.clone());
    Ok(p)
}

fn nested(k: usize, n: u32, caps: bool) -> Result<Morphism, WebError> {
    let w = if caps {
        SliceWord::new(2 * k, (1..=k).rev().map(Gen::Cap).collect())
    } else {
        SliceWord::new(0, (1..=k).map(Gen::Cup).collect())
    }
    .map_err(HomError::from)?;
    Ok(from_word(&w, n)?)
}

fn compile_generator(w: &Web, n: u32) -> Result<Morphism, WebError> {
    let key = (n, w.clone());
    if let Some(m) = gen_cache().lock().expect("cache lock").get(&key) {
        return Ok(m.clone());
    }
    let m = match *w {
        Web::Id(k) => clasp_morphism(k, n)?,
        Web::Merge(k, l) => clasp_morphism(k + l, n)?,
        Web::Split(k, l) => clasp_morphism(k + l, n)?.scale(&qbinom((k + l) as i64, k as u32)),
        Web::CapW(k) => {
            let p = homspace::tensor(&clasp_morphism(k, n)?, &homspace::identity(k, n)?)?;
            homspace::compose(&nested(k, n, true)?, &p)?.scale(&qfact(k as u32))
        }
        Web::CupW(k) => {
            let p = homspace::tensor(&clasp_morphism(k, n)?, &homspace::identity(k, n)?)?;
            let inv = qfact(k as u32).inv().map_err(HomError::from)?;
            homspace::compose(&p, &nested(k, n, false)?)?.scale(&inv)
        }
        _ => unreachable!("only generators are cached"),
    };
    gen_cache().lock().expect("cache lock").insert(key, m.clone());
    Ok(m)
}

fn compile_morphism(w: &Web, n: u32) -> Result<Morphism, WebError> {
    match w {
        Web::Id(_) | Web::Merge(..) | Web::Split(..) | Web::CapW(_) | Web::CupW(_) => compile_generator(w, n),
        Web::Vertex3(k, l, m) => {
            if !admissible(*k, *l, *m) {
                return Err(WebError::Inadmissible(*k, *l, *m));
            }
            compile_morphism(&Web::expand_vertex3(*k, *l, *m), n)
        }
        Web::Tensor(a, b) => Ok(homspace::tensor(&compile_morphism(a, n)?, &compile_morphism(b, n)?)?),
        Web::Compose(a, b) => Ok(homspace::compose(&compile_morphism(a, n)?, &compile_morphism(b, n)?)?),
    }
}

/// Compiles a web at rank `n`. Webs with a label above `n` compile to zero.
pub fn compile(w: &Web, n: u32) -> Result<CompiledWeb, WebError> {
    if n == 0 {
        return Err(WebError::LabelOutOfRange(n));
    }
    let (from, to) = w.boundary()?;
    let (b, t) = (from.iter().sum(), to.iter().sum());
    let morphism =
        if w.max_label() > n as usize { Morphism::zero(n, b, t) } else { compile_morphism(w, n)? };
    Ok(CompiledWeb { source: w.clone(), from, to, morphism })
}

/// The closed formula `(−1)^k [n+1−k]/[n+1] · [2n+2 choose k]` for the
/// quantum dimension of the `k`-th fundamental representation.
pub fn qdim_formula(k: usize, n: u32) -> RatFunc {
    let (k, n) = (k as i64, n as i64);
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let ratio = qint(n + 1 - k).checked_div(&qint(n + 1)).expect("[n+1] is nonzero");
    &(&ratio * &qbinom(2 * n + 2, k as u32)) * &RatFunc::from_int(sign)
}

/// Checks the ratio of successive quantum dimensions
/// `qdim(k)/qdim(k−1) = −([2(n+2−k)]/[2(n+1−k)])·([n−k+1]/[k])·([2n+3−k][2n+2−2k]/([2n+4−2k][n+2−k]))`
/// for `1 ≤ k ≤ n`; `k = 0` checks `qdim(0) = 1`.
pub fn qdim_ratio_check(k: usize, n: u32) -> bool {
    if k == 0 {
        return qdim_formula(0, n) == RatFunc::one();
    }
    if k as u32 > n {
        return false;
    }
    let (ki, ni) = (k as i64, n as i64);
    let q = qint;
    let num = &(&(&q(2 * (ni + 2 - ki)) * &q(ni - ki + 1)) * &q(2 * ni + 3 - ki)) * &q(2 * ni + 2 - 2 * ki);
    let den = &(&(&q(2 * (ni + 1 - ki)) * &q(ki)) * &q(2 * ni + 4 - 2 * ki)) * &q(ni + 2 - ki);
    let Ok(expected) = num.checked_div(&den) else { return false };
    let expected = -expected;
    let lhs = &qdim_formula(k, n) - &(&qdim_formula(k - 1, n) * &expected);
    lhs.is_zero()
}

