//! Skein-theoretic evaluation of quadrivalent diagrams.
//!
//! Diagrams are rewritten with the circle, curl, bigon and triangle
//! relations until they are reduced, and reduced diagrams are expressed in
//! the basis of canonical reduced diagrams indexed by perfect matchings.
//! All work happens in a per-thread memoized engine for each rank.

mod engine;
mod rules;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{DiagramError, Encoding, End, FaceData, Matching, PlanarDiagram};
use crate::scalar::{RatFunc, ZLaurent};

pub(crate) use engine::{with_engine, ZCoords, ZTerms};
pub use rules::{bigon_cupcap_value, circle_value, curl_value, triangle_parity, Coefficients, RuleId};

/// Errors raised while rewriting diagrams.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeinError {
    /// The rank must be at least one.
    #[error("rank must be at least 1, got {0}")]
    InvalidRank(u32),
    /// No crossing-free circle is present.
    #[error("the diagram has no crossing-free circle")]
    NoEmptyCircle,
    /// The curl at the given crossing encloses part of the diagram.
    #[error("crossing {0} does not carry an empty curl")]
    CurlNotEmpty(u32),
    /// The bigon between the given crossings is not empty.
    #[error("no empty bigon: {0}")]
    BigonNotEmpty(String),
    /// The crossings do not bound a triangle face.
    #[error("crossings {0:?} do not bound a triangle")]
    NotATriangle(Vec<u32>),
    /// A diagram expected to be closed has boundary points.
    #[error("expected a closed diagram, found {0} boundary points")]
    NotClosed(usize),
    /// Rewriting did not terminate within the step budget.
    #[error("rewriting did not terminate: {0}")]
    NonTermination(String),
    /// Internal consistency check failed.
    #[error("inconsistent rewriting: {0}")]
    Inconsistent(String),
    /// Boundaries of combined diagrams do not agree.
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    /// Error from the diagram layer.
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

fn check_rank(n: u32) -> Result<(), SkeinError> {
    if n == 0 {
        Err(SkeinError::InvalidRank(n))
    } else {
        Ok(())
    }
}

/// A finite linear combination of diagrams with coefficients in `ℚ(q)`.
///
/// Terms are keyed by diagram encoding, so isotopic diagrams are merged.
#[derive(Clone, Default)]
pub struct LinComb {
    terms: BTreeMap<Encoding, (PlanarDiagram, RatFunc)>,
}

impl LinComb {
    /// The zero combination.
    pub fn new() -> Self {
        Self::default()
    }

    /// A single diagram with coefficient one.
    pub fn from_diagram(d: PlanarDiagram) -> Self {
        let mut l = Self::new();
        l.add_term(d, &RatFunc::one());
        l
    }

    /// Adds `c · d`.
    pub fn add_term(&mut self, d: PlanarDiagram, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        let key = d.encoding();
        let entry = self.terms.entry(key.clone()).or_insert_with(|| (d, RatFunc::zero()));
        entry.1 += c;
        if entry.1.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Adds `c · other`.
    pub fn add_scaled(&mut self, other: &LinComb, c: &RatFunc) {
        for (d, v) in other.terms() {
            self.add_term(d.clone(), &(v * c));
        }
    }

    /// The terms in a deterministic order.
    pub fn terms(&self) -> impl Iterator<Item = (&PlanarDiagram, &RatFunc)> {
        self.terms.values().map(|(d, c)| (d, c))
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when there are no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn from_zterms(t: ZTerms) -> Self {
        let mut l = Self::new();
        for (k, (d, c)) in t {
            l.terms.insert(k, (d, c.to_ratfunc()));
        }
        l
    }
}

impl fmt::Debug for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.terms()).finish()
    }
}

/// A morphism `k1 → k2` in the basis of canonical reduced diagrams.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Morphism {
    /// Rank.
    pub n: u32,
    /// Number of bottom boundary points.
    pub bottom: usize,
    /// Number of top boundary points.
    pub top: usize,
    /// Nonzero coordinates by boundary matching.
    pub coords: BTreeMap<Matching, RatFunc>,
}

impl Morphism {
    /// The zero morphism.
    pub fn zero(n: u32, bottom: usize, top: usize) -> Self {
        Self { n, bottom, top, coords: BTreeMap::new() }
    }

    /// True when every coordinate vanishes.
    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinate of a matching (zero when absent).
    pub fn coord(&self, m: &Matching) -> RatFunc {
        self.coords.get(m).cloned().unwrap_or_default()
    }

    /// Adds `c · other`, which must have the same boundary.
    pub fn add_scaled(&mut self, other: &Morphism, c: &RatFunc) -> Result<(), SkeinError> {
        if (self.bottom, self.top) != (other.bottom, other.top) {
            return Err(SkeinError::BoundaryMismatch(format!(
                "{}→{} vs {}→{}",
                self.bottom, self.top, other.bottom, other.top
            )));
        }
        for (m, v) in &other.coords {
            let e = self.coords.entry(m.clone()).or_default();
            *e += &(v * c);
            if e.is_zero() {
                self.coords.remove(m);
            }
        }
        Ok(())
    }

    /// Scales every coordinate.
    pub fn scale(&self, c: &RatFunc) -> Morphism {
        let mut out = Morphism::zero(self.n, self.bottom, self.top);
        if !c.is_zero() {
            for (m, v) in &self.coords {
                out.coords.insert(m.clone(), v * c);
            }
        }
        out
    }

    /// The combination of canonical diagrams this morphism stands for.
    pub fn to_lincomb(&self) -> LinComb {
        let mut l = LinComb::new();
        for (m, c) in &self.coords {
            let d = crate::diagram::canonical_reduced(m).with_bottom(self.bottom);
            l.add_term(d, c);
        }
        l
    }

    pub(crate) fn from_zcoords(n: u32, bottom: usize, top: usize, z: &ZCoords) -> Self {
        let coords = z.iter().map(|(m, c)| (m.clone(), c.to_ratfunc())).collect();
        Self { n, bottom, top, coords }
    }
}

/// Removes one crossing-free circle, multiplying by the circle value.
pub fn remove_circle(d: &PlanarDiagram, n: u32) -> Result<LinComb, SkeinError> {
    check_rank(n)?;
    if d.loops() == 0 {
        return Err(SkeinError::NoEmptyCircle);
    }
    let mut out = d.clone();
    let k = out.take_loops();
    out.add_loops(k - 1);
    let mut l = LinComb::new();
    l.add_term(out, &circle_value(n));
    Ok(l)
}

/// Removes the empty curl at crossing `x`.
pub fn rewrite_curl(d: &PlanarDiagram, x: u32, n: u32) -> Result<LinComb, SkeinError> {
    check_rank(n)?;
    if x as usize >= d.crossing_count() {
        return Err(SkeinError::CurlNotEmpty(x));
    }
    let s = (0..4u8)
        .find(|&s| d.partner(End::Port(x, s)) == End::Port(x, crate::diagram::port_add(s, 1)))
        .ok_or(SkeinError::CurlNotEmpty(x))?;
    let r = engine::r1(d, x, s)?;
    let mut l = LinComb::new();
    l.add_term(r, &curl_value(n));
    Ok(l)
}

/// Resolves the empty bigon between crossings `x` and `y`:
/// the bigon equals `[2]` times a crossing minus the cup-cap coefficient
/// times the other crossing-free matching.
pub fn rewrite_bigon(d: &PlanarDiagram, x: u32, y: u32, n: u32) -> Result<LinComb, SkeinError> {
    check_rank(n)?;
    let fd = FaceData::new(d);
    let s = (0..4u8)
        .find(|&s| {
            x != y
                && (x as usize) < d.crossing_count()
                && {
                    let f = fd.face(fd.sector_face(x, s));
                    f.gaps.is_empty() && f.corners.iter().map(|c| c.0).collect::<Vec<_>>() == [x, y]
                }
        })
        .ok_or_else(|| SkeinError::BigonNotEmpty(format!("{x} and {y}")))?;
    let mut t = ZTerms::new();
    with_engine(n, |e| e.r2_into_raw(d, x, s, &mut t))?;
    Ok(LinComb::from_zterms(t))
}

/// Slides the strand across the triangle face with corners at the crossings
/// `tri`, returning the slid diagram plus the correction terms.
pub fn slide_triangle(d: &PlanarDiagram, tri: [u32; 3], n: u32) -> Result<LinComb, SkeinError> {
    check_rank(n)?;
    let fd = FaceData::new(d);
    let mut want = tri.to_vec();
    want.sort_unstable();
    let face = fd
        .faces()
        .iter()
        .find(|f| {
            let mut cs: Vec<u32> = f.corners.iter().map(|c| c.0).collect();
            cs.sort_unstable();
            f.gaps.is_empty() && cs == want
        })
        .ok_or_else(|| SkeinError::NotATriangle(tri.to_vec()))?;
    let slide = with_engine(n, |e| e.slide(d, face))?;
    let mut t = ZTerms::new();
    engine::add_term(&mut t, slide.lead, &ZLaurent::one());
    for (cd, cc) in slide.corrections {
        engine::add_term(&mut t, cd, &cc);
    }
    Ok(LinComb::from_zterms(t))
}

/// Reduces a diagram to a combination of reduced diagrams.
pub fn reduce(d: &PlanarDiagram, n: u32) -> Result<LinComb, SkeinError> {
    check_rank(n)?;
    let mut t = ZTerms::new();
    with_engine(n, |e| e.reduce_into(d, &ZLaurent::one(), &mut t))?;
    Ok(LinComb::from_zterms(t))
}

/// Evaluates a closed diagram to a scalar.
pub fn evaluate_closed(d: &PlanarDiagram, n: u32) -> Result<RatFunc, SkeinError> {
    check_rank(n)?;
    Ok(with_engine(n, |e| e.eval_closed(d))?.to_ratfunc())
}

/// Evaluates a closed diagram to an integral Laurent polynomial.
pub fn evaluate_closed_laurent(d: &PlanarDiagram, n: u32) -> Result<ZLaurent, SkeinError> {
    check_rank(n)?;
    with_engine(n, |e| e.eval_closed(d))
}

/// Coordinates of a single diagram in the canonical basis.
pub fn canonicalize(d: &PlanarDiagram, n: u32) -> Result<Morphism, SkeinError> {
    check_rank(n)?;
    let z = with_engine(n, |e| e.nf(d))?;
    Ok(Morphism::from_zcoords(n, d.bottom(), d.top(), &z))
}

/// Coordinates of a linear combination in the canonical basis.
pub fn normal_form(l: &LinComb, n: u32, bottom: usize, top: usize) -> Result<Morphism, SkeinError> {
    check_rank(n)?;
    let mut out = Morphism::zero(n, bottom, top);
    for (d, c) in l.terms() {
        if (d.bottom(), d.top()) != (bottom, top) {
            return Err(SkeinError::BoundaryMismatch(format!(
                "term {}→{} in a combination {bottom}→{top}",
                d.bottom(),
                d.top()
            )));
        }
        let m = canonicalize(d, n)?;
        out.add_scaled(&m, c)?;
    }
    Ok(out)
}
