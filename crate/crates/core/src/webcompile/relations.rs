//! The relation ledger: every web relation is compiled on both sides and
//! compared by Gram-equality.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{compile, Web, WebError};
use crate::homspace::{self, morphism_equal, HomError};
use crate::scalar::{qbinom, qfact, qint, RatFunc};
use crate::skein::Morphism;

/// Largest total boundary width (in 1-strands) exercised by the suite.
pub const MAX_SUITE_WIDTH: usize = 10;

/// A named relation family.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Relation {
    /// The 1-labeled circle.
    SpnA,
    /// The 2-to-0 bigon vanishes.
    SpnB,
    /// The `(1, k−1)` bigon is `[k]`.
    SpnC,
    /// Associativity of 1-vertices.
    SpnD,
    /// The H = I expansion on `k ⊗ k → 1 ⊗ 1`.
    SpnE,
    /// The `k`-labeled circle.
    OtherA,
    /// The bigon `k → k+2` through `1` and `k+1` vanishes.
    OtherB,
    /// The `(k, ℓ)` bigon is a quantum binomial.
    OtherC,
    /// General associativity, as listed among the alternative relations.
    OtherD,
    /// The H = I expansion on `1 ⊗ k → k ⊗ 1`.
    OtherE,
    /// The two recursions for flow vertices agree with the flow vertex.
    FlowVertex,
    /// General associativity of flow vertices.
    GeneralAssoc,
    /// Triangle reduction with coefficient `[n+2−k]/[n+1−k]`.
    Triangle,
    /// Bigon through `1` and `k+1` with coefficient `−[n−k][2n+2−k]/[n−k+1]`.
    BadBigon,
    /// The auxiliary computation with coefficient `[k][n+1]/[n]`.
    NonZero,
    /// The two forms of the quadrivalent vertex agree with it.
    Quad,
    /// Left and right recursions of the full split vertex agree.
    FullSplit,
    /// The full merge after the full split is the identity.
    Reduction,
}

impl Relation {
    /// Every relation family, in ledger order.
    pub const ALL: [Relation; 18] = [
        Relation::SpnA,
        Relation::SpnB,
        Relation::SpnC,
        Relation::SpnD,
        Relation::SpnE,
        Relation::OtherA,
        Relation::OtherB,
        Relation::OtherC,
        Relation::OtherD,
        Relation::OtherE,
        Relation::FlowVertex,
        Relation::GeneralAssoc,
        Relation::Triangle,
        Relation::BadBigon,
        Relation::NonZero,
        Relation::Quad,
        Relation::FullSplit,
        Relation::Reduction,
    ];

    /// The ledger name.
    pub fn name(self) -> &'static str {
        match self {
            Relation::SpnA => "spn-a",
            Relation::SpnB => "spn-b",
            Relation::SpnC => "spn-c",
            Relation::SpnD => "spn-d",
            Relation::SpnE => "spn-e",
            Relation::OtherA => "spnOther-a",
            Relation::OtherB => "spnOther-b",
            Relation::OtherC => "spnOther-c",
            Relation::OtherD => "spnOther-d",
            Relation::OtherE => "spnOther-e",
            Relation::FlowVertex => "flowvertex",
            Relation::GeneralAssoc => "generalassoc",
            Relation::Triangle => "triangle",
            Relation::BadBigon => "badbigon",
            Relation::NonZero => "nonzero",
            Relation::Quad => "quad",
            Relation::FullSplit => "fullsplit",
            Relation::Reduction => "reduction",
        }
    }

    /// Number of integer parameters the relation takes.
    pub fn arity(self) -> usize {
        match self {
            Relation::SpnA | Relation::SpnB | Relation::Quad => 0,
            Relation::OtherC | Relation::FlowVertex => 2,
            Relation::OtherD | Relation::GeneralAssoc => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = WebError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL
            .iter()
            .copied()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| WebError::InvalidRelation(format!("unknown relation {s:?}")))
    }
}

/// The outcome of checking one relation instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    /// Relation name.
    pub relation: String,
    /// Rank.
    pub n: u32,
    /// Label parameters.
    pub params: Vec<usize>,
    /// Whether all sides are Gram-equal.
    pub holds: bool,
    /// True when every side vanishes because of a label above `n`.
    pub vacuous: bool,
    /// Description of the first disagreement, empty on success.
    pub detail: String,
}

/// A side of a relation: a linear combination of webs plus an optional raw morphism.
struct Side {
    webs: Vec<(RatFunc, Web)>,
    raw: Option<Morphism>,
}

impl Side {
    fn web(w: Web) -> Self {
        Side { webs: vec![(RatFunc::one(), w)], raw: None }
    }

    fn scaled(c: RatFunc, w: Web) -> Self {
        Side { webs: vec![(c, w)], raw: None }
    }

    fn sum(terms: Vec<(RatFunc, Web)>) -> Self {
        Side { webs: terms, raw: None }
    }

    fn zero() -> Self {
        Side { webs: vec![], raw: None }
    }

    fn raw(m: Morphism) -> Self {
        Side { webs: vec![], raw: Some(m) }
    }

    fn evaluate(&self, n: u32, widths: (usize, usize)) -> Result<(Morphism, bool), WebError> {
        let mut acc = self.raw.clone().unwrap_or_else(|| Morphism::zero(n, widths.0, widths.1));
        let mut vacuous = self.raw.is_none();
        for (c, w) in &self.webs {
            let cw = compile(w, n)?;
            if (cw.morphism.bottom, cw.morphism.top) != widths {
                return Err(WebError::BoundaryMismatch(format!("term {w} has widths {:?}", widths)));
            }
            vacuous &= w.max_label() > n as usize;
            acc.add_scaled(&cw.morphism, c).map_err(HomError::from)?;
        }
        Ok((acc, vacuous))
    }
}

fn ratio(a: RatFunc, b: RatFunc) -> Result<RatFunc, WebError> {
    Ok(a.checked_div(&b).map_err(HomError::from)?)
}

fn q(k: i64) -> RatFunc {
    qint(k)
}

/// Full split `k → 1^k` built by peeling strands off the right.
fn full_split_left(k: usize) -> Web {
    if k <= 1 {
        return Web::Id(k);
    }
    Web::stack([Web::Split(k - 1, 1), Web::ten(full_split_left(k - 1), Web::Id(1))])
}

/// Full split `k → 1^k` built by peeling strands off the left.
fn full_split_right(k: usize) -> Web {
    if k <= 1 {
        return Web::Id(k);
    }
    Web::stack([Web::Split(1, k - 1), Web::ten(Web::Id(1), full_split_right(k - 1))])
}

/// Full merge `1^k → k`.
fn full_merge(k: usize) -> Web {
    if k <= 1 {
        return Web::Id(k);
    }
    Web::stack([Web::ten(full_merge(k - 1), Web::Id(1)), Web::Merge(k - 1, 1)])
}

/// Builds the sides of a relation instance; every side must be equal.
fn sides(rel: Relation, n: u32, p: &[usize]) -> Result<Vec<Side>, WebError> {
    let ni = n as i64;
    let k = p.first().copied().unwrap_or(0);
    let ki = k as i64;
    Ok(match rel {
        Relation::SpnA => {
            let c = -ratio(&q(ni) * &q(2 * ni + 2), q(ni + 1))?;
            vec![Side::web(Web::cmp(Web::CapW(1), Web::CupW(1))), Side::scaled(c, Web::Id(0))]
        }
        Relation::SpnB => vec![Side::web(Web::cmp(Web::CapW(1), Web::Split(1, 1))), Side::zero()],
        Relation::SpnC => vec![
            Side::web(Web::cmp(Web::Merge(1, k - 1), Web::Split(1, k - 1))),
            Side::scaled(q(ki), Web::Id(k)),
        ],
        Relation::SpnD => vec![
            Side::web(Web::cmp(Web::Merge(1, k + 1), Web::ten(Web::Id(1), Web::Merge(k, 1)))),
            Side::web(Web::cmp(Web::Merge(k + 1, 1), Web::ten(Web::Merge(1, k), Web::Id(1)))),
        ],
        Relation::SpnE => {
            let c2 = -ratio(q(ni - ki), q(ni - ki + 1))?;
            let c3 = ratio(q(ni - ki), q(ni))?;
            vec![
                Side::web(Web::h(k, k, 1, 1, k + 1)?),
                Side::sum(vec![
                    (RatFunc::one(), Web::cmp(Web::Split(1, 1), Web::Vertex3(k, k, 2))),
                    (c2, Web::h(k, k, 1, 1, k - 1)?),
                    (c3, Web::cmp(Web::CupW(1), Web::CapW(k))),
                ]),
            ]
        }
        Relation::OtherA => vec![
            Side::web(Web::cmp(Web::CapW(k), Web::CupW(k))),
            Side::scaled(super::qdim_formula(k, n), Web::Id(0)),
        ],
        Relation::OtherB => {
            vec![Side::web(Web::cmp(Web::Merge(1, k + 1), Web::vsplit(1, k + 1, k)?)), Side::zero()]
        }
        Relation::OtherC => {
            let l = p[1];
            vec![
                Side::web(Web::cmp(Web::Merge(k, l), Web::Split(k, l))),
                Side::scaled(qbinom((k + l) as i64, k as u32), Web::Id(k + l)),
            ]
        }
        Relation::OtherD | Relation::GeneralAssoc => {
            let (l, m) = (p[1], p[2]);
            vec![
                Side::web(Web::cmp(Web::Merge(k, l + m), Web::ten(Web::Id(k), Web::Merge(l, m)))),
                Side::web(Web::cmp(Web::Merge(k + l, m), Web::ten(Web::Merge(k, l), Web::Id(m)))),
            ]
        }
        Relation::OtherE => {
            let c = ratio(q(ni - ki), q(ni - ki + 1))?;
            vec![
                Side::web(Web::h(1, k, k, 1, k + 1)?),
                Side::sum(vec![
                    (RatFunc::one(), Web::cmp(Web::Split(k, 1), Web::Merge(1, k))),
                    (c.clone(), Web::cmp(Web::vsplit(k, 1, k - 1)?, Web::Vertex3(1, k, k - 1))),
                    (-c, Web::h(1, k, k, 1, k - 1)?),
                ]),
            ]
        }
        Relation::FlowVertex => {
            let l = p[1];
            let r1 = Web::stack([
                Web::ten(Web::Split(1, k - 1), Web::Id(l)),
                Web::ten(Web::Id(1), Web::Merge(k - 1, l)),
                Web::Merge(1, k + l - 1),
            ]);
            let r2 = Web::stack([
                Web::ten(Web::Id(k), Web::Split(l - 1, 1)),
                Web::ten(Web::Merge(k, l - 1), Web::Id(1)),
                Web::Merge(k + l - 1, 1),
            ]);
            vec![
                Side::web(Web::Merge(k, l)),
                Side::scaled(q(ki).inv().map_err(HomError::from)?, r1),
                Side::scaled(q(l as i64).inv().map_err(HomError::from)?, r2),
            ]
        }
        Relation::Triangle => {
            let c = ratio(q(ni + 2 - ki), q(ni + 1 - ki))?;
            vec![
                Side::web(Web::cmp(Web::Merge(1, 1), Web::h(k, k, 1, 1, k + 1)?)),
                Side::scaled(c, Web::Vertex3(k, k, 2)),
            ]
        }
        Relation::BadBigon => {
            let c = -ratio(&q(ni - ki) * &q(2 * ni + 2 - ki), q(ni - ki + 1))?;
            vec![
                Side::web(Web::cmp(Web::Vertex3(1, k + 1, k), Web::vsplit(1, k + 1, k)?)),
                Side::scaled(c, Web::Id(k)),
            ]
        }
        Relation::NonZero => {
            let c = ratio(&q(ki) * &q(ni + 1), q(ni))?;
            let lhs = Web::stack([
                Web::ten(Web::Split(k - 1, 1), Web::vsplit(2, 1, 1)?),
                Web::ten_all([Web::Id(k - 1), Web::Vertex3(1, 2, 1), Web::Id(1)]),
                Web::ten(Web::Merge(k - 1, 1), Web::Id(1)),
                Web::Merge(k, 1),
            ]);
            vec![Side::web(lhs), Side::scaled(c, Web::Merge(k, 1))]
        }
        Relation::Quad => {
            let c = ratio(q(ni - 1), q(ni))?;
            let cupcap = Web::cmp(Web::CupW(1), Web::CapW(1));
            let id11 = Web::ten(Web::Id(1), Web::Id(1));
            vec![
                Side::raw(homspace::x_at(2, 1, n)?),
                Side::sum(vec![
                    (RatFunc::one(), Web::cmp(Web::Split(1, 1), Web::Merge(1, 1))),
                    (c.clone(), cupcap),
                ]),
                Side::sum(vec![(RatFunc::one(), Web::h(1, 1, 1, 1, 2)?), (c, id11)]),
            ]
        }
        Relation::FullSplit => vec![Side::web(full_split_left(k)), Side::web(full_split_right(k))],
        Relation::Reduction => {
            let inv = qfact(k as u32).inv().map_err(HomError::from)?;
            vec![
                Side::scaled(inv, Web::cmp(full_merge(k), full_split_left(k))),
                Side::web(Web::Id(k)),
            ]
        }
    })
}

fn check_params(rel: Relation, p: &[usize]) -> Result<(), WebError> {
    if p.len() != rel.arity() {
        return Err(WebError::InvalidRelation(format!(
            "{rel} takes {} parameters, got {}",
            rel.arity(),
            p.len()
        )));
    }
    let min = match rel {
        Relation::SpnC => 2,
        Relation::OtherA | Relation::OtherB => 0,
        _ => 1,
    };
    if let Some(bad) = p.iter().find(|&&x| x < min) {
        return Err(WebError::InvalidRelation(format!("{rel} needs parameters ≥ {min}, got {bad}")));
    }
    Ok(())
}

/// Verifies one relation instance at rank `n`.
pub fn verify_relation(rel: Relation, n: u32, params: &[usize]) -> Result<RelationReport, WebError> {
    if n == 0 {
        return Err(WebError::LabelOutOfRange(n));
    }
    check_params(rel, params)?;
    let sides = sides(rel, n, params)?;
    let first_web = sides.iter().flat_map(|s| s.webs.iter()).next().map(|(_, w)| w.clone());
    let widths = match (&sides[0].raw, first_web) {
        (Some(m), _) => (m.bottom, m.top),
        (None, Some(w)) => {
            let (a, b) = w.boundary()?;
            (a.iter().sum(), b.iter().sum())
        }
        (None, None) => (0, 0),
    };
    let mut evaluated = Vec::with_capacity(sides.len());
    let mut vacuous = true;
    for s in &sides {
        let (m, v) = s.evaluate(n, widths)?;
        vacuous &= v;
        evaluated.push(m);
    }
    let mut detail = String::new();
    for (i, m) in evaluated.iter().enumerate().skip(1) {
        if !morphism_equal(&evaluated[0], m)? {
            detail = format!("side 1 and side {} differ", i + 1);
            break;
        }
    }
    Ok(RelationReport {
        relation: rel.name().to_string(),
        n,
        params: params.to_vec(),
        holds: detail.is_empty(),
        vacuous,
        detail,
    })
}

/// Total boundary width, in 1-strands, of a relation instance.
pub fn instance_width(rel: Relation, n: u32, params: &[usize]) -> Option<usize> {
    let sides = sides(rel, n, params).ok()?;
    let s = sides.iter().find(|s| !s.webs.is_empty())?;
    let (a, b) = s.webs[0].1.boundary().ok()?;
    Some(a.iter().sum::<usize>() + b.iter().sum::<usize>())
}

/// All instances checked by the suite at rank `n`.
pub fn relation_instances(n: u32) -> Vec<(Relation, Vec<usize>)> {
    let n = n as usize;
    let mut out = Vec::new();
    for rel in Relation::ALL {
        let params: Vec<Vec<usize>> = match rel {
            Relation::SpnA | Relation::SpnB | Relation::Quad => vec![vec![]],
            Relation::SpnC => (2..=n).map(|k| vec![k]).collect(),
            Relation::OtherA | Relation::OtherB => (0..=n).map(|k| vec![k]).collect(),
            Relation::NonZero => (1..n).map(|k| vec![k]).collect(),
            Relation::OtherC | Relation::FlowVertex => {
                (1..=n).flat_map(|k| (1..=n - k).map(move |l| vec![k, l])).collect()
            }
            Relation::OtherD | Relation::GeneralAssoc => (1..=n)
                .flat_map(|k| (1..=n).flat_map(move |l| (1..=n).map(move |m| vec![k, l, m])))
                .filter(|p| p.iter().sum::<usize>() <= n)
                .collect(),
            _ => (1..=n).map(|k| vec![k]).collect(),
        };
        for p in params {
            if instance_width(rel, n as u32, &p).is_some_and(|w| w <= MAX_SUITE_WIDTH) {
                out.push((rel, p));
            }
        }
    }
    out
}

/// Runs every instance at rank `n`.
pub fn run_suite(n: u32) -> Result<Vec<RelationReport>, WebError> {
    relation_instances(n).into_iter().map(|(rel, p)| verify_relation(rel, n, &p)).collect()
}
