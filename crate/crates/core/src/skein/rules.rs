//! The local relations of the quadrivalent category and their coefficients.

use std::sync::OnceLock;

use crate::diagram::{build_planar, canonical_reduced, FaceData, Gen, Matching, PlanarDiagram, SliceWord};
use crate::scalar::{qint, RatFunc, ZLaurent};

/// Identifier of a local rewriting rule.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub enum RuleId {
    /// Removal of a crossing-free circle.
    Circle,
    /// Removal of an empty curl.
    R1,
    /// Resolution of an empty bigon.
    R2,
    /// Passing a strand across a crossing.
    R3,
    /// The triangle slide used while evacuating a bigon.
    GRiiiSlide,
}

/// `q^k + q^{-k}`.
fn sym_pair(k: i64) -> ZLaurent {
    &ZLaurent::monomial(k, 1) + &ZLaurent::monomial(-k, 1)
}

/// The relation coefficients for a fixed rank, as integral Laurent polynomials.
#[derive(Clone, Debug)]
pub struct Coefficients {
    /// Circle value `−[n][2n+2]/[n+1]`.
    pub delta: ZLaurent,
    /// Curl value `−[n−1][2n+2]/[n+1]`.
    pub rho1: ZLaurent,
    /// Cup-cap coefficient `[n−1][2n]/[n]` of the bigon relation.
    pub kappa: ZLaurent,
    /// Crossing coefficient `[2]` of the bigon relation.
    pub two: ZLaurent,
    /// The coefficient `[2n−2]` of the triangle relation.
    pub r3: ZLaurent,
}

impl Coefficients {
    /// Coefficients for rank `n ≥ 1`.
    pub fn new(n: u32) -> Self {
        let n = n as i64;
        Self {
            delta: -&(&ZLaurent::qint(n) * &sym_pair(n + 1)),
            rho1: -&(&ZLaurent::qint(n - 1) * &sym_pair(n + 1)),
            kappa: &ZLaurent::qint(n - 1) * &sym_pair(n),
            two: ZLaurent::qint(2),
            r3: ZLaurent::qint(2 * n - 2),
        }
    }
}

/// The circle value `−[n][2n+2]/[n+1]` in `ℚ(q)`.
pub fn circle_value(n: u32) -> RatFunc {
    let n = n as i64;
    -(&(&qint(n) * &qint(2 * n + 2)) / &qint(n + 1))
}

/// The curl value `−[n−1][2n+2]/[n+1]` in `ℚ(q)`.
pub fn curl_value(n: u32) -> RatFunc {
    let n = n as i64;
    -(&(&qint(n - 1) * &qint(2 * n + 2)) / &qint(n + 1))
}

/// The bigon cup-cap coefficient `[n−1][2n]/[n]` in `ℚ(q)`.
pub fn bigon_cupcap_value(n: u32) -> RatFunc {
    let n = n as i64;
    &(&qint(n - 1) * &qint(2 * n)) / &qint(n)
}

fn m(s: &str) -> Matching {
    s.parse().expect("valid rule matching")
}

/// One term of the triangle correction: matching, integer sign, and whether
/// the coefficient carries the factor `[2n−2]`.
pub(crate) struct CorrectionTerm {
    pub matching: Matching,
    pub sign: i128,
    pub scaled: bool,
}

/// The correction `S` in `slide(T_even) = T_odd + S` on six points.
pub(crate) fn triangle_correction() -> Vec<CorrectionTerm> {
    let t = |s: &str, sign: i128, scaled: bool| CorrectionTerm { matching: m(s), sign, scaled };
    vec![
        t("0-2,1-3,4-5", 1, false),
        t("0-5,1-3,2-4", -1, false),
        t("0-1,2-4,3-5", 1, false),
        t("0-4,1-2,3-5", -1, false),
        t("0-4,1-5,2-3", 1, false),
        t("0-2,1-5,3-4", -1, false),
        t("0-1,2-3,4-5", -1, true),
        t("0-5,1-2,3-4", 1, true),
    ]
}

/// Which gap parity carries the one-corner faces of a three-crossing triangle
/// diagram on six points, or `None` if the diagram is not such a triangle.
pub fn triangle_parity(d: &PlanarDiagram) -> Option<u32> {
    if d.point_count() != 6 || d.crossing_count() != 3 {
        return None;
    }
    let fd = FaceData::new(d);
    let mut parity = None;
    for g in 0..6u32 {
        if fd.face(fd.gap_face(g)).corners.len() == 1 {
            let p = g % 2;
            if parity.is_some_and(|q| q != p) {
                return None;
            }
            parity = Some(p);
        }
    }
    parity
}

/// The two triangle diagrams indexed by parity.
pub(crate) fn triangles() -> &'static [PlanarDiagram; 2] {
    static CELL: OnceLock<[PlanarDiagram; 2]> = OnceLock::new();
    CELL.get_or_init(|| {
        let a = build_planar(&SliceWord::new(3, vec![Gen::Cross(1), Gen::Cross(2), Gen::Cross(1)]).unwrap())
            .unwrap()
            .with_bottom(0);
        let b = build_planar(&SliceWord::new(3, vec![Gen::Cross(2), Gen::Cross(1), Gen::Cross(2)]).unwrap())
            .unwrap()
            .with_bottom(0);
        let pa = triangle_parity(&a).expect("triangle");
        let pb = triangle_parity(&b).expect("triangle");
        assert_ne!(pa, pb, "the two triangles have opposite parity");
        if pa == 0 {
            [a, b]
        } else {
            [b, a]
        }
    })
}

/// The single crossing on four points.
pub(crate) fn single_crossing() -> &'static PlanarDiagram {
    static CELL: OnceLock<PlanarDiagram> = OnceLock::new();
    CELL.get_or_init(|| canonical_reduced(&m("0-2,1-3")))
}
