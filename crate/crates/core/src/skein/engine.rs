//! The memoized rewriting engine.
//!
//! Coefficients are integral Laurent polynomials throughout.  Reduction
//! removes circles, curls and bigons by recursively reducing the disk they
//! bound and then applying the local relation; canonicalization rewrites a
//! reduced diagram into the fixed representative of its boundary matching
//! plus lower terms.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::rc::Rc;

use super::rules::{single_crossing, triangle_correction, triangle_parity, triangles, Coefficients};
use super::SkeinError;
use crate::diagram::{
    canonical_reduced, cuts_around, excise, find_big_bigon, find_big_curl, port_add, triangle_faces, BigBigon,
    BigCurl, Cut, Encoding, End, Excision, Face, FaceData, Matching, PlanarDiagram, Region,
};
use crate::scalar::ZLaurent;

/// Linear combination of diagrams keyed by encoding.
pub(crate) type ZTerms = HashMap<Encoding, (PlanarDiagram, ZLaurent)>;
/// Coordinates in the basis of canonical reduced diagrams.
pub(crate) type ZCoords = BTreeMap<Matching, ZLaurent>;

type Result<T> = std::result::Result<T, SkeinError>;

const STEP_LIMIT: u64 = 2_000_000_000;
const MEMO_LIMIT: usize = 4_000_000;

fn add_keyed(acc: &mut ZTerms, key: Encoding, d: PlanarDiagram, c: &ZLaurent) {
    if c.is_zero() {
        return;
    }
    match acc.entry(key) {
        std::collections::hash_map::Entry::Occupied(mut o) => {
            o.get_mut().1 += c;
            if o.get().1.is_zero() {
                o.remove();
            }
        }
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert((d, c.clone()));
        }
    }
}

/// Adds `c · d` to a term map.
pub(crate) fn add_term(acc: &mut ZTerms, d: PlanarDiagram, c: &ZLaurent) {
    let key = d.encoding();
    add_keyed(acc, key, d, c);
}

fn add_coord(acc: &mut ZCoords, m: &Matching, c: &ZLaurent) {
    if c.is_zero() {
        return;
    }
    let entry = acc.entry(m.clone()).or_default();
    *entry += c;
    if entry.is_zero() {
        acc.remove(m);
    }
}

/// Result of one triangle slide: the slid diagram, its correction terms, and
/// the renumbering of the crossings outside the triangle.
pub(crate) struct Slide {
    pub lead: PlanarDiagram,
    pub corrections: Vec<(PlanarDiagram, ZLaurent)>,
    pub outer_map: Vec<Option<u32>>,
}

/// Split of a reduced diagram into the common prefix shared with the
/// canonical representative and the correction terms.
struct Split {
    prefix: Encoding,
    corrections: Vec<(PlanarDiagram, ZLaurent)>,
}

/// Rewriting engine for a fixed rank.
pub(crate) struct Engine {
    pub co: Coefficients,
    steps: u64,
    reduce_memo: HashMap<Encoding, Rc<ZTerms>>,
    closed_memo: HashMap<Encoding, ZLaurent>,
    canon_memo: HashMap<Encoding, Rc<ZCoords>>,
    split_memo: HashMap<Matching, Rc<Split>>,
    canonical: HashMap<Matching, Rc<PlanarDiagram>>,
}

thread_local! {
    static ENGINES: RefCell<HashMap<u32, Engine>> = RefCell::new(HashMap::new());
}

/// Runs `f` with this thread's engine for rank `n`.
pub(crate) fn with_engine<R>(n: u32, f: impl FnOnce(&mut Engine) -> R) -> R {
    ENGINES.with(|cell| {
        let mut map = cell.borrow_mut();
        let eng = map.entry(n).or_insert_with(|| Engine::new(n));
        eng.steps = 0;
        f(eng)
    })
}

impl Engine {
    fn new(n: u32) -> Self {
        Self {
            co: Coefficients::new(n),
            steps: 0,
            reduce_memo: HashMap::new(),
            closed_memo: HashMap::new(),
            canon_memo: HashMap::new(),
            split_memo: HashMap::new(),
            canonical: HashMap::new(),
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > STEP_LIMIT {
            return Err(SkeinError::NonTermination(format!("more than {STEP_LIMIT} rewriting steps")));
        }
        Ok(())
    }

    fn trim_memos(&mut self) {
        if self.reduce_memo.len() > MEMO_LIMIT {
            self.reduce_memo.clear();
        }
        if self.canon_memo.len() > MEMO_LIMIT {
            self.canon_memo.clear();
        }
        if self.closed_memo.len() > MEMO_LIMIT {
            self.closed_memo.clear();
        }
    }

    /// The canonical reduced diagram of a matching.
    pub fn canonical_diagram(&mut self, m: &Matching) -> Rc<PlanarDiagram> {
        self.canonical.entry(m.clone()).or_insert_with(|| Rc::new(canonical_reduced(m))).clone()
    }

    // -----------------------------------------------------------------------
    // Reduction
    // -----------------------------------------------------------------------

    /// Adds `coeff · reduce(d)` to `acc`; the terms are reduced diagrams with
    /// the bottom width of `d`.
    pub fn reduce_into(&mut self, d: &PlanarDiagram, coeff: &ZLaurent, acc: &mut ZTerms) -> Result<()> {
        self.tick()?;
        if coeff.is_zero() {
            return Ok(());
        }
        let mut d = d.clone();
        let bottom = d.bottom();
        let loops = d.take_loops();
        let mut c = if loops == 0 { coeff.clone() } else { coeff * &self.co.delta.pow(loops) };
        let main = if d.is_connected_to_boundary() {
            d
        } else {
            let (main, floating) = d.split_floating();
            for f in &floating {
                c = &c * &self.eval_connected(f)?;
            }
            main
        };
        if c.is_zero() {
            return Ok(());
        }
        if main.is_reduced() {
            add_term(acc, main, &c);
            return Ok(());
        }
        let key = main.encoding();
        let terms = match self.reduce_memo.get(&key) {
            Some(t) => t.clone(),
            None => {
                let mut t = ZTerms::new();
                self.reduce_core(&main, &mut t)?;
                let t = Rc::new(t);
                self.trim_memos();
                self.reduce_memo.insert(key, t.clone());
                t
            }
        };
        for (k, (td, tc)) in terms.iter() {
            add_keyed(acc, k.clone(), td.clone().with_bottom(bottom), &(tc * &c));
        }
        Ok(())
    }

    /// Reduces a diagram with a single component attached to the boundary
    /// (or a single closed component), no circles, and at least one defect.
    fn reduce_core(&mut self, d: &PlanarDiagram, acc: &mut ZTerms) -> Result<()> {
        if let Some(curl) = find_big_curl(d) {
            return self.apply_curl(d, &curl, acc);
        }
        if let Some(bigon) = find_big_bigon(d) {
            return self.apply_bigon(d, &bigon, acc);
        }
        Err(SkeinError::NonTermination(format!("non-reduced diagram without a curl or bigon: {d:?}")))
    }

    /// Value of a closed connected diagram.
    fn eval_connected(&mut self, f: &PlanarDiagram) -> Result<ZLaurent> {
        let key = f.closed_encoding();
        if let Some(v) = self.closed_memo.get(&key) {
            return Ok(v.clone());
        }
        let mut t = ZTerms::new();
        self.reduce_core(f, &mut t)?;
        let mut v = ZLaurent::zero();
        for (td, tc) in t.values() {
            if td.crossing_count() != 0 || td.point_count() != 0 {
                return Err(SkeinError::NonTermination("closed diagram did not reduce to a scalar".into()));
            }
            v += tc;
        }
        self.closed_memo.insert(key, v.clone());
        Ok(v)
    }

    /// Value of a diagram without boundary points.
    pub fn eval_closed(&mut self, d: &PlanarDiagram) -> Result<ZLaurent> {
        if d.point_count() != 0 {
            return Err(SkeinError::NotClosed(d.point_count()));
        }
        let mut t = ZTerms::new();
        self.reduce_into(d, &ZLaurent::one(), &mut t)?;
        Ok(t.into_values().map(|(_, c)| c).fold(ZLaurent::zero(), |a, c| &a + &c))
    }

    fn apply_curl(&mut self, d: &PlanarDiagram, curl: &BigCurl, acc: &mut ZTerms) -> Result<()> {
        let BigCurl { x, s, ref region } = *curl;
        if region.content() == 0 {
            let r = r1(d, x, s)?;
            let c = self.co.rho1.clone();
            return self.reduce_into(&r, &c, acc);
        }
        let ex = excise(d, &region.in_sub, &region.cuts)?;
        let xo = ex.outer_map[x as usize].expect("curl crossing is outside its disk");
        let n_cross = d.crossing_count();
        for (t, c) in self.reduced_terms(&ex.sub)? {
            let nd = ex.splice(&t);
            if nd.crossing_count() < n_cross {
                self.reduce_into(&nd, &c, acc)?;
            } else {
                let r = r1(&nd, xo, s)?;
                let c = &c * &self.co.rho1;
                self.reduce_into(&r, &c, acc)?;
            }
        }
        Ok(())
    }

    fn reduced_terms(&mut self, d: &PlanarDiagram) -> Result<Vec<(PlanarDiagram, ZLaurent)>> {
        let mut t = ZTerms::new();
        self.reduce_into(d, &ZLaurent::one(), &mut t)?;
        let mut v: Vec<(Encoding, (PlanarDiagram, ZLaurent))> = t.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(v.into_iter().map(|(_, t)| t).collect())
    }

    fn apply_bigon(&mut self, d: &PlanarDiagram, bigon: &BigBigon, acc: &mut ZTerms) -> Result<()> {
        let BigBigon { x, s, ref region, .. } = *bigon;
        if region.content() == 0 {
            return self.r2_into(d, x, s, &ZLaurent::one(), acc);
        }
        let ex = excise(d, &region.in_sub, &region.cuts)?;
        let xo = ex.outer_map[x as usize].expect("bigon corner is outside its disk");
        let n_cross = d.crossing_count();
        for (t, c) in self.reduced_terms(&ex.sub)? {
            let nd = ex.splice(&t);
            if nd.crossing_count() < n_cross {
                self.reduce_into(&nd, &c, acc)?;
            } else {
                self.slide_into(nd, xo, s, c, acc)?;
            }
        }
        Ok(())
    }

    /// Empties a bigon whose disk is reduced by triangle slides, then
    /// resolves it.
    fn slide_into(&mut self, mut d: PlanarDiagram, mut x: u32, s: u8, coeff: ZLaurent, acc: &mut ZTerms) -> Result<()> {
        loop {
            self.tick()?;
            let other: HashSet<u32> = d.walk_from(End::Port(x, port_add(s, 1))).visits.iter().map(|v| v.0).collect();
            let walk = d.walk_from(End::Port(x, s));
            let &(y, arr) = walk
                .visits
                .iter()
                .find(|v| v.0 != x && other.contains(&v.0))
                .ok_or_else(|| SkeinError::BigonNotEmpty("bigon sides do not meet again".into()))?;
            let t = port_add(arr, -1);
            let fd = FaceData::new(&d);
            let region = Region::from_corners(&d, &fd, &[(x, s), (y, t)])
                .map_err(|e| SkeinError::BigonNotEmpty(e.to_string()))?;
            if region.content() == 0 {
                return self.r2_into(&d, x, s, &coeff, acc);
            }
            let face = pick_triangle(&fd, &region, y, t)?;
            let slide = self.slide(&d, &face)?;
            for (cd, cc) in &slide.corrections {
                self.reduce_into(cd, &(&coeff * cc), acc)?;
            }
            x = slide.outer_map[x as usize].expect("bigon corner is not in the triangle");
            d = slide.lead;
        }
    }

    /// The two terms of the bigon relation at the empty bigon `x`, `y`.
    fn r2_terms(&mut self, d: &PlanarDiagram, x: u32, s: u8) -> Result<[(PlanarDiagram, ZLaurent); 2]> {
        let not_empty = || SkeinError::BigonNotEmpty(format!("crossing {x}, sector {s}"));
        let sides = [End::Port(x, s), End::Port(x, port_add(s, 1))];
        let (End::Port(y, _), End::Port(y2, _)) = (d.partner(sides[0]), d.partner(sides[1])) else {
            return Err(not_empty());
        };
        if y != y2 || y == x {
            return Err(not_empty());
        }
        let ex = excise_face(d, &[x, y], &sides, 4).map_err(|_| not_empty())?;
        let m = ex.sub.boundary_matching();
        if ex.sub.crossing_count() != 2 || ex.sub.loops() != 0 || !m.is_noncrossing() {
            return Err(not_empty());
        }
        let other: Matching = if m.partner(0) == 1 { "0-3,1-2" } else { "0-1,2-3" }.parse().expect("matching");
        let bar = self.canonical_diagram(&other);
        Ok([
            (ex.splice(single_crossing()), self.co.two.clone()),
            (ex.splice(&bar), -&self.co.kappa),
        ])
    }

    /// Adds the unreduced bigon relation terms to `acc`.
    pub fn r2_into_raw(&mut self, d: &PlanarDiagram, x: u32, s: u8, acc: &mut ZTerms) -> Result<()> {
        for (t, c) in self.r2_terms(d, x, s)? {
            add_term(acc, t, &c);
        }
        Ok(())
    }

    /// Resolves the empty bigon between `x` and `y` and reduces the result.
    fn r2_into(&mut self, d: &PlanarDiagram, x: u32, s: u8, coeff: &ZLaurent, acc: &mut ZTerms) -> Result<()> {
        for (t, c) in self.r2_terms(d, x, s)? {
            self.reduce_into(&t, &(coeff * &c), acc)?;
        }
        Ok(())
    }

    /// Slides a strand across the crossing opposite to it in a triangle face.
    pub fn slide(&mut self, d: &PlanarDiagram, face: &Face) -> Result<Slide> {
        let tri: Vec<u32> = face.corners.iter().map(|c| c.0).collect();
        if !face.gaps.is_empty() || tri.len() != 3 {
            return Err(SkeinError::NotATriangle(tri));
        }
        let ex = excise_face(d, &tri, &face.darts, 6).map_err(|_| SkeinError::NotATriangle(tri.clone()))?;
        let parity = triangle_parity(&ex.sub).ok_or_else(|| SkeinError::NotATriangle(tri.to_vec()))?;
        let shapes = triangles();
        if ex.sub.encoding() != shapes[parity as usize].encoding() {
            return Err(SkeinError::NotATriangle(tri.to_vec()));
        }
        let lead = ex.splice(&shapes[1 - parity as usize]);
        let sign: i128 = if parity == 0 { 1 } else { -1 };
        let mut corrections = Vec::new();
        for term in triangle_correction() {
            let mut c = ZLaurent::monomial(0, term.sign * sign);
            if term.scaled {
                c = &c * &self.co.r3;
            }
            let rep = self.canonical_diagram(&term.matching);
            corrections.push((ex.splice(&rep), c));
        }
        Ok(Slide { lead, corrections, outer_map: ex.outer_map })
    }

    // -----------------------------------------------------------------------
    // Canonicalization
    // -----------------------------------------------------------------------

    /// Adds `coeff · nf(d)` to `acc`.
    pub fn nf_into(&mut self, d: &PlanarDiagram, coeff: &ZLaurent, acc: &mut ZCoords) -> Result<()> {
        let mut t = ZTerms::new();
        self.reduce_into(d, coeff, &mut t)?;
        let mut terms: Vec<_> = t.into_iter().collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        for (_, (td, tc)) in terms {
            let coords = self.canon_coords(&td)?;
            for (m, v) in coords.iter() {
                add_coord(acc, m, &(&tc * v));
            }
        }
        Ok(())
    }

    /// Coordinates of a diagram in the canonical basis.
    pub fn nf(&mut self, d: &PlanarDiagram) -> Result<ZCoords> {
        let mut acc = ZCoords::new();
        self.nf_into(d, &ZLaurent::one(), &mut acc)?;
        Ok(acc)
    }

    /// Coordinates of a reduced diagram.
    fn canon_coords(&mut self, t: &PlanarDiagram) -> Result<Rc<ZCoords>> {
        self.tick()?;
        let key = t.encoding();
        if let Some(c) = self.canon_memo.get(&key) {
            return Ok(c.clone());
        }
        let m = t.boundary_matching();
        let mut coords = ZCoords::new();
        coords.insert(m.clone(), ZLaurent::one());
        if self.canonical_diagram(&m).encoding() != key {
            let (prefix, corr) = self.split(t)?;
            let reference = self.canonical_split(&m)?;
            if prefix != reference.prefix {
                return Err(SkeinError::Inconsistent(format!("split prefixes differ for {m}")));
            }
            for (cd, cc) in &corr {
                self.nf_into(cd, cc, &mut coords)?;
            }
            for (cd, cc) in &reference.corrections {
                self.nf_into(cd, &-cc, &mut coords)?;
            }
        }
        let coords = Rc::new(coords);
        self.trim_memos();
        self.canon_memo.insert(key, coords.clone());
        Ok(coords)
    }

    fn canonical_split(&mut self, m: &Matching) -> Result<Rc<Split>> {
        if let Some(s) = self.split_memo.get(m) {
            return Ok(s.clone());
        }
        let can = self.canonical_diagram(m);
        let (prefix, corrections) = self.split(&can)?;
        let s = Rc::new(Split { prefix, corrections });
        self.split_memo.insert(m.clone(), s.clone());
        Ok(s)
    }

    /// Rewrites a reduced diagram as `P + Σ corrections`, where `P` depends
    /// only on the boundary matching.  Returns the encoding of `P`.
    fn split(&mut self, t: &PlanarDiagram) -> Result<(Encoding, Vec<(PlanarDiagram, ZLaurent)>)> {
        let b = t.point_count() as u32;
        let m = t.boundary_matching();
        let (a, bb) = distinguished_pair(&m);
        let mut t = t.clone();
        let mut corrections = Vec::new();
        let visits = loop {
            self.tick()?;
            let visits = t.walk_from(End::Point(a)).visits;
            let clear = visits.iter().all(|&(w, arr)| matches!(t.partner(End::Port(w, port_add(arr, 1))), End::Point(_)));
            if clear {
                break visits;
            }
            let fd = FaceData::new(&t);
            let face = visits
                .windows(2)
                .map(|v| fd.face(fd.dart_face(End::Port(v[1].0, v[1].1))))
                .find(|f| f.gaps.is_empty() && f.corners.len() == 3)
                .cloned()
                .ok_or_else(|| SkeinError::NotATriangle(Vec::new()))?;
            let slide = self.slide(&t, &face)?;
            corrections.extend(slide.corrections);
            t = slide.lead;
        };
        let on_s: HashSet<u32> = visits.iter().map(|v| v.0).collect();
        let in_sub: Vec<bool> = (0..t.crossing_count() as u32).map(|c| !on_s.contains(&c)).collect();
        let mut cuts = Vec::new();
        let mut x = (bb + 1) % b;
        while x != a {
            let e = End::Point(x);
            cuts.push(Cut { outer: e, inner: t.partner(e) });
            x = (x + 1) % b;
        }
        for &(w, arr) in &visits {
            let e = End::Port(w, port_add(arr, 3));
            cuts.push(Cut { outer: e, inner: t.partner(e) });
        }
        let ex = excise(&t, &in_sub, &cuts)?;
        let sub_coords = self.nf(&ex.sub)?;
        let me = ex.sub.boundary_matching();
        if !sub_coords.get(&me).is_some_and(|c| c.is_one()) {
            return Err(SkeinError::Inconsistent(format!("leading coordinate of {me} is not 1")));
        }
        let lead = ex.splice(&self.canonical_diagram(&me));
        for (mp, c) in &sub_coords {
            if *mp != me {
                let rep = self.canonical_diagram(mp);
                corrections.push((ex.splice(&rep), c.clone()));
            }
        }
        Ok((lead.encoding(), corrections))
    }
}

/// The pair `(a, b)` of matched points whose counterclockwise interval from
/// `a` to `b` is shortest, ties broken by the smallest `a`.
fn distinguished_pair(m: &Matching) -> (u32, u32) {
    let b = m.len();
    let mut best: Option<(usize, usize, usize)> = None;
    for (u, v) in m.pairs() {
        for (x, y) in [(u, v), (v, u)] {
            let len = (y + b - x) % b;
            if best.is_none_or(|(l, a, _)| (len, x) < (l, a)) {
                best = Some((len, x, y));
            }
        }
    }
    let (_, a, bb) = best.expect("at least one pair");
    (a as u32, bb as u32)
}

/// Removes an empty curl at `x` leaving through `s`.
pub(crate) fn r1(d: &PlanarDiagram, x: u32, s: u8) -> Result<PlanarDiagram> {
    if d.partner(End::Port(x, s)) != End::Port(x, port_add(s, 1)) {
        return Err(SkeinError::CurlNotEmpty(x));
    }
    let a = d.partner(End::Port(x, port_add(s, 2)));
    let b = d.partner(End::Port(x, port_add(s, 3)));
    let mut out = d.clone();
    if a == End::Port(x, port_add(s, 3)) {
        out.add_loops(1);
    } else {
        out.link(a, b);
    }
    let keep: Vec<bool> = (0..d.crossing_count() as u32).map(|c| c != x).collect();
    Ok(out.compact(&keep).0)
}

/// Excises the disk made of the crossings `cs` and the face whose sides
/// are the edges leaving `sides`.
fn excise_face(d: &PlanarDiagram, cs: &[u32], sides: &[End], points: usize) -> Result<Excision> {
    let mut in_sub = vec![false; d.crossing_count()];
    for &c in cs {
        if c as usize >= in_sub.len() || in_sub[c as usize] {
            return Err(SkeinError::Inconsistent(format!("bad crossing set {cs:?}")));
        }
        in_sub[c as usize] = true;
    }
    let side_edges: HashSet<usize> = sides.iter().map(|&e| d.edge_id(e)).collect();
    let cuts = cuts_around(d, &in_sub, |e| side_edges.contains(&d.edge_id(e)))?;
    if cuts.len() != points {
        return Err(SkeinError::Inconsistent(format!("crossing set {cs:?} has {} cuts", cuts.len())));
    }
    Ok(excise(d, &in_sub, &cuts)?)
}

/// Chooses the triangle face for the next slide while emptying a bigon with
/// corner `y` occupying sector `(t, t+1)`.
fn pick_triangle(fd: &FaceData, region: &Region, y: u32, t: u8) -> Result<Face> {
    let w0: HashSet<u32> = region.walls[0].iter().map(|v| v.0).collect();
    let w1: HashSet<u32> = region.walls[1].iter().map(|v| v.0).collect();
    let interior: HashSet<u32> = region.interior.iter().copied().collect();
    let corners = |f: usize| -> [u32; 3] {
        let c = &fd.face(f).corners;
        [c[0].0, c[1].0, c[2].0]
    };
    if !interior.is_empty() {
        let tris = triangle_faces(fd);
        for wall in [&w0, &w1] {
            for &f in &tris {
                let cs = corners(f);
                let on_wall = cs.iter().filter(|c| wall.contains(c)).count();
                let inside = cs.iter().filter(|c| interior.contains(c)).count();
                if on_wall == 2 && inside == 1 {
                    return Ok(fd.face(f).clone());
                }
            }
        }
        return Err(SkeinError::NotATriangle(region.interior.clone()));
    }
    let f = fd.sector_face(y, t);
    let face = fd.face(f);
    if face.gaps.is_empty() && face.corners.len() == 3 {
        let cs = corners(f);
        if cs.contains(&y) && cs.iter().any(|c| w0.contains(c)) && cs.iter().any(|c| w1.contains(c)) {
            return Ok(face.clone());
        }
    }
    Err(SkeinError::NotATriangle(vec![y]))
}
