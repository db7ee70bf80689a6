//! The combinatorial quadrivalent diagram in the disk.
//!
//! A diagram consists of crossings, each with four ports numbered
//! counterclockwise, and boundary points numbered counterclockwise from the
//! basepoint gap on the left.  Every port and every boundary point is linked
//! to exactly one partner end; ports `p` and `p + 2` of a crossing lie on the
//! same strand.  Crossing-free closed circles carry no combinatorial data and
//! are stored as a count.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use super::matching::Matching;

/// Errors raised by diagram construction and surgery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    /// A slice word violates its width invariants.
    #[error("malformed slice word: {0}")]
    MalformedSliceWord(String),
    /// Boundary widths do not agree for composition.
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    /// The requested region is not a disk or is otherwise unusable.
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    /// The diagram fails a structural consistency check.
    #[error("inconsistent diagram: {0}")]
    Inconsistent(String),
}

/// One end of an edge: a crossing port or a boundary point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum End {
    /// Port `p ∈ 0..4` of crossing `c`.
    Port(u32, u8),
    /// Boundary point `b`.
    Point(u32),
}

impl End {
    /// The crossing id for a port end.
    pub fn crossing(self) -> Option<u32> {
        match self {
            End::Port(c, _) => Some(c),
            End::Point(_) => None,
        }
    }
}

/// Port `p + k` mod 4.
pub fn port_add(p: u8, k: i32) -> u8 {
    ((p as i32 + k).rem_euclid(4)) as u8
}

/// A quadrivalent diagram in the disk with a marked basepoint.
#[derive(Clone, PartialEq, Eq)]
pub struct PlanarDiagram {
    pub(crate) xs: Vec<[End; 4]>,
    pub(crate) pts: Vec<End>,
    pub(crate) loops: u32,
    pub(crate) bottom: u32,
}

/// A strand: a maximal path following straight-through pairings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Strand {
    /// Oriented edges `(leaving end, arriving end)` in order.
    pub edges: Vec<(End, End)>,
    /// Crossing visits `(crossing, arrival port)` in order.
    pub visits: Vec<(u32, u8)>,
    /// True for a closed strand.
    pub closed: bool,
    /// Boundary endpoints `(start, end)` of an open strand.
    pub endpoints: Option<(u32, u32)>,
}

impl Strand {
    /// True when some crossing is visited twice.
    pub fn self_crosses(&self) -> bool {
        let mut seen: Vec<u32> = self.visits.iter().map(|v| v.0).collect();
        seen.sort_unstable();
        seen.windows(2).any(|w| w[0] == w[1])
    }
}

/// Canonical encoding of a diagram, usable as a memoization key.
pub type Encoding = Vec<u32>;

impl PlanarDiagram {
    /// The empty diagram on zero points.
    pub fn empty() -> Self {
        Self { xs: Vec::new(), pts: Vec::new(), loops: 0, bottom: 0 }
    }

    /// `loops` disjoint crossing-free circles.
    pub fn circles(loops: u32) -> Self {
        Self { loops, ..Self::empty() }
    }

    /// The crossing-free identity on `k` strands.
    pub fn identity(k: usize) -> Self {
        let mut d = Self::with_shape(0, 2 * k, k);
        for j in 0..k {
            d.link(End::Point(j as u32), End::Point((2 * k - 1 - j) as u32));
        }
        d
    }

    /// A diagram with `c` crossings and `b` points whose links are still unset.
    pub(crate) fn with_shape(c: usize, b: usize, bottom: usize) -> Self {
        Self {
            xs: vec![[End::Point(u32::MAX); 4]; c],
            pts: vec![End::Point(u32::MAX); b],
            loops: 0,
            bottom: bottom as u32,
        }
    }

    /// Number of crossings.
    pub fn crossing_count(&self) -> usize {
        self.xs.len()
    }

    /// Number of boundary points.
    pub fn point_count(&self) -> usize {
        self.pts.len()
    }

    /// Number of crossing-free circles.
    pub fn loops(&self) -> u32 {
        self.loops
    }

    /// Bottom width `k₁`.
    pub fn bottom(&self) -> usize {
        self.bottom as usize
    }

    /// Top width `k₂`.
    pub fn top(&self) -> usize {
        self.pts.len() - self.bottom as usize
    }

    /// Reassigns the bottom/top split without changing the boundary labels.
    pub fn with_bottom(mut self, bottom: usize) -> Self {
        assert!(bottom <= self.pts.len());
        self.bottom = bottom as u32;
        self
    }

    /// Adds `k` crossing-free circles.
    pub fn add_loops(&mut self, k: u32) {
        self.loops += k;
    }

    /// Removes all crossing-free circles, returning how many there were.
    pub fn take_loops(&mut self) -> u32 {
        std::mem::take(&mut self.loops)
    }

    /// The partner of an end.
    pub fn partner(&self, e: End) -> End {
        match e {
            End::Port(c, p) => self.xs[c as usize][p as usize],
            End::Point(b) => self.pts[b as usize],
        }
    }

    pub(crate) fn set_half(&mut self, a: End, b: End) {
        match a {
            End::Port(c, p) => self.xs[c as usize][p as usize] = b,
            End::Point(x) => self.pts[x as usize] = b,
        }
    }

    pub(crate) fn link(&mut self, a: End, b: End) {
        self.set_half(a, b);
        self.set_half(b, a);
    }

    /// Dense index of an end: ports first, then points.
    pub fn end_index(&self, e: End) -> usize {
        match e {
            End::Port(c, p) => 4 * c as usize + p as usize,
            End::Point(b) => 4 * self.xs.len() + b as usize,
        }
    }

    /// Inverse of [`end_index`](Self::end_index).
    pub fn end_at(&self, i: usize) -> End {
        let c4 = 4 * self.xs.len();
        if i < c4 {
            End::Port((i / 4) as u32, (i % 4) as u8)
        } else {
            End::Point((i - c4) as u32)
        }
    }

    /// Total number of ends.
    pub fn end_count(&self) -> usize {
        4 * self.xs.len() + self.pts.len()
    }

    /// Canonical id of the edge containing end `e`.
    pub fn edge_id(&self, e: End) -> usize {
        self.end_index(e).min(self.end_index(self.partner(e)))
    }

    /// Checks link symmetry, straight-pair structure and the Euler count.
    pub fn validate(&self) -> Result<(), DiagramError> {
        for i in 0..self.end_count() {
            let e = self.end_at(i);
            let f = self.partner(e);
            let ok = match f {
                End::Port(c, p) => (c as usize) < self.xs.len() && p < 4,
                End::Point(b) => (b as usize) < self.pts.len(),
            };
            if !ok || self.partner(f) != e || f == e {
                return Err(DiagramError::Inconsistent(format!("bad link at {e:?}")));
            }
        }
        let faces = super::faces::FaceData::new(self);
        let comps = self.component_count();
        let b = self.pts.len();
        let c = self.xs.len();
        let expected = if b > 0 { c + b / 2 + 2 * comps - 1 } else { c + 2 * comps };
        if faces.face_count() != expected {
            return Err(DiagramError::Inconsistent(format!(
                "Euler check failed: {} face cycles, expected {expected}",
                faces.face_count()
            )));
        }
        Ok(())
    }

    /// Number of connected components of the underlying graph, counting the
    /// boundary circle (with its points) as one vertex when present.
    fn component_count(&self) -> usize {
        let c = self.xs.len();
        let mut uf = UnionFind::new(c + 1);
        for (ci, ports) in self.xs.iter().enumerate() {
            for e in ports {
                match e {
                    End::Port(d, _) => uf.union(ci, *d as usize),
                    End::Point(_) => uf.union(ci, c),
                };
            }
        }
        let mut roots: Vec<usize> = (0..c).map(|i| uf.find(i)).collect();
        if !self.pts.is_empty() {
            roots.push(uf.find(c));
        }
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// The matching of boundary points induced by open strands.
    pub fn boundary_matching(&self) -> Matching {
        let b = self.pts.len();
        let mut partner = vec![0u8; b];
        for i in 0..b {
            partner[i] = self.follow_from_point(i as u32) as u8;
        }
        Matching::from_partner(partner).expect("strands pair boundary points")
    }

    fn follow_from_point(&self, b: u32) -> u32 {
        let mut e = self.pts[b as usize];
        loop {
            match e {
                End::Point(x) => return x,
                End::Port(c, p) => e = self.xs[c as usize][port_add(p, 2) as usize],
            }
        }
    }

    /// Follows a strand leaving end `start` (a port or point) until it
    /// reaches a boundary point or returns to `start`.
    pub fn walk_from(&self, start: End) -> Strand {
        let mut edges = Vec::new();
        let mut visits = Vec::new();
        let mut leave = start;
        loop {
            let arrive = self.partner(leave);
            edges.push((leave, arrive));
            match arrive {
                End::Point(_) => break,
                End::Port(c, p) => {
                    let out = End::Port(c, port_add(p, 2));
                    if out == start {
                        visits.push((c, p));
                        break;
                    }
                    visits.push((c, p));
                    leave = out;
                }
            }
        }
        let closed = !matches!(edges.last(), Some((_, End::Point(_))));
        let endpoints = match (start, edges.last()) {
            (End::Point(a), Some((_, End::Point(b)))) => Some((a, *b)),
            _ => None,
        };
        Strand { edges, visits, closed, endpoints }
    }

    /// All strands: open strands from their smaller endpoint, then closed ones.
    pub fn strands(&self) -> Vec<Strand> {
        let mut out = Vec::new();
        let mut used = vec![false; self.end_count()];
        for b in 0..self.pts.len() as u32 {
            if used[self.end_index(End::Point(b))] {
                continue;
            }
            let s = self.walk_from(End::Point(b));
            for (l, a) in &s.edges {
                used[self.end_index(*l)] = true;
                used[self.end_index(*a)] = true;
            }
            out.push(s);
        }
        for c in 0..self.xs.len() as u32 {
            for p in 0..4u8 {
                let e = End::Port(c, p);
                if used[self.end_index(e)] {
                    continue;
                }
                let s = self.walk_from(e);
                for (l, a) in &s.edges {
                    used[self.end_index(*l)] = true;
                    used[self.end_index(*a)] = true;
                }
                out.push(s);
            }
        }
        out
    }

    /// True iff there are no closed strands, no self-crossings and no two
    /// strands cross more than once.
    pub fn is_reduced(&self) -> bool {
        if self.loops > 0 {
            return false;
        }
        let strands = self.strands();
        let mut owner = vec![[usize::MAX; 2]; self.xs.len()];
        for (si, s) in strands.iter().enumerate() {
            if s.closed {
                return false;
            }
            for &(c, _) in &s.visits {
                let slot = &mut owner[c as usize];
                if slot[0] == usize::MAX {
                    slot[0] = si;
                } else {
                    if slot[0] == si {
                        return false;
                    }
                    slot[1] = si;
                }
            }
        }
        let mut pairs: Vec<(usize, usize)> =
            owner.iter().map(|o| (o[0].min(o[1]), o[0].max(o[1]))).collect();
        pairs.sort_unstable();
        pairs.windows(2).all(|w| w[0] != w[1])
    }

    /// Rotation by 180°: exchanges source and target.
    pub fn transpose(&self) -> Self {
        let b = self.pts.len() as i64;
        let k1 = self.bottom as i64;
        let relabel = |x: u32| ((x as i64 - k1).rem_euclid(b.max(1))) as u32;
        let map_end = |e: End| match e {
            End::Point(x) => End::Point(relabel(x)),
            port => port,
        };
        let mut out = Self::with_shape(self.xs.len(), self.pts.len(), self.top());
        for (c, ports) in self.xs.iter().enumerate() {
            out.xs[c] = ports.map(map_end);
        }
        for (x, e) in self.pts.iter().enumerate() {
            out.pts[relabel(x as u32) as usize] = map_end(*e);
        }
        out.loops = self.loops;
        out
    }

    /// Relabels boundary points by `i ↦ (i + s) mod B`, keeping the bottom width.
    pub fn rotate(&self, s: i64) -> Self {
        let b = self.pts.len() as i64;
        if b == 0 {
            return self.clone();
        }
        let relabel = |x: u32| ((x as i64 + s).rem_euclid(b)) as u32;
        let map_end = |e: End| match e {
            End::Point(x) => End::Point(relabel(x)),
            port => port,
        };
        let mut out = Self::with_shape(self.xs.len(), self.pts.len(), self.bottom());
        for (c, ports) in self.xs.iter().enumerate() {
            out.xs[c] = ports.map(map_end);
        }
        for (x, e) in self.pts.iter().enumerate() {
            out.pts[relabel(x as u32) as usize] = map_end(*e);
        }
        out.loops = self.loops;
        out
    }

    /// Disjoint union; the second diagram's crossings and points are offset.
    pub fn disjoint_union(a: &Self, b: &Self) -> Self {
        let (ca, pa) = (a.xs.len() as u32, a.pts.len() as u32);
        let shift = |e: End| match e {
            End::Port(c, p) => End::Port(c + ca, p),
            End::Point(x) => End::Point(x + pa),
        };
        let mut xs = a.xs.clone();
        xs.extend(b.xs.iter().map(|ports| ports.map(shift)));
        let mut pts = a.pts.clone();
        pts.extend(b.pts.iter().map(|e| shift(*e)));
        Self { xs, pts, loops: a.loops + b.loops, bottom: a.bottom }
    }

    /// Identifies pairs of boundary points (removing them) and relabels the
    /// surviving points by `new_label`.  Chains through glued points are
    /// resolved; cycles made only of glued points become circles.
    pub fn glue(&self, pairs: &[(u32, u32)], new_label: &[Option<u32>], bottom: usize) -> Self {
        let b = self.pts.len();
        let mut mate = vec![u32::MAX; b];
        for &(x, y) in pairs {
            mate[x as usize] = y;
            mate[y as usize] = x;
        }
        let surviving = new_label.iter().filter(|l| l.is_some()).count();
        let mut out = Self::with_shape(self.xs.len(), surviving, bottom);
        out.loops = self.loops;
        let map_real = |e: End| match e {
            End::Point(x) => End::Point(new_label[x as usize].expect("surviving point")),
            port => port,
        };
        let mut visited = vec![false; b];
        let resolve = |mut e: End, visited: &mut Vec<bool>| -> End {
            loop {
                match e {
                    End::Point(x) if mate[x as usize] != u32::MAX => {
                        visited[x as usize] = true;
                        let y = mate[x as usize];
                        visited[y as usize] = true;
                        e = self.pts[y as usize];
                    }
                    _ => return e,
                }
            }
        };
        for c in 0..self.xs.len() as u32 {
            for p in 0..4u8 {
                let f = resolve(self.xs[c as usize][p as usize], &mut visited);
                out.set_half(End::Port(c, p), map_real(f));
            }
        }
        for x in 0..b as u32 {
            if mate[x as usize] != u32::MAX {
                continue;
            }
            let f = resolve(self.pts[x as usize], &mut visited);
            out.set_half(map_real(End::Point(x)), map_real(f));
        }
        for x in 0..b {
            if mate[x] == u32::MAX || visited[x] {
                continue;
            }
            let mut cur = x;
            loop {
                visited[cur] = true;
                let y = mate[cur] as usize;
                visited[y] = true;
                match self.pts[y] {
                    End::Point(z) if !visited[z as usize] => cur = z as usize,
                    _ => break,
                }
            }
            out.loops += 1;
        }
        out
    }

    /// Vertical composition with `upper` placed on top of `self`.
    pub fn stack(&self, upper: &Self) -> Result<Self, DiagramError> {
        let (a, k) = (self.bottom(), self.top());
        if upper.bottom() != k {
            return Err(DiagramError::WidthMismatch(k, upper.bottom()));
        }
        let bt = upper.top();
        let u = Self::disjoint_union(self, upper);
        let off = self.pts.len() as u32;
        let pairs: Vec<(u32, u32)> =
            (1..=k).map(|j| ((a + k - j) as u32, off + (j - 1) as u32)).collect();
        let mut labels = vec![None; u.pts.len()];
        for (l, slot) in labels.iter_mut().enumerate().take(a) {
            *slot = Some(l as u32);
        }
        for l in k..k + bt {
            labels[off as usize + l] = Some((l - k + a) as u32);
        }
        Ok(u.glue(&pairs, &labels, a))
    }

    /// Horizontal juxtaposition (tensor product) with `right` to the right.
    pub fn side_by_side(&self, right: &Self) -> Self {
        let a1 = self.bottom();
        let (a2, b2) = (right.bottom(), right.top());
        let u = Self::disjoint_union(self, right);
        let off = self.pts.len();
        let mut labels = vec![None; u.pts.len()];
        for l in 0..off {
            let nl = if l < a1 { l } else { l + a2 + b2 };
            labels[l] = Some(nl as u32);
        }
        for l in 0..right.pts.len() {
            labels[off + l] = Some((a1 + l) as u32);
        }
        u.glue(&[], &labels, a1 + a2)
    }

    /// Glues point `i` of `self` to point `σ(i) = (k₁ − 1 − i) mod B` of `other`,
    /// the closure used by the trace pairing.
    pub fn pair_closure(&self, other: &Self) -> Result<Self, DiagramError> {
        let b = self.pts.len();
        if other.pts.len() != b || other.bottom != self.bottom {
            return Err(DiagramError::WidthMismatch(b, other.pts.len()));
        }
        let k1 = self.bottom as i64;
        let u = Self::disjoint_union(self, other);
        let pairs: Vec<(u32, u32)> = (0..b as i64)
            .map(|i| (i as u32, (b as i64 + (k1 - 1 - i).rem_euclid(b.max(1) as i64)) as u32))
            .collect();
        Ok(u.glue(&pairs, &vec![None; 2 * b], 0))
    }

    /// Closes every boundary point `i` with point `mt.partner(i)` by crossing-free arcs.
    pub fn close_with(&self, mt: &Matching) -> Self {
        let pairs: Vec<(u32, u32)> =
            mt.pairs().into_iter().map(|(a, b)| (a as u32, b as u32)).collect();
        self.glue(&pairs, &vec![None; self.pts.len()], 0)
    }

    /// Splits off closed connected components not attached to the boundary.
    /// Returns the remaining diagram (keeping all points and circles) and the
    /// closed components.
    pub fn split_floating(&self) -> (Self, Vec<Self>) {
        let c = self.xs.len();
        let mut comp = vec![usize::MAX; c];
        let mut queue = VecDeque::new();
        let mut ncomp = 1;
        for e in &self.pts {
            if let End::Port(x, _) = e {
                if comp[*x as usize] == usize::MAX {
                    comp[*x as usize] = 0;
                    queue.push_back(*x);
                }
            }
        }
        loop {
            while let Some(x) = queue.pop_front() {
                for e in &self.xs[x as usize] {
                    if let End::Port(y, _) = e {
                        if comp[*y as usize] == usize::MAX {
                            comp[*y as usize] = comp[x as usize];
                            queue.push_back(*y);
                        }
                    }
                }
            }
            match comp.iter().position(|&v| v == usize::MAX) {
                Some(x) => {
                    comp[x] = ncomp;
                    ncomp += 1;
                    queue.push_back(x as u32);
                }
                None => break,
            }
        }
        let members = |k: usize| -> Vec<usize> { (0..c).filter(|&x| comp[x] == k).collect() };
        let mut main = self.restrict(&members(0), true);
        main.loops = self.loops;
        let floating = (1..ncomp).map(|k| self.restrict(&members(k), false)).collect();
        (main, floating)
    }

    fn restrict(&self, members: &[usize], keep_points: bool) -> Self {
        let mut index = vec![u32::MAX; self.xs.len()];
        for (i, &x) in members.iter().enumerate() {
            index[x] = i as u32;
        }
        let remap = |e: End| match e {
            End::Port(c, p) => End::Port(index[c as usize], p),
            pt => pt,
        };
        let mut out = Self::with_shape(members.len(), if keep_points { self.pts.len() } else { 0 }, 0);
        if keep_points {
            out.bottom = self.bottom;
            for (x, e) in self.pts.iter().enumerate() {
                out.pts[x] = remap(*e);
            }
        }
        for (i, &x) in members.iter().enumerate() {
            out.xs[i] = self.xs[x].map(remap);
        }
        out
    }

    /// Removes the listed crossings' identities by renumbering the rest densely.
    pub(crate) fn compact(&self, keep: &[bool]) -> (Self, Vec<Option<u32>>) {
        let mut map = vec![None; self.xs.len()];
        let mut k = 0;
        for (c, &kp) in keep.iter().enumerate() {
            if kp {
                map[c] = Some(k);
                k += 1;
            }
        }
        let remap = |e: End| match e {
            End::Port(c, p) => End::Port(map[c as usize].expect("kept crossing"), p),
            pt => pt,
        };
        let mut out = Self::with_shape(k as usize, self.pts.len(), self.bottom());
        out.loops = self.loops;
        for (c, ports) in self.xs.iter().enumerate() {
            if let Some(nc) = map[c] {
                out.xs[nc as usize] = ports.map(remap);
            }
        }
        for (x, e) in self.pts.iter().enumerate() {
            out.pts[x] = remap(*e);
        }
        (out, map)
    }

    /// Canonical encoding: breadth-first renumbering from the boundary, with
    /// each crossing's ports rotated so that its entry port becomes port 0.
    /// Closed components are encoded separately (minimised over all starting
    /// ports) and appended in sorted order.  Floating components are
    /// recorded up to their position in the disk.
    pub fn encoding(&self) -> Encoding {
        let (main, floating) = if self.is_connected_to_boundary() {
            (self.clone(), Vec::new())
        } else {
            self.split_floating()
        };
        let mut enc = if main.pts.is_empty() && main.xs.is_empty() {
            vec![0, 0]
        } else {
            main.encode_from(None).expect("boundary reaches every crossing")
        };
        enc.push(self.loops);
        let mut closed: Vec<Encoding> = floating.iter().map(|f| f.closed_encoding()).collect();
        closed.sort();
        for c in closed {
            enc.push(u32::MAX);
            enc.extend(c);
        }
        enc
    }

    /// Encoding of a connected closed diagram, minimised over start ports.
    pub fn closed_encoding(&self) -> Encoding {
        let mut best: Option<Encoding> = None;
        for c in 0..self.xs.len() as u32 {
            for p in 0..4u8 {
                if let Some(e) = self.encode_from(Some(End::Port(c, p))) {
                    if best.as_ref().is_none_or(|b| &e < b) {
                        best = Some(e);
                    }
                }
            }
        }
        best.unwrap_or_else(|| vec![0, 0])
    }

    /// The start port achieving [`closed_encoding`](Self::closed_encoding).
    pub fn closed_encoding_start(&self) -> Option<End> {
        let mut best: Option<(Encoding, End)> = None;
        for c in 0..self.xs.len() as u32 {
            for p in 0..4u8 {
                let s = End::Port(c, p);
                if let Some(e) = self.encode_from(Some(s)) {
                    if best.as_ref().is_none_or(|b| e < b.0) {
                        best = Some((e, s));
                    }
                }
            }
        }
        best.map(|b| b.1)
    }

    /// Whether every crossing is reachable from the boundary points.
    pub fn is_connected_to_boundary(&self) -> bool {
        if self.pts.is_empty() {
            return self.xs.is_empty();
        }
        let mut seen = vec![false; self.xs.len()];
        let mut stack: Vec<u32> = self.pts.iter().filter_map(|e| e.crossing()).collect();
        for &x in &stack {
            seen[x as usize] = true;
        }
        while let Some(x) = stack.pop() {
            for e in &self.xs[x as usize] {
                if let End::Port(y, _) = e {
                    if !seen[*y as usize] {
                        seen[*y as usize] = true;
                        stack.push(*y);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    fn encode_from(&self, closed_start: Option<End>) -> Option<Encoding> {
        let c = self.xs.len();
        let b = self.pts.len();
        let mut order = vec![u32::MAX; c];
        let mut rot = vec![0u8; c];
        let mut queue: VecDeque<u32> = VecDeque::new();
        let mut next = 0u32;
        let mut discover = |x: u32, p: u8, order: &mut Vec<u32>, rot: &mut Vec<u8>, queue: &mut VecDeque<u32>| {
            if order[x as usize] == u32::MAX {
                order[x as usize] = next;
                rot[x as usize] = p;
                next += 1;
                queue.push_back(x);
            }
        };
        let code = |e: End, order: &Vec<u32>, rot: &Vec<u8>| -> u32 {
            match e {
                End::Point(x) => x,
                End::Port(x, p) => {
                    b as u32 + 4 * order[x as usize] + port_add(p, -(rot[x as usize] as i32)) as u32
                }
            }
        };
        let mut enc = vec![b as u32, c as u32];
        if let Some(End::Port(x, p)) = closed_start {
            discover(x, p, &mut order, &mut rot, &mut queue);
        } else {
            for x in 0..b {
                if let End::Port(y, p) = self.pts[x] {
                    discover(y, p, &mut order, &mut rot, &mut queue);
                }
                while let Some(y) = queue.pop_front() {
                    for k in 0..4u8 {
                        let q = port_add(rot[y as usize], k as i32);
                        if let End::Port(z, r) = self.xs[y as usize][q as usize] {
                            discover(z, r, &mut order, &mut rot, &mut queue);
                        }
                    }
                }
            }
        }
        while let Some(y) = queue.pop_front() {
            for k in 0..4u8 {
                let q = port_add(rot[y as usize], k as i32);
                if let End::Port(z, r) = self.xs[y as usize][q as usize] {
                    discover(z, r, &mut order, &mut rot, &mut queue);
                }
            }
        }
        if order.contains(&u32::MAX) {
            return None;
        }
        for x in 0..b {
            enc.push(code(self.pts[x], &order, &rot));
        }
        let mut inv = vec![0u32; c];
        for (x, &o) in order.iter().enumerate() {
            inv[o as usize] = x as u32;
        }
        for &x in &inv {
            for k in 0..4u8 {
                let q = port_add(rot[x as usize], k as i32);
                enc.push(code(self.xs[x as usize][q as usize], &order, &rot));
            }
        }
        Some(enc)
    }

    /// Crossings through which each strand passes, per crossing: the two
    /// strand indices into [`strands`](Self::strands).
    pub fn crossing_owners(&self, strands: &[Strand]) -> Vec<[usize; 2]> {
        let mut owner = vec![[usize::MAX; 2]; self.xs.len()];
        for (si, s) in strands.iter().enumerate() {
            for &(c, p) in &s.visits {
                let slot = (p % 2) as usize;
                owner[c as usize][slot] = si;
            }
        }
        owner
    }
}

impl fmt::Debug for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PlanarDiagram({}→{}, {} crossings, {} circles, matching {})",
            self.bottom(),
            self.top(),
            self.xs.len(),
            self.loops,
            self.boundary_matching()
        )
    }
}

/// A small union-find structure.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    /// `n` singleton classes.
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    /// Class representative.
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges two classes; returns true if they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
