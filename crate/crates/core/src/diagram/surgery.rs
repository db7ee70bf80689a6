//! Excision of a sub-disk from a diagram and splicing of a replacement.
//!
//! A sub-disk is described by the crossings it contains and by the ordered
//! list of edge cuts along its boundary, read counterclockwise around the
//! sub-disk.  Excision produces the sub-diagram (with one boundary point per
//! cut) and an outer diagram in which each cut becomes an extra boundary
//! point numbered after the original points.  Splicing glues a replacement
//! with the same number of boundary points back into the hole.

use super::faces::FaceData;
use super::planar::{port_add, DiagramError, End, PlanarDiagram};

const UNSET: End = End::Point(u32::MAX);

/// One cut of an edge: `outer` is the end on the outer side and `inner` the
/// end reached by crossing the cut towards the sub-disk.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Cut {
    /// End on the outer side of the cut.
    pub outer: End,
    /// End on the sub-disk side of the cut.
    pub inner: End,
}

/// The result of cutting a sub-disk out of a diagram.
#[derive(Clone, Debug)]
pub struct Excision {
    /// The diagram outside the sub-disk; cut `i` is boundary point `B + i`.
    pub outer: PlanarDiagram,
    /// The sub-disk diagram; cut `i` is boundary point `i`.
    pub sub: PlanarDiagram,
    /// Original crossing id to outer crossing id.
    pub outer_map: Vec<Option<u32>>,
    /// Original crossing id to sub crossing id.
    pub sub_map: Vec<Option<u32>>,
    /// Number of boundary points of the original diagram.
    pub points: usize,
    /// Bottom width of the original diagram.
    pub bottom: usize,
}

fn is_sub(in_sub: &[bool], e: End) -> bool {
    matches!(e, End::Port(c, _) if in_sub[c as usize])
}

fn dense_map(keep: impl Iterator<Item = bool>) -> Vec<Option<u32>> {
    let mut k = 0;
    keep.map(|b| {
        if b {
            k += 1;
            Some(k - 1)
        } else {
            None
        }
    })
    .collect()
}

/// Cuts out the crossings flagged in `in_sub` along the given ordered cuts.
pub fn excise(d: &PlanarDiagram, in_sub: &[bool], cuts: &[Cut]) -> Result<Excision, DiagramError> {
    let b = d.point_count();
    let k = cuts.len();
    let outer_map = dense_map(in_sub.iter().map(|s| !s));
    let sub_map = dense_map(in_sub.iter().copied());
    let c_out = outer_map.iter().flatten().count();
    let c_sub = sub_map.iter().flatten().count();
    let mut outer = PlanarDiagram::with_shape(c_out, b + k, d.bottom());
    outer.loops = d.loops;
    let mut sub = PlanarDiagram::with_shape(c_sub, k, 0);
    let to_outer = |e: End| match e {
        End::Port(c, p) => End::Port(outer_map[c as usize].expect("outer crossing"), p),
        pt => pt,
    };
    let to_sub = |e: End| match e {
        End::Port(c, p) => End::Port(sub_map[c as usize].expect("sub crossing"), p),
        End::Point(_) => unreachable!("sub ends are ports"),
    };
    for i in 0..d.end_count() {
        let e = d.end_at(i);
        let f = d.partner(e);
        match (is_sub(in_sub, e), is_sub(in_sub, f)) {
            (false, false) => outer.set_half(to_outer(e), to_outer(f)),
            (true, true) => sub.set_half(to_sub(e), to_sub(f)),
            _ => {}
        }
    }
    let find_inner = |x: End| cuts.iter().position(|c| c.inner == x);
    for (i, cut) in cuts.iter().enumerate() {
        if d.partner(cut.outer) != cut.inner {
            return Err(DiagramError::InvalidRegion(format!("cut {i} is not an edge")));
        }
        let hole = End::Point((b + i) as u32);
        if is_sub(in_sub, cut.outer) {
            let j = find_inner(cut.outer)
                .ok_or_else(|| DiagramError::InvalidRegion(format!("cut {i} has no partner cut")))?;
            outer.link(hole, End::Point((b + j) as u32));
        } else {
            outer.link(to_outer(cut.outer), hole);
        }
        if is_sub(in_sub, cut.inner) {
            sub.link(End::Point(i as u32), to_sub(cut.inner));
        } else {
            let j = find_inner(cut.outer)
                .ok_or_else(|| DiagramError::InvalidRegion(format!("cut {i} has no partner cut")))?;
            sub.link(End::Point(i as u32), End::Point(j as u32));
        }
    }
    let unset = |x: &PlanarDiagram| x.xs.iter().flatten().chain(x.pts.iter()).any(|e| *e == UNSET);
    if unset(&outer) || unset(&sub) {
        return Err(DiagramError::InvalidRegion("cuts do not separate the sub-disk".into()));
    }
    Ok(Excision { outer, sub, outer_map, sub_map, points: b, bottom: d.bottom() })
}

impl Excision {
    /// Glues `replacement` (with one boundary point per cut) into the hole.
    /// Outer crossings keep their outer ids; replacement crossings follow.
    pub fn splice(&self, replacement: &PlanarDiagram) -> PlanarDiagram {
        let b = self.points;
        let k = self.outer.point_count() - b;
        assert_eq!(replacement.point_count(), k, "replacement must have one point per cut");
        let u = PlanarDiagram::disjoint_union(&self.outer, replacement);
        let pairs: Vec<(u32, u32)> = (0..k).map(|i| ((b + i) as u32, (b + k + i) as u32)).collect();
        let mut labels = vec![None; b + 2 * k];
        for (x, l) in labels.iter_mut().enumerate().take(b) {
            *l = Some(x as u32);
        }
        u.glue(&pairs, &labels, self.bottom)
    }
}

/// Cuts around the union of a set of crossings and the edges between them,
/// in counterclockwise order.  Fails unless the union has a single outer
/// boundary carrying every cut.
pub fn crossing_set_cuts(d: &PlanarDiagram, in_sub: &[bool]) -> Result<Vec<Cut>, DiagramError> {
    cuts_around(d, in_sub, |e| is_sub(in_sub, d.partner(e)))
}

/// Cuts around the union of a set of crossings and the edges accepted by
/// `internal` (called with either end of an edge between sub crossings), in
/// counterclockwise order.  Every other edge leaving a sub crossing is cut,
/// including edges joining two sub crossings, which are then cut twice.
pub fn cuts_around(
    d: &PlanarDiagram,
    in_sub: &[bool],
    internal: impl Fn(End) -> bool,
) -> Result<Vec<Cut>, DiagramError> {
    let mut cut_ports = Vec::new();
    for (c, &s) in in_sub.iter().enumerate() {
        if s {
            for p in 0..4u8 {
                let e = End::Port(c as u32, p);
                if !internal(e) {
                    cut_ports.push(e);
                }
            }
        }
    }
    let Some(&start) = cut_ports.first() else {
        return Ok(Vec::new());
    };
    let mut cuts = Vec::new();
    let mut e = start;
    let limit = 4 * in_sub.len() + 4;
    for _ in 0..limit {
        cuts.push(Cut { outer: d.partner(e), inner: e });
        let End::Port(mut c, mut p) = e else { unreachable!() };
        loop {
            p = port_add(p, 1);
            let here = End::Port(c, p);
            if !internal(here) {
                break;
            }
            match d.partner(here) {
                End::Port(c2, q) => {
                    c = c2;
                    p = q;
                }
                End::Point(_) => unreachable!("internal edges join sub crossings"),
            }
        }
        e = End::Port(c, p);
        if e == start {
            break;
        }
    }
    if cuts.len() != cut_ports.len() {
        return Err(DiagramError::InvalidRegion("crossing set is not a disk".into()));
    }
    Ok(cuts)
}

/// A disk bounded by strand segments between convex corners.
#[derive(Clone, Debug)]
pub struct Region {
    /// Corners `(crossing, s)`; the region occupies sector `(s, s+1)`.
    pub corners: Vec<(u32, u8)>,
    /// Per boundary path, the crossings passed with their arrival ports.
    pub walls: Vec<Vec<(u32, u8)>>,
    /// Crossings strictly inside the region.
    pub interior: Vec<u32>,
    /// Wall and interior crossings.
    pub in_sub: Vec<bool>,
    /// Cuts around the region in counterclockwise order.
    pub cuts: Vec<Cut>,
    /// Number of faces inside the region.
    pub face_count: usize,
}

impl Region {
    /// Builds the region whose boundary leaves corner `k` through port `s_k`
    /// along its strand and arrives at corner `k+1` through port `s_{k+1}+1`.
    pub fn from_corners(
        d: &PlanarDiagram,
        fd: &FaceData,
        corners: &[(u32, u8)],
    ) -> Result<Self, DiagramError> {
        let invalid = |m: &str| Err(DiagramError::InvalidRegion(m.to_string()));
        let nc = d.crossing_count();
        let mut role = vec![0u8; nc];
        for &(x, _) in corners {
            if role[x as usize] != 0 {
                return invalid("repeated corner");
            }
            role[x as usize] = 1;
        }
        let mut wall_edge = vec![false; d.end_count()];
        let mut walls = Vec::with_capacity(corners.len());
        for (k, &(x, s)) in corners.iter().enumerate() {
            let (y, t) = corners[(k + 1) % corners.len()];
            let mut visits = Vec::new();
            let mut leave = End::Port(x, s);
            loop {
                let arrive = d.partner(leave);
                wall_edge[d.edge_id(leave)] = true;
                match arrive {
                    End::Point(_) => return invalid("boundary path reaches the disk boundary"),
                    End::Port(c, p) if c == y => {
                        if p != port_add(t, 1) {
                            return invalid("boundary path arrives at the wrong side of a corner");
                        }
                        break;
                    }
                    End::Port(c, p) => {
                        if role[c as usize] != 0 {
                            return invalid("boundary path is not simple");
                        }
                        role[c as usize] = 2;
                        visits.push((c, p));
                        leave = End::Port(c, port_add(p, 2));
                    }
                }
            }
            walls.push(visits);
        }
        let mut uf = fd.regions(d, |e| wall_edge[d.edge_id(e)]);
        let inside = uf.find(fd.sector_face(corners[0].0, corners[0].1));
        for &(x, s) in corners {
            for i in 0..4u8 {
                let f = uf.find(fd.sector_face(x, port_add(s, i as i32)));
                if (f == inside) != (i == 0) {
                    return invalid("corner is not convex");
                }
            }
        }
        let mut face_count = 0;
        for f in 0..fd.face_count() {
            if uf.find(f) == inside {
                if fd.is_boundary_face(f) {
                    return invalid("region touches the disk boundary");
                }
                face_count += 1;
            }
        }
        let mut interior = Vec::new();
        for c in 0..nc as u32 {
            if role[c as usize] != 0 {
                continue;
            }
            let ins = (0..4u8).filter(|&i| uf.find(fd.sector_face(c, i)) == inside).count();
            match ins {
                0 => {}
                4 => interior.push(c),
                _ => return invalid("crossing straddles the region boundary"),
            }
        }
        let mut in_sub = vec![false; nc];
        for &c in &interior {
            in_sub[c as usize] = true;
        }
        for w in &walls {
            for &(c, _) in w {
                in_sub[c as usize] = true;
            }
        }
        let mut cuts = Vec::new();
        for (k, &(x, s)) in corners.iter().enumerate() {
            let (y, t) = corners[(k + 1) % corners.len()];
            let first = End::Port(x, s);
            cuts.push(Cut { outer: first, inner: d.partner(first) });
            for &(c, p) in &walls[k] {
                let e = End::Port(c, port_add(p, 1));
                cuts.push(Cut { outer: d.partner(e), inner: e });
            }
            let last = End::Port(y, port_add(t, 1));
            cuts.push(Cut { outer: last, inner: d.partner(last) });
        }
        Ok(Self { corners: corners.to_vec(), walls, interior, in_sub, cuts, face_count })
    }

    /// Number of wall and interior crossings.
    pub fn content(&self) -> usize {
        self.in_sub.iter().filter(|&&b| b).count()
    }
}
