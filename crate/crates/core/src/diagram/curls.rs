//! Detection of big curls and big bigons.
//!
//! A big curl is a loop of one strand from a crossing back to itself whose
//! boundary is embedded and which bounds a disk meeting the crossing in a
//! single sector.  A big bigon is a disk bounded by two strand segments
//! between two crossings of the same pair of strands.  The disk may contain
//! other parts of the diagram; candidates bounding fewer faces are preferred.

use super::faces::FaceData;
use super::planar::{port_add, End, PlanarDiagram};
use super::surgery::Region;

/// A big curl at crossing `x`, leaving through port `s` and returning through `s+1`.
#[derive(Clone, Debug)]
pub struct BigCurl {
    /// The self-crossing.
    pub x: u32,
    /// The port through which the loop leaves `x`.
    pub s: u8,
    /// The disk bounded by the loop.
    pub region: Region,
}

/// A big bigon between crossings `x` and `y`.
#[derive(Clone, Debug)]
pub struct BigBigon {
    /// First corner.
    pub x: u32,
    /// Port at `x` through which the first side leaves; the disk occupies sector `(s, s+1)`.
    pub s: u8,
    /// Second corner.
    pub y: u32,
    /// The disk bounded by the two sides.
    pub region: Region,
}

fn visits_from(d: &PlanarDiagram, start: End) -> Vec<(u32, u8)> {
    d.walk_from(start).visits
}

/// Loop candidates `(x, s)` from the first repeated crossing of a visit sequence.
fn first_return(visits: &[(u32, u8)]) -> Option<(u32, u8)> {
    let mut seen: Vec<(u32, u8)> = Vec::new();
    for &(c, p) in visits {
        if let Some(&(_, p0)) = seen.iter().find(|v| v.0 == c) {
            let leave = port_add(p0, 2);
            return Some(if p == port_add(leave, 1) { (c, leave) } else { (c, p) });
        }
        seen.push((c, p));
    }
    None
}

fn curl_candidates(d: &PlanarDiagram) -> Vec<(u32, u8)> {
    let mut out = Vec::new();
    for s in d.strands() {
        if s.closed {
            for &(l, _) in &s.edges {
                for v in [visits_from(d, l), {
                    let arrive = d.partner(l);
                    visits_from(d, arrive)
                }] {
                    if let Some(c) = first_return(&v) {
                        out.push(c);
                    }
                }
            }
        } else if let Some((a, b)) = s.endpoints {
            for start in [a, b] {
                if let Some(c) = first_return(&visits_from(d, End::Point(start))) {
                    out.push(c);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Finds the big curl bounding the fewest faces, if any strand crosses itself.
pub fn find_big_curl(d: &PlanarDiagram) -> Option<BigCurl> {
    let cands = curl_candidates(d);
    if cands.is_empty() {
        return None;
    }
    let fd = FaceData::new(d);
    cands
        .into_iter()
        .filter_map(|(x, s)| {
            Region::from_corners(d, &fd, &[(x, s)]).ok().map(|region| BigCurl { x, s, region })
        })
        .min_by_key(|c| (c.region.face_count, c.x, c.s))
}

/// Finds the big bigon bounding the fewest faces, if two strands cross twice.
pub fn find_big_bigon(d: &PlanarDiagram) -> Option<BigBigon> {
    let strands = d.strands();
    let owners = d.crossing_owners(&strands);
    let mut fd: Option<FaceData> = None;
    let mut best: Option<BigBigon> = None;
    for (bi, sb) in strands.iter().enumerate() {
        let v = &sb.visits;
        let len = v.len();
        if len < 2 {
            continue;
        }
        let pairs = if sb.closed { len } else { len - 1 };
        for i in 0..pairs {
            let (u, pu) = v[i];
            let other = |c: u32| {
                let o = owners[c as usize];
                if o[0] == bi { o[1] } else { o[0] }
            };
            let a = other(u);
            if a == bi {
                continue;
            }
            let span = if sb.closed { len - 1 } else { len - 1 - i };
            let Some(j) = (1..=span).map(|k| (i + k) % len).find(|&j| other(v[j].0) == a) else {
                continue;
            };
            let vy = v[j].0;
            let leave_b = port_add(pu, 2);
            for s in [leave_b, port_add(leave_b, -1)] {
                let walk = d.walk_from(End::Port(u, s));
                let Some(&(_, arr)) = walk.visits.iter().find(|w| w.0 == vy) else { continue };
                let corners = [(u, s), (vy, port_add(arr, -1))];
                let fd = fd.get_or_insert_with(|| FaceData::new(d));
                if let Ok(region) = Region::from_corners(d, fd, &corners) {
                    let better = best.as_ref().is_none_or(|b| {
                        (region.face_count, u, s) < (b.region.face_count, b.x, b.s)
                    });
                    if better {
                        best = Some(BigBigon { x: u, s, y: vy, region });
                    }
                }
            }
        }
    }
    best
}

/// Faces with exactly three corners at three distinct crossings.
pub fn triangle_faces(fd: &FaceData) -> Vec<usize> {
    (0..fd.face_count())
        .filter(|&f| {
            let face = fd.face(f);
            face.gaps.is_empty()
                && face.corners.len() == 3
                && face.corners[0].0 != face.corners[1].0
                && face.corners[1].0 != face.corners[2].0
                && face.corners[0].0 != face.corners[2].0
        })
        .collect()
}
