//! Canonical reduced representatives: straight chords between points in
//! convex position, intersected with exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::matching::Matching;
use super::planar::{End, PlanarDiagram};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn cross(a: &(Q, Q), b: &(Q, Q)) -> Q {
    &a.0 * &b.1 - &a.1 * &b.0
}

fn sub(a: &(Q, Q), b: &(Q, Q)) -> (Q, Q) {
    (&a.0 - &b.0, &a.1 - &b.1)
}

/// Abscissae of the boundary points for perturbation attempt `k`.
fn abscissae(m: usize, k: u32) -> Vec<Q> {
    (0..m as i64)
        .map(|j| {
            if k == 0 {
                q(j)
            } else {
                let wiggle = (j * 7 + k as i64 * 13).rem_euclid(11);
                q(j) + Q::new(BigInt::from(wiggle), BigInt::from(50 * (k as i64 + 1)))
            }
        })
        .collect()
}

struct Layout {
    /// Per crossing: the two chord indices.
    chords: Vec<(usize, usize)>,
    /// Per crossing: true when the second chord runs counterclockwise from the first.
    ccw: Vec<bool>,
    /// Per chord: crossing ids sorted from its first endpoint to its second.
    order: Vec<Vec<u32>>,
}

fn layout(pairs: &[(usize, usize)], pts: &[(Q, Q)]) -> Option<Layout> {
    let dirs: Vec<(Q, Q)> = pairs.iter().map(|&(a, b)| sub(&pts[b], &pts[a])).collect();
    let mut chords = Vec::new();
    let mut ccw = Vec::new();
    let mut along: Vec<Vec<(Q, u32)>> = vec![Vec::new(); pairs.len()];
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if !super::matching::is_inversion(pairs[i], pairs[j]) {
                continue;
            }
            let den = cross(&dirs[i], &dirs[j]);
            let w = sub(&pts[pairs[j].0], &pts[pairs[i].0]);
            let t = cross(&w, &dirs[j]) / &den;
            let u = cross(&w, &dirs[i]) / &den;
            let id = chords.len() as u32;
            chords.push((i, j));
            ccw.push(den > Q::zero());
            along[i].push((t, id));
            along[j].push((u, id));
        }
    }
    let mut order = Vec::with_capacity(pairs.len());
    for mut list in along {
        list.sort_by(|a, b| a.0.cmp(&b.0));
        if list.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        order.push(list.into_iter().map(|(_, id)| id).collect());
    }
    Some(Layout { chords, ccw, order })
}

/// A deterministic reduced diagram realising `mt`: straight chords between
/// points on a parabola, perturbed until no three chords are concurrent.
/// The diagram has bottom width zero.
pub fn canonical_reduced(mt: &Matching) -> PlanarDiagram {
    let m = mt.len();
    let pairs = mt.pairs();
    let lay = (0..)
        .find_map(|k| {
            let pts: Vec<(Q, Q)> = abscissae(m, k).into_iter().map(|x| (x.clone(), &x * &x)).collect();
            layout(&pairs, &pts)
        })
        .expect("some perturbation is generic");
    let mut d = PlanarDiagram::with_shape(lay.chords.len(), m, 0);
    let port = |c: u32, chord: usize, forward: bool| -> End {
        let (first, _) = lay.chords[c as usize];
        let p = if chord == first {
            if forward { 0 } else { 2 }
        } else {
            match (lay.ccw[c as usize], forward) {
                (true, true) | (false, false) => 1,
                _ => 3,
            }
        };
        End::Port(c, p)
    };
    for (ci, &(a, b)) in pairs.iter().enumerate() {
        let mut prev = End::Point(a as u32);
        for &c in &lay.order[ci] {
            d.link(prev, port(c, ci, false));
            prev = port(c, ci, true);
        }
        d.link(prev, End::Point(b as u32));
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_matchings;

    #[test]
    fn crossings_equal_inversions_through_ten_points() {
        for m in (0..=10).step_by(2) {
            for mt in enumerate_matchings(m) {
                let d = canonical_reduced(&mt);
                d.validate().unwrap();
                assert_eq!(d.crossing_count(), mt.inversion_count(), "{mt}");
                assert_eq!(d.boundary_matching(), mt);
                assert!(d.is_reduced(), "{mt}");
            }
        }
    }
}
