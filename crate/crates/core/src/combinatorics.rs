//! Matchings, crossing patterns, oscillating tableaux and the bijection
//! relating `n`-symplectic oscillating tableaux to `(n+1)`-avoiding matchings.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{is_inversion, Matching};

/// Hard cap on the number of points handled by exhaustive enumeration.
pub const MAX_ENUM_POINTS: usize = 12;

/// Errors raised by the tableau bijection.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    /// The shape sequence is not a valid closed oscillating tableau.
    #[error("malformed oscillating tableau: {0}")]
    MalformedTableau(String),
}

/// An integer partition stored as weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// The empty partition.
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Builds a partition from its parts, rejecting non-monotone input.
    pub fn new(parts: Vec<u32>) -> Option<Self> {
        let ok = parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p > 0);
        ok.then_some(Self(parts))
    }

    /// The parts.
    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero rows.
    pub fn rows(&self) -> usize {
        self.0.len()
    }

    /// Number of boxes.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Row lengths available for adding one box, as row indices.
    pub fn addable_rows(&self) -> Vec<usize> {
        (0..=self.0.len())
            .filter(|&r| r == 0 || self.0[r - 1] > self.0.get(r).copied().unwrap_or(0))
            .collect()
    }

    /// Rows whose last box can be removed.
    pub fn removable_rows(&self) -> Vec<usize> {
        (0..self.0.len())
            .filter(|&r| self.0.get(r + 1).copied().unwrap_or(0) < self.0[r])
            .collect()
    }

    /// Adds a box at the end of row `r`.
    pub fn add_box(&self, r: usize) -> Self {
        let mut p = self.0.clone();
        if r == p.len() {
            p.push(1);
        } else {
            p[r] += 1;
        }
        Self(p)
    }

    /// Removes the last box of row `r`.
    pub fn remove_box(&self, r: usize) -> Self {
        let mut p = self.0.clone();
        p[r] -= 1;
        if p[r] == 0 {
            p.pop();
        }
        Self(p)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A sequence of partitions, each differing from the previous by one box.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct OscTableau {
    shapes: Vec<Partition>,
}

impl OscTableau {
    /// Builds a tableau, checking that it starts at `∅` and steps by single boxes.
    pub fn new(shapes: Vec<Partition>) -> Result<Self, CombinatoricsError> {
        if shapes.first() != Some(&Partition::empty()) {
            return Err(CombinatoricsError::MalformedTableau("must start at the empty shape".into()));
        }
        for (i, w) in shapes.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            let step_ok = a.addable_rows().iter().any(|&r| &a.add_box(r) == b)
                || a.removable_rows().iter().any(|&r| &a.remove_box(r) == b);
            if !step_ok {
                return Err(CombinatoricsError::MalformedTableau(format!(
                    "step {} changes {:?} to {:?}",
                    i + 1,
                    a,
                    b
                )));
            }
        }
        Ok(Self { shapes })
    }

    /// The shapes `λ₀, …, λ_m`.
    pub fn shapes(&self) -> &[Partition] {
        &self.shapes
    }

    /// The length `m`.
    pub fn len(&self) -> usize {
        self.shapes.len() - 1
    }

    /// True for the length-zero tableau.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The largest number of rows among all shapes.
    pub fn max_rows(&self) -> usize {
        self.shapes.iter().map(Partition::rows).max().unwrap_or(0)
    }

    /// True when every shape has at most `n` rows.
    pub fn is_symplectic(&self, n: usize) -> bool {
        self.max_rows() <= n
    }
}

/// All matchings of `m` points in lexicographic order.
pub fn enumerate_matchings(m: usize) -> Vec<Matching> {
    assert!(m.is_multiple_of(2), "matchings need an even number of points");
    assert!(m <= MAX_ENUM_POINTS, "enumeration is capped at {MAX_ENUM_POINTS} points");
    let mut out = Vec::new();
    let mut partner = vec![u8::MAX; m];
    fn rec(partner: &mut Vec<u8>, out: &mut Vec<Matching>) {
        let Some(i) = partner.iter().position(|&p| p == u8::MAX) else {
            out.push(Matching::from_partner(partner.clone()).expect("valid by construction"));
            return;
        };
        for j in i + 1..partner.len() {
            if partner[j] == u8::MAX {
                partner[i] = j as u8;
                partner[j] = i as u8;
                rec(partner, out);
                partner[i] = u8::MAX;
                partner[j] = u8::MAX;
            }
        }
    }
    rec(&mut partner, &mut out);
    out.sort();
    out
}

/// The largest `j` such that some `j` pairs of the matching pairwise cross.
pub fn max_crossing(mt: &Matching) -> usize {
    let ps = mt.pairs();
    let k = ps.len();
    let mut adj = vec![0u32; k];
    for i in 0..k {
        for j in 0..k {
            if i != j && is_inversion(ps[i], ps[j]) {
                adj[i] |= 1 << j;
            }
        }
    }
    let mut best = usize::from(k > 0);
    for mask in 1u32..(1 << k) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let clique = (0..k).filter(|&i| mask & (1 << i) != 0).all(|i| {
            let others = mask & !(1 << i);
            adj[i] & others == others
        });
        if clique {
            best = size;
        }
    }
    best
}

/// Number of matchings of `m` points with no `n+1` pairwise crossing pairs.
pub fn count_avoiding(m: usize, n: usize) -> usize {
    enumerate_matchings(m).iter().filter(|mt| max_crossing(mt) <= n).count()
}

/// All oscillating tableaux of length `m` from `∅` to `target` with at most `max_rows` rows.
pub fn enumerate_osc(m: usize, max_rows: usize, target: &Partition) -> Vec<OscTableau> {
    assert!(m <= MAX_ENUM_POINTS, "enumeration is capped at {MAX_ENUM_POINTS} steps");
    let mut out = Vec::new();
    let mut path = vec![Partition::empty()];
    fn rec(path: &mut Vec<Partition>, m: usize, rows: usize, target: &Partition, out: &mut Vec<OscTableau>) {
        let cur = path.last().expect("nonempty path").clone();
        let left = m + 1 - path.len();
        if left == 0 {
            if &cur == target {
                out.push(OscTableau { shapes: path.clone() });
            }
            return;
        }
        if (cur.size() as i64 - target.size() as i64).unsigned_abs() as usize > left {
            return;
        }
        for r in cur.addable_rows() {
            if r < rows {
                path.push(cur.add_box(r));
                rec(path, m, rows, target, out);
                path.pop();
            }
        }
        for r in cur.removable_rows() {
            path.push(cur.remove_box(r));
            rec(path, m, rows, target, out);
            path.pop();
        }
    }
    rec(&mut path, m, max_rows, target, &mut out);
    out
}

/// Number of length-`m` walks `∅ → target` adding or removing one box, staying within `n` rows.
pub fn walk_count(n: usize, m: usize, target: &Partition) -> u128 {
    let mut cur: HashMap<Partition, u128> = HashMap::new();
    cur.insert(Partition::empty(), 1);
    for _ in 0..m {
        let mut next: HashMap<Partition, u128> = HashMap::new();
        for (p, c) in &cur {
            for r in p.addable_rows() {
                if r < n {
                    *next.entry(p.add_box(r)).or_default() += c;
                }
            }
            for r in p.removable_rows() {
                *next.entry(p.remove_box(r)).or_default() += c;
            }
        }
        cur = next;
    }
    cur.get(target).copied().unwrap_or(0)
}

/// A standard filling stored row by row.
type Filling = Vec<Vec<usize>>;

fn shape_of(t: &Filling) -> Partition {
    Partition(t.iter().map(|r| r.len() as u32).filter(|&l| l > 0).collect())
}

/// Row-inserts `x`, returning the row that gained a box.
fn row_insert(t: &mut Filling, mut x: usize) -> usize {
    let mut r = 0;
    loop {
        if r == t.len() {
            t.push(vec![x]);
            return r;
        }
        match t[r].iter().position(|&y| y > x) {
            Some(pos) => {
                x = std::mem::replace(&mut t[r][pos], x);
                r += 1;
            }
            None => {
                t[r].push(x);
                return r;
            }
        }
    }
}

/// Removes the last cell of row `r` and reverse-bumps its entry out of the first row.
fn reverse_bump(t: &mut Filling, r: usize) -> usize {
    let mut x = t[r].pop().expect("nonempty row");
    if t[r].is_empty() {
        t.pop();
    }
    for row in (0..r).rev() {
        let pos = t[row]
            .iter()
            .rposition(|&y| y < x)
            .expect("standard filling has a smaller entry above");
        x = std::mem::replace(&mut t[row][pos], x);
    }
    x
}

/// Maps a closed oscillating tableau to a matching of its steps.
pub fn tableau_to_matching(t: &OscTableau) -> Result<Matching, CombinatoricsError> {
    let shapes = t.shapes();
    if shapes.last() != Some(&Partition::empty()) {
        return Err(CombinatoricsError::MalformedTableau("must end at the empty shape".into()));
    }
    let m = t.len();
    let mut fill: Filling = Vec::new();
    let mut pairs = Vec::new();
    for i in 1..=m {
        let (a, b) = (&shapes[i - 1], &shapes[i]);
        if b.size() > a.size() {
            let r = (0..=a.rows())
                .find(|&r| b.parts().get(r).copied().unwrap_or(0) > a.parts().get(r).copied().unwrap_or(0))
                .expect("added row exists");
            if r == fill.len() {
                fill.push(Vec::new());
            }
            fill[r].push(i);
        } else {
            let r = (0..a.rows())
                .find(|&r| b.parts().get(r).copied().unwrap_or(0) < a.parts()[r])
                .expect("removed row exists");
            let j = reverse_bump(&mut fill, r);
            pairs.push((j - 1, i - 1));
        }
        debug_assert_eq!(&shape_of(&fill), b);
    }
    Matching::from_pairs(m, &pairs).map_err(|e| CombinatoricsError::MalformedTableau(e.to_string()))
}

/// Maps a matching to the oscillating tableau inverse to [`tableau_to_matching`].
pub fn matching_to_tableau(mt: &Matching) -> OscTableau {
    let m = mt.len();
    let mut fill: Filling = Vec::new();
    let mut shapes = vec![Partition::empty(); m + 1];
    for i in (1..=m).rev() {
        let p = mt.partner(i - 1) + 1;
        if p < i {
            row_insert(&mut fill, p);
        } else {
            let r = fill
                .iter()
                .position(|row| row.last() == Some(&i))
                .expect("largest entry sits at a corner");
            fill[r].pop();
            if fill[r].is_empty() {
                fill.pop();
            }
        }
        shapes[i - 1] = shape_of(&fill);
    }
    OscTableau { shapes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_counts_are_double_factorials() {
        assert_eq!(enumerate_matchings(4).len(), 3);
        assert_eq!(enumerate_matchings(6).len(), 15);
        assert_eq!(enumerate_matchings(8).len(), 105);
    }

    #[test]
    fn max_crossing_examples() {
        assert_eq!(max_crossing(&"0-1,2-3".parse().unwrap()), 1);
        assert_eq!(max_crossing(&"0-3,1-4,2-5".parse().unwrap()), 3);
        assert_eq!(max_crossing(&"0-2,1-3,4-5".parse().unwrap()), 2);
    }

    #[test]
    fn small_walks() {
        for n in 1..4 {
            assert_eq!(walk_count(n, 2, &Partition::empty()), 1);
        }
        assert_eq!(walk_count(1, 6, &Partition::empty()), 5);
        assert_eq!(walk_count(2, 6, &Partition::empty()), 14);
    }

    #[test]
    fn single_pair_tableau() {
        let t = OscTableau::new(vec![Partition::empty(), Partition(vec![1]), Partition::empty()]).unwrap();
        assert_eq!(tableau_to_matching(&t).unwrap().to_string(), "0-1");
    }

    #[test]
    fn malformed_tableau_rejected() {
        assert!(OscTableau::new(vec![Partition::empty(), Partition(vec![2])]).is_err());
        let open = OscTableau::new(vec![Partition::empty(), Partition(vec![1])]).unwrap();
        assert!(tableau_to_matching(&open).is_err());
    }
}
