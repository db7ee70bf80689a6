//! Perfect matchings of boundary points read counterclockwise from the basepoint.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised when building or parsing a matching.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    /// The pairing is not a fixed-point-free involution on `0..m`.
    #[error("not a perfect matching: {0}")]
    Invalid(String),
    /// The text could not be parsed as `a-b,c-d,...`.
    #[error("cannot parse matching {0:?}")]
    Parse(String),
}

/// A fixed-point-free involution on the points `0..m`.
///
/// Matchings order lexicographically by their partner vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Matching {
    partner: Vec<u8>,
}

impl Matching {
    /// Builds a matching from its partner vector.
    pub fn from_partner(partner: Vec<u8>) -> Result<Self, MatchingError> {
        let m = partner.len();
        if m % 2 == 1 {
            return Err(MatchingError::Invalid(format!("odd point count {m}")));
        }
        for (i, &p) in partner.iter().enumerate() {
            let p = p as usize;
            if p >= m || p == i || partner[p] as usize != i {
                return Err(MatchingError::Invalid(format!("{partner:?}")));
            }
        }
        Ok(Self { partner })
    }

    /// Builds a matching on `m` points from a list of pairs.
    pub fn from_pairs(m: usize, pairs: &[(usize, usize)]) -> Result<Self, MatchingError> {
        let mut partner = vec![u8::MAX; m];
        for &(a, b) in pairs {
            if a >= m || b >= m || partner[a] != u8::MAX || partner[b] != u8::MAX {
                return Err(MatchingError::Invalid(format!("{pairs:?}")));
            }
            partner[a] = b as u8;
            partner[b] = a as u8;
        }
        Self::from_partner(partner)
    }

    /// The empty matching.
    pub fn empty() -> Self {
        Self { partner: Vec::new() }
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.partner.len()
    }

    /// True for the matching on zero points.
    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    /// The partner of point `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i] as usize
    }

    /// The partner vector.
    pub fn partners(&self) -> &[u8] {
        &self.partner
    }

    /// Pairs `(a, b)` with `a < b`, sorted by `a`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter(|&i| i < self.partner(i))
            .map(|i| (i, self.partner(i)))
            .collect()
    }

    /// Number of inversions (pairs of pairs whose endpoints alternate).
    pub fn inversion_count(&self) -> usize {
        self.inversions().len()
    }

    /// All inversions as pairs of pairs.
    pub fn inversions(&self) -> Vec<((usize, usize), (usize, usize))> {
        let ps = self.pairs();
        let mut out = Vec::new();
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                if is_inversion(ps[i], ps[j]) {
                    out.push((ps[i], ps[j]));
                }
            }
        }
        out
    }

    /// True when no two pairs alternate.
    pub fn is_noncrossing(&self) -> bool {
        self.inversions().is_empty()
    }

    /// Relabels every point by `i ↦ (i + s) mod m`.
    pub fn rotate(&self, s: isize) -> Self {
        let m = self.len() as isize;
        if m == 0 {
            return self.clone();
        }
        let mut partner = vec![0u8; m as usize];
        for i in 0..m {
            let j = self.partner(i as usize) as isize;
            partner[(i + s).rem_euclid(m) as usize] = (j + s).rem_euclid(m) as u8;
        }
        Self { partner }
    }
}

/// True iff the endpoints of the two disjoint pairs alternate in cyclic order.
pub fn is_inversion(x: (usize, usize), y: (usize, usize)) -> bool {
    let (a, b) = (x.0.min(x.1), x.0.max(x.1));
    let inside = |p: usize| a < p && p < b;
    inside(y.0) != inside(y.1)
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for Matching {
    type Err = MatchingError;
    fn from_str(s: &str) -> Result<Self, MatchingError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let mut pairs = Vec::new();
        for part in s.split(',') {
            let (a, b) = part
                .trim()
                .split_once('-')
                .ok_or_else(|| MatchingError::Parse(s.to_string()))?;
            let a: usize = a.trim().parse().map_err(|_| MatchingError::Parse(s.to_string()))?;
            let b: usize = b.trim().parse().map_err(|_| MatchingError::Parse(s.to_string()))?;
            pairs.push((a, b));
        }
        let m = 2 * pairs.len();
        Self::from_pairs(m, &pairs)
    }
}

impl TryFrom<String> for Matching {
    type Error = MatchingError;
    fn try_from(s: String) -> Result<Self, MatchingError> {
        s.parse()
    }
}

impl From<Matching> for String {
    fn from(m: Matching) -> String {
        m.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_examples() {
        assert!(is_inversion((0, 2), (1, 3)));
        assert!(!is_inversion((0, 1), (2, 3)));
        assert!(!is_inversion((0, 3), (1, 2)));
        let m: Matching = "0-3,1-4,2-5".parse().unwrap();
        assert_eq!(m.inversion_count(), 3);
    }

    #[test]
    fn parse_and_print_round_trip() {
        let m: Matching = "2-5, 0-3,1-4".parse().unwrap();
        assert_eq!(m.to_string(), "0-3,1-4,2-5");
        assert!("0-1,1-2".parse::<Matching>().is_err());
        assert!("0-2".parse::<Matching>().is_err());
    }

    #[test]
    fn rotation_preserves_inversions() {
        let m: Matching = "0-2,1-4,3-5".parse().unwrap();
        for s in 0..6 {
            assert_eq!(m.rotate(s).inversion_count(), m.inversion_count());
        }
        assert_eq!(m.rotate(6), m);
    }
}
