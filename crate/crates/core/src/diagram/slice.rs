//! Slice words: diagrams read bottom to top as a sequence of crossings, caps and cups.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::planar::{DiagramError, End, PlanarDiagram};

/// One generator of a slice word, with a 1-based position.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Gen {
    /// Quadrivalent crossing on strands `i, i+1`.
    Cross(usize),
    /// Cap joining strands `i, i+1`.
    Cap(usize),
    /// Cup creating two new strands at positions `i, i+1`.
    Cup(usize),
}

/// A diagram presented as a bottom width and a bottom-to-top list of generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SliceWord {
    /// Number of strands at the bottom.
    pub bottom_width: usize,
    /// Generators read bottom to top.
    pub slices: Vec<Gen>,
}

impl SliceWord {
    /// Builds a slice word, checking its width invariants.
    pub fn new(bottom_width: usize, slices: Vec<Gen>) -> Result<Self, DiagramError> {
        let w = Self { bottom_width, slices };
        w.top_width()?;
        Ok(w)
    }

    /// The width after all generators, or an error on a width violation.
    pub fn top_width(&self) -> Result<usize, DiagramError> {
        let mut width = self.bottom_width;
        for (k, g) in self.slices.iter().enumerate() {
            match *g {
                Gen::Cross(i) | Gen::Cap(i) => {
                    if i == 0 || i + 1 > width {
                        return Err(DiagramError::MalformedSliceWord(format!(
                            "generator {} ({g:?}) needs width ≥ {} but width is {width}",
                            k + 1,
                            i + 1
                        )));
                    }
                    if matches!(g, Gen::Cap(_)) {
                        width -= 2;
                    }
                }
                Gen::Cup(i) => {
                    if i == 0 || i > width + 1 {
                        return Err(DiagramError::MalformedSliceWord(format!(
                            "generator {} ({g:?}) needs position ≤ {} ",
                            k + 1,
                            width + 1
                        )));
                    }
                    width += 2;
                }
            }
        }
        Ok(width)
    }
}

impl fmt::Display for SliceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "width {}", self.bottom_width)?;
        for g in &self.slices {
            match g {
                Gen::Cross(i) => write!(f, "; X {i}")?,
                Gen::Cap(i) => write!(f, "; A {i}")?,
                Gen::Cup(i) => write!(f, "; U {i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Slot {
    Real(End),
    Half(usize),
}

struct Builder {
    d: PlanarDiagram,
    slots: Vec<Slot>,
    mate: Vec<usize>,
}

impl Builder {
    fn replace_half(&mut self, h: usize, with: Slot) {
        let pos = self
            .slots
            .iter()
            .position(|s| *s == Slot::Half(h))
            .expect("dangling cup half is present");
        self.slots[pos] = with;
    }

    /// Connects two dangling things that are not both in `slots`.
    fn join(&mut self, a: Slot, b: Slot) {
        match (a, b) {
            (Slot::Real(x), Slot::Real(y)) => self.d.link(x, y),
            (Slot::Real(x), Slot::Half(h)) | (Slot::Half(h), Slot::Real(x)) => {
                let m = self.mate[h];
                self.replace_half(m, Slot::Real(x));
            }
            (Slot::Half(h1), Slot::Half(h2)) => {
                if self.mate[h1] == h2 {
                    self.d.loops += 1;
                } else {
                    let (m1, m2) = (self.mate[h1], self.mate[h2]);
                    self.mate[m1] = m2;
                    self.mate[m2] = m1;
                }
            }
        }
    }
}

/// Builds the planar diagram of a slice word.
pub fn build_planar(w: &SliceWord) -> Result<PlanarDiagram, DiagramError> {
    let top = w.top_width()?;
    let k1 = w.bottom_width;
    let crossings = w.slices.iter().filter(|g| matches!(g, Gen::Cross(_))).count();
    let mut b = Builder {
        d: PlanarDiagram::with_shape(crossings, k1 + top, k1),
        slots: (0..k1).map(|j| Slot::Real(End::Point(j as u32))).collect(),
        mate: Vec::new(),
    };
    let mut next_crossing = 0u32;
    for g in &w.slices {
        match *g {
            Gen::Cross(i) => {
                let c = next_crossing;
                next_crossing += 1;
                let (a, r) = (b.slots[i - 1], b.slots[i]);
                b.slots[i - 1] = Slot::Real(End::Port(c, 3));
                b.slots[i] = Slot::Real(End::Port(c, 2));
                match (a, r) {
                    (Slot::Half(h1), Slot::Half(h2)) if b.mate[h1] == h2 => {
                        b.d.link(End::Port(c, 0), End::Port(c, 1));
                    }
                    _ => {
                        b.join(a, Slot::Real(End::Port(c, 0)));
                        b.join(r, Slot::Real(End::Port(c, 1)));
                    }
                }
            }
            Gen::Cap(i) => {
                let r = b.slots.remove(i);
                let a = b.slots.remove(i - 1);
                b.join(a, r);
            }
            Gen::Cup(i) => {
                let h = b.mate.len();
                b.mate.push(h + 1);
                b.mate.push(h);
                b.slots.insert(i - 1, Slot::Half(h + 1));
                b.slots.insert(i - 1, Slot::Half(h));
            }
        }
    }
    for j in 1..=top {
        let s = b.slots[j - 1];
        b.join(s, Slot::Real(End::Point((k1 + top - j) as u32)));
    }
    Ok(b.d)
}

impl TryFrom<&SliceWord> for PlanarDiagram {
    type Error = DiagramError;
    fn try_from(w: &SliceWord) -> Result<Self, DiagramError> {
        build_planar(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(w: usize, gens: &[Gen]) -> PlanarDiagram {
        let d = build_planar(&SliceWord::new(w, gens.to_vec()).unwrap()).unwrap();
        d.validate().unwrap();
        d
    }

    #[test]
    fn cup_then_cap_is_a_circle() {
        let d = word(0, &[Gen::Cup(1), Gen::Cap(1)]);
        assert_eq!(d.loops(), 1);
        assert_eq!(d.crossing_count(), 0);
    }

    #[test]
    fn single_crossing_labels() {
        let d = word(2, &[Gen::Cross(1)]);
        assert_eq!(d.partner(End::Point(0)), End::Port(0, 0));
        assert_eq!(d.partner(End::Point(1)), End::Port(0, 1));
        assert_eq!(d.partner(End::Point(2)), End::Port(0, 2));
        assert_eq!(d.partner(End::Point(3)), End::Port(0, 3));
        assert_eq!(d.boundary_matching().to_string(), "0-2,1-3");
        assert!(d.is_reduced());
    }

    #[test]
    fn curl_and_figure_eight() {
        let curl = word(1, &[Gen::Cup(2), Gen::Cross(1), Gen::Cap(2)]);
        assert_eq!(curl.crossing_count(), 1);
        assert_eq!(curl.boundary_matching().to_string(), "0-1");
        assert!(!curl.is_reduced());
        let eight = word(0, &[Gen::Cup(1), Gen::Cross(1), Gen::Cap(1)]);
        assert_eq!(eight.point_count(), 0);
        assert_eq!(eight.crossing_count(), 1);
    }

    #[test]
    fn width_violation_is_rejected() {
        assert!(SliceWord::new(1, vec![Gen::Cross(1)]).is_err());
        assert!(SliceWord::new(2, vec![Gen::Cup(4)]).is_err());
        assert_eq!(SliceWord::new(2, vec![Gen::Cup(3), Gen::Cap(2)]).unwrap().top_width().unwrap(), 2);
    }

    #[test]
    fn display_round_trip_text() {
        let w = SliceWord::new(3, vec![Gen::Cross(1), Gen::Cross(2), Gen::Cross(1)]).unwrap();
        assert_eq!(w.to_string(), "width 3; X 1; X 2; X 1");
    }

    #[test]
    fn stacking_and_transpose_agree() {
        let a = word(3, &[Gen::Cross(1), Gen::Cross(2)]);
        let b = word(3, &[Gen::Cross(1)]);
        let ab = a.stack(&b).unwrap();
        ab.validate().unwrap();
        let direct = word(3, &[Gen::Cross(1), Gen::Cross(2), Gen::Cross(1)]);
        assert_eq!(ab.encoding(), direct.encoding());
        let t = direct.transpose();
        t.validate().unwrap();
        let rev = word(3, &[Gen::Cross(2), Gen::Cross(1), Gen::Cross(2)]);
        assert_eq!(t.boundary_matching(), rev.boundary_matching());
        assert_eq!(direct.transpose().transpose().encoding(), direct.encoding());
    }

    #[test]
    fn tensor_matches_slice_word() {
        let x = word(2, &[Gen::Cross(1)]);
        let xx = x.side_by_side(&x);
        xx.validate().unwrap();
        let direct = word(4, &[Gen::Cross(1), Gen::Cross(3)]);
        assert_eq!(xx.encoding(), direct.encoding());
    }

    #[test]
    fn floating_components_split() {
        let eight = word(0, &[Gen::Cup(1), Gen::Cross(1), Gen::Cap(1)]);
        let id = PlanarDiagram::identity(1);
        let both = id.side_by_side(&eight);
        both.validate().unwrap();
        let (main, floating) = both.split_floating();
        assert_eq!(main.crossing_count(), 0);
        assert_eq!(floating.len(), 1);
        assert_eq!(floating[0].closed_encoding(), eight.closed_encoding());
    }
}
