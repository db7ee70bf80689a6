//! Shared test helpers: an independent state-sum evaluator for closed
//! diagrams and random diagram generators.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use spweb::diagram::{build_planar, End, Gen, PlanarDiagram, SliceWord};
use spweb::{qint, RatFunc, ZLaurent};

/// Per-crossing state in the oracle expansion.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum St {
    /// A genuine over/under crossing whose over strand uses ports `o` and `o+2`.
    Over(u8),
    /// Smoothing pairing `(k, k+1), (k+2, k+3)`.
    Smooth(u8),
}

fn to_z(f: &RatFunc) -> ZLaurent {
    ZLaurent::from_laurent(f.as_poly().expect("polynomial")).expect("integral")
}

/// Closed-diagram evaluator through a Kauffman-type state sum.
///
/// Every crossing is expanded as `q·A + q⁻¹·B − β`, where `β` is a genuine
/// crossing; the resulting link diagrams are evaluated by switching to a
/// descending diagram with `β − β' = (q − q⁻¹)(A − B)` and a descending
/// diagram contributes `δ^{components} · r^{writhe}`.
pub struct Oracle {
    delta: ZLaurent,
    r: ZLaurent,
    r_inv: ZLaurent,
    z: ZLaurent,
    nbr: Vec<[(usize, u8); 4]>,
    loops: u32,
    memo: HashMap<Vec<St>, ZLaurent>,
}

impl Oracle {
    /// Prepares the evaluation of closed diagram `d` at rank `n`.
    pub fn new(d: &PlanarDiagram, n: u32) -> Self {
        assert_eq!(d.point_count(), 0, "oracle evaluates closed diagrams");
        let n = n as i64;
        let delta = to_z(&-(&(&qint(n) * &qint(2 * n + 2)) / &qint(n + 1)));
        let nbr = (0..d.crossing_count() as u32)
            .map(|c| {
                let mut a = [(0usize, 0u8); 4];
                for p in 0..4u8 {
                    let End::Port(c2, p2) = d.partner(End::Port(c, p)) else { panic!("closed") };
                    a[p as usize] = (c2 as usize, p2);
                }
                a
            })
            .collect();
        Self {
            delta,
            r: ZLaurent::monomial(2 * n + 1, -1),
            r_inv: ZLaurent::monomial(-2 * n - 1, -1),
            z: &ZLaurent::monomial(1, 1) - &ZLaurent::monomial(-1, 1),
            nbr,
            loops: d.loops(),
            memo: HashMap::new(),
        }
    }

    /// The value of the diagram.
    pub fn value(&mut self) -> ZLaurent {
        let k = self.nbr.len();
        let mut total = ZLaurent::zero();
        let mut state = vec![St::Smooth(0); k];
        let weights = [
            (St::Smooth(1), ZLaurent::monomial(1, 1)),
            (St::Smooth(0), ZLaurent::monomial(-1, 1)),
            (St::Over(0), ZLaurent::monomial(0, -1)),
        ];
        let count = 3usize.pow(k as u32);
        for code in 0..count {
            let mut c = code;
            let mut w = ZLaurent::one();
            for s in state.iter_mut() {
                let (st, wt) = &weights[c % 3];
                c /= 3;
                *s = *st;
                w = &w * wt;
            }
            let v = self.link_value(&state);
            total = &total + &(&w * &v);
        }
        total
    }

    /// Next port along the strand after arriving at `(c, p)`: the out port.
    fn exit(&self, state: &[St], c: usize, p: u8) -> u8 {
        match state[c] {
            St::Over(_) => (p + 2) % 4,
            St::Smooth(k) => {
                let rel = (p + 4 - k) % 4;
                let mate = [1, 0, 3, 2][rel as usize];
                (mate + k) % 4
            }
        }
    }

    fn link_value(&mut self, state: &[St]) -> ZLaurent {
        if let Some(v) = self.memo.get(state) {
            return v.clone();
        }
        let v = self.link_value_uncached(state);
        self.memo.insert(state.to_vec(), v.clone());
        v
    }

    fn link_value_uncached(&mut self, state: &[St]) -> ZLaurent {
        let k = self.nbr.len();
        let mut used = vec![[false; 4]; k];
        let mut first: Vec<Option<(usize, u8)>> = vec![None; k];
        let mut out_port: Vec<[Option<u8>; 2]> = vec![[None; 2]; k];
        let mut comp_of: Vec<[usize; 2]> = vec![[usize::MAX; 2]; k];
        let mut components = self.loops;
        let mut comp = 0usize;
        let mut starts: Vec<(usize, u8)> = Vec::new();
        for c in 0..k {
            if matches!(state[c], St::Over(_)) {
                starts.push((c, 0));
                starts.push((c, 1));
            }
        }
        for c in 0..k {
            if matches!(state[c], St::Smooth(_)) {
                for p in 0..4 {
                    starts.push((c, p));
                }
            }
        }
        for (sc, sp) in starts {
            if used[sc][sp as usize] {
                continue;
            }
            components += 1;
            let (mut c, mut leave) = (sc, sp);
            loop {
                used[c][leave as usize] = true;
                let (c2, p2) = self.nbr[c][leave as usize];
                used[c2][p2 as usize] = true;
                let out = self.exit(state, c2, p2);
                if let St::Over(o) = state[c2] {
                    let slot = (p2 % 2) as usize;
                    if first[c2].is_none() {
                        if p2 % 2 != o {
                            let flipped = {
                                let mut s = state.to_vec();
                                s[c2] = St::Over(1 - o);
                                s
                            };
                            let with = |k: u8| {
                                let mut s = state.to_vec();
                                s[c2] = St::Smooth(k);
                                s
                            };
                            let a = self.link_value(&with((1 + o) % 2));
                            let b = self.link_value(&with(o));
                            let f = self.link_value(&flipped);
                            return &f + &(&self.z * &(&a - &b));
                        }
                        first[c2] = Some((c2, p2));
                    }
                    out_port[c2][slot] = Some(out);
                    comp_of[c2][slot] = comp;
                }
                if (c2, out) == (sc, sp) {
                    break;
                }
                c = c2;
                leave = out;
            }
            comp += 1;
        }
        let mut writhe: i64 = 0;
        for c in 0..k {
            if let St::Over(o) = state[c] {
                if comp_of[c][0] == comp_of[c][1] {
                    let over_out = out_port[c][o as usize].expect("visited");
                    let under_out = out_port[c][1 - o as usize].expect("visited");
                    writhe += if under_out == (over_out + 1) % 4 { 1 } else { -1 };
                }
            }
        }
        let mut v = self.delta.pow(components);
        let r = if writhe >= 0 { &self.r } else { &self.r_inv };
        v = &v * &r.pow(writhe.unsigned_abs() as u32);
        v
    }
}

/// Evaluates a closed diagram with the oracle.
pub fn oracle_eval(d: &PlanarDiagram, n: u32) -> ZLaurent {
    Oracle::new(d, n).value()
}

/// A random slice word from `bottom` strands to `top` strands with at most
/// `max_cross` crossings and width at most `max_width`.
pub fn random_word(rng: &mut impl Rng, bottom: usize, top: usize, max_cross: usize, max_width: usize) -> SliceWord {
    let mut w = bottom;
    let mut slices = Vec::new();
    let mut crosses = 0;
    let steps = rng.gen_range(0..=(2 * max_cross + 4));
    for _ in 0..steps {
        let r: u32 = rng.gen_range(0..10);
        if r < 5 && w >= 2 && crosses < max_cross {
            slices.push(Gen::Cross(rng.gen_range(1..w)));
            crosses += 1;
        } else if r < 8 && w + 2 <= max_width {
            slices.push(Gen::Cup(rng.gen_range(1..=w + 1)));
            w += 2;
        } else if w >= 2 && w > top {
            slices.push(Gen::Cap(rng.gen_range(1..w)));
            w -= 2;
        }
    }
    while w > top {
        if crosses < max_cross && w >= 2 && rng.gen_bool(0.3) {
            slices.push(Gen::Cross(rng.gen_range(1..w)));
            crosses += 1;
        }
        slices.push(Gen::Cap(rng.gen_range(1..w)));
        w -= 2;
    }
    while w < top {
        slices.push(Gen::Cup(rng.gen_range(1..=w + 1)));
        w += 2;
    }
    SliceWord::new(bottom, slices).expect("generated word is well formed")
}

/// Builds the diagram of a random word.
pub fn random_diagram(rng: &mut impl Rng, bottom: usize, top: usize, max_cross: usize, max_width: usize) -> PlanarDiagram {
    build_planar(&random_word(rng, bottom, top, max_cross, max_width)).expect("valid word")
}

/// Number of closed loops of a crossingless slice word with empty bottom and top,
/// computed by union-find on strand endpoints level by level.
pub fn tl_loops(width: usize, gens: &[Gen]) -> u32 {
    let mut parent: Vec<usize> = Vec::new();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let fresh = |p: &mut Vec<usize>| {
        p.push(p.len());
        p.len() - 1
    };
    let mut level: Vec<usize> = (0..width).map(|_| fresh(&mut parent)).collect();
    let bottom = level.clone();
    for g in gens {
        match *g {
            Gen::Cap(i) => {
                let (a, b) = (level[i - 1], level[i]);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
                level.drain(i - 1..=i);
            }
            Gen::Cup(i) => {
                let a = fresh(&mut parent);
                let b = fresh(&mut parent);
                let rb = find(&mut parent, b);
                parent[a] = rb;
                level.splice(i - 1..i - 1, [a, b]);
            }
            Gen::Cross(_) => panic!("tl_loops expects a crossingless word"),
        }
    }
    for (a, b) in bottom.iter().zip(&level) {
        let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
        parent[ra] = rb;
    }
    let n = parent.len();
    let roots: std::collections::HashSet<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    roots.len() as u32
}

/// Kauffman bracket with loop value `−(q² + q⁻²)` of a slice word whose crossings
/// are braidings with the given signs: a positive crossing resolves as
/// `q·(vertical) + q⁻¹·(cap then cup)`, a negative one with `q` and `q⁻¹` swapped.
/// The word is closed by joining bottom and top strands in order.
pub fn tl_bracket(width: usize, gens: &[Gen], signs: &[i8]) -> ZLaurent {
    let crossings: Vec<usize> = gens.iter().enumerate().filter(|(_, g)| matches!(g, Gen::Cross(_))).map(|(k, _)| k).collect();
    assert_eq!(crossings.len(), signs.len());
    let delta = &(-&ZLaurent::monomial(2, 1)) - &ZLaurent::monomial(-2, 1);
    let mut total = ZLaurent::zero();
    for mask in 0..(1u32 << crossings.len()) {
        let mut resolved = Vec::new();
        let mut exp = 0i64;
        let mut c = 0;
        for g in gens {
            if let Gen::Cross(i) = *g {
                let smooth = mask >> c & 1 == 1;
                let s = signs[c] as i64;
                if smooth {
                    resolved.push(Gen::Cap(i));
                    resolved.push(Gen::Cup(i));
                    exp -= s;
                } else {
                    exp += s;
                }
                c += 1;
            } else {
                resolved.push(*g);
            }
        }
        let loops = tl_loops(width, &resolved);
        total += &(&ZLaurent::monomial(exp, 1) * &delta.pow(loops));
    }
    total
}

/// Engine evaluation at rank `n` of the same braided closed word: every crossing
/// expands as `q^{±1}·(vertical) − X + q^{∓1}·(cap then cup)`.
pub fn engine_braided(width: usize, gens: &[Gen], signs: &[i8], n: u32) -> RatFunc {
    let k = signs.len();
    let mut total = RatFunc::zero();
    for code in 0..3usize.pow(k as u32) {
        let mut resolved = Vec::new();
        let mut coef = RatFunc::one();
        let (mut c, mut rest) = (0, code);
        for g in gens {
            if let Gen::Cross(i) = *g {
                let s = signs[c] as i64;
                match rest % 3 {
                    0 => coef = &coef * &RatFunc::q_pow(s),
                    1 => {
                        resolved.push(Gen::Cross(i));
                        coef = -coef;
                    }
                    _ => {
                        resolved.push(Gen::Cap(i));
                        resolved.push(Gen::Cup(i));
                        coef = &coef * &RatFunc::q_pow(-s);
                    }
                }
                rest /= 3;
                c += 1;
            } else {
                resolved.push(*g);
            }
        }
        let closed = closure_word(width, &resolved);
        let d = build_planar(&closed).expect("valid word");
        let v = spweb::skein::evaluate_closed(&d, n).expect("evaluates");
        total += &(&v * &coef);
    }
    total
}

/// Closes a word `width → width` into a closed slice word: nested cups on the
/// left create return strands, the word acts on the right block, and caps join
/// each top strand to its return strand.
pub fn closure_word(width: usize, gens: &[Gen]) -> SliceWord {
    let mut out: Vec<Gen> = (0..width).map(|j| Gen::Cup(j + 1)).collect();
    out.extend(gens.iter().map(|g| match *g {
        Gen::Cross(i) => Gen::Cross(i + width),
        Gen::Cap(i) => Gen::Cap(i + width),
        Gen::Cup(i) => Gen::Cup(i + width),
    }));
    out.extend((0..width).map(|_| Gen::Cap(width)));
    SliceWord::new(0, out).expect("closure")
}
