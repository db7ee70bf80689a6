//! BMW relations, braid closures and their framed invariants.

mod common;

use common::tl_bracket;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spweb::bmw_link::{
    e_squared_coefficient, link_invariant, rho, verify_bmw, BmwError, BmwLetter, BmwWord, BraidWord,
};
use spweb::diagram::Gen;
use spweb::homspace::{identity, morphism_equal};
use spweb::skein::circle_value;
use spweb::{qint, RatFunc};

fn braid(s: &str) -> BraidWord {
    s.parse().unwrap()
}

fn random_braid(rng: &mut impl Rng, max_strands: usize, max_len: usize) -> BraidWord {
    let strands = rng.gen_range(2..=max_strands);
    let len = rng.gen_range(1..=max_len);
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands) as i32;
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    BraidWord::new(strands, letters).unwrap()
}

#[test]
fn empty_word_is_the_identity() {
    for n in 1..=3 {
        let w = BmwWord::new(3, vec![]).unwrap();
        assert!(morphism_equal(&rho(&w, n).unwrap(), &identity(3, n).unwrap()).unwrap());
    }
}

#[test]
fn e_squared_coefficient_is_one_minus_an_integer() {
    for n in 1..=4 {
        let expected = &RatFunc::one() - &qint(2 * n as i64 + 1);
        assert_eq!(e_squared_coefficient(n).unwrap(), expected);
        let e = rho(&BmwWord::new(2, vec![BmwLetter::E(1)]).unwrap(), n).unwrap();
        let ee = rho(&BmwWord::new(2, vec![BmwLetter::E(1), BmwLetter::E(1)]).unwrap(), n).unwrap();
        assert!(morphism_equal(&ee, &e.scale(&expected)).unwrap());
        assert_eq!(expected, circle_value(n));
    }
}

#[test]
fn inverse_crossings_cancel() {
    for n in 1..=3 {
        let w = BmwWord::new(2, vec![BmwLetter::G(1), BmwLetter::Ginv(1)]).unwrap();
        assert!(morphism_equal(&rho(&w, n).unwrap(), &identity(2, n).unwrap()).unwrap());
    }
}

#[test]
fn all_defining_relations_hold() {
    for n in 1..=3 {
        for s in 2..=4 {
            let rep = verify_bmw(n, s).unwrap();
            for c in &rep.checks {
                assert!(c.holds, "n={n} s={s} relation {}: {}", c.relation, c.instance);
            }
            assert!(rep.all_hold);
            let families: std::collections::BTreeSet<u8> = rep.checks.iter().map(|c| c.relation).collect();
            let expected: Vec<u8> = match s {
                2 => vec![1, 2, 7],
                3 => vec![1, 2, 3, 5, 6, 7, 8],
                _ => (1..=8).collect(),
            };
            assert_eq!(families.into_iter().collect::<Vec<_>>(), expected);
        }
    }
    assert!(matches!(verify_bmw(1, 5), Err(BmwError::StrandCount(5))));
}

#[test]
fn unknot_and_kinks() {
    for n in 1..=3 {
        let unknot = link_invariant(&braid(""), n, false).unwrap();
        assert_eq!(unknot, circle_value(n));
        let r = -RatFunc::q_pow(2 * n as i64 + 1);
        let kink = link_invariant(&braid("1"), n, false).unwrap();
        assert_eq!(kink, &r * &unknot);
        assert_eq!(link_invariant(&braid("1"), n, true).unwrap(), unknot);
        let neg = link_invariant(&braid("-1"), n, false).unwrap();
        assert_eq!(neg, &r.inv().unwrap() * &unknot);
        assert_eq!(link_invariant(&braid("-1"), n, true).unwrap(), unknot);
        assert_eq!(link_invariant(&braid("1 -1 1"), n, false).unwrap(), kink);
        assert_eq!(link_invariant(&braid("1 -1 1"), n, true).unwrap(), unknot);
    }
}

#[test]
fn closure_is_invariant_under_cyclic_rotation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 0..100 {
        let b = random_braid(&mut rng, 4, 6);
        let n = 1 + (t % 3) as u32;
        let v = link_invariant(&b, n, false).unwrap();
        for k in 1..b.letters.len() {
            assert_eq!(link_invariant(&b.rotated(k), n, false).unwrap(), v, "{b} rotated by {k} at n={n}");
        }
    }
}

#[test]
fn closure_respects_braid_relations_and_stabilization() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for t in 0..40 {
        let n = 1 + (t % 3) as u32;
        let b = random_braid(&mut rng, 3, 3);
        let s = b.strands.max(3);
        let mut with_121 = b.letters.clone();
        with_121.extend([1, 2, 1]);
        let mut with_212 = b.letters.clone();
        with_212.extend([2, 1, 2]);
        let x = link_invariant(&BraidWord::new(s, with_121).unwrap(), n, true).unwrap();
        let y = link_invariant(&BraidWord::new(s, with_212).unwrap(), n, true).unwrap();
        assert_eq!(x, y);
        let mut stab = b.letters.clone();
        stab.push(if rng.gen_bool(0.5) { b.strands as i32 } else { -(b.strands as i32) });
        let stabilized = BraidWord::new(b.strands + 1, stab).unwrap();
        assert_eq!(link_invariant(&stabilized, n, true).unwrap(), link_invariant(&b, n, true).unwrap());
    }
}

#[test]
fn rank_one_matches_the_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..60 {
        let b = random_braid(&mut rng, 4, 6);
        let gens: Vec<Gen> = b.letters.iter().map(|l| Gen::Cross(l.unsigned_abs() as usize)).collect();
        let signs: Vec<i8> = b.letters.iter().map(|l| l.signum() as i8).collect();
        let oracle = tl_bracket(b.strands, &gens, &signs).to_ratfunc();
        assert_eq!(link_invariant(&b, 1, false).unwrap(), oracle, "{b}");
    }
}

#[test]
fn kauffman_skein_relation() {
    for n in 1..=3 {
        for s in 2..=3 {
            for i in 1..s {
                let g = rho(&BmwWord::new(s, vec![BmwLetter::G(i)]).unwrap(), n).unwrap();
                let gi = rho(&BmwWord::new(s, vec![BmwLetter::Ginv(i)]).unwrap(), n).unwrap();
                let e = rho(&BmwWord::new(s, vec![BmwLetter::E(i)]).unwrap(), n).unwrap();
                let z = &RatFunc::q_pow(1) - &RatFunc::q_pow(-1);
                let mut lhs = g.clone();
                lhs.add_scaled(&gi, &-RatFunc::one()).unwrap();
                let mut rhs = identity(s, n).unwrap().scale(&z);
                rhs.add_scaled(&e, &-z).unwrap();
                assert!(morphism_equal(&lhs, &rhs).unwrap());
            }
        }
    }
}

#[test]
fn words_are_validated() {
    assert!(matches!(BmwWord::new(2, vec![BmwLetter::G(2)]), Err(BmwError::IndexOutOfRange { .. })));
    assert!(matches!(BraidWord::new(3, vec![3]), Err(BmwError::IndexOutOfRange { .. })));
    assert!(matches!("1 x".parse::<BraidWord>(), Err(BmwError::Parse(_))));
    assert!(matches!("0".parse::<BraidWord>(), Err(BmwError::Parse(_))));
    let b = braid("1 -2 3");
    assert_eq!(b.strands, 4);
    assert_eq!(b.writhe(), 1);
    assert_eq!(b.to_string().parse::<BraidWord>().unwrap(), b);
}
