//! Skein engine checks against an independent state-sum evaluator.

mod common;

use common::{oracle_eval, random_diagram};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spweb::diagram::{build_planar, Gen, PlanarDiagram, SliceWord};
use spweb::combinatorics::enumerate_matchings;
use spweb::diagram::{canonical_reduced, Matching};
use spweb::skein::{
    bigon_cupcap_value, canonicalize, circle_value, curl_value, evaluate_closed, evaluate_closed_laurent, reduce,
    remove_circle, rewrite_bigon, rewrite_curl, slide_triangle,
};
use spweb::ZLaurent;

fn word(w: usize, gens: &[Gen]) -> PlanarDiagram {
    build_planar(&SliceWord::new(w, gens.to_vec()).unwrap()).unwrap()
}

#[test]
fn circle_matches_closed_form() {
    for n in 1..=4 {
        let d = PlanarDiagram::circles(1);
        let v = evaluate_closed_laurent(&d, n).unwrap();
        assert_eq!(v.to_ratfunc(), circle_value(n));
        assert_eq!(oracle_eval(&d, n), v);
    }
}

#[test]
fn figure_eight_matches_oracle() {
    let eight = word(0, &[Gen::Cup(1), Gen::Cross(1), Gen::Cap(1)]);
    for n in 1..=3 {
        assert_eq!(evaluate_closed_laurent(&eight, n).unwrap(), oracle_eval(&eight, n), "n = {n}");
    }
}

#[test]
fn random_closed_diagrams_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..300 {
        let d = random_diagram(&mut rng, 0, 0, 6, 6);
        for n in 1..=3 {
            let e = evaluate_closed_laurent(&d, n).unwrap_or_else(|err| panic!("case {i}: {err}"));
            let o = oracle_eval(&d, n);
            assert_eq!(e, o, "case {i}, n = {n}, {d:?}");
        }
    }
}

#[test]
fn crossings_vanish_at_rank_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let d = random_diagram(&mut rng, 0, 0, 5, 6);
        let plain = d.crossing_count() == 0;
        let v = evaluate_closed_laurent(&d, 1).unwrap();
        if !plain {
            assert_eq!(v, ZLaurent::zero());
        }
    }
}

fn z(f: &spweb::RatFunc) -> ZLaurent {
    ZLaurent::from_laurent(f.as_poly().expect("polynomial coordinate")).expect("integral coordinate")
}

#[test]
fn normal_forms_agree_under_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for i in 0..60 {
        let k = if i % 2 == 0 { 4 } else { 6 };
        let d = random_diagram(&mut rng, 0, k, 5, 8);
        let closers: Vec<PlanarDiagram> = (0..4).map(|_| random_diagram(&mut rng, 0, k, 2, 8)).collect();
        for n in 1..=3 {
            let nf = canonicalize(&d, n).unwrap_or_else(|e| panic!("case {i}, n = {n}: {e}"));
            for c in &closers {
                let direct = oracle_eval(&d.pair_closure(c).unwrap(), n);
                let mut via = ZLaurent::zero();
                for (m, coeff) in &nf.coords {
                    let rep = canonical_reduced(m);
                    via = &via + &(&z(coeff) * &oracle_eval(&rep.pair_closure(c).unwrap(), n));
                }
                assert_eq!(direct, via, "case {i}, n = {n}");
            }
        }
    }
}

fn m(s: &str) -> Matching {
    s.parse().unwrap()
}

/// Sixty-four closing diagrams on six points: the fifteen canonical
/// matchings followed by random diagrams with up to two crossings.
fn closers6() -> Vec<PlanarDiagram> {
    let mut out: Vec<PlanarDiagram> = enumerate_matchings(6).iter().map(canonical_reduced).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    while out.len() < 64 {
        out.push(random_diagram(&mut rng, 0, 6, 2, 8));
    }
    out
}

/// Sum of `coeff · value(term closed with c)` evaluated by the oracle.
fn closed_combo(terms: &[(PlanarDiagram, ZLaurent)], c: &PlanarDiagram, n: u32) -> ZLaurent {
    terms.iter().fold(ZLaurent::zero(), |acc, (d, k)| &acc + &(k * &oracle_eval(&d.pair_closure(c).unwrap(), n)))
}

fn qz(k: i64) -> ZLaurent {
    ZLaurent::qint(k)
}

#[test]
fn triangle_relation_holds_under_all_closures() {
    let left = word(3, &[Gen::Cross(1), Gen::Cross(2), Gen::Cross(1)]).with_bottom(0);
    let right = word(3, &[Gen::Cross(2), Gen::Cross(1), Gen::Cross(2)]).with_bottom(0);
    let closers = closers6();
    assert_eq!(closers.len(), 64);
    for n in 1..=3u32 {
        let r = qz(2 * n as i64 - 2);
        let one = ZLaurent::one();
        let neg = -&one;
        let terms = vec![
            (left.clone(), one.clone()),
            (right.clone(), neg.clone()),
            (canonical_reduced(&m("0-2,1-3,4-5")), neg.clone()),
            (canonical_reduced(&m("0-5,1-3,2-4")), one.clone()),
            (canonical_reduced(&m("0-1,2-4,3-5")), neg.clone()),
            (canonical_reduced(&m("0-4,1-2,3-5")), one.clone()),
            (canonical_reduced(&m("0-4,1-5,2-3")), neg.clone()),
            (canonical_reduced(&m("0-2,1-5,3-4")), one.clone()),
            (canonical_reduced(&m("0-1,2-3,4-5")), r.clone()),
            (canonical_reduced(&m("0-5,1-2,3-4")), -&r),
        ];
        for c in &closers {
            assert_eq!(closed_combo(&terms, c, n), ZLaurent::zero(), "n = {n}");
            let engine = terms.iter().fold(ZLaurent::zero(), |acc, (d, k)| {
                &acc + &(k * &evaluate_closed_laurent(&d.pair_closure(c).unwrap(), n).unwrap())
            });
            assert_eq!(engine, ZLaurent::zero(), "engine, n = {n}");
        }
    }
}

#[test]
fn slide_rule_matches_triangle_relation() {
    let closers = closers6();
    for gens in [[Gen::Cross(1), Gen::Cross(2), Gen::Cross(1)], [Gen::Cross(2), Gen::Cross(1), Gen::Cross(2)]] {
        let t = word(3, &gens).with_bottom(0);
        for n in 1..=3u32 {
            let slid = slide_triangle(&t, [0, 1, 2], n).unwrap();
            let terms: Vec<(PlanarDiagram, ZLaurent)> = std::iter::once((t.clone(), ZLaurent::one()))
                .chain(slid.terms().map(|(d, c)| (d.clone(), -&z(c))))
                .collect();
            let lead = slid.terms().filter(|(d, _)| d.crossing_count() == 3).count();
            assert_eq!(lead, 1);
            for c in closers.iter().take(20) {
                assert_eq!(closed_combo(&terms, c, n), ZLaurent::zero());
            }
        }
    }
}

#[test]
fn precise_triangle_relation_at_rank_two() {
    let n = 2;
    let left = word(3, &[Gen::Cross(1), Gen::Cross(2), Gen::Cross(1)]).with_bottom(0);
    let one = ZLaurent::one();
    let neg = -&one;
    let terms = vec![
        (left, one.clone()),
        (canonical_reduced(&m("0-2,1-3,4-5")), neg.clone()),
        (canonical_reduced(&m("0-1,2-4,3-5")), neg.clone()),
        (canonical_reduced(&m("0-4,1-5,2-3")), neg),
        (canonical_reduced(&m("0-1,2-3,4-5")), qz(2 * n as i64 - 2)),
    ];
    for c in &closers6() {
        assert_eq!(closed_combo(&terms, c, n), ZLaurent::zero());
    }
}

#[test]
fn bigon_relation_coefficients() {
    let rii = word(2, &[Gen::Cross(1), Gen::Cross(1)]);
    for n in 1..=3u32 {
        let l = reduce(&rii, n).unwrap();
        assert_eq!(l.len(), if n == 1 { 1 } else { 2 });
        for (d, c) in l.terms() {
            if d.crossing_count() == 1 {
                assert_eq!(*c, spweb::qint(2));
            } else {
                assert_eq!(d.boundary_matching(), m("0-1,2-3"));
                assert_eq!(-c.clone(), bigon_cupcap_value(n));
            }
        }
    }
    let n = 3;
    let expected = -(&(&spweb::qint(2) * &spweb::qint(6)) / &spweb::qint(3));
    let l = rewrite_bigon(&rii, 0, 1, n).unwrap();
    let cupcap = l.terms().find(|(d, _)| d.crossing_count() == 0).unwrap().1.clone();
    assert_eq!(cupcap, expected);
}

#[test]
fn curl_and_circle_rules() {
    let curl = word(1, &[Gen::Cup(2), Gen::Cross(1), Gen::Cap(2)]);
    for n in 1..=3u32 {
        let l = rewrite_curl(&curl, 0, n).unwrap();
        let r = reduce(&curl, n).unwrap();
        if n == 1 {
            assert!(curl_value(n).is_zero());
            assert!(l.is_empty() && r.is_empty());
        } else {
            let (d, c) = l.terms().next().unwrap();
            assert_eq!(d.crossing_count(), 0);
            assert_eq!(*c, curl_value(n));
            assert_eq!(r.terms().next().unwrap().1, &curl_value(n));
        }
    }
    let two = PlanarDiagram::circles(2);
    let v = evaluate_closed(&two, 1).unwrap();
    let expect = spweb::RatFunc::from_poly(
        (&ZLaurent::monomial(2, 1) + &ZLaurent::monomial(-2, 1)).pow(2).to_laurent(),
    );
    assert_eq!(v, expect);
    assert!(remove_circle(&PlanarDiagram::empty(), 2).is_err());
    assert!(rewrite_curl(&word(2, &[Gen::Cross(1)]), 0, 2).is_err());
    assert_eq!(evaluate_closed(&PlanarDiagram::empty(), 2).unwrap(), spweb::RatFunc::one());
}

#[test]
fn half_twist_on_three_strands_is_canonical_up_to_slides() {
    let ht = word(3, &[Gen::Cross(1), Gen::Cross(2), Gen::Cross(1)]).with_bottom(0);
    for n in 1..=3u32 {
        let nf = canonicalize(&ht, n).unwrap();
        assert_eq!(nf.coord(&m("0-3,1-4,2-5")), spweb::RatFunc::one());
    }
}
