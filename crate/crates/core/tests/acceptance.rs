//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{engine_braided, oracle_eval, random_diagram, random_word, tl_bracket, tl_loops};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spweb::bmw_link::{e_squared_coefficient, link_invariant, verify_bmw, BraidWord};
use spweb::combinatorics::{
    count_avoiding, enumerate_matchings, max_crossing, matching_to_tableau, tableau_to_matching, walk_count, Partition,
};
use spweb::diagram::{build_planar, canonical_reduced, Gen, Matching, PlanarDiagram, SliceWord};
use spweb::homspace::{
    cap, clasp, compose, crossing, crossing_at, cup, cupcap, gram_rank, identity, morphism_equal, tensor, trace, x_at,
    CrossingSign, RankMode,
};
use spweb::skein::{circle_value, evaluate_closed_laurent, Morphism};
use spweb::webcompile::{relation_instances, run_suite, Relation};
use spweb::{qbinom, qint, RatFunc, ZLaurent};

fn q(k: i64) -> RatFunc {
    qint(k)
}

fn div(a: &RatFunc, b: &RatFunc) -> RatFunc {
    a.checked_div(b).expect("nonzero divisor")
}

fn plus(a: &Morphism, b: &Morphism, c: &RatFunc) -> Morphism {
    let mut out = a.clone();
    out.add_scaled(b, c).expect("same boundary");
    out
}

fn eq(a: &Morphism, b: &Morphism) -> bool {
    morphism_equal(a, b).expect("comparable")
}

fn word(width: usize, gens: &[Gen]) -> PlanarDiagram {
    build_planar(&SliceWord::new(width, gens.to_vec()).expect("valid word")).expect("planar")
}

fn m(s: &str) -> Matching {
    s.parse().expect("matching")
}

fn random_braid(rng: &mut impl Rng) -> BraidWord {
    let strands = rng.gen_range(2..=4);
    let len = rng.gen_range(1..=6);
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
    BraidWord::new(strands, letters).expect("valid braid")
}

/// The sixty-four closing diagrams on six points: every canonical matching
/// followed by random diagrams with at most two crossings.
fn closers6() -> Vec<PlanarDiagram> {
    let mut out: Vec<PlanarDiagram> = enumerate_matchings(6).iter().map(canonical_reduced).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    while out.len() < 64 {
        out.push(random_diagram(&mut rng, 0, 6, 2, 8));
    }
    out
}

/// Checks that `Σ coeff · term` vanishes under every closure, using both the
/// independent state-sum oracle and the engine.
fn vanishes_under_closures(terms: &[(PlanarDiagram, ZLaurent)], closers: &[PlanarDiagram], n: u32) {
    for c in closers {
        let mut by_oracle = ZLaurent::zero();
        let mut by_engine = ZLaurent::zero();
        for (d, k) in terms {
            let closed = d.pair_closure(c).expect("matching boundaries");
            by_oracle += &(k * &oracle_eval(&closed, n));
            by_engine += &(k * &evaluate_closed_laurent(&closed, n).expect("evaluates"));
        }
        assert_eq!(by_oracle, ZLaurent::zero(), "oracle, n = {n}");
        assert_eq!(by_engine, ZLaurent::zero(), "engine, n = {n}");
    }
}

fn relation_ledger() {
    for n in 1..=3 {
        let reports = run_suite(n).expect("suite runs");
        for r in &reports {
            assert!(r.holds, "{} at n = {n} with {:?}: {}", r.relation, r.params, r.detail);
        }
        assert_eq!(reports.len(), relation_instances(n).len());
        if n == 3 {
            for rel in Relation::ALL {
                assert!(
                    reports.iter().any(|r| r.relation == rel.name() && !r.vacuous),
                    "{} has no nonvacuous instance",
                    rel.name()
                );
            }
        }
    }
}

fn quantum_dimensions() {
    for n in 1..=3u32 {
        let nn = n as i64;
        let mut previous = RatFunc::one();
        for k in 1..=n as usize {
            let kk = k as i64;
            let tr = trace(&clasp(k, n).expect("clasp").morphism).expect("trace");
            let sign = RatFunc::from_int(if k % 2 == 0 { 1 } else { -1 });
            let closed_form = &(&sign * &div(&q(nn + 1 - kk), &q(nn + 1))) * &qbinom(2 * nn + 2, k as u32);
            assert_eq!(tr, closed_form, "trace k = {k}, n = {n}");
            let ratio = -&(&(&(&div(&q(2 * (nn + 2 - kk)), &q(2 * (nn + 1 - kk))) * &div(&q(nn - kk + 1), &q(kk)))
                * &q(2 * nn + 3 - kk))
                * &div(&q(2 * nn + 2 - 2 * kk), &(&q(2 * nn + 4 - 2 * kk) * &q(nn + 2 - kk))));
            let successive = -&div(&(&q(nn - kk + 1) * &q(2 * nn + 3 - kk)), &(&q(nn - kk + 2) * &q(kk)));
            assert_eq!(ratio, successive, "ratio forms k = {k}, n = {n}");
            assert_eq!(div(&tr, &previous), ratio, "ratio k = {k}, n = {n}");
            previous = tr;
        }
    }
}

fn reidemeister() {
    for n in 1..=3u32 {
        let nn = n as i64;
        let curl = compose(&cap(3, 2, n).unwrap(), &compose(&x_at(3, 1, n).unwrap(), &cup(1, 2, n).unwrap()).unwrap())
            .unwrap();
        let r1 = -&div(&(&q(nn - 1) * &q(2 * nn + 2)), &q(nn + 1));
        assert!(eq(&curl, &identity(1, n).unwrap().scale(&r1)), "R1 at n = {n}");
        let x = x_at(2, 1, n).unwrap();
        let r2 = plus(&x.scale(&q(2)), &cupcap(n).unwrap(), &-div(&(&q(nn - 1) * &q(2 * nn)), &q(nn)));
        assert!(eq(&compose(&x, &x).unwrap(), &r2), "R2 at n = {n}");
    }
    let closers = closers6();
    assert_eq!(closers.len(), 64);
    let one = ZLaurent::one();
    let neg = -&one;
    let left = word(3, &[Gen::Cross(1), Gen::Cross(2), Gen::Cross(1)]).with_bottom(0);
    let right = word(3, &[Gen::Cross(2), Gen::Cross(1), Gen::Cross(2)]).with_bottom(0);
    let n = 2;
    let precise = vec![
        (left.clone(), one.clone()),
        (canonical_reduced(&m("0-2,1-3,4-5")), neg.clone()),
        (canonical_reduced(&m("0-1,2-4,3-5")), neg.clone()),
        (canonical_reduced(&m("0-4,1-5,2-3")), neg.clone()),
        (canonical_reduced(&m("0-1,2-3,4-5")), ZLaurent::qint(2 * n as i64 - 2)),
    ];
    vanishes_under_closures(&precise, &closers, n);
    for n in 1..=3u32 {
        let r = ZLaurent::qint(2 * n as i64 - 2);
        let true_r3 = vec![
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
        vanishes_under_closures(&true_r3, &closers, n);
    }
}

fn bmw() {
    for n in 1..=3 {
        for s in 2..=4 {
            let rep = verify_bmw(n, s).expect("bmw runs");
            for c in &rep.checks {
                assert!(c.holds, "n = {n}, s = {s}, relation {}: {}", c.relation, c.instance);
            }
            let families: std::collections::BTreeSet<u8> = rep.checks.iter().map(|c| c.relation).collect();
            if s == 4 {
                assert_eq!(families.len(), 8, "all eight relations exercised at n = {n}");
            }
        }
        assert_eq!(e_squared_coefficient(n).unwrap(), &RatFunc::one() - &q(2 * n as i64 + 1));
    }
}

/// Number of matchings on `m` points with no `n + 1` pairwise crossing pairs,
/// by direct search over subsets of pairs.
fn brute_force_avoiding(m: usize, n: usize) -> usize {
    let crosses = |a: (usize, usize), b: (usize, usize)| (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1);
    enumerate_matchings(m)
        .iter()
        .filter(|mt| {
            let ps = mt.pairs();
            let k = ps.len();
            !(0u32..(1 << k)).any(|mask| {
                let idx: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
                idx.len() > n && idx.iter().all(|&i| idx.iter().all(|&j| i == j || crosses(ps[i], ps[j])))
            })
        })
        .count()
}

fn dimension_triangle() {
    for n in 1..=3u32 {
        for points in [2usize, 4, 6, 8] {
            let g = gram_rank(points, n, RankMode::Exact).expect("rank").rank;
            let c = count_avoiding(points, n as usize);
            let w = walk_count(n as usize, points, &Partition::empty());
            assert_eq!(g, c, "gram vs count at {points} points, n = {n}");
            assert_eq!(c as u128, w, "count vs walk at {points} points, n = {n}");
            assert_eq!(c, brute_force_avoiding(points, n as usize), "count vs search at {points} points, n = {n}");
        }
    }
    assert_eq!(gram_rank(6, 1, RankMode::Exact).unwrap().rank, 5);
    assert_eq!(gram_rank(6, 2, RankMode::Exact).unwrap().rank, 14);
    assert_eq!(gram_rank(8, 2, RankMode::Exact).unwrap().rank, 84);
}

fn ribbon() {
    for n in 1..=3u32 {
        let e = 2 * n as i64 + 1;
        let curl = |sign| {
            let c = crossing_at(3, 1, n, sign).unwrap();
            compose(&cap(3, 2, n).unwrap(), &compose(&c, &cup(1, 2, n).unwrap()).unwrap()).unwrap()
        };
        let id1 = identity(1, n).unwrap();
        assert!(eq(&curl(CrossingSign::Negative), &id1.scale(&-RatFunc::q_pow(-e))), "negative curl, n = {n}");
        assert!(eq(&curl(CrossingSign::Positive), &id1.scale(&-RatFunc::q_pow(e))), "positive curl, n = {n}");
        let p = crossing(n, CrossingSign::Positive).unwrap();
        let neg = crossing(n, CrossingSign::Negative).unwrap();
        assert!(eq(&compose(&p, &neg).unwrap(), &identity(2, n).unwrap()));
        assert!(eq(&compose(&neg, &p).unwrap(), &identity(2, n).unwrap()));
        if n >= 2 {
            let p2 = clasp(2, n).unwrap().morphism;
            let curls = tensor(&curl(CrossingSign::Positive), &curl(CrossingSign::Positive)).unwrap();
            let inverse_twist = compose(&curls, &compose(&p, &compose(&p, &p2).unwrap()).unwrap()).unwrap();
            let nu = RatFunc::q_pow(-4 * n as i64);
            assert!(eq(&inverse_twist.scale(&nu), &p2), "twist on the second clasp, n = {n}");
        }
    }
}

fn degeneration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7007);
    let delta = &(-&ZLaurent::monomial(2, 1)) - &ZLaurent::monomial(-2, 1);
    let mut quadrivalent = 0;
    while quadrivalent < 60 {
        let w = random_word(&mut rng, 0, 0, 6, 8);
        let crossings = w.slices.iter().filter(|g| matches!(g, Gen::Cross(_))).count();
        let value = evaluate_closed_laurent(&build_planar(&w).unwrap(), 1).unwrap();
        let expected = if crossings == 0 { delta.pow(tl_loops(0, &w.slices)) } else { ZLaurent::zero() };
        assert_eq!(value, expected, "{w}");
        quadrivalent += 1;
    }
    let mut braided = 0;
    while braided < 60 {
        let w = random_word(&mut rng, 0, 0, 6, 8);
        let k = w.slices.iter().filter(|g| matches!(g, Gen::Cross(_))).count();
        if k == 0 {
            continue;
        }
        let signs: Vec<i8> = (0..k).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        assert_eq!(engine_braided(0, &w.slices, &signs, 1), tl_bracket(0, &w.slices, &signs).to_ratfunc(), "{w}");
        braided += 1;
    }
}

fn bijection() {
    let mut total = 0;
    for points in (0..=10).step_by(2) {
        let all = enumerate_matchings(points);
        let expected: usize = (1..points).step_by(2).product();
        assert_eq!(all.len(), expected, "(points − 1)!! matchings on {points} points");
        for mt in &all {
            let t = matching_to_tableau(mt);
            assert_eq!(&tableau_to_matching(&t).unwrap(), mt);
            assert_eq!(t.max_rows(), max_crossing(mt), "{mt}");
        }
        total += all.len();
    }
    assert_eq!(total, 1070);
}

fn link_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for t in 0..120 {
        let n = 1 + (t % 3) as u32;
        let b = random_braid(&mut rng);
        let framed = link_invariant(&b, n, false).unwrap();
        let normalized = link_invariant(&b, n, true).unwrap();
        for k in 1..b.letters.len() {
            assert_eq!(link_invariant(&b.rotated(k), n, false).unwrap(), framed, "{b} rotated by {k}");
        }
        let i = rng.gen_range(1..b.strands) as i32;
        let mut cancelled = b.letters.clone();
        let at = rng.gen_range(0..=b.letters.len());
        cancelled.splice(at..at, [i, -i]);
        let cancelled = BraidWord::new(b.strands, cancelled).unwrap();
        assert_eq!(link_invariant(&cancelled, n, false).unwrap(), framed, "inverse pair in {b}");
        let mut stabilized = b.letters.clone();
        stabilized.push(if rng.gen_bool(0.5) { b.strands as i32 } else { -(b.strands as i32) });
        let stabilized = BraidWord::new(b.strands + 1, stabilized).unwrap();
        assert_eq!(link_invariant(&stabilized, n, true).unwrap(), normalized, "kink added to {b}");
        if b.strands >= 3 {
            let mut a = b.letters.clone();
            a.extend([1, 2, 1]);
            let mut c = b.letters.clone();
            c.extend([2, 1, 2]);
            assert_eq!(
                link_invariant(&BraidWord::new(b.strands, a).unwrap(), n, false).unwrap(),
                link_invariant(&BraidWord::new(b.strands, c).unwrap(), n, false).unwrap(),
                "braid relation after {b}"
            );
        }
    }
    for n in 1..=3 {
        let unknot = link_invariant(&"".parse().unwrap(), n, true).unwrap();
        assert_eq!(unknot, circle_value(n));
        for kink in ["1", "-1", "1 1 -1", "-1 -1 1"] {
            assert_eq!(link_invariant(&kink.parse().unwrap(), n, true).unwrap(), unknot, "{kink}");
        }
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 9] = [
        ("relation ledger at n = 1, 2, 3", relation_ledger),
        ("quantum dimensions and successive ratios", quantum_dimensions),
        ("Reidemeister-type relations", reidemeister),
        ("BMW relations on up to four strands", bmw),
        ("dimension triangle gram = count = walk", dimension_triangle),
        ("ribbon structure and twist", ribbon),
        ("rank one Temperley-Lieb degeneration", degeneration),
        ("matching to oscillating tableau bijection", bijection),
        ("link invariant properties", link_properties),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(check)).is_ok();
        if !ok {
            failures += 1;
        }
        println!("criterion {}: {} {name} ({:.1?})", i + 1, if ok { "PASS" } else { "FAIL" }, start.elapsed());
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
