//! Web compilation, the zero convention, quantum dimensions and the relation ledger.

use num_bigint::BigInt;
use num_rational::BigRational;
use spweb::homspace::{self, clasp, morphism_equal, trace};
use spweb::webcompile::{
    compile, qdim_formula, qdim_ratio_check, relation_instances, run_suite, verify_relation, Relation, Web,
    WebError,
};
use spweb::{qint, rat_eval, RatFunc};

fn at_one(f: &RatFunc) -> BigRational {
    rat_eval(f, &BigRational::from_integer(BigInt::from(1))).unwrap()
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn binom(m: i64, k: i64) -> i64 {
    if k < 0 || k > m {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (m - i) / (i + 1))
}

#[test]
fn identity_compiles_to_the_clasp() {
    for n in 1..=3u32 {
        for k in 1..=n as usize {
            let c = compile(&Web::Id(k), n).unwrap();
            assert!(morphism_equal(&c.morphism, &clasp(k, n).unwrap().morphism).unwrap());
        }
    }
}

#[test]
fn trace_of_identity_is_the_quantum_dimension() {
    for n in 1..=3u32 {
        for k in 1..=n as usize {
            let c = compile(&Web::Id(k), n).unwrap();
            assert_eq!(trace(&c.morphism).unwrap(), qdim_formula(k, n), "k={k} n={n}");
        }
    }
}

#[test]
fn quantum_dimensions_specialize_to_classical_dimensions() {
    assert_eq!(qdim_formula(0, 2), RatFunc::one());
    let expected = -(&(&qint(2) * &qint(6)) / &qint(3));
    assert_eq!(qdim_formula(1, 2), expected);
    assert_eq!(at_one(&qdim_formula(1, 2)), int(-4));
    assert_eq!(at_one(&qdim_formula(2, 2)), int(5));
    for n in 1..=4i64 {
        for k in 0..=n {
            let classical = binom(2 * n, k) - binom(2 * n, k - 2);
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(at_one(&qdim_formula(k as usize, n as u32)), int(sign * classical), "k={k} n={n}");
        }
    }
}

#[test]
fn successive_dimension_ratios() {
    for n in 1..=5u32 {
        for k in 0..=n as usize {
            assert!(qdim_ratio_check(k, n), "k={k} n={n}");
        }
    }
}

#[test]
fn labels_above_rank_compile_to_zero() {
    let c = compile(&Web::Merge(2, 1), 2).unwrap();
    assert!(c.morphism.is_zero());
    assert_eq!((c.morphism.bottom, c.morphism.top), (3, 3));
    let w = Web::cmp(Web::Merge(1, 1), Web::Split(1, 1));
    assert!(compile(&w, 1).unwrap().morphism.is_zero());
    assert!(!compile(&w, 2).unwrap().morphism.is_zero());
}

#[test]
fn inadmissible_vertices_and_mismatched_boundaries_are_rejected() {
    assert_eq!(compile(&Web::Vertex3(1, 1, 1), 3).unwrap_err(), WebError::Inadmissible(1, 1, 1));
    assert!(matches!(compile(&Web::Vertex3(3, 1, 1), 3), Err(WebError::Inadmissible(3, 1, 1))));
    let bad = Web::cmp(Web::Merge(1, 1), Web::Id(1));
    assert!(matches!(compile(&bad, 3), Err(WebError::BoundaryMismatch(_))));
    assert!(matches!(compile(&Web::Id(1), 0), Err(WebError::LabelOutOfRange(0))));
}

#[test]
fn zero_labels_are_erased() {
    let w = Web::ten(Web::Id(0), Web::Merge(0, 2));
    let (from, to) = w.boundary().unwrap();
    assert_eq!((from, to), (vec![2], vec![2]));
    let c = compile(&w, 2).unwrap();
    assert!(morphism_equal(&c.morphism, &compile(&Web::Id(2), 2).unwrap().morphism).unwrap());
}

#[test]
fn compilation_is_invariant_under_reassociation() {
    let n = 3;
    let a = Web::Split(1, 1);
    let b = Web::ten(Web::Id(1), Web::Id(1));
    let c = Web::Merge(1, 1);
    let left = Web::cmp(Web::cmp(c.clone(), b.clone()), a.clone());
    let right = Web::cmp(c, Web::cmp(b, a));
    let l = compile(&left, n).unwrap().morphism;
    let r = compile(&right, n).unwrap().morphism;
    assert!(morphism_equal(&l, &r).unwrap());
    let t1 = Web::ten(Web::ten(Web::Id(1), Web::Id(1)), Web::Id(1));
    let t2 = Web::ten(Web::Id(1), Web::ten(Web::Id(1), Web::Id(1)));
    assert!(morphism_equal(&compile(&t1, n).unwrap().morphism, &compile(&t2, n).unwrap().morphism).unwrap());
}

#[test]
fn rotating_a_merge_gives_the_split() {
    for n in 2..=3u32 {
        for (k, l) in [(1, 1), (1, 2), (2, 1)] {
            if k + l > n as usize {
                continue;
            }
            let rotated = Web::Merge(l, k).rotate().unwrap();
            assert_eq!(rotated.boundary().unwrap(), (vec![k + l], vec![k, l]));
            let a = compile(&rotated, n).unwrap().morphism;
            let b = compile(&Web::Split(k, l), n).unwrap().morphism;
            assert!(morphism_equal(&a, &b).unwrap(), "k={k} l={l} n={n}");
        }
    }
}

#[test]
fn bigon_of_ones_is_two() {
    let n = 3;
    let w = Web::cmp(Web::Merge(1, 1), Web::Split(1, 1));
    let lhs = compile(&w, n).unwrap().morphism;
    let rhs = compile(&Web::Id(2), n).unwrap().morphism.scale(&qint(2));
    assert!(morphism_equal(&lhs, &rhs).unwrap());
    let wrong = compile(&Web::Id(2), n).unwrap().morphism.scale(&qint(3));
    assert!(!morphism_equal(&lhs, &wrong).unwrap());
}

#[test]
fn closed_circles_match_the_formula() {
    for n in 1..=3u32 {
        for k in 1..=n as usize {
            let c = compile(&Web::cmp(Web::CapW(k), Web::CupW(k)), n).unwrap().morphism;
            let one = homspace::identity(0, n).unwrap();
            assert!(morphism_equal(&c, &one.scale(&qdim_formula(k, n))).unwrap());
        }
    }
}

#[test]
fn triangle_right_side_is_nonzero_below_rank() {
    for n in 2..=3u32 {
        for k in 1..n as usize {
            let m = compile(&Web::Vertex3(k, k, 2), n).unwrap().morphism;
            let zero = m.scale(&RatFunc::zero());
            assert!(!morphism_equal(&m, &zero).unwrap(), "k={k} n={n}");
        }
        let top = compile(&Web::Vertex3(n as usize, n as usize, 2), n).unwrap().morphism;
        assert!(morphism_equal(&top, &top.scale(&RatFunc::zero())).unwrap());
    }
}

#[test]
fn named_examples() {
    let r = verify_relation(Relation::SpnC, 3, &[3]).unwrap();
    assert!(r.holds && !r.vacuous);
    let r = verify_relation(Relation::SpnE, 2, &[2]).unwrap();
    assert!(r.holds && !r.vacuous);
    let r = verify_relation(Relation::Triangle, 3, &[3]).unwrap();
    assert!(r.holds);
    assert_eq!("spnOther-e".parse::<Relation>().unwrap(), Relation::OtherE);
    assert!("spn-z".parse::<Relation>().is_err());
    assert!(matches!(verify_relation(Relation::SpnC, 3, &[]), Err(WebError::InvalidRelation(_))));
}

#[test]
fn instances_cover_every_family_at_rank_three() {
    let inst = relation_instances(3);
    for rel in Relation::ALL {
        assert!(inst.iter().any(|(r, _)| *r == rel), "{rel} missing");
    }
}

#[test]
fn full_relation_suite() {
    for n in 1..=3u32 {
        for rep in run_suite(n).unwrap() {
            assert!(rep.holds, "{} n={} {:?}: {}", rep.relation, rep.n, rep.params, rep.detail);
        }
    }
}
