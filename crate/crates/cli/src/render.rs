//! JSON rendering of scalars and morphisms.

use serde_json::{json, Value};
use spweb::skein::Morphism;
use spweb::{LaurentPoly, RatFunc};

fn span(p: &LaurentPoly) -> i64 {
    match (p.min_exp(), p.max_exp()) {
        (Some(a), Some(b)) => b - a,
        _ => 0,
    }
}

/// Largest quantum integer tried by [`bracket_form`].
const MAX_BRACKET: usize = 40;

/// The cyclotomic polynomials `Φ_0..=Φ_max` in `q` (index 0 unused).
fn cyclotomics(max: usize) -> Vec<RatFunc> {
    let mut phi = vec![RatFunc::one(); max + 1];
    for d in 1..=max {
        let mut p = &RatFunc::q_pow(d as i64) - &RatFunc::one();
        for e in (1..d).filter(|e| d % e == 0) {
            p = p.checked_div(&phi[e]).expect("cyclotomic factors are nonzero");
        }
        phi[d] = p;
    }
    phi
}

/// Writes `f` as `±c·q^e·Π[a]/Π[b]` when it factors into quantum integers
/// `[k]` with `k ≤ 40`, and returns `None` otherwise.
///
/// With `[k] = q^{1−k}·Π_{d | 2k, d ≥ 3} Φ_d(q)`, the multiplicities of the
/// cyclotomic factors determine the brackets, peeled off from the largest
/// factor down.
pub fn bracket_form(f: &RatFunc) -> Option<String> {
    if f.is_zero() {
        return Some("0".into());
    }
    let max_d = 2 * MAX_BRACKET;
    let phi = cyclotomics(max_d);
    let mut g = f.clone();
    let mut mult = vec![0i64; max_d + 1];
    for d in 3..=max_d {
        loop {
            let h = g.checked_div(&phi[d]).ok()?;
            if span(h.num()) < span(g.num()) {
                g = h;
                mult[d] += 1;
            } else {
                break;
            }
        }
        loop {
            let h = &g * &phi[d];
            if span(h.den()) < span(g.den()) {
                g = h;
                mult[d] -= 1;
            } else {
                break;
            }
        }
    }
    if g.num().term_count() != 1 || g.den().term_count() != 1 {
        return None;
    }
    let mut brackets = vec![0i64; MAX_BRACKET + 1];
    for d in (3..=max_d).rev() {
        let a = mult[d];
        if a == 0 {
            continue;
        }
        if d % 2 == 1 {
            return None;
        }
        let k = d / 2;
        brackets[k] += a;
        for e in (3..=d).filter(|e| d % e == 0) {
            mult[e] -= a;
        }
    }
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut shift = 0i64;
    for (k, &b) in brackets.iter().enumerate() {
        shift += (k as i64 - 1) * b;
        let list = if b > 0 { &mut num } else { &mut den };
        list.extend(std::iter::repeat_n(k, b.unsigned_abs() as usize));
    }
    let e = g.num().min_exp()? - g.den().min_exp()? + shift;
    let c = g.num().coeff(g.num().min_exp()?) / g.den().coeff(g.den().min_exp()?);
    let one = num_rational::BigRational::from_integer(1.into());
    let minus_one = -one.clone();
    let mut s = String::new();
    if c == minus_one {
        s.push('-');
    } else if c != one {
        s.push_str(&format!("({c})"));
    }
    if e != 0 {
        s.push_str(&format!("q^{e}"));
    }
    s.extend(num.iter().map(|k| format!("[{k}]")));
    if num.is_empty() && e == 0 && (c == one || c == minus_one) {
        s.push('1');
    }
    if !den.is_empty() {
        s.push('/');
        s.extend(den.iter().map(|k| format!("[{k}]")));
    }
    Some(s)
}

/// A scalar as `{"value": raw, "bracket": factored-or-null}`.
pub fn scalar(f: &RatFunc) -> Value {
    json!({ "value": f.to_string(), "bracket": bracket_form(f) })
}

/// A morphism as its widths and nonzero coordinates.
pub fn morphism(m: &Morphism) -> Value {
    let terms: Vec<Value> = m
        .coords
        .iter()
        .map(|(mt, c)| json!({ "matching": mt.to_string(), "coefficient": c.to_string() }))
        .collect();
    json!({ "n": m.n, "bottom": m.bottom, "top": m.top, "terms": terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use spweb::qint;

    #[test]
    fn circle_value_factors() {
        let f = -(&(&qint(2) * &qint(6)) / &qint(3));
        assert_eq!(bracket_form(&f).unwrap(), "-[2][6]/[3]");
        assert_eq!(bracket_form(&RatFunc::one()).unwrap(), "1");
        assert_eq!(bracket_form(&RatFunc::q_pow(3)).unwrap(), "q^3");
        assert_eq!(bracket_form(&-RatFunc::q_pow(-5)).unwrap(), "-q^-5");
        assert_eq!(bracket_form(&RatFunc::zero()).unwrap(), "0");
        let g = &(&qint(4) * &qint(4)) / &(&qint(2) * &qint(8));
        assert_eq!(bracket_form(&g).unwrap(), "[4][4]/[2][8]");
        let h = &RatFunc::q_pow(2) * &(&(&qint(12) * &RatFunc::from_int(3)) / &qint(5));
        assert_eq!(bracket_form(&h).unwrap(), "(3)q^2[12]/[5]");
    }

    #[test]
    fn non_products_are_left_raw() {
        let f = &RatFunc::one() + &RatFunc::q_pow(1);
        assert!(bracket_form(&f).is_none());
    }
}
