use std::collections::HashMap;

use dashu::integer::IBig;
use dashu::rational::RBig;
use proptest::prelude::*;

use hornred::symbolic::{gcd, IntPoly};
use hornred::{RationalExpr, Var};

const VARS: [&str; 3] = ["a", "b", "z1"];

/// Polynomial text with 1–4 terms, small integer coefficients and degree at
/// most 2 in each variable.
fn poly_text() -> impl Strategy<Value = String> {
    prop::collection::vec((-5i64..=5, 0u32..=2, 0u32..=2, 0u32..=2), 1..=4).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, i, j, k)| format!("({c})*a^{i}*b^{j}*z1^{k}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn poly() -> impl Strategy<Value = RationalExpr> {
    poly_text().prop_map(|s| s.parse().unwrap())
}

fn nonzero_poly() -> impl Strategy<Value = RationalExpr> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn fraction() -> impl Strategy<Value = RationalExpr> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| n.div(&d).unwrap())
}

fn int_poly() -> impl Strategy<Value = IntPoly> {
    nonzero_poly().prop_map(|p| p.numer_int().clone())
}

fn point() -> HashMap<Var, RBig> {
    VARS.iter()
        .zip([(3, 7), (-2, 11), (5, 13)])
        .map(|(n, (p, q))| (Var::new(n), RBig::from_parts(IBig::from(p), (q as u32).into())))
        .collect()
}

/// Value at a fixed generic point, or `None` on a vanishing denominator.
fn value(x: &RationalExpr) -> Option<RBig> {
    x.eval_rational(&point()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_and_multiplication_are_ring_operations(x in fraction(), y in fraction(), w in fraction()) {
        prop_assert_eq!(x.add(&y).add(&w), x.add(&y.add(&w)));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&w), x.mul(&y.mul(&w)));
        prop_assert_eq!(x.mul(&y.add(&w)), x.mul(&y).add(&x.mul(&w)));
        prop_assert!(x.sub(&x).is_zero());
        prop_assert_eq!(x.add(&RationalExpr::zero()), x.clone());
        prop_assert_eq!(x.mul(&RationalExpr::one()), x.clone());
    }

    #[test]
    fn division_undoes_multiplication(x in fraction(), y in nonzero_poly()) {
        prop_assert_eq!(x.mul(&y).div(&y).unwrap(), x.clone());
        prop_assert!(y.div(&y).unwrap().is_one());
    }

    #[test]
    fn arithmetic_agrees_with_evaluation(x in fraction(), y in fraction()) {
        if let (Some(vx), Some(vy)) = (value(&x), value(&y)) {
            prop_assert_eq!(value(&x.add(&y)).unwrap(), &vx + &vy);
            prop_assert_eq!(value(&x.mul(&y)).unwrap(), &vx * &vy);
        }
    }

    #[test]
    fn printing_then_parsing_is_the_identity(x in fraction()) {
        let back: RationalExpr = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn equal_values_have_equal_representations(x in poly(), y in poly()) {
        let square = x.add(&y).pow(2).unwrap();
        let expanded = x.mul(&x).add(&x.mul(&y).mul(&RationalExpr::from_int(2))).add(&y.mul(&y));
        prop_assert_eq!(square.to_string(), expanded.to_string());
    }

    #[test]
    fn theta_is_a_derivation(x in fraction(), y in fraction()) {
        let v = Var::z1();
        prop_assert_eq!(x.mul(&y).theta(v), x.theta(v).mul(&y).add(&x.mul(&y.theta(v))));
        prop_assert_eq!(x.add(&y).theta(v), x.theta(v).add(&y.theta(v)));
        prop_assert!(RationalExpr::symbol("a").theta(v).is_zero());
    }

    #[test]
    fn gcd_divides_and_recovers_common_factors(p in int_poly(), q in int_poly(), h in int_poly()) {
        let g = gcd(&p.mul(&h), &q.mul(&h));
        prop_assert!(g.div_exact(&h).is_some(), "gcd {} misses the common factor {}", g, h);
        prop_assert!(p.mul(&h).div_exact(&g).is_some());
        prop_assert!(q.mul(&h).div_exact(&g).is_some());
        let plain = gcd(&p, &q);
        prop_assert!(p.div_exact(&plain).is_some() && q.div_exact(&plain).is_some());
    }
}
