use std::collections::{BTreeMap, HashMap};

use dashu::rational::RBig;

mod common;

use common::{log_gamma_coefficient, q};
use hornred::annihilator::{
    annihilator_operator, coefficient_ratio, derived, index_vars, rewrite_rules, ThetaPolynomial,
};
use hornred::catalog::{catalog, get_definition, HornDefinition};
use hornred::series::{relative_residual, sample_points, series_moments, EvalPoint};
use hornred::{RationalExpr, ThetaOperator, Var};

fn r(s: &str) -> RationalExpr {
    s.parse().unwrap()
}

fn ratio_value(def: &HornDefinition, axis: usize, params: &HashMap<Var, RBig>, m: [i64; 2]) -> f64 {
    let ratio = coefficient_ratio(def, axis);
    let [v1, v2] = index_vars();
    let mut bindings = params.clone();
    bindings.insert(v1, RBig::from(m[0]));
    bindings.insert(v2, RBig::from(m[1]));
    let p = RationalExpr::from_poly(&ratio.p).eval_rational(&bindings).unwrap();
    let qv = RationalExpr::from_poly(&ratio.q).eval_rational(&bindings).unwrap();
    (p / qv).to_f64().value()
}

#[test]
fn coefficient_ratios_match_the_gamma_ratio_form() {
    let values = [q(1, 3), q(1, 5), q(1, 7), q(2, 9), q(3, 11), q(5, 13), q(-4, 17)];
    for def in catalog() {
        let exact: HashMap<Var, RBig> = def.params.iter().cloned().zip(values.iter().cloned()).collect();
        let float: HashMap<Var, f64> = exact.iter().map(|(k, v)| (*k, v.to_f64().value())).collect();
        for m in [[2i64, 3], [0, 0], [4, 1], [1, 5]] {
            for axis in 1..=2 {
                let mut next = m;
                next[axis - 1] += 1;
                let expected = log_gamma_coefficient(def, &float, next) / log_gamma_coefficient(def, &float, m);
                let got = ratio_value(def, axis, &exact, m);
                assert!(
                    ((got - expected) / expected).abs() < 1e-12,
                    "{} axis {axis} at {m:?}: {got} vs {expected}",
                    def.name
                );
            }
        }
    }
}

fn assert_ratio(name: &str, axis: usize, p: &str, qq: &str) {
    let def = get_definition(name).unwrap();
    let ratio = coefficient_ratio(&def, axis);
    let got = RationalExpr::from_poly(&ratio.p).div(&RationalExpr::from_poly(&ratio.q)).unwrap();
    assert_eq!(got, r(p).div(&r(qq)).unwrap(), "{name} axis {axis}");
    let factor = r(if axis == 1 { "m1 + 1" } else { "m2 + 1" });
    assert!(
        RationalExpr::from_poly(&ratio.q).div(&factor).unwrap().is_polynomial(),
        "{name} axis {axis}: Q lacks the factorial factor"
    );
}

#[test]
fn coefficient_ratio_examples() {
    assert_ratio("G2", 1, "(a1+m1)(b2+m1-m2)", "(m1+1)(b1+m2-m1-1)");
    assert_ratio("Phi3", 2, "1", "(m2+1)(c+m1+m2)");
    assert_ratio("H3", 1, "(a+2m1+m2)(a+2m1+m2+1)", "(m1+1)(c+m1+m2)");
}

fn theta_poly(index_form: &str) -> ThetaPolynomial {
    ThetaPolynomial::from_index_polynomial(r(index_form).numer_int())
}

fn assert_annihilator(name: &str, axis: usize, expected: &str) {
    let def = get_definition(name).unwrap();
    let got = annihilator_operator(&def, axis);
    let want = theta_poly(expected);
    let negated = ThetaPolynomial {
        terms: want.terms.iter().map(|(k, v)| (*k, v.neg())).collect(),
    };
    assert!(got == want || got == negated, "{name} axis {axis}: {got}");
}

#[test]
fn annihilator_examples() {
    // θ written through the index variables: θ_j ↦ m_j.
    assert_annihilator("Phi3", 2, "m2(c+m1+m2-1) - z2");
    assert_annihilator("G2", 1, "m1(b1+m2-m1) - z1(a1+m1)(b2+m1-m2)");
}

fn rule(name: &str, head: (u32, u32)) -> ThetaOperator {
    let def = get_definition(name).unwrap();
    rewrite_rules(&def).unwrap().rule(head).unwrap().coeffs.clone()
}

#[test]
fn mixed_rules_from_the_additional_equations() {
    assert_eq!(
        rule("G2", (1, 1)),
        ThetaOperator::parse([
            "-a1 a2 z1 z2/(z1 z2 - 1)",
            "-a2 z1 z2/(z1 z2 - 1)",
            "-a1 z1 z2/(z1 z2 - 1)",
            "0"
        ])
        .unwrap()
    );
    assert_eq!(rule("Phi1", (1, 1)), ThetaOperator::parse(["0", "z2/z1", "-b", "0"]).unwrap());
    assert_eq!(rule("Gamma2", (1, 1)), ThetaOperator::parse(["z1 z2", "0", "0", "0"]).unwrap());
}

#[test]
fn theta_words() {
    let def = get_definition("Gamma2").unwrap();
    let rules = &derived(&def).unwrap().rules;
    let id = ThetaOperator::identity();
    assert_eq!(rules.reduce_theta_word(&[], &id), id);
    assert_eq!(rules.reduce_theta_word(&[1], &id), ThetaOperator::unit(1));
    assert_eq!(rules.reduce_theta_word(&[1, 2], &id), ThetaOperator::parse(["z1 z2", "0", "0", "0"]).unwrap());
    assert_eq!(rules.reduce_theta_word(&[2, 1], &id), ThetaOperator::parse(["z1 z2", "0", "0", "0"]).unwrap());
}

#[test]
fn rank_matches_presence_of_an_additional_equation() {
    let rank3: Vec<&str> = catalog().iter().filter(|d| d.rank == 3).map(|d| d.name.as_str()).collect();
    assert_eq!(
        rank3,
        ["G1", "G2", "G3", "H3", "H6", "Phi1", "Phi2", "Phi3", "Gamma1", "Gamma2", "H6c", "H8c"]
    );
    for def in catalog() {
        assert_eq!(def.rank == 3, def.extra_pde.is_some(), "{}", def.name);
    }
}

#[test]
fn rules_are_confluent_and_annihilators_reduce_to_zero() {
    for def in catalog() {
        let d = derived(def).unwrap();
        let rules = &d.rules;
        // θ1²θ2 reached from θ1² by θ2 and from θ1θ2 by θ1.
        let via_square = rules.apply_theta(2, &rules.rule((2, 0)).unwrap().coeffs);
        let via_mixed = rules.apply_theta(1, &rules.monomial((1, 1)));
        assert_eq!(via_square, via_mixed, "{}: θ2·θ1² vs θ1·θ1θ2", def.name);
        let via_square = rules.apply_theta(1, &rules.rule((0, 2)).unwrap().coeffs);
        let via_mixed = rules.apply_theta(2, &rules.monomial((1, 1)));
        assert_eq!(via_square, via_mixed, "{}: θ1·θ2² vs θ2·θ1θ2", def.name);
        for (axis, a) in d.annihilators.iter().enumerate() {
            assert!(rules.normal_form(a).is_zero(), "{} annihilator {}", def.name, axis + 1);
        }
        if def.rank == 3 {
            for head in [(2, 0), (0, 2), (1, 1)] {
                assert!(rules.rule(head).unwrap().coeffs.c[3].is_zero(), "{} {head:?}", def.name);
            }
        }
    }
}

fn relation_as_polynomial(head: (u32, u32), rhs: &ThetaOperator) -> ThetaPolynomial {
    let mut terms = BTreeMap::new();
    terms.insert(head, RationalExpr::one());
    for (k, e) in [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
        if !rhs.c[k].is_zero() {
            let prev = terms.remove(&e).unwrap_or_else(RationalExpr::zero);
            terms.insert(e, prev.sub(&rhs.c[k]));
        }
    }
    ThetaPolynomial { terms }
}

#[test]
fn annihilators_and_rules_vanish_on_the_series() {
    for def in catalog() {
        let d = derived(def).unwrap();
        for point in sample_points(def, 3, 11).unwrap() {
            let moments = series_moments(def, &point, 40, 2).unwrap();
            assert!(moments.converged(), "{}: tail {}", def.name, moments.tail_bound());
            // Some annihilators are cubic in θ; the extra factor m³ needs a
            // longer truncation for the same tail bound.
            let cubic = series_moments(def, &point, 60, 3).unwrap();
            assert!(cubic.converged(), "{}: tail {}", def.name, cubic.tail_bound());
            for (axis, a) in d.annihilators.iter().enumerate() {
                let res = relative_residual(a, &point, &cubic).unwrap();
                assert!(res < 1e-10, "{} annihilator {}: {res:e}", def.name, axis + 1);
            }
            for rel in &d.rules.rules {
                let poly = relation_as_polynomial(rel.head, &rel.coeffs);
                let m = if rel.head.0 + rel.head.1 > 2 { &cubic } else { &moments };
                let res = relative_residual(&poly, &point, m).unwrap();
                assert!(res < 1e-8, "{} rule {:?}: {res:e}", def.name, rel.head);
            }
        }
    }
}

#[test]
fn residual_is_not_small_for_a_wrong_operator() {
    let def = get_definition("Phi3").unwrap();
    let point: EvalPoint = sample_points(&def, 1, 3).unwrap().remove(0);
    let moments = series_moments(&def, &point, 40, 2).unwrap();
    let wrong = theta_poly("m2(c+m1+m2-1) - 2 z2");
    assert!(relative_residual(&wrong, &point, &moments).unwrap() > 1e-3);
}
