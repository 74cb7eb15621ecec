//! Independent numeric oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use dashu::integer::IBig;
use dashu::rational::RBig;
use statrs::function::gamma::ln_gamma;

use hornred::catalog::{HornDefinition, Role};
use hornred::series::{abs_f64, eval_series, to_complex, Complex, EvalPoint};
use hornred::Var;

pub fn q(n: i64, d: u32) -> RBig {
    RBig::from_parts(IBig::from(n), d.into())
}

/// `ln|Γ(x)|` and the sign of `Γ(x)` for non-integral `x`, via reflection
/// for negative arguments.
pub fn signed_ln_gamma(x: f64) -> (f64, f64) {
    if x > 0.0 {
        (ln_gamma(x), 1.0)
    } else {
        let s = (std::f64::consts::PI * x).sin();
        let ln = std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
        let sign = if s < 0.0 { -1.0 } else { 1.0 };
        (ln, sign)
    }
}

/// Series coefficient from the Γ-ratio form: each factor contributes
/// `Γ(p + μ·m)/Γ(p)` upstairs or downstairs, and `m1! m2!` downstairs.
pub fn log_gamma_coefficient(def: &HornDefinition, params: &HashMap<Var, f64>, m: [i64; 2]) -> f64 {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for f in &def.factors {
        let p = params[&f.param];
        let shift = (f.mu[0] * m[0] + f.mu[1] * m[1]) as f64;
        let (a, sa) = signed_ln_gamma(p + shift);
        let (b, sb) = signed_ln_gamma(p);
        let (d, s) = (a - b, sa * sb);
        match f.role {
            Role::Upper => ln += d,
            Role::Lower => ln -= d,
        }
        sign *= s;
    }
    ln -= ln_gamma(m[0] as f64 + 1.0) + ln_gamma(m[1] as f64 + 1.0);
    sign * ln.exp()
}

pub fn as_f64(params: &HashMap<Var, RBig>) -> HashMap<Var, f64> {
    params.iter().map(|(k, v)| (*k, v.to_f64().value())).collect()
}

fn value_at(def: &HornDefinition, base: &EvalPoint, s1: &RBig, s2: &RBig) -> Complex {
    let mut p = base.clone();
    p.z[0].0 = &base.z[0].0 * s1;
    p.z[1].0 = &base.z[1].0 * s2;
    eval_series(def, &p, 40).unwrap().value
}

/// Central differences in the relative scalings `z_i -> z_i (1 ± h)`:
/// relative errors of θ1, θ2 and θ1θ2 at step `h`.
pub fn difference_errors(def: &HornDefinition, point: &EvalPoint, h: &RBig) -> [f64; 3] {
    let report = eval_series(def, point, 40).unwrap();
    let (up, down) = (RBig::ONE + h, RBig::ONE - h);
    let one = RBig::ONE;
    let two_h = to_complex(&(h * RBig::from(2)), &RBig::ZERO);
    let four_h2 = to_complex(&(h * h * RBig::from(4)), &RBig::ZERO);
    let d1 = (value_at(def, point, &up, &one) - value_at(def, point, &down, &one)) / &two_h;
    let d2 = (value_at(def, point, &one, &up) - value_at(def, point, &one, &down)) / &two_h;
    let d12 = (value_at(def, point, &up, &up) - value_at(def, point, &up, &down)
        - value_at(def, point, &down, &up)
        + value_at(def, point, &down, &down))
        / &four_h2;
    let rel = |a: &Complex, b: &Complex| abs_f64(&(a - b)) / abs_f64(&report.value).max(abs_f64(b));
    [rel(&d1, &report.theta1), rel(&d2, &report.theta2), rel(&d12, &report.theta12)]
}

