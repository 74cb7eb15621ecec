//! Differential reduction: an integer shift of the parameters expressed as a
//! θ-operator acting on the shifted function.
//!
//! A shift `m` is realized as a chain of unit steps `J = J_0, …, J_n = J + m`
//! with `H(J_i) = U_i H(J_{i+1})`. Each `U_i` is either a direct step
//! instantiated at `J_{i+1}` or a cached inverse instantiated at `J_i`. The
//! product `U_0 ⋯ U_{n-1}` acts on `H(J + m)`, so it is composed from the
//! right under the rewrite rules of the final context.

use std::collections::HashMap;
use std::fmt;

use dashu::rational::RBig;
use serde_json::json;

use crate::annihilator::derived;
use crate::catalog::{get_definition, HornDefinition, Role};
use crate::error::{Error, Result};
use crate::operator::{direct_step, inverse_step, ThetaOperator};
use crate::series::{abs_f64, series_moments, Complex, EvalPoint, DEFAULT_ORDER, TAIL_TOLERANCE};
use crate::symbolic::{RationalExpr, Var, VarClass};

/// One unit change of one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitStep {
    /// Position of the parameter in the catalog signature.
    pub index: usize,
    pub param: Var,
    /// `+1` or `-1`.
    pub delta: i64,
}

impl fmt::Display for UnitStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verb = if self.delta > 0 { "raise" } else { "lower" };
        write!(f, "{verb} {} by 1", self.param)
    }
}

/// `H(J) = (q0 + q1 θ1 + q2 θ2 + q12 θ1θ2) H(J + m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionResult {
    pub function: String,
    pub shift: Vec<i64>,
    pub params: Vec<RationalExpr>,
    pub operator: ThetaOperator,
    pub new_params: Vec<RationalExpr>,
}

impl ReductionResult {
    pub fn q0(&self) -> &RationalExpr {
        &self.operator.c[0]
    }

    pub fn q1(&self) -> &RationalExpr {
        &self.operator.c[1]
    }

    pub fn q2(&self) -> &RationalExpr {
        &self.operator.c[2]
    }

    pub fn q12(&self) -> &RationalExpr {
        &self.operator.c[3]
    }

    /// Nested-brace form `{{Q0,Q1,Q2,Q12},{newparams}}`.
    pub fn to_text(&self) -> String {
        format!("{{{{{}}},{{{}}}}}", join(&self.operator.c, ","), join(&self.new_params, ","))
    }

    /// Structured form with every expression as a string.
    pub fn to_json(&self) -> serde_json::Value {
        let s = |e: &RationalExpr| e.to_string();
        json!({
            "function": self.function,
            "shift": self.shift,
            "params": self.params.iter().map(s).collect::<Vec<_>>(),
            "coefficients": {
                "q0": s(self.q0()),
                "q1": s(self.q1()),
                "q2": s(self.q2()),
                "q12": s(self.q12()),
            },
            "new_params": self.new_params.iter().map(s).collect::<Vec<_>>(),
        })
    }

    /// Rule list readable by a computer algebra system.
    pub fn to_cas(&self) -> String {
        format!(
            "{{Q0 -> {}, Q1 -> {}, Q2 -> {}, Q12 -> {}, NewParameters -> {{{}}}}}",
            self.q0(),
            self.q1(),
            self.q2(),
            self.q12(),
            join(&self.new_params, ", ")
        )
    }
}

fn join(items: &[RationalExpr], sep: &str) -> String {
    items.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(sep)
}

fn check_shift(def: &HornDefinition, shift: &[i64]) -> Result<()> {
    if shift.len() != def.params.len() {
        return Err(Error::InvalidArgument(format!(
            "{} takes {} parameters, shift has {} entries",
            def.name,
            def.params.len(),
            shift.len()
        )));
    }
    Ok(())
}

/// Unit steps realizing `shift`: parameters in catalog order, each moved
/// `|m_i|` times in the direction of `m_i`.
pub fn plan_path(def: &HornDefinition, shift: &[i64]) -> Result<Vec<UnitStep>> {
    check_shift(def, shift)?;
    let mut steps = Vec::new();
    for (index, (&param, &m)) in def.params.iter().zip(shift).enumerate() {
        let delta = m.signum();
        steps.extend((0..m.unsigned_abs()).map(|_| UnitStep { index, param, delta }));
    }
    Ok(steps)
}

/// Exceptional conditions of `def` that hold identically at `params`: a
/// form is triggered when it evaluates to an integer constant. Symbolic
/// parameters are taken as generic. Integer shifts preserve integrality of
/// every form, so checking the starting point suffices.
pub fn exceptional_conditions(def: &HornDefinition, params: &[RationalExpr]) -> Result<Vec<String>> {
    let bindings = bind(def, params, &vec![0; def.params.len()]);
    let mut hits = Vec::new();
    for form in &def.exceptional {
        if let Some(v) = form.expr.substitute(&bindings)?.as_rational() {
            if v.denominator().is_one() {
                hits.push(form.text.clone());
            }
        }
    }
    Ok(hits)
}

/// Catalog parameter `p_k ↦ params[k] + offset[k]`.
fn bind(def: &HornDefinition, params: &[RationalExpr], offset: &[i64]) -> HashMap<Var, RationalExpr> {
    def.params
        .iter()
        .zip(params)
        .zip(offset)
        .map(|((p, v), o)| (*p, v.add(&RationalExpr::from_int(*o))))
        .collect()
}

fn degenerate(def: &HornDefinition, e: Error) -> Error {
    match e {
        Error::Evaluation(detail) => Error::Degenerate { function: def.name.clone(), detail },
        other => other,
    }
}

fn validate_params(def: &HornDefinition, params: &[RationalExpr]) -> Result<()> {
    if params.len() != def.params.len() {
        return Err(Error::InvalidArgument(format!(
            "{} takes {} parameters, got {}",
            def.name,
            def.params.len(),
            params.len()
        )));
    }
    for p in params {
        if let Some(v) = p.vars().into_iter().find(|v| v.class() != VarClass::Parameter) {
            return Err(Error::InvalidArgument(format!(
                "parameter expression {p} uses the reserved name {v}"
            )));
        }
    }
    Ok(())
}

/// Reduces the catalog function `name` by `shift` at `params`.
pub fn reduce(name: &str, shift: &[i64], params: &[RationalExpr]) -> Result<ReductionResult> {
    reduce_def(&*get_definition(name)?, shift, params)
}

/// [`reduce`] for a resolved definition.
pub fn reduce_def(def: &HornDefinition, shift: &[i64], params: &[RationalExpr]) -> Result<ReductionResult> {
    check_shift(def, shift)?;
    validate_params(def, params)?;
    let hits = exceptional_conditions(def, params)?;
    if !hits.is_empty() {
        return Err(Error::Exceptional { function: def.name.clone(), conditions: hits });
    }
    let steps = plan_path(def, shift)?;

    // Contexts J_0 … J_n as offsets from J.
    let mut offsets = vec![vec![0i64; shift.len()]];
    for s in &steps {
        let mut next = offsets.last().unwrap().clone();
        next[s.index] += s.delta;
        offsets.push(next);
    }

    let mut factors = Vec::with_capacity(steps.len());
    for (i, s) in steps.iter().enumerate() {
        let role = def.role(s.param).expect("planned parameter belongs to the function");
        // Upper parameters step up directly, lower ones step down.
        let direct = match role {
            Role::Upper => s.delta < 0,
            Role::Lower => s.delta > 0,
        };
        let op = if direct {
            direct_step(def, s.param)?.substitute(&bind(def, params, &offsets[i + 1]))
        } else {
            inverse_step(def, s.param)?.substitute(&bind(def, params, &offsets[i]))
        };
        factors.push(op.map_err(|e| degenerate(def, e))?);
    }

    let final_bindings = bind(def, params, offsets.last().unwrap());
    let operator = if factors.is_empty() {
        ThetaOperator::identity()
    } else {
        let rules = derived(def)?.rules.substitute(&final_bindings).map_err(|e| degenerate(def, e))?;
        let mut acc = factors.pop().unwrap();
        while let Some(u) = factors.pop() {
            acc = rules.compose(&u, &acc);
        }
        acc
    };
    let new_params = def.params.iter().map(|p| final_bindings[p].clone()).collect();
    Ok(ReductionResult {
        function: def.name.clone(),
        shift: shift.to_vec(),
        params: params.to_vec(),
        operator,
        new_params,
    })
}

/// Outcome of a numeric check of a reduction identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyStatus {
    Pass,
    Fail,
    /// One of the truncated series failed its tail test.
    Inconclusive,
}

impl fmt::Display for VerifyStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerifyStatus::Pass => "pass",
            VerifyStatus::Fail => "FAIL",
            VerifyStatus::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Verification {
    /// `H(J)`.
    pub lhs: Complex,
    /// The operator applied to `H(J + m)`.
    pub rhs: Complex,
    /// `|lhs − rhs|` relative to the largest of `|lhs|` and the individual
    /// terms of `rhs`.
    pub relative_error: f64,
    pub tail_bound: f64,
    pub status: VerifyStatus,
}

/// Checks `H(J) = Q H(J + m)` with truncated series. `point.params` binds
/// the symbols occurring in `result.params` (nothing when they are numeric).
///
/// The truncated sums only stand in for the functions to within
/// [`TAIL_TOLERANCE`], so a tolerance tighter than that can never be
/// certified and the check fails regardless of the observed error.
pub fn verify_reduction(
    result: &ReductionResult,
    point: &EvalPoint,
    order: usize,
    tol: f64,
) -> Result<Verification> {
    let def = get_definition(&result.function)?;
    let concrete = |exprs: &[RationalExpr]| -> Result<HashMap<Var, RBig>> {
        def.params
            .iter()
            .zip(exprs)
            .map(|(p, e)| Ok((*p, e.eval_rational(&point.params)?)))
            .collect()
    };
    let at = |params: HashMap<Var, RBig>| EvalPoint { params, z: point.z.clone() };
    let start = at(concrete(&result.params)?);
    let target = at(concrete(&result.new_params)?);
    let hits = def.exceptional_check(&start.params)?;
    if !hits.is_empty() {
        return Err(Error::Exceptional { function: def.name.clone(), conditions: hits });
    }

    let lhs_moments = series_moments(&def, &start, order, 0)?;
    let rhs_moments = series_moments(&def, &target, order, 2)?;
    let lhs = lhs_moments.get((0, 0))?.clone();
    let mut rhs = crate::series::to_complex(&RBig::ZERO, &RBig::ZERO);
    let mut scale = abs_f64(&lhs);
    for (k, e) in [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
        let q = &result.operator.c[k];
        if q.is_zero() {
            continue;
        }
        // Coefficients may carry symbols of the parameters; bind them.
        let term = point.eval(q)? * rhs_moments.get(e)?;
        scale = scale.max(abs_f64(&term));
        rhs = &rhs + &term;
    }
    let diff = abs_f64(&(&lhs - &rhs));
    let relative_error = if scale == 0.0 { diff } else { diff / scale };
    let tail_bound = lhs_moments.tail_bound().max(rhs_moments.tail_bound());
    let status = if lhs_moments.converged() && rhs_moments.converged() {
        if relative_error < tol && tol >= TAIL_TOLERANCE {
            VerifyStatus::Pass
        } else {
            VerifyStatus::Fail
        }
    } else {
        VerifyStatus::Inconclusive
    };
    Ok(Verification { lhs, rhs, relative_error, tail_bound, status })
}

/// [`verify_reduction`] at the default truncation order.
pub fn verify_default(result: &ReductionResult, point: &EvalPoint, tol: f64) -> Result<Verification> {
    verify_reduction(result, point, DEFAULT_ORDER, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms(def: &HornDefinition) -> Vec<RationalExpr> {
        def.params.iter().map(|p| RationalExpr::var(*p)).collect()
    }

    #[test]
    fn plan_orders_parameters_by_the_catalog() {
        let g1 = get_definition("G1").unwrap();
        let plan: Vec<String> = plan_path(&g1, &[-1, -1, 0]).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(plan, ["lower a by 1", "lower b1 by 1"]);
        assert!(plan_path(&g1, &[0, 0, 0]).unwrap().is_empty());
        let g3 = get_definition("G3").unwrap();
        let plan = plan_path(&g3, &[2, 0]).unwrap();
        assert_eq!(plan.len(), 2);
        assert!(plan.iter().all(|s| s.index == 0 && s.delta == 1));
        assert!(plan_path(&g1, &[1]).is_err());
    }

    #[test]
    fn zero_shift_is_the_identity() {
        let g1 = get_definition("G1").unwrap();
        let r = reduce_def(&g1, &[0, 0, 0], &syms(&g1)).unwrap();
        assert!(r.operator.is_identity());
        assert_eq!(r.to_text(), "{{1,0,0,0},{a,b1,b2}}");
    }

    #[test]
    fn numeric_exceptional_parameters_are_refused() {
        let g1 = get_definition("G1").unwrap();
        let params = [RationalExpr::from_int(2), "1/3".parse().unwrap(), "2/7".parse().unwrap()];
        match reduce_def(&g1, &[1, 0, 0], &params) {
            Err(Error::Exceptional { conditions, .. }) => assert!(!conditions.is_empty()),
            other => panic!("expected a refusal, got {other:?}"),
        }
    }
}
