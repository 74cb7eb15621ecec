//! Coefficient ratios, annihilating operators and the theta rewrite system.
//!
//! For a series `sum C(m) z^m` the ratio `C(m+e_j)/C(m) = P_j(m)/Q_j(m)`
//! yields the operator `Q_j(theta - e_j) - z_j P_j(theta)` that kills the
//! series. Solving the two annihilators (plus the extra PDE for rank-3
//! functions) for the non-basis second-order monomials gives a rewrite
//! system whose normal forms live on `{1, θ1, θ2, θ1θ2}` (rank 4) or
//! `{1, θ1, θ2}` (rank 3).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use dashu::integer::IBig;

use crate::catalog::{HornDefinition, Role, ThetaWord};
use crate::error::{Error, Result};
use crate::operator::ThetaOperator;
use crate::symbolic::{IntPoly, Polynomial, RationalExpr, Var};

/// Index variables standing for the lattice point `(m1, m2)`.
pub fn index_vars() -> [Var; 2] {
    [Var::new("m1"), Var::new("m2")]
}

/// `C(m + e_axis) / C(m) = p / q` with `p`, `q` coprime.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffRatio {
    pub axis: usize,
    pub p: Polynomial,
    pub q: Polynomial,
}

/// Polynomial in `θ1, θ2` with rational-function coefficients written to
/// the left: `sum c[(i, j)] θ1^i θ2^j`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ThetaPolynomial {
    pub terms: BTreeMap<(u32, u32), RationalExpr>,
}

impl ThetaPolynomial {
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn coeff(&self, e: (u32, u32)) -> RationalExpr {
        self.terms.get(&e).cloned().unwrap_or_else(RationalExpr::zero)
    }

    /// Reads `m1`, `m2` of a polynomial as `θ1`, `θ2` (other
    /// indeterminates become left coefficients).
    pub fn from_index_polynomial(p: &IntPoly) -> ThetaPolynomial {
        let [m1, m2] = index_vars();
        let mut terms: BTreeMap<(u32, u32), RationalExpr> = BTreeMap::new();
        for (mono, c) in p.terms() {
            let mut e = (0, 0);
            let mut rest = Vec::new();
            for (v, k) in mono {
                if v == m1 {
                    e.0 = k;
                } else if v == m2 {
                    e.1 = k;
                } else {
                    rest.push((v, k));
                }
            }
            let t = RationalExpr::from_int_poly(IntPoly::monomial(&rest, c.clone()));
            let slot = terms.entry(e).or_insert_with(RationalExpr::zero);
            *slot = slot.add(&t);
        }
        terms.retain(|_, c| !c.is_zero());
        ThetaPolynomial { terms }
    }
}

impl fmt::Display for ThetaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let w = theta_monomial_name(*e);
                match (w.is_empty(), c.is_one()) {
                    (true, _) => format!("({c})"),
                    (false, true) => w,
                    (false, false) => format!("({c})*{w}"),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

pub(crate) fn theta_monomial_name(e: (u32, u32)) -> String {
    let part = |k: u32, n: &str| match k {
        0 => String::new(),
        1 => n.to_string(),
        _ => format!("{n}^{k}"),
    };
    let a = part(e.0, "θ1");
    let b = part(e.1, "θ2");
    match (a.is_empty(), b.is_empty()) {
        (true, true) => String::new(),
        (false, true) => a,
        (true, false) => b,
        (false, false) => format!("{a}{b}"),
    }
}

/// The extra PDE of a rank-3 function as a θ-polynomial `Σ c_w w`.
pub fn extra_pde_polynomial(def: &HornDefinition) -> Option<ThetaPolynomial> {
    let pde = def.extra_pde.as_ref()?;
    let terms = pde.homogeneous().into_iter().map(|(w, c)| (word_exponent(w), c)).collect();
    Some(ThetaPolynomial { terms })
}

/// `head H = coeffs H`, with `coeffs` over the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaRelation {
    pub head: (u32, u32),
    pub coeffs: ThetaOperator,
}

impl fmt::Display for ThetaRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} H = {}", theta_monomial_name(self.head), self.coeffs.display_terms())
    }
}

fn linear_in_index(def: &HornDefinition, mu: [i64; 2]) -> IntPoly {
    let [m1, m2] = index_vars();
    let _ = def;
    IntPoly::var(m1)
        .scale(&IBig::from(mu[0]))
        .add(&IntPoly::var(m2).scale(&IBig::from(mu[1])))
}

/// The ratio of consecutive series coefficients along `axis` (1 or 2).
pub fn coefficient_ratio(def: &HornDefinition, axis: usize) -> CoeffRatio {
    assert!(axis == 1 || axis == 2, "axis must be 1 or 2");
    let j = axis - 1;
    let mut p = IntPoly::one();
    let mut q = IntPoly::one();
    for f in &def.factors {
        let base = IntPoly::var(f.param).add(&linear_in_index(def, f.mu));
        let mj = f.mu[j];
        // (x)_{L + mj} / (x)_L: rising product for mj > 0, reciprocal of
        // the falling product for mj < 0
        let (range, grows) = if mj >= 0 { (0..mj, true) } else { (mj..0, false) };
        for t in range {
            let factor = base.add(&IntPoly::constant(IBig::from(t)));
            let to_p = grows == (f.role == Role::Upper);
            if to_p {
                p = p.mul(&factor);
            } else {
                q = q.mul(&factor);
            }
        }
    }
    let m = index_vars()[j];
    q = q.mul(&IntPoly::var(m).add(&IntPoly::one()));
    let r = RationalExpr::new(p, q).expect("nonzero denominator");
    CoeffRatio {
        axis,
        p: r.numer(),
        q: r.denom(),
    }
}

/// `Q_axis(θ - e_axis) - z_axis P_axis(θ)`.
pub fn annihilator_operator(def: &HornDefinition, axis: usize) -> ThetaPolynomial {
    let r = coefficient_ratio(def, axis);
    let [m1, m2] = index_vars();
    let m = if axis == 1 { m1 } else { m2 };
    let z = if axis == 1 { Var::z1() } else { Var::z2() };
    let (q, qd) = r.q.to_integral();
    let (p, pd) = r.p.to_integral();
    debug_assert!(qd == IBig::ONE && pd == IBig::ONE);
    let shifted = q.substitute_poly(|v| (v == m).then(|| IntPoly::var(m).sub(&IntPoly::one())));
    let op = shifted.sub(&IntPoly::var(z).mul(&p));
    ThetaPolynomial::from_index_polynomial(&op)
}

/// Positions of basis monomials in a [`ThetaOperator`].
pub(crate) fn basis_index(e: (u32, u32), rank: u8) -> Option<usize> {
    match e {
        (0, 0) => Some(0),
        (1, 0) => Some(1),
        (0, 1) => Some(2),
        (1, 1) if rank == 4 => Some(3),
        _ => None,
    }
}

/// Rewrite rules expressing every monomial reachable from the basis by
/// one more θ in terms of the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleSet {
    pub function: String,
    pub rank: u8,
    pub rules: Vec<ThetaRelation>,
}

impl RuleSet {
    fn lookup(&self, e: (u32, u32)) -> Option<&ThetaOperator> {
        self.rules.iter().find(|r| r.head == e).map(|r| &r.coeffs)
    }

    /// The rule for `head`, if it is part of the system.
    pub fn rule(&self, head: (u32, u32)) -> Option<&ThetaRelation> {
        self.rules.iter().find(|r| r.head == head)
    }

    /// Normal form of the monomial `θ1^e.0 θ2^e.1` (acting on `H`).
    pub fn monomial(&self, e: (u32, u32)) -> ThetaOperator {
        if let Some(i) = basis_index(e, self.rank) {
            return ThetaOperator::unit(i);
        }
        if let Some(r) = self.lookup(e) {
            return r.clone();
        }
        // peel one θ off and recurse
        if e.0 > 0 {
            self.apply_theta(1, &self.monomial((e.0 - 1, e.1)))
        } else {
            self.apply_theta(2, &self.monomial((e.0, e.1 - 1)))
        }
    }

    /// `θ_axis · op`, reduced to the basis.
    pub fn apply_theta(&self, axis: usize, op: &ThetaOperator) -> ThetaOperator {
        let z = if axis == 1 { Var::z1() } else { Var::z2() };
        let step = |e: (u32, u32)| if axis == 1 { (e.0 + 1, e.1) } else { (e.0, e.1 + 1) };
        let mut out = ThetaOperator::zero();
        for (i, c) in op.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = BASIS[i];
            let dc = c.theta(z);
            if !dc.is_zero() {
                out.c[i] = out.c[i].add(&dc);
            }
            let next = step(e);
            match basis_index(next, self.rank) {
                Some(k) => out.c[k] = out.c[k].add(c),
                None => {
                    let r = self
                        .lookup(next)
                        .unwrap_or_else(|| panic!("{}: no rule for {:?}", self.function, next));
                    for k in 0..4 {
                        if !r.c[k].is_zero() {
                            out.c[k] = out.c[k].add(&c.mul(&r.c[k]));
                        }
                    }
                }
            }
        }
        out
    }

    /// Operator product `outer · inner`, reduced to the basis.
    pub fn compose(&self, outer: &ThetaOperator, inner: &ThetaOperator) -> ThetaOperator {
        let mut out = ThetaOperator::zero();
        let t2 = if outer.c[2].is_zero() && outer.c[3].is_zero() {
            None
        } else {
            Some(self.apply_theta(2, inner))
        };
        for (i, oc) in outer.c.iter().enumerate() {
            if oc.is_zero() {
                continue;
            }
            let applied = match i {
                0 => inner.clone(),
                1 => self.apply_theta(1, inner),
                2 => t2.clone().unwrap(),
                _ => self.apply_theta(1, t2.as_ref().unwrap()),
            };
            out = out.add(&applied.scale(oc));
        }
        out
    }

    /// Normal form of an arbitrary θ-polynomial.
    pub fn normal_form(&self, p: &ThetaPolynomial) -> ThetaOperator {
        let mut out = ThetaOperator::zero();
        for (e, c) in &p.terms {
            out = out.add(&self.monomial(*e).scale(c));
        }
        out
    }

    /// Applies `word` (rightmost first) to `seed`.
    pub fn reduce_theta_word(&self, word: &[usize], seed: &ThetaOperator) -> ThetaOperator {
        word.iter()
            .rev()
            .fold(seed.clone(), |acc, axis| self.apply_theta(*axis, &acc))
    }

    /// Rules with indeterminates substituted.
    pub fn substitute(&self, bindings: &HashMap<Var, RationalExpr>) -> Result<RuleSet> {
        Ok(RuleSet {
            function: self.function.clone(),
            rank: self.rank,
            rules: self
                .rules
                .iter()
                .map(|r| {
                    Ok(ThetaRelation {
                        head: r.head,
                        coeffs: r.coeffs.substitute(bindings)?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}

pub(crate) const BASIS: [(u32, u32); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

fn word_exponent(w: ThetaWord) -> (u32, u32) {
    w.exponents()
}

/// Solves `a*x + b*y = r`, `c*x + d*y = s` for operators `x`, `y`.
fn solve_pair(
    name: &str,
    m: [[RationalExpr; 2]; 2],
    r: &ThetaOperator,
    s: &ThetaOperator,
) -> Result<(ThetaOperator, ThetaOperator)> {
    let det = m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]));
    if det.is_zero() {
        return Err(Error::Structure(format!(
            "{name}: second-order parts of the annihilators are dependent"
        )));
    }
    let inv = det.inv()?;
    let x = r.scale(&m[1][1]).sub(&s.scale(&m[0][1])).scale(&inv);
    let y = s.scale(&m[0][0]).sub(&r.scale(&m[1][0])).scale(&inv);
    Ok((x, y))
}

/// Lower-order part of a θ-polynomial moved to the right-hand side:
/// returns `-(sum over basis terms)`.
fn rhs_of(name: &str, p: &ThetaPolynomial, skip: &[(u32, u32)]) -> Result<ThetaOperator> {
    let mut out = ThetaOperator::zero();
    for (e, c) in &p.terms {
        if skip.contains(e) {
            continue;
        }
        let i = basis_index(*e, 4).ok_or_else(|| {
            Error::Structure(format!("{name}: unexpected θ-monomial {:?} in annihilator", e))
        })?;
        out.c[i] = out.c[i].sub(c);
    }
    Ok(out)
}

/// Derives the rewrite system of `def`.
pub fn rewrite_rules(def: &HornDefinition) -> Result<RuleSet> {
    let name = def.name.as_str();
    let a1 = annihilator_operator(def, 1);
    let a2 = annihilator_operator(def, 2);
    for a in [&a1, &a2] {
        if a.degree() > 2 {
            return Err(Error::Structure(format!(
                "{name}: annihilator of order {} exceeds two",
                a.degree()
            )));
        }
    }
    let heads = [(2, 0), (0, 2)];
    let (t11, t22) = solve_pair(
        name,
        [
            [a1.coeff((2, 0)), a1.coeff((0, 2))],
            [a2.coeff((2, 0)), a2.coeff((0, 2))],
        ],
        &rhs_of(name, &a1, &heads)?,
        &rhs_of(name, &a2, &heads)?,
    )?;
    match &def.extra_pde {
        None => {
            // third-order closure: X = θ1²θ2, Y = θ1θ2²
            // θ2·(θ1² rule) = L1 + P0·Y,  θ1·(θ2² rule) = L2 + R0·X
            let partial = RuleSet {
                function: def.name.clone(),
                rank: 4,
                rules: vec![
                    ThetaRelation { head: (2, 0), coeffs: t11.clone() },
                    ThetaRelation { head: (0, 2), coeffs: t22.clone() },
                ],
            };
            let p0 = t11.c[3].clone();
            let r0 = t22.c[3].clone();
            let without_12 = |op: &ThetaOperator| {
                let mut o = op.clone();
                o.c[3] = RationalExpr::zero();
                o
            };
            let l1 = partial.apply_theta(2, &without_12(&t11)).add(&lift_t12_derivative(&t11, 2, 4));
            let l2 = partial.apply_theta(1, &without_12(&t22)).add(&lift_t12_derivative(&t22, 1, 4));
            let denom = RationalExpr::one().sub(&p0.mul(&r0));
            if denom.is_zero() {
                return Err(Error::Degenerate {
                    function: def.name.clone(),
                    detail: "1 - P0*R0 vanishes identically; the system has rank below four".into(),
                });
            }
            let inv = denom.inv()?;
            let x = l1.add(&l2.scale(&p0)).scale(&inv);
            let y = l2.add(&x.scale(&r0));
            Ok(RuleSet {
                function: def.name.clone(),
                rank: 4,
                rules: vec![
                    ThetaRelation { head: (2, 0), coeffs: t11 },
                    ThetaRelation { head: (0, 2), coeffs: t22 },
                    ThetaRelation { head: (2, 1), coeffs: x },
                    ThetaRelation { head: (1, 2), coeffs: y },
                ],
            })
        }
        Some(pde) => {
            let e = pde.homogeneous();
            let get = |w: ThetaWord| e.get(&w).cloned().unwrap_or_else(RationalExpr::zero);
            // substitute θ1², θ2² and solve for θ1θ2
            let mut lin = ThetaOperator::zero();
            for w in [ThetaWord::One, ThetaWord::T1, ThetaWord::T2, ThetaWord::T12] {
                let i = basis_index(word_exponent(w), 4).unwrap();
                lin.c[i] = get(w);
            }
            lin = lin
                .add(&t11.scale(&get(ThetaWord::T11)))
                .add(&t22.scale(&get(ThetaWord::T22)));
            let lead = lin.c[3].clone();
            if lead.is_zero() {
                return Err(Error::Structure(format!(
                    "{name}: extra PDE does not determine θ1θ2"
                )));
            }
            lin.c[3] = RationalExpr::zero();
            let t12 = lin.scale(&lead.inv()?.neg());
            let close = |op: &ThetaOperator| {
                let mut o = op.clone();
                let k = std::mem::take(&mut o.c[3]);
                o.add(&t12.scale(&k))
            };
            Ok(RuleSet {
                function: def.name.clone(),
                rank: 3,
                rules: vec![
                    ThetaRelation { head: (2, 0), coeffs: close(&t11) },
                    ThetaRelation { head: (1, 1), coeffs: t12.clone() },
                    ThetaRelation { head: (0, 2), coeffs: close(&t22) },
                ],
            })
        }
    }
}

/// The part of `θ_axis(c12 · θ1θ2)` that stays below third order:
/// `θ_axis(c12) · θ1θ2`.
fn lift_t12_derivative(op: &ThetaOperator, axis: usize, _rank: u8) -> ThetaOperator {
    let mut out = ThetaOperator::zero();
    out.c[3] = op.c[3].theta_axis(axis);
    out
}

/// Everything derived from a definition, computed once per function.
#[derive(Debug)]
pub struct Derived {
    pub ratios: [CoeffRatio; 2],
    pub annihilators: [ThetaPolynomial; 2],
    pub rules: RuleSet,
}

/// Cached derivation for `def`.
pub fn derived(def: &HornDefinition) -> Result<Arc<Derived>> {
    static CACHE: OnceLock<RwLock<HashMap<String, Arc<Derived>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.read().unwrap().get(&def.name) {
        return Ok(d.clone());
    }
    let d = Arc::new(Derived {
        ratios: [coefficient_ratio(def, 1), coefficient_ratio(def, 2)],
        annihilators: [annihilator_operator(def, 1), annihilator_operator(def, 2)],
        rules: rewrite_rules(def)?,
    });
    Ok(cache
        .write()
        .unwrap()
        .entry(def.name.clone())
        .or_insert(d)
        .clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_definition;
    use crate::symbolic::parse_expr;

    fn poly(s: &str) -> Polynomial {
        parse_expr(s).unwrap().numer()
    }

    #[test]
    fn h3_ratio_has_two_consecutive_factors() {
        let r = coefficient_ratio(&get_definition("H3").unwrap(), 1);
        assert_eq!(r.p, poly("(a+2*m1+m2)*(a+2*m1+m2+1)"));
        assert_eq!(r.q, poly("(m1+1)*(c+m1+m2)"));
    }

    #[test]
    fn phi3_annihilator() {
        let a = annihilator_operator(&get_definition("Phi3").unwrap(), 2);
        // θ2(c + θ1 + θ2 - 1) - z2
        assert_eq!(a.coeff((0, 2)), RationalExpr::one());
        assert_eq!(a.coeff((1, 1)), RationalExpr::one());
        assert_eq!(a.coeff((0, 1)), parse_expr("c-1").unwrap());
        assert_eq!(a.coeff((0, 0)), parse_expr("-z2").unwrap());
    }
}
