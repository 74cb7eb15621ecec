//! Operators on the θ-basis: unit steps, composition, inversion and the
//! tabulated inverse operators.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Deserialize;

use crate::annihilator::{derived, RuleSet, BASIS};
use crate::catalog::{get_definition, HornDefinition, Role};
use crate::error::{Error, Result};
use crate::symbolic::{gcd, parse_expr, IntPoly, RationalExpr, Var};

/// `c0 + c1 θ1 + c2 θ2 + c12 θ1θ2` with coefficients on the left.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ThetaOperator {
    pub c: [RationalExpr; 4],
}

impl ThetaOperator {
    pub fn new(c0: RationalExpr, c1: RationalExpr, c2: RationalExpr, c12: RationalExpr) -> Self {
        ThetaOperator {
            c: [c0, c1, c2, c12],
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::unit(0)
    }

    /// The basis element `1`, `θ1`, `θ2` or `θ1θ2` for `i = 0..4`.
    pub fn unit(i: usize) -> Self {
        let mut op = Self::zero();
        op.c[i] = RationalExpr::one();
        op
    }

    /// Parses four coefficient expressions.
    pub fn parse(c: [&str; 4]) -> Result<Self> {
        Ok(ThetaOperator {
            c: [
                parse_expr(c[0])?,
                parse_expr(c[1])?,
                parse_expr(c[2])?,
                parse_expr(c[3])?,
            ],
        })
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn add(&self, other: &Self) -> Self {
        ThetaOperator {
            c: std::array::from_fn(|i| self.c[i].add(&other.c[i])),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ThetaOperator {
            c: std::array::from_fn(|i| self.c[i].sub(&other.c[i])),
        }
    }

    /// Left multiplication by a function.
    pub fn scale(&self, f: &RationalExpr) -> Self {
        ThetaOperator {
            c: std::array::from_fn(|i| self.c[i].mul(f)),
        }
    }

    pub fn substitute(&self, bindings: &HashMap<Var, RationalExpr>) -> Result<Self> {
        Ok(ThetaOperator {
            c: [
                self.c[0].substitute(bindings)?,
                self.c[1].substitute(bindings)?,
                self.c[2].substitute(bindings)?,
                self.c[3].substitute(bindings)?,
            ],
        })
    }

    /// `c0 + (c1)*θ1 + ...` with zero terms omitted.
    pub fn display_terms(&self) -> String {
        let names = ["", "θ1", "θ2", "θ1θ2"];
        let parts: Vec<String> = self
            .c
            .iter()
            .zip(names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| match (n.is_empty(), c.is_one()) {
                (true, _) => format!("({c})"),
                (false, true) => n.to_string(),
                (false, false) => format!("({c})*{n}"),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}, {}, {}}}", self.c[0], self.c[1], self.c[2], self.c[3])
    }
}

impl fmt::Debug for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ThetaOperator{self}")
    }
}

fn factor_of(def: &HornDefinition, param: Var, role: Role) -> Result<[i64; 2]> {
    let f = def.factor(param).ok_or_else(|| {
        Error::InvalidArgument(format!("{} has no parameter {param}", def.name))
    })?;
    if f.role != role {
        return Err(Error::InvalidArgument(format!(
            "{}: {param} is a {} parameter, not {role}",
            def.name, f.role
        )));
    }
    Ok(f.mu)
}

fn first_order(mu: [i64; 2], shift: &RationalExpr) -> Result<ThetaOperator> {
    let inv = shift.inv()?;
    Ok(ThetaOperator::new(
        RationalExpr::one(),
        RationalExpr::from_int(mu[0]).mul(&inv),
        RationalExpr::from_int(mu[1]).mul(&inv),
        RationalExpr::zero(),
    ))
}

/// `H(γ + e_p) = (1/γ_p)(μ1 θ1 + μ2 θ2 + γ_p) H(γ)` for an upper parameter.
pub fn step_up_upper(def: &HornDefinition, param: Var) -> Result<ThetaOperator> {
    let mu = factor_of(def, param, Role::Upper)?;
    first_order(mu, &RationalExpr::var(param))
}

/// `H(σ - e_p) = (1/(σ_p - 1))(ν1 θ1 + ν2 θ2 + σ_p - 1) H(σ)` for a lower
/// parameter.
pub fn step_down_lower(def: &HornDefinition, param: Var) -> Result<ThetaOperator> {
    let mu = factor_of(def, param, Role::Lower)?;
    first_order(mu, &RationalExpr::var(param).sub(&RationalExpr::one()))
}

/// The direct unit step of `param`: raising for upper, lowering for lower
/// parameters.
pub fn direct_step(def: &HornDefinition, param: Var) -> Result<ThetaOperator> {
    match def.role(param) {
        Some(Role::Upper) => step_up_upper(def, param),
        Some(Role::Lower) => step_down_lower(def, param),
        None => Err(Error::InvalidArgument(format!(
            "{} has no parameter {param}",
            def.name
        ))),
    }
}

/// Operator product `outer · inner` reduced with the rules of `def`.
pub fn compose(def: &HornDefinition, outer: &ThetaOperator, inner: &ThetaOperator) -> Result<ThetaOperator> {
    Ok(derived(def)?.rules.compose(outer, inner))
}

/// Least common multiple of the denominators in a row.
fn row_lcm(row: &[RationalExpr]) -> IntPoly {
    let mut l = IntPoly::one();
    for x in row {
        let d = x.denom_int();
        let g = gcd(&l, d);
        l = l.mul(&d.div_exact(&g).unwrap());
    }
    l
}

/// Solves `m · x = rhs` over the rational-function field by fraction-free
/// (Bareiss) elimination. Returns `None` when `m` is singular.
pub fn solve_linear(m: &[Vec<RationalExpr>], rhs: &[RationalExpr]) -> Option<Vec<RationalExpr>> {
    let n = m.len();
    // clear denominators row by row
    let mut a: Vec<Vec<IntPoly>> = Vec::with_capacity(n);
    for (row, r) in m.iter().zip(rhs) {
        let mut full = row.clone();
        full.push(r.clone());
        let l = row_lcm(&full);
        let lr = RationalExpr::from_int_poly(l);
        a.push(
            full.iter()
                .map(|x| {
                    let y = x.mul(&lr);
                    debug_assert!(y.is_polynomial());
                    let d = y.denom_int().as_constant().unwrap();
                    debug_assert!(d == dashu::integer::IBig::ONE);
                    y.numer_int().clone()
                })
                .collect(),
        );
    }
    let mut prev = IntPoly::one();
    for k in 0..n {
        // pivot: the nonzero candidate with fewest terms
        let p = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].len())?;
        a.swap(k, p);
        for i in k + 1..n {
            for j in k + 1..=n {
                let t = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = IntPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![RationalExpr::zero(); n];
    for k in (0..n).rev() {
        let mut acc = RationalExpr::from_int_poly(a[k][n].clone());
        for j in k + 1..n {
            if !a[k][j].is_zero() {
                acc = acc.sub(&RationalExpr::from_int_poly(a[k][j].clone()).mul(&x[j]));
            }
        }
        x[k] = acc
            .div(&RationalExpr::from_int_poly(a[k][k].clone()))
            .ok()?;
    }
    Some(x)
}

/// Finds `T` over the basis with `T · step = 1` under `rules`.
pub fn invert_with(rules: &RuleSet, step: &ThetaOperator) -> Result<ThetaOperator> {
    let n = rules.rank as usize;
    let columns: Vec<ThetaOperator> = (0..n)
        .map(|k| {
            let (i, j) = BASIS[k];
            let mut word = vec![1; i as usize];
            word.extend(std::iter::repeat(2).take(j as usize));
            rules.reduce_theta_word(&word, step)
        })
        .collect();
    let m: Vec<Vec<RationalExpr>> = (0..n)
        .map(|row| columns.iter().map(|col| col.c[row].clone()).collect())
        .collect();
    let mut rhs = vec![RationalExpr::zero(); n];
    rhs[0] = RationalExpr::one();
    let t = solve_linear(&m, &rhs).ok_or_else(|| Error::Degenerate {
        function: rules.function.clone(),
        detail: "the inverse-operator system is singular".into(),
    })?;
    let mut op = ThetaOperator::zero();
    for (k, v) in t.into_iter().enumerate() {
        op.c[k] = v;
    }
    Ok(op)
}

/// Inverse of a unit step of `def` with symbolic parameters.
pub fn invert(def: &HornDefinition, step: &ThetaOperator) -> Result<ThetaOperator> {
    invert_with(&derived(def)?.rules, step)
}

/// Cached symbolic inverse of the direct step of `param`:
/// `H(.., p, ..) = T H(.., p ± 1, ..)`.
pub fn inverse_step(def: &HornDefinition, param: Var) -> Result<Arc<ThetaOperator>> {
    static CACHE: OnceLock<RwLock<HashMap<(String, Var), Arc<ThetaOperator>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (def.name.clone(), param);
    if let Some(t) = cache.read().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(invert(def, &direct_step(def, param)?)?);
    Ok(cache.write().unwrap().entry(key).or_insert(t).clone())
}

/// Tabulated inverse operators.
pub const FIXTURES_TOML: &str = include_str!("../data/inverse_fixtures.toml");

#[derive(Deserialize)]
struct RawFixtures {
    inverse: Vec<RawFixture>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFixture {
    function: String,
    param: String,
    shift: i64,
    #[serde(rename = "A")]
    a: RawCoeff,
    #[serde(rename = "B")]
    b: RawCoeff,
    #[serde(rename = "C")]
    c: RawCoeff,
    #[serde(rename = "D")]
    d: RawCoeff,
    #[serde(default)]
    erratum: Option<String>,
    /// Coefficients as originally tabulated, for corrected entries.
    #[serde(default)]
    tabulated: HashMap<String, RawCoeff>,
}

#[derive(Deserialize, Clone)]
#[serde(untagged)]
enum RawCoeff {
    Expr(String),
    Ref {
        /// Defaults to the function of the entry holding the reference.
        #[serde(default)]
        function: Option<String>,
        from: String,
        param: String,
        swap: Vec<String>,
    },
}

/// One tabulated inverse operator with symmetry references expanded.
#[derive(Clone, Debug)]
pub struct InverseFixture {
    pub function: String,
    pub param: Var,
    /// `+1` when the entry expresses `F(p)` through `F(p + 1)`, `-1` for `F(p - 1)`.
    pub shift: i64,
    pub operator: ThetaOperator,
    /// Whether some coefficient came from a symmetry reference.
    pub uses_symmetry: bool,
    /// Correction applied to the tabulated entry, if any.
    pub erratum: Option<String>,
    /// The operator as originally tabulated, for corrected entries.
    pub tabulated: Option<ThetaOperator>,
}

fn parse_swap(s: &str) -> Result<(Var, Var)> {
    let (a, b) = s
        .split_once("<->")
        .ok_or_else(|| Error::Structure(format!("bad swap {s:?}")))?;
    let var = |x: &str| {
        Var::try_new(x.trim()).ok_or_else(|| Error::Structure(format!("bad swap {s:?}")))
    };
    Ok((var(a)?, var(b)?))
}

fn load_fixtures() -> Result<Vec<InverseFixture>> {
    let raw: RawFixtures = toml::from_str(FIXTURES_TOML)
        .map_err(|e| Error::Structure(format!("fixture file: {e}")))?;
    let lookup = |function: &str, param: &str, which: &str| -> Result<String> {
        let entry = raw
            .inverse
            .iter()
            .find(|e| e.function == function && e.param == param)
            .ok_or_else(|| Error::NotFound(format!("fixture {function}/{param}")))?;
        let c = match which {
            "A" => &entry.a,
            "B" => &entry.b,
            "C" => &entry.c,
            "D" => &entry.d,
            _ => return Err(Error::Structure(format!("bad coefficient name {which:?}"))),
        };
        match c {
            RawCoeff::Expr(s) => Ok(s.clone()),
            RawCoeff::Ref { .. } => Err(Error::Structure(format!(
                "fixture {function}/{param}: chained symmetry reference"
            ))),
        }
    };
    raw.inverse
        .iter()
        .map(|e| {
            let mut uses_symmetry = false;
            let mut coeff = |c: &RawCoeff| -> Result<RationalExpr> {
                match c {
                    RawCoeff::Expr(s) => parse_expr(s),
                    RawCoeff::Ref { function, from, param, swap } => {
                        uses_symmetry = true;
                        let function = function.as_deref().unwrap_or(&e.function);
                        let src = parse_expr(&lookup(function, param, from)?)?;
                        let mut bindings = HashMap::new();
                        for s in swap {
                            let (a, b) = parse_swap(s)?;
                            bindings.insert(a, RationalExpr::var(b));
                            bindings.insert(b, RationalExpr::var(a));
                        }
                        src.substitute(&bindings)
                    }
                }
            };
            let operator = ThetaOperator::new(coeff(&e.a)?, coeff(&e.b)?, coeff(&e.c)?, coeff(&e.d)?);
            let tabulated = if e.tabulated.is_empty() {
                None
            } else {
                let mut op = operator.clone();
                for (name, c) in &e.tabulated {
                    let i = ["A", "B", "C", "D"]
                        .iter()
                        .position(|k| k == name)
                        .ok_or_else(|| Error::Structure(format!("bad coefficient name {name:?}")))?;
                    op.c[i] = coeff(c)?;
                }
                Some(op)
            };
            Ok(InverseFixture {
                function: e.function.clone(),
                param: Var::try_new(&e.param)
                    .ok_or_else(|| Error::Structure(format!("bad parameter {:?}", e.param)))?,
                shift: e.shift,
                operator,
                uses_symmetry,
                erratum: e.erratum.clone(),
                tabulated,
            })
        })
        .collect()
}

/// All tabulated inverse operators, in table order.
pub fn appendix_fixtures() -> &'static [InverseFixture] {
    static FIXTURES: OnceLock<Vec<InverseFixture>> = OnceLock::new();
    FIXTURES.get_or_init(|| load_fixtures().expect("embedded fixture file is well-formed"))
}

/// The tabulated inverse for `(function, param)`; `shift` must match the
/// entry's direction (`+1` upper, `-1` lower).
pub fn appendix_fixture(function: &str, param: &str, shift: i64) -> Result<ThetaOperator> {
    let def = get_definition(function)?;
    appendix_fixtures()
        .iter()
        .find(|f| f.function == def.name && f.param.name().as_ref() == param && f.shift == shift)
        .map(|f| f.operator.clone())
        .ok_or_else(|| {
            Error::NotFound(format!("no tabulated inverse for {function}/{param} with shift {shift:+}"))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_operators() {
        let g2 = get_definition("G2").unwrap();
        assert_eq!(
            step_up_upper(&g2, Var::new("a1")).unwrap(),
            ThetaOperator::parse(["1", "1/a1", "0", "0"]).unwrap()
        );
        let h1 = get_definition("H1").unwrap();
        assert_eq!(
            step_down_lower(&h1, Var::new("d")).unwrap(),
            ThetaOperator::parse(["1", "1/(d-1)", "0", "0"]).unwrap()
        );
        assert!(step_up_upper(&h1, Var::new("d")).is_err());
        assert!(step_down_lower(&h1, Var::new("a")).is_err());
    }

    #[test]
    fn bareiss_solves_small_system() {
        let r = |s: &str| parse_expr(s).unwrap();
        let m = vec![vec![r("a"), r("1")], vec![r("1"), r("b")]];
        let x = solve_linear(&m, &[r("1"), r("0")]).unwrap();
        assert_eq!(x[0], r("b/(a*b-1)"));
        assert_eq!(x[1], r("-1/(a*b-1)"));
        let singular = vec![vec![r("a"), r("a")], vec![r("1"), r("1")]];
        assert!(solve_linear(&singular, &[r("1"), r("0")]).is_none());
    }
}
