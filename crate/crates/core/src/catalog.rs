//! The 30 two-variable Horn-type functions as static data.
//!
//! Definitions live in `data/catalog.toml`, embedded at build time and
//! parsed once on first use.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use dashu::rational::RBig;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::symbolic::{parse_expr, Polynomial, RationalExpr, Var};

/// Catalog source, as embedded in the library.
pub const CATALOG_TOML: &str = include_str!("../data/catalog.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Upper,
    Lower,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Upper => "upper",
            Role::Lower => "lower",
        })
    }
}

/// `(param)_{mu1*m1 + mu2*m2}` in the numerator (upper) or denominator
/// (lower) of the series coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PochhammerFactor {
    pub param: Var,
    pub role: Role,
    pub mu: [i64; 2],
}

impl fmt::Display for PochhammerFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let index = RationalExpr::symbol("m1")
            .mul(&RationalExpr::from_int(self.mu[0]))
            .add(&RationalExpr::symbol("m2").mul(&RationalExpr::from_int(self.mu[1])));
        write!(f, "({})_{{{}}} [{}]", self.param, index, self.role)
    }
}

/// Second-order theta monomials appearing in relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThetaWord {
    One,
    T1,
    T2,
    T12,
    T11,
    T22,
}

impl ThetaWord {
    pub const ALL: [ThetaWord; 6] = [
        ThetaWord::One,
        ThetaWord::T1,
        ThetaWord::T2,
        ThetaWord::T12,
        ThetaWord::T11,
        ThetaWord::T22,
    ];

    /// Exponents of `(theta1, theta2)`.
    pub fn exponents(self) -> (u32, u32) {
        match self {
            ThetaWord::One => (0, 0),
            ThetaWord::T1 => (1, 0),
            ThetaWord::T2 => (0, 1),
            ThetaWord::T12 => (1, 1),
            ThetaWord::T11 => (2, 0),
            ThetaWord::T22 => (0, 2),
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            ThetaWord::One => "t0",
            ThetaWord::T1 => "t1",
            ThetaWord::T2 => "t2",
            ThetaWord::T12 => "t12",
            ThetaWord::T11 => "t11",
            ThetaWord::T22 => "t22",
        }
    }

    fn from_key(key: &str) -> Option<ThetaWord> {
        ThetaWord::ALL.into_iter().find(|w| w.key() == key)
    }
}

impl fmt::Display for ThetaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThetaWord::One => "1",
            ThetaWord::T1 => "θ1",
            ThetaWord::T2 => "θ2",
            ThetaWord::T12 => "θ1θ2",
            ThetaWord::T11 => "θ1^2",
            ThetaWord::T22 => "θ2^2",
        })
    }
}

/// The additional second-order PDE of a rank-3 function:
/// `sum lhs[w] w H = sum rhs[w] w H`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtraPde {
    pub lhs: BTreeMap<ThetaWord, RationalExpr>,
    pub rhs: BTreeMap<ThetaWord, RationalExpr>,
}

impl ExtraPde {
    /// Coefficients of the homogeneous form `sum c[w] w H = 0`.
    pub fn homogeneous(&self) -> BTreeMap<ThetaWord, RationalExpr> {
        let mut out = self.lhs.clone();
        for (w, c) in &self.rhs {
            let e = out.entry(*w).or_insert_with(RationalExpr::zero);
            *e = e.sub(c);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

impl fmt::Display for ExtraPde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(m: &BTreeMap<ThetaWord, RationalExpr>) -> String {
            if m.is_empty() {
                return "0".into();
            }
            m.iter()
                .map(|(w, c)| match w {
                    ThetaWord::One => format!("({c})"),
                    _ if c.is_one() => format!("{w}"),
                    _ => format!("({c})*{w}"),
                })
                .collect::<Vec<_>>()
                .join(" + ")
        }
        write!(f, "[{}] H = [{}] H", side(&self.lhs), side(&self.rhs))
    }
}

/// A linear form in the parameters together with its source text.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    pub text: String,
    pub expr: RationalExpr,
}

impl LinearForm {
    fn parse(text: &str) -> Result<LinearForm> {
        let expr = parse_expr(text)?;
        if !expr.is_polynomial() {
            return Err(Error::Structure(format!("{text:?} is not a linear form")));
        }
        Ok(LinearForm {
            text: expr.to_string(),
            expr,
        })
    }

    pub fn value(&self, values: &HashMap<Var, RBig>) -> Result<RBig> {
        self.expr.eval_rational(values)
    }
}

/// One cataloged function.
#[derive(Clone, Debug)]
pub struct HornDefinition {
    pub name: String,
    pub params: Vec<Var>,
    pub factors: Vec<PochhammerFactor>,
    pub rank: u8,
    pub extra_pde: Option<ExtraPde>,
    pub exceptional: Vec<LinearForm>,
    /// A second reading of an ambiguous exceptional-set row.
    pub exceptional_alternative: Option<Vec<LinearForm>>,
    /// Non-axis components of the singular locus.
    pub singular_locus: Vec<Polynomial>,
    pub note: Option<String>,
}

impl HornDefinition {
    pub fn param_index(&self, p: Var) -> Option<usize> {
        self.params.iter().position(|q| *q == p)
    }

    pub fn factor(&self, p: Var) -> Option<&PochhammerFactor> {
        self.factors.iter().find(|f| f.param == p)
    }

    pub fn role(&self, p: Var) -> Option<Role> {
        self.factor(p).map(|f| f.role)
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.iter().map(|v| v.to_string()).collect()
    }

    /// Linear forms that take integer values at `values`.
    pub fn exceptional_check(&self, values: &HashMap<Var, RBig>) -> Result<Vec<String>> {
        if let Some(p) = self.params.iter().find(|p| !values.contains_key(p)) {
            return Err(Error::InvalidArgument(format!(
                "{}: parameter {p} is unbound",
                self.name
            )));
        }
        let mut hits = Vec::new();
        for form in &self.exceptional {
            let v = form.value(values)?;
            if v.denominator().is_one() {
                hits.push(form.text.clone());
            }
        }
        Ok(hits)
    }
}

#[derive(Deserialize)]
struct RawCatalog {
    function: Vec<RawFunction>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunction {
    name: String,
    params: Vec<String>,
    factors: Vec<(String, String, i64, i64)>,
    exceptional: Vec<String>,
    #[serde(default)]
    exceptional_alternative: Option<Vec<String>>,
    #[serde(default)]
    singular_locus: Vec<String>,
    #[serde(default)]
    note: Option<String>,
    #[serde(default)]
    extra_pde: Option<RawPde>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPde {
    #[serde(default)]
    lhs: BTreeMap<String, String>,
    #[serde(default)]
    rhs: BTreeMap<String, String>,
}

fn build_side(name: &str, raw: &BTreeMap<String, String>) -> Result<BTreeMap<ThetaWord, RationalExpr>> {
    raw.iter()
        .map(|(k, v)| {
            let w = ThetaWord::from_key(k)
                .ok_or_else(|| Error::Structure(format!("{name}: unknown theta word {k:?}")))?;
            Ok((w, parse_expr(v)?))
        })
        .collect()
}

fn build(raw: RawFunction) -> Result<HornDefinition> {
    let name = raw.name;
    let params: Vec<Var> = raw
        .params
        .iter()
        .map(|p| {
            Var::try_new(p).ok_or_else(|| Error::Structure(format!("{name}: bad parameter {p:?}")))
        })
        .collect::<Result<_>>()?;
    let factors: Vec<PochhammerFactor> = raw
        .factors
        .into_iter()
        .map(|(p, role, m1, m2)| {
            let param = Var::new(&p);
            if !params.contains(&param) {
                return Err(Error::Structure(format!("{name}: factor parameter {p} not declared")));
            }
            let role = match role.as_str() {
                "upper" => Role::Upper,
                "lower" => Role::Lower,
                other => return Err(Error::Structure(format!("{name}: bad role {other:?}"))),
            };
            if m1 == 0 && m2 == 0 {
                return Err(Error::Structure(format!("{name}: factor {p} has zero index")));
            }
            Ok(PochhammerFactor {
                param,
                role,
                mu: [m1, m2],
            })
        })
        .collect::<Result<_>>()?;
    for p in &params {
        if factors.iter().filter(|f| f.param == *p).count() != 1 {
            return Err(Error::Structure(format!(
                "{name}: parameter {p} must appear in exactly one factor"
            )));
        }
    }
    let extra_pde = match raw.extra_pde {
        Some(pde) => Some(ExtraPde {
            lhs: build_side(&name, &pde.lhs)?,
            rhs: build_side(&name, &pde.rhs)?,
        }),
        None => None,
    };
    let forms = |v: &[String]| v.iter().map(|s| LinearForm::parse(s)).collect::<Result<Vec<_>>>();
    let singular_locus = raw
        .singular_locus
        .iter()
        .map(|s| {
            let r = parse_expr(s)?;
            if !r.is_polynomial() || r.vars().iter().any(|v| !v.is_variable()) {
                return Err(Error::Structure(format!("{name}: bad locus {s:?}")));
            }
            Ok(r.numer())
        })
        .collect::<Result<_>>()?;
    Ok(HornDefinition {
        rank: if extra_pde.is_some() { 3 } else { 4 },
        exceptional: forms(&raw.exceptional)?,
        exceptional_alternative: raw.exceptional_alternative.as_deref().map(forms).transpose()?,
        name,
        params,
        factors,
        extra_pde,
        singular_locus,
        note: raw.note,
    })
}

fn load() -> Vec<Arc<HornDefinition>> {
    let raw: RawCatalog = toml::from_str(CATALOG_TOML).expect("embedded catalog is valid TOML");
    raw.function
        .into_iter()
        .map(|f| Arc::new(build(f).expect("embedded catalog is well-formed")))
        .collect()
}

/// All definitions, in table order.
pub fn catalog() -> &'static [Arc<HornDefinition>] {
    static CATALOG: OnceLock<Vec<Arc<HornDefinition>>> = OnceLock::new();
    CATALOG.get_or_init(load)
}

/// Looks up a function by name, ignoring case.
pub fn get_definition(name: &str) -> Result<Arc<HornDefinition>> {
    catalog()
        .iter()
        .find(|d| d.name.eq_ignore_ascii_case(name.trim()))
        .cloned()
        .ok_or_else(|| Error::UnknownFunction {
            name: name.to_string(),
            valid: catalog().iter().map(|d| d.name.clone()).collect(),
        })
}

/// `(name, parameters, rank)` for every function, in table order.
pub fn list_functions() -> Vec<(String, Vec<String>, u8)> {
    catalog()
        .iter()
        .map(|d| (d.name.clone(), d.param_names(), d.rank))
        .collect()
}

/// Exceptional linear forms of `name` that are integers at `values`.
pub fn exceptional_check(name: &str, values: &HashMap<Var, RBig>) -> Result<Vec<String>> {
    get_definition(name)?.exceptional_check(values)
}

/// Non-axis singular-locus polynomials of `name`.
pub fn singular_locus(name: &str) -> Result<Vec<Polynomial>> {
    Ok(get_definition(name)?.singular_locus.clone())
}
