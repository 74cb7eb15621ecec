//! Sparse multivariate polynomials.
//!
//! Monomials are packed into a `u128`: the top byte holds the total
//! degree and byte `14 - i` holds the exponent of the `i`-th variable of
//! the polynomial's own (sorted) variable list. Comparing two packed
//! monomials as integers is then exactly graded lexicographic order, and
//! multiplying monomials is integer addition. This caps a polynomial at
//! 15 variables and total degree 255.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use dashu::base::{Abs, Gcd};
use dashu::integer::IBig;
use dashu::rational::RBig;

use super::var::Var;

pub(crate) type Mono = u128;

pub const MAX_VARS: usize = 15;
const DEG_SHIFT: u32 = 120;

#[inline]
fn slot(i: usize) -> u32 {
    8 * (14 - i as u32)
}

#[inline]
pub(crate) fn mono_degree(m: Mono) -> u32 {
    (m >> DEG_SHIFT) as u32
}

#[inline]
pub(crate) fn mono_exp(m: Mono, i: usize) -> u32 {
    ((m >> slot(i)) & 0xff) as u32
}

pub(crate) fn mono_from_exps(exps: &[u32]) -> Mono {
    assert!(exps.len() <= MAX_VARS, "too many indeterminates");
    let mut m: Mono = 0;
    let mut deg = 0u32;
    for (i, &e) in exps.iter().enumerate() {
        deg += e;
        m |= (e as Mono) << slot(i);
    }
    assert!(deg <= 255, "monomial degree {deg} exceeds 255");
    m | ((deg as Mono) << DEG_SHIFT)
}

#[inline]
fn mono_mul(a: Mono, b: Mono) -> Mono {
    assert!(
        mono_degree(a) + mono_degree(b) <= 255,
        "monomial degree exceeds 255"
    );
    a + b
}

#[inline]
fn mono_divides(d: Mono, m: Mono) -> bool {
    (0..=15).all(|k| (d >> (8 * k)) & 0xff <= (m >> (8 * k)) & 0xff)
}

fn mono_gcd(a: Mono, b: Mono, nvars: usize) -> Mono {
    let exps: Vec<u32> = (0..nvars)
        .map(|i| mono_exp(a, i).min(mono_exp(b, i)))
        .collect();
    mono_from_exps(&exps)
}

/// Coefficient ring of a [`Poly`].
pub trait Coeff: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coeff for IBig {
    fn zero() -> Self {
        IBig::ZERO
    }
    fn one() -> Self {
        IBig::ONE
    }
    fn from_i64(v: i64) -> Self {
        IBig::from(v)
    }
    fn is_zero(&self) -> bool {
        *self == IBig::ZERO
    }
    fn is_one(&self) -> bool {
        *self == IBig::ONE
    }
    fn is_negative(&self) -> bool {
        *self < IBig::ZERO
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Coeff for RBig {
    fn zero() -> Self {
        RBig::ZERO
    }
    fn one() -> Self {
        RBig::ONE
    }
    fn from_i64(v: i64) -> Self {
        RBig::from(v)
    }
    fn is_zero(&self) -> bool {
        *self == RBig::ZERO
    }
    fn is_one(&self) -> bool {
        *self == RBig::ONE
    }
    fn is_negative(&self) -> bool {
        *self < RBig::ZERO
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Target ring for evaluating or substituting into a polynomial.
pub trait Ring: Clone {
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
}

impl Ring for RBig {
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Ring for IBig {
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl<C: Coeff> Ring for Poly<C> {
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

/// A polynomial over the coefficient ring `C`.
///
/// Invariants: `vars` is sorted and every listed variable occurs in some
/// term; `terms` is strictly decreasing in graded lexicographic order and
/// has no zero coefficient. Equal polynomials are therefore structurally
/// identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    vars: Arc<Vec<Var>>,
    terms: Vec<(Mono, C)>,
}

/// Polynomial with exact rational coefficients.
pub type Polynomial = Poly<RBig>;
/// Polynomial with integer coefficients.
pub type IntPoly = Poly<IBig>;

fn empty_vars() -> Arc<Vec<Var>> {
    Arc::new(Vec::new())
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly {
            vars: empty_vars(),
            terms: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            vars: empty_vars(),
            terms: vec![(0, c)],
        }
    }

    pub fn var(v: Var) -> Self {
        Poly {
            vars: Arc::new(vec![v]),
            terms: vec![(mono_from_exps(&[1]), C::one())],
        }
    }

    /// Builds a polynomial from `(variable, exponent)` lists and coefficients.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<(Var, u32)>, C)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let mut vars: Vec<Var> = terms
            .iter()
            .flat_map(|(m, _)| m.iter().filter(|(_, e)| *e > 0).map(|(v, _)| *v))
            .collect();
        vars.sort();
        vars.dedup();
        let raw = terms
            .into_iter()
            .map(|(m, c)| {
                let mut exps = vec![0u32; vars.len()];
                for (v, e) in m {
                    if e > 0 {
                        let i = vars.binary_search(&v).unwrap();
                        exps[i] += e;
                    }
                }
                (mono_from_exps(&exps), c)
            })
            .collect();
        Self::from_raw(Arc::new(vars), raw)
    }

    /// Sorts, merges equal monomials, drops zeros and trims variables.
    fn from_raw(vars: Arc<Vec<Var>>, mut raw: Vec<(Mono, C)>) -> Self {
        raw.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut terms: Vec<(Mono, C)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match terms.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => {
                    if let Some((_, lc)) = terms.last() {
                        if lc.is_zero() {
                            terms.pop();
                        }
                    }
                    terms.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = terms.last() {
            if lc.is_zero() {
                terms.pop();
            }
        }
        Poly { vars, terms }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        if self.vars.is_empty() {
            return self;
        }
        let used = self.terms.iter().fold(0 as Mono, |acc, (m, _)| acc | *m);
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&i| (used >> slot(i)) & 0xff != 0)
            .collect();
        if keep.len() == self.vars.len() {
            return self;
        }
        let vars: Vec<Var> = keep.iter().map(|&i| self.vars[i]).collect();
        for (m, _) in self.terms.iter_mut() {
            let exps: Vec<u32> = keep.iter().map(|&i| mono_exp(*m, i)).collect();
            *m = mono_from_exps(&exps);
        }
        self.vars = Arc::new(vars);
        self
    }

    /// Re-expresses the terms over `target`, which must contain every
    /// variable of `self`. Order is preserved.
    fn terms_over(&self, target: &Arc<Vec<Var>>) -> Vec<(Mono, C)> {
        if Arc::ptr_eq(&self.vars, target) || *self.vars == **target {
            return self.terms.clone();
        }
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| target.binary_search(v).expect("variable missing from target"))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0u32; target.len()];
                for (i, &p) in pos.iter().enumerate() {
                    exps[p] = mono_exp(*m, i);
                }
                (mono_from_exps(&exps), c.clone())
            })
            .collect()
    }

    fn union_vars(&self, other: &Self) -> Arc<Vec<Var>> {
        if Arc::ptr_eq(&self.vars, &other.vars) || *self.vars == *other.vars {
            return self.vars.clone();
        }
        if other.vars.is_empty() {
            return self.vars.clone();
        }
        if self.vars.is_empty() {
            return other.vars.clone();
        }
        let mut vars: Vec<Var> = self.vars.iter().chain(other.vars.iter()).copied().collect();
        vars.sort();
        vars.dedup();
        assert!(vars.len() <= MAX_VARS, "too many indeterminates");
        Arc::new(vars)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<C> {
        match (self.vars.is_empty(), self.terms.first()) {
            (true, Some((_, c))) => Some(c.clone()),
            (true, None) => Some(C::zero()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| mono_degree(*m))
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        match self.vars.binary_search(&v) {
            Ok(i) => self.terms.iter().map(|(m, _)| mono_exp(*m, i)).max().unwrap_or(0),
            Err(_) => 0,
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.vars.binary_search(&v).is_ok()
    }

    /// Leading coefficient in graded lexicographic order.
    pub fn leading_coeff(&self) -> Option<&C> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Iterates `(exponents, coefficient)` in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<(Var, u32)>, &C)> + '_ {
        self.terms.iter().map(move |(m, c)| {
            let exps = self
                .vars
                .iter()
                .enumerate()
                .filter_map(|(i, v)| {
                    let e = mono_exp(*m, i);
                    (e > 0).then_some((*v, e))
                })
                .collect();
            (exps, c)
        })
    }

    pub fn coeffs(&self) -> impl Iterator<Item = &C> + '_ {
        self.terms.iter().map(|(_, c)| c)
    }

    pub fn neg(&self) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, true)
    }

    fn add_scaled(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let vars = self.union_vars(other);
        let a = self.terms_over(&vars);
        let b = other.terms_over(&vars);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 > b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 > a[i].0 {
                let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate {
                    a[i].1.sub(&b[j].1)
                } else {
                    a[i].1.add(&b[j].1)
                };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Poly { vars, terms: out }.trimmed()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let vars = self.union_vars(other);
        let a = self.terms_over(&vars);
        let b = other.terms_over(&vars);
        if a.len() == 1 || b.len() == 1 {
            // a single term multiplies without reordering
            let (single, many) = if a.len() == 1 { (&a[0], &b) } else { (&b[0], &a) };
            let terms = many
                .iter()
                .map(|(m, c)| (mono_mul(*m, single.0), c.mul(&single.1)))
                .collect();
            return Poly {
                vars,
                terms,
            };
        }
        let mut acc: BTreeMap<Mono, C> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m = mono_mul(*ma, *mb);
                let p = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(c) => *c = c.add(&p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Poly { vars, terms }.trimmed()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `v * d/dv` applied termwise: multiplies each coefficient by the
    /// exponent of `v`.
    pub fn euler_derivative(&self, v: Var) -> Self {
        let Ok(i) = self.vars.binary_search(&v) else {
            return Self::zero();
        };
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let e = mono_exp(*m, i);
                (e > 0).then(|| (*m, c.mul(&C::from_i64(e as i64))))
            })
            .collect();
        Poly {
            vars: self.vars.clone(),
            terms,
        }
        .trimmed()
    }

    /// Evaluates into another ring. `value` supplies the image of each
    /// variable of this polynomial (in `vars()` order).
    pub fn eval_in<R: Ring>(
        &self,
        zero: R,
        coeff: impl Fn(&C) -> R,
        value: impl Fn(Var) -> R,
    ) -> R {
        if self.terms.is_empty() {
            return zero;
        }
        let n = self.vars.len();
        let mut powers: Vec<Vec<R>> = Vec::with_capacity(n);
        for (i, v) in self.vars.iter().enumerate() {
            let maxe = self.terms.iter().map(|(m, _)| mono_exp(*m, i)).max().unwrap_or(0);
            let x = value(*v);
            let mut pw = Vec::with_capacity(maxe as usize);
            if maxe > 0 {
                pw.push(x.clone());
                for k in 1..maxe as usize {
                    let next = pw[k - 1].ring_mul(&x);
                    pw.push(next);
                }
            }
            powers.push(pw);
        }
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (i, pw) in powers.iter().enumerate() {
                let e = mono_exp(*m, i);
                if e > 0 {
                    t = t.ring_mul(&pw[e as usize - 1]);
                }
            }
            acc = acc.ring_add(&t);
        }
        acc
    }

    /// Substitutes polynomials for variables (simultaneously).
    pub fn substitute_poly(&self, f: impl Fn(Var) -> Option<Poly<C>>) -> Self {
        let images: Vec<Option<Poly<C>>> = self.vars.iter().map(|v| f(*v)).collect();
        if images.iter().all(|i| i.is_none()) {
            return self.clone();
        }
        self.eval_in(
            Self::zero(),
            |c| Self::constant(c.clone()),
            |v| {
                let i = self.vars.binary_search(&v).unwrap();
                images[i].clone().unwrap_or_else(|| Self::var(v))
            },
        )
    }

    /// Splits into coefficients of powers of `v`: `self = sum c_k v^k`.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Vec<(Mono, C)>> = BTreeMap::new();
        let Ok(i) = self.vars.binary_search(&v) else {
            let mut map = BTreeMap::new();
            if !self.is_zero() {
                map.insert(0, self.clone());
            }
            return map;
        };
        let rest: Vec<Var> = self.vars.iter().copied().filter(|w| *w != v).collect();
        let rest = Arc::new(rest);
        for (m, c) in &self.terms {
            let e = mono_exp(*m, i);
            let exps: Vec<u32> = (0..self.vars.len())
                .filter(|&k| k != i)
                .map(|k| mono_exp(*m, k))
                .collect();
            out.entry(e)
                .or_default()
                .push((mono_from_exps(&exps), c.clone()));
        }
        out.into_iter()
            .map(|(e, ts)| (e, Self::from_raw(rest.clone(), ts)))
            .collect()
    }

    /// Largest power of each variable dividing every term.
    pub fn monomial_content(&self) -> Vec<(Var, u32)> {
        let Some(first) = self.terms.first() else {
            return Vec::new();
        };
        let n = self.vars.len();
        let g = self
            .terms
            .iter()
            .fold(first.0, |acc, (m, _)| mono_gcd(acc, *m, n));
        self.vars
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                let e = mono_exp(g, i);
                (e > 0).then_some((*v, e))
            })
            .collect()
    }

    /// Divides by a monomial that must divide every term.
    pub fn div_monomial(&self, mono: &[(Var, u32)]) -> Self {
        if mono.is_empty() {
            return self.clone();
        }
        let mut exps = vec![0u32; self.vars.len()];
        for (v, e) in mono {
            let i = self.vars.binary_search(v).expect("monomial variable absent");
            exps[i] = *e;
        }
        let d = mono_from_exps(&exps);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                assert!(mono_divides(d, *m), "monomial does not divide term");
                (*m - d, c.clone())
            })
            .collect();
        Poly {
            vars: self.vars.clone(),
            terms,
        }
        .trimmed()
    }

    pub fn monomial(mono: &[(Var, u32)], c: C) -> Self {
        Self::from_terms([(mono.to_vec(), c)])
    }
}

impl Poly<IBig> {
    /// Gcd of the integer coefficients (non-negative).
    pub fn content(&self) -> IBig {
        let mut g = IBig::ZERO;
        for (_, c) in &self.terms {
            g = IBig::from((&g).gcd(c));
            if g == IBig::ONE {
                break;
            }
        }
        g
    }

    /// Exact division by an integer that divides every coefficient.
    pub fn div_scalar(&self, d: &IBig) -> Self {
        if *d == IBig::ONE {
            return self.clone();
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, c / d)).collect(),
        }
    }

    pub fn max_norm(&self) -> IBig {
        self.terms
            .iter()
            .map(|(_, c)| c.clone().abs())
            .max()
            .unwrap_or(IBig::ZERO)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = d.as_constant() {
            return self
                .terms
                .iter()
                .all(|(_, x)| (x % &c).is_zero())
                .then(|| Poly {
                    vars: self.vars.clone(),
                    terms: self.terms.iter().map(|(m, x)| (*m, x / &c)).collect(),
                });
        }
        if d.vars.iter().any(|v| !self.contains_var(*v)) {
            return None;
        }
        let vars = self.vars.clone();
        let dt = d.terms_over(&vars);
        let (dlm, dlc) = dt[0].clone();
        if mono_degree(dlm) > self.total_degree() {
            return None;
        }
        let mut rem: BTreeMap<Mono, IBig> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Mono, IBig)> = Vec::new();
        while let Some((&m, _)) = rem.last_key_value() {
            let c = rem.remove(&m).unwrap();
            if !mono_divides(dlm, m) {
                return None;
            }
            let (q, r) = (&c / &dlc, &c % &dlc);
            if !r.is_zero() {
                return None;
            }
            let qm = m - dlm;
            for (tm, tc) in &dt[1..] {
                let pm = mono_mul(qm, *tm);
                let p = &q * tc;
                match rem.get_mut(&pm) {
                    Some(x) => {
                        *x -= p;
                        if x.is_zero() {
                            rem.remove(&pm);
                        }
                    }
                    None => {
                        rem.insert(pm, -p);
                    }
                }
            }
            quot.push((qm, q));
        }
        Some(Poly { vars, terms: quot }.trimmed())
    }

    /// Evaluates variable `v` at the integer `x`.
    pub fn eval_var_int(&self, v: Var, x: &IBig) -> Self {
        let Ok(i) = self.vars.binary_search(&v) else {
            return self.clone();
        };
        let rest: Arc<Vec<Var>> = Arc::new(self.vars.iter().copied().filter(|w| *w != v).collect());
        let maxe = self.degree_in(v) as usize;
        let mut pw = Vec::with_capacity(maxe + 1);
        pw.push(IBig::ONE);
        for k in 1..=maxe {
            let next = &pw[k - 1] * x;
            pw.push(next);
        }
        let raw = self
            .terms
            .iter()
            .map(|(m, c)| {
                let e = mono_exp(*m, i) as usize;
                let exps: Vec<u32> = (0..self.vars.len())
                    .filter(|&k| k != i)
                    .map(|k| mono_exp(*m, k))
                    .collect();
                (mono_from_exps(&exps), c * &pw[e])
            })
            .collect();
        Self::from_raw(rest, raw)
    }

    pub fn to_rational(&self) -> Polynomial {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, RBig::from(c.clone())))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub(crate) fn map_coeffs(&self, f: impl Fn(&IBig) -> IBig) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let x = f(c);
                (!x.is_zero()).then_some((*m, x))
            })
            .collect();
        Poly {
            vars: self.vars.clone(),
            terms,
        }
        .trimmed()
    }

    /// Builds `sum_k c_k * v^k` from coefficient polynomials free of `v`.
    pub(crate) fn from_coefficients_in(v: Var, coeffs: &BTreeMap<u32, Self>) -> Self {
        let x = Self::var(v);
        let mut acc = Self::zero();
        for (e, c) in coeffs {
            acc = acc.add(&c.mul(&x.pow(*e)));
        }
        acc
    }
}

impl Poly<RBig> {
    /// Writes `self = num / den` with `num` integral and `den` a positive
    /// integer (the lcm of the coefficient denominators).
    pub fn to_integral(&self) -> (IntPoly, IBig) {
        let mut den = IBig::ONE;
        for (_, c) in &self.terms {
            let d = IBig::from(c.denominator().clone());
            let g = IBig::from((&den).gcd(&d));
            den = &den / &g * d;
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let scaled = c * RBig::from(den.clone());
                (*m, scaled.numerator().clone())
            })
            .collect();
        (
            Poly {
                vars: self.vars.clone(),
                terms,
            },
            den,
        )
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::print::write_poly(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> IntPoly {
        IntPoly::var(Var::new(n))
    }

    fn c(x: i64) -> IntPoly {
        IntPoly::constant(IBig::from(x))
    }

    #[test]
    fn packed_order_is_graded_lex() {
        // a^2 > a*b > b^2 > a > b > 1 for a < b
        let a2 = mono_from_exps(&[2, 0]);
        let ab = mono_from_exps(&[1, 1]);
        let b2 = mono_from_exps(&[0, 2]);
        let a = mono_from_exps(&[1, 0]);
        let b = mono_from_exps(&[0, 1]);
        let mut ms = vec![b, 0, ab, a, b2, a2];
        ms.sort_by(|x, y| y.cmp(x));
        assert_eq!(ms, vec![a2, ab, b2, a, b, 0]);
    }

    #[test]
    fn arithmetic_across_variable_sets() {
        let p = v("a").add(&v("z1"));
        let q = v("b").sub(&v("z1"));
        let s = p.add(&q);
        assert_eq!(s, v("a").add(&v("b")));
        assert_eq!(s.vars().len(), 2);
        let prod = p.mul(&q);
        let expect = v("a")
            .mul(&v("b"))
            .sub(&v("a").mul(&v("z1")))
            .add(&v("b").mul(&v("z1")))
            .sub(&v("z1").pow(2));
        assert_eq!(prod, expect);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn exact_division() {
        let p = v("x").pow(2).sub(&v("y").pow(2));
        let d = v("x").sub(&v("y"));
        assert_eq!(p.div_exact(&d).unwrap(), v("x").add(&v("y")));
        assert!(p.div_exact(&v("x").add(&c(1))).is_none());
        assert!(p.scale(&IBig::from(3)).div_exact(&c(2)).is_none());
    }

    #[test]
    fn euler_derivative_scales_by_exponent() {
        let p = v("z1").pow(3).mul(&v("a")).add(&v("a"));
        let d = p.euler_derivative(Var::z1());
        assert_eq!(d, v("z1").pow(3).mul(&v("a")).scale(&IBig::from(3)));
    }

    #[test]
    fn evaluation_at_integer() {
        let p = v("x").mul(&v("y")).add(&v("x").pow(2));
        let e = p.eval_var_int(Var::new("x"), &IBig::from(3));
        assert_eq!(e, v("y").scale(&IBig::from(3)).add(&c(9)));
    }
}
