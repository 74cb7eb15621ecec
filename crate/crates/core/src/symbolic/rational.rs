//! Canonical rational functions over the rationals.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use dashu::integer::IBig;
use dashu::rational::RBig;

use super::gcd::gcd;
use super::poly::{IntPoly, Polynomial, Ring};
use super::var::Var;
use crate::error::{Error, Result};

/// A quotient `num / den` of integer polynomials.
///
/// Canonical form: `num` and `den` are coprime in `Z[vars]` (no common
/// polynomial factor and no common integer content), the leading
/// coefficient of `den` is positive, and zero is `0 / 1`. Equal rational
/// functions therefore compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalExpr {
    num: IntPoly,
    den: IntPoly,
}

impl RationalExpr {
    pub fn zero() -> Self {
        RationalExpr {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_int_poly(IntPoly::constant(IBig::from(v)))
    }

    pub fn from_rational(r: &RBig) -> Self {
        RationalExpr {
            num: IntPoly::constant(r.numerator().clone()),
            den: IntPoly::constant(IBig::from(r.denominator().clone())),
        }
    }

    pub fn var(v: Var) -> Self {
        Self::from_int_poly(IntPoly::var(v))
    }

    /// Shorthand for [`RationalExpr::var`] by name; panics on an invalid name.
    pub fn symbol(name: &str) -> Self {
        Self::var(Var::new(name))
    }

    pub fn from_int_poly(p: IntPoly) -> Self {
        RationalExpr {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        let (num, den) = p.to_integral();
        RationalExpr {
            num,
            den: IntPoly::constant(den),
        }
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Evaluation("zero denominator".into()));
        }
        Ok(Self::canonical(num, den))
    }

    /// Quotient of two rational polynomials.
    pub fn from_polys(num: &Polynomial, den: &Polynomial) -> Result<Self> {
        Self::from_poly(num).div(&Self::from_poly(den))
    }

    fn canonical(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        if den.leading_coeff().is_some_and(|c| *c < IBig::ZERO) {
            num = num.neg();
            den = den.neg();
        }
        RationalExpr { num, den }
    }

    pub fn numer_int(&self) -> &IntPoly {
        &self.num
    }

    pub fn denom_int(&self) -> &IntPoly {
        &self.den
    }

    pub fn numer(&self) -> Polynomial {
        self.num.to_rational()
    }

    pub fn denom(&self) -> Polynomial {
        self.den.to_rational()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The value as an exact rational, when free of indeterminates.
    pub fn as_rational(&self) -> Option<RBig> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(RBig::from(n) / RBig::from(d))
    }

    /// Indeterminates occurring in numerator or denominator, sorted.
    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self
            .num
            .vars()
            .iter()
            .chain(self.den.vars())
            .copied()
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn neg(&self) -> Self {
        RationalExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::canonical(self.num.add(&other.num), self.den.clone());
        }
        // Henrici: only the shared part of the denominators can cancel.
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            if num.is_zero() {
                return Self::zero();
            }
            return RationalExpr {
                num,
                den: self.den.mul(&other.den),
            };
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = other.den.div_exact(&g).unwrap();
        let t = self.num.mul(&d1).add(&other.num.mul(&b1));
        if t.is_zero() {
            return Self::zero();
        }
        let g2 = gcd(&t, &g);
        let num = t.div_exact(&g2).unwrap();
        let den = b1.mul(&d1).mul(&g.div_exact(&g2).unwrap());
        Self::canonical(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        if den.leading_coeff().is_some_and(|c| *c < IBig::ZERO) {
            RationalExpr {
                num: num.neg(),
                den: den.neg(),
            }
        } else {
            RationalExpr { num, den }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Evaluation("division by zero".into()));
        }
        let (num, den) = (self.den.clone(), self.num.clone());
        Ok(if den.leading_coeff().is_some_and(|c| *c < IBig::ZERO) {
            RationalExpr {
                num: num.neg(),
                den: den.neg(),
            }
        } else {
            RationalExpr { num, den }
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalExpr {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Euler derivative `v * d/dv`, by the quotient rule.
    pub fn theta(&self, v: Var) -> Self {
        if !self.contains_var(v) {
            return Self::zero();
        }
        let tn = self.num.euler_derivative(v);
        if self.den.is_constant() {
            // the exponent factors may share content with the denominator
            return Self::canonical(tn, self.den.clone());
        }
        let td = self.den.euler_derivative(v);
        // (tn*d - n*td)/d^2; only the factor shared by d and td can cancel
        let g = gcd(&self.den, &td);
        let d1 = self.den.div_exact(&g).unwrap();
        let td1 = td.div_exact(&g).unwrap();
        let num = tn.mul(&d1).sub(&self.num.mul(&td1));
        Self::canonical(num, d1.mul(&self.den))
    }

    /// Euler derivative with respect to `z1` (axis 1) or `z2` (axis 2).
    pub fn theta_axis(&self, axis: usize) -> Self {
        match axis {
            1 => self.theta(Var::z1()),
            2 => self.theta(Var::z2()),
            _ => panic!("axis must be 1 or 2, got {axis}"),
        }
    }

    /// Simultaneous substitution of indeterminates.
    pub fn substitute(&self, bindings: &HashMap<Var, RationalExpr>) -> Result<Self> {
        let relevant: HashMap<Var, &RationalExpr> = bindings
            .iter()
            .filter(|(v, _)| self.contains_var(**v))
            .map(|(v, r)| (*v, r))
            .collect();
        if relevant.is_empty() {
            return Ok(self.clone());
        }
        if relevant.values().all(|r| r.den.is_constant()) {
            // images are polynomials with rational coefficients
            let images: HashMap<Var, Polynomial> = relevant
                .iter()
                .map(|(v, r)| {
                    let d = RBig::from(r.den.as_constant().unwrap());
                    (*v, r.num.to_rational().scale(&(RBig::ONE / d)))
                })
                .collect();
            let n = self.num.to_rational().substitute_poly(|v| images.get(&v).cloned());
            let d = self.den.to_rational().substitute_poly(|v| images.get(&v).cloned());
            if d.is_zero() {
                return Err(Error::Evaluation(format!(
                    "substitution makes the denominator {} vanish",
                    self.den
                )));
            }
            return Self::from_polys(&n, &d);
        }
        let eval = |p: &IntPoly| {
            p.eval_in(
                RationalExpr::zero(),
                |c| RationalExpr::from_int_poly(IntPoly::constant(c.clone())),
                |v| {
                    relevant
                        .get(&v)
                        .map(|r| (*r).clone())
                        .unwrap_or_else(|| RationalExpr::var(v))
                },
            )
        };
        let n = eval(&self.num);
        let d = eval(&self.den);
        if d.is_zero() {
            return Err(Error::Evaluation(format!(
                "substitution makes the denominator {} vanish",
                self.den
            )));
        }
        n.div(&d)
    }

    /// Substitutes exact rational values.
    pub fn substitute_values(&self, values: &HashMap<Var, RBig>) -> Result<Self> {
        let bindings = values
            .iter()
            .map(|(v, r)| (*v, RationalExpr::from_rational(r)))
            .collect();
        self.substitute(&bindings)
    }

    /// Exact value at a point binding every indeterminate.
    pub fn eval_rational(&self, values: &HashMap<Var, RBig>) -> Result<RBig> {
        let r = self.substitute_values(values)?;
        r.as_rational().ok_or_else(|| {
            let missing: Vec<String> = r.vars().iter().map(|v| v.to_string()).collect();
            Error::InvalidArgument(format!("unbound indeterminates: {}", missing.join(", ")))
        })
    }

    /// Evaluates into any ring containing the images of the indeterminates;
    /// returns `(numerator, denominator)` so the caller can divide.
    pub fn eval_parts<R: Ring>(
        &self,
        zero: R,
        coeff: impl Fn(&IBig) -> R,
        value: impl Fn(Var) -> R,
    ) -> (R, R) {
        let n = self.num.eval_in(zero.clone(), &coeff, &value);
        let d = self.den.eval_in(zero, &coeff, &value);
        (n, d)
    }
}

impl Ring for RationalExpr {
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

impl Default for RationalExpr {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for RationalExpr {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<Var> for RationalExpr {
    fn from(v: Var) -> Self {
        Self::var(v)
    }
}

impl FromStr for RationalExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_expr(s)
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::print::write_rational(f, self)
    }
}

impl fmt::Debug for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalExpr({self})")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl std::ops::$tr<&RationalExpr> for &RationalExpr {
            type Output = RationalExpr;
            fn $m(self, rhs: &RationalExpr) -> RationalExpr {
                $body(self, rhs)
            }
        }
        impl std::ops::$tr<RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $m(self, rhs: RationalExpr) -> RationalExpr {
                $body(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &RationalExpr, b: &RationalExpr| a.add(b));
forward_binop!(Sub, sub, |a: &RationalExpr, b: &RationalExpr| a.sub(b));
forward_binop!(Mul, mul, |a: &RationalExpr, b: &RationalExpr| a.mul(b));

impl std::ops::Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr::neg(self)
    }
}

impl std::ops::Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RationalExpr {
        s.parse().unwrap()
    }

    #[test]
    fn additive_identity_and_inverse() {
        assert_eq!(r("z1/(1-z1)").add(&RationalExpr::zero()), r("z1/(1-z1)"));
        assert!(r("1/(a-1)").add(&r("1/(1-a)")).is_zero());
    }

    #[test]
    fn cross_multiplied_sum() {
        assert_eq!(r("z1/z2").add(&r("z2/z1")), r("(z1^2+z2^2)/(z1*z2)"));
    }

    #[test]
    fn products_cancel() {
        assert!(r("(z1-z2)/(z1+z2)").mul(&r("(z1+z2)/(z1-z2)")).is_one());
        assert!(r("(a+b)/c").mul(&r("c/(a+b)")).is_one());
        assert!(r("a/(b+1)").mul(&RationalExpr::zero()).is_zero());
    }

    #[test]
    fn theta_of_a_polynomial_with_rational_coefficients_is_canonical() {
        let x = r("b*z1^2/2").theta(Var::z1());
        assert_eq!(x, r("b*z1^2"));
        assert!(x.denom_int().is_one());
    }

    #[test]
    fn canonical_sign_and_content() {
        let x = r("(2*a+2)/(-4*b)");
        assert_eq!(x.denom_int(), r("2*b").numer_int());
        assert_eq!(x.numer_int(), r("-a-1").numer_int());
        assert_eq!(r("0/(a+1)"), RationalExpr::zero());
    }

    #[test]
    fn theta_uses_quotient_rule() {
        assert_eq!(r("z1").theta_axis(1), r("z1"));
        assert!(r("a/(b+3)").theta_axis(1).is_zero());
        assert_eq!(r("1/(1+z2)").theta_axis(2), r("-z2/(1+z2)^2"));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let swap: HashMap<Var, RationalExpr> = [
            (Var::z1(), RationalExpr::var(Var::z2())),
            (Var::z2(), RationalExpr::var(Var::z1())),
        ]
        .into();
        assert_eq!(r("z1/z2").substitute(&swap).unwrap(), r("z2/z1"));
        let vals: HashMap<Var, RationalExpr> = [
            (Var::new("a"), r("1/3")),
            (Var::new("b"), r("1/5")),
            (Var::new("c"), r("2")),
        ]
        .into();
        assert_eq!(r("(a+b)/c").substitute(&vals).unwrap(), r("4/15"));
        let pole: HashMap<Var, RationalExpr> = [(Var::z1(), r("1"))].into();
        assert!(r("1/(1-z1)").substitute(&pole).is_err());
    }

    #[test]
    fn substitution_of_rational_images() {
        let b: HashMap<Var, RationalExpr> = [(Var::new("a"), r("1/z1"))].into();
        assert_eq!(r("a^2 + a").substitute(&b).unwrap(), r("(1+z1)/z1^2"));
    }
}
