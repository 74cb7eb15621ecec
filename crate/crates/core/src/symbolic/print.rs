//! Printer for the plain-text expression syntax.
//!
//! Output uses only `+ - * / ^`, parentheses, integers and identifiers,
//! so it re-parses to the same canonical value.

use std::fmt::{self, Write};

use super::poly::{Coeff, Poly};
use super::rational::RationalExpr;

pub(crate) fn write_poly<C: Coeff>(f: &mut fmt::Formatter<'_>, p: &Poly<C>) -> fmt::Result {
    f.write_str(&poly_string(p))
}

pub(crate) fn poly_string<C: Coeff>(p: &Poly<C>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (mono, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        let mag = if negative { c.neg() } else { c.clone() };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || mono.is_empty() {
            factors.push(mag.to_string());
        }
        for (v, e) in &mono {
            if *e == 1 {
                factors.push(v.to_string());
            } else {
                factors.push(format!("{v}^{e}"));
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// True when `p` prints as a single factor that binds tighter than `/`.
fn is_atomic<C: Coeff>(p: &Poly<C>) -> bool {
    if p.len() != 1 {
        return false;
    }
    let (mono, c) = p.terms().next().unwrap();
    if c.is_negative() {
        return false;
    }
    if mono.is_empty() {
        return !c.to_string().contains('/');
    }
    c.is_one() && mono.len() == 1
}

pub(crate) fn write_rational(f: &mut fmt::Formatter<'_>, r: &RationalExpr) -> fmt::Result {
    let num = r.numer_int();
    let den = r.denom_int();
    if den.is_one() {
        return write_poly(f, num);
    }
    let mut s = String::new();
    if num.len() > 1 {
        write!(s, "({})", poly_string(num))?;
    } else {
        s.push_str(&poly_string(num));
    }
    s.push('/');
    if is_atomic(den) {
        s.push_str(&poly_string(den));
    } else {
        write!(s, "({})", poly_string(den))?;
    }
    f.write_str(&s)
}

#[cfg(test)]
mod tests {
    use crate::symbolic::RationalExpr;

    #[test]
    fn prints_in_graded_order() {
        let r: RationalExpr = "z2 + a*z1 - 3 + a^2".parse().unwrap();
        assert_eq!(r.to_string(), "a^2 + a*z1 + z2 - 3");
    }

    #[test]
    fn parenthesizes_compound_parts() {
        let r: RationalExpr = "(a+1)/(2*b)".parse().unwrap();
        assert_eq!(r.to_string(), "(a + 1)/(2*b)");
        let r: RationalExpr = "-a/b^2".parse().unwrap();
        assert_eq!(r.to_string(), "-a/b^2");
    }
}
