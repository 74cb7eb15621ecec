//! Multivariate gcd over the integers.
//!
//! Strategy: peel off trivial cases (constants, monomial factors, integer
//! content, variables present in only one operand), then run the
//! heuristic evaluation/interpolation gcd, falling back to a recursive
//! primitive polynomial remainder sequence when the heuristic gives up.

use std::collections::BTreeMap;

use dashu::base::{Abs, Gcd, SquareRoot, UnsignedAbs};
use dashu::integer::IBig;

use super::poly::{Coeff, IntPoly};
use super::var::Var;

const HEU_GCD_ATTEMPTS: usize = 6;

fn int_gcd(a: &IBig, b: &IBig) -> IBig {
    IBig::from(a.gcd(b))
}

/// Normalizes the sign so that the leading coefficient is positive.
pub(crate) fn normalize_sign(p: IntPoly) -> IntPoly {
    match p.leading_coeff() {
        Some(c) if c.is_negative() => p.neg(),
        _ => p,
    }
}

/// Greatest common divisor with positive leading coefficient.
///
/// `gcd(0, 0)` is `0`; callers that must reject it check beforehand.
pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() || a == b {
        return normalize_sign(a.clone());
    }
    let ca = a.content();
    let cb = b.content();
    let c = int_gcd(&ca, &cb);
    if a.is_constant() || b.is_constant() {
        return IntPoly::constant(c);
    }
    // common monomial factor
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono: Vec<(Var, u32)> = ma
        .iter()
        .filter_map(|(v, e)| {
            mb.iter()
                .find(|(w, _)| w == v)
                .map(|(_, f)| (*v, (*e).min(*f)))
        })
        .collect();
    let pa = a.div_monomial(&ma).div_scalar(&ca);
    let pb = b.div_monomial(&mb).div_scalar(&cb);
    let g = gcd_primitive(&pa, &pb);
    let g = normalize_sign(g).scale(&c);
    if mono.is_empty() {
        g
    } else {
        g.mul(&IntPoly::monomial(&mono, IBig::ONE))
    }
}

/// Gcd of two primitive polynomials.
fn gcd_primitive(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_constant() || b.is_constant() {
        return IntPoly::one();
    }
    if a == b {
        return a.clone();
    }
    // A variable occurring in only one operand cannot occur in the gcd,
    // which must then divide every coefficient with respect to it.
    if let Some(&v) = a.vars().iter().find(|v| !b.contains_var(**v)) {
        return gcd_with_coefficients(b, a, v);
    }
    if let Some(&v) = b.vars().iter().find(|v| !a.contains_var(**v)) {
        return gcd_with_coefficients(a, b, v);
    }
    if let Some((h, _, _)) = heu_gcd(a, b) {
        return normalize_sign(h);
    }
    normalize_sign(prs_gcd(a, b))
}

fn gcd_with_coefficients(free: &IntPoly, other: &IntPoly, v: Var) -> IntPoly {
    let mut g = free.clone();
    for c in other.coefficients_in(v).values() {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Keeps representatives in `(-m/2, m/2]`.
fn symmetric_mod(c: &IBig, m: &IBig) -> IBig {
    let mut r = c % m;
    if r < IBig::ZERO {
        r += m;
    }
    if &r * IBig::from(2) > *m {
        r -= m;
    }
    r
}

/// Reconstructs a polynomial in `v` whose coefficients are the balanced
/// base-`x` digits of `h`.
fn interpolate(h: &IntPoly, x: &IBig, v: Var) -> IntPoly {
    let mut digits: BTreeMap<u32, IntPoly> = BTreeMap::new();
    let mut h = h.clone();
    let mut k = 0u32;
    while !h.is_zero() {
        let g = h.map_coeffs(|c| symmetric_mod(c, x));
        h = h.sub(&g).map_coeffs(|c| c / x);
        if !g.is_zero() {
            digits.insert(k, g);
        }
        k += 1;
    }
    normalize_sign(IntPoly::from_coefficients_in(v, &digits))
}

fn primitive(p: IntPoly) -> IntPoly {
    let c = p.content();
    if c.is_zero() {
        p
    } else {
        p.div_scalar(&c)
    }
}

fn isqrt(x: &IBig) -> IBig {
    IBig::from(x.unsigned_abs().sqrt())
}

/// Heuristic gcd: returns `(h, a/h, b/h)` or `None` after a bounded
/// number of evaluation points.
fn heu_gcd(a: &IntPoly, b: &IntPoly) -> Option<(IntPoly, IntPoly, IntPoly)> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    let ca = a.content();
    let cb = b.content();
    let c = int_gcd(&ca, &cb);
    let a = a.div_scalar(&c);
    let b = b.div_scalar(&c);
    if a.is_constant() && b.is_constant() {
        let x = a.as_constant().unwrap();
        let y = b.as_constant().unwrap();
        let g = int_gcd(&x, &y);
        return Some((
            IntPoly::constant(&g * &c),
            IntPoly::constant(&x / &g),
            IntPoly::constant(&y / &g),
        ));
    }
    let v = match (a.vars().first(), b.vars().first()) {
        (Some(x), Some(y)) => *x.min(y),
        (Some(x), None) | (None, Some(x)) => *x,
        (None, None) => unreachable!(),
    };
    let na = a.max_norm();
    let nb = b.max_norm();
    let bound = IBig::from(2) * (&na).min(&nb).clone() + IBig::from(29);
    let la = a.leading_coeff().unwrap().clone().abs();
    let lb = b.leading_coeff().unwrap().clone().abs();
    let by_lc = IBig::from(2) * (&na / &la).min(&nb / &lb) + IBig::from(2);
    let mut x = bound
        .clone()
        .min(IBig::from(99) * isqrt(&bound))
        .max(by_lc);
    for _ in 0..HEU_GCD_ATTEMPTS {
        let fa = a.eval_var_int(v, &x);
        let fb = b.eval_var_int(v, &x);
        if !fa.is_zero() && !fb.is_zero() {
            if let Some((h, cfa, cfb)) = heu_gcd(&fa, &fb) {
                let h = primitive(interpolate(&h, &x, v));
                if !h.is_zero() {
                    if let (Some(qa), Some(qb)) = (a.div_exact(&h), b.div_exact(&h)) {
                        return Some((h.scale(&c), qa, qb));
                    }
                }
                let cfa = interpolate(&cfa, &x, v);
                if !cfa.is_zero() {
                    if let Some(h) = a.div_exact(&cfa) {
                        if let Some(qb) = b.div_exact(&h) {
                            return Some((h.scale(&c), cfa, qb));
                        }
                    }
                }
                let cfb = interpolate(&cfb, &x, v);
                if !cfb.is_zero() {
                    if let Some(h) = b.div_exact(&cfb) {
                        if let Some(qa) = a.div_exact(&h) {
                            return Some((h.scale(&c), qa, cfb));
                        }
                    }
                }
            }
        }
        let r = isqrt(&isqrt(&x));
        x = IBig::from(73794) * &x * r / IBig::from(27011);
    }
    None
}

/// Content with respect to `v`: gcd of the coefficients in `v`.
fn content_in(p: &IntPoly, v: Var) -> IntPoly {
    let mut g = IntPoly::zero();
    for c in p.coefficients_in(v).values() {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_in(p: &IntPoly, v: Var) -> IntPoly {
    let c = content_in(p, v);
    if c.is_zero() {
        return p.clone();
    }
    p.div_exact(&c).expect("content divides")
}

fn lead_in(p: &IntPoly, v: Var) -> (u32, IntPoly) {
    let cs = p.coefficients_in(v);
    let (d, c) = cs.into_iter().next_back().unwrap();
    (d, c)
}

/// Pseudo-remainder of `a` by `b` with respect to `v`.
fn prem(a: &IntPoly, b: &IntPoly, v: Var) -> IntPoly {
    let (db, lb) = lead_in(b, v);
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let (dr, lr) = lead_in(&r, v);
        if dr < db {
            return r;
        }
        let shift = IntPoly::monomial(&[(v, dr - db)], IBig::ONE);
        r = r.mul(&lb).sub(&lr.mul(&shift).mul(b));
    }
}

/// Recursive primitive PRS gcd; slow but unconditional.
fn prs_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_constant() || b.is_constant() {
        return IntPoly::constant(int_gcd(&a.content(), &b.content()));
    }
    let v = *a.vars().first().unwrap().min(b.vars().first().unwrap());
    if !a.contains_var(v) {
        return gcd_with_coefficients(a, b, v);
    }
    if !b.contains_var(v) {
        return gcd_with_coefficients(b, a, v);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap();
    let mut q = b.div_exact(&cb).unwrap();
    loop {
        if p.degree_in(v) < q.degree_in(v) {
            std::mem::swap(&mut p, &mut q);
        }
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = IntPoly::one();
            break;
        }
        p = q;
        q = primitive_in(&r, v);
    }
    normalize_sign(primitive_in(&q, v)).mul(&c)
}
