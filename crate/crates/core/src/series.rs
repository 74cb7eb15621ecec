//! Numeric oracle: truncated double-series evaluation at exact rational
//! parameters, in extended-precision floating point.
//!
//! Coefficients are built incrementally along the lattice from the exact
//! coefficient ratios, so individual Pochhammer symbols never overflow and
//! never hit a pole on their own.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use dashu::base::Abs;
use dashu::complex::CBig;
use dashu::float::round::mode::HalfAway;
use dashu::float::FBig;
use dashu::integer::IBig;
use dashu::rational::RBig;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::annihilator::{derived, index_vars, ThetaPolynomial};
use crate::catalog::HornDefinition;
use crate::error::{Error, Result};
use crate::symbolic::{Polynomial, RationalExpr, Ring, Var};

/// Extended-precision real.
pub type Real = FBig<HalfAway, 2>;
/// Extended-precision complex number.
pub type Complex = CBig<HalfAway, 2>;

/// Environment variable overriding the working precision in bits.
pub const PRECISION_ENV: &str = "HORNRED_PRECISION_BITS";
/// Default working precision: 256 bits, about 77 significant digits.
pub const DEFAULT_PRECISION_BITS: usize = 256;
/// Relative size of the outermost shell below which a sum counts as converged.
pub const TAIL_TOLERANCE: f64 = 1e-14;

/// Working precision in bits (read once from the environment).
pub fn precision_bits() -> usize {
    static BITS: OnceLock<usize> = OnceLock::new();
    *BITS.get_or_init(|| {
        std::env::var(PRECISION_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&b| b >= 64)
            .unwrap_or(DEFAULT_PRECISION_BITS)
    })
}

/// Rounds an exact rational to the working precision.
pub fn to_real(r: &RBig) -> Real {
    r.to_float::<HalfAway, 2>(precision_bits()).value()
}

fn real_int(n: i64) -> Real {
    Real::from(n).with_precision(precision_bits()).value()
}

/// Complex number from exact real and imaginary parts.
pub fn to_complex(re: &RBig, im: &RBig) -> Complex {
    Complex::from_parts(to_real(re), to_real(im))
}

fn complex_zero() -> Complex {
    Complex::from_parts(real_int(0), real_int(0))
}

/// Modulus as an `f64`, for reporting and tolerance checks.
pub fn abs_f64(z: &Complex) -> f64 {
    z.abs().to_f64().value()
}

/// Real and imaginary parts as `f64`, for reporting.
pub fn complex_to_f64(z: &Complex) -> (f64, f64) {
    let (re, im) = z.clone().into_parts();
    (re.to_f64().value(), im.to_f64().value())
}

impl Ring for Complex {
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Pochhammer symbol `(x)_n` for any integer `n`, exactly.
///
/// For negative `n` this is `1/((x-|n|)...(x-1))`; a vanishing factor in
/// that product is a pole and reported as an error.
pub fn pochhammer_int(x: &RBig, n: i64) -> Result<RBig> {
    let mut acc = RBig::ONE;
    if n >= 0 {
        for t in 0..n {
            acc *= x + RBig::from(t);
        }
        Ok(acc)
    } else {
        for t in 1..=(-n) {
            let f = x - RBig::from(t);
            if f == RBig::ZERO {
                return Err(Error::Evaluation(format!("pole of ({x})_{n}")));
            }
            acc *= f;
        }
        Ok(RBig::ONE / acc)
    }
}

/// A point of evaluation: exact parameter values and an exact, possibly
/// complex, argument.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPoint {
    pub params: HashMap<Var, RBig>,
    /// `(re, im)` of `z1` and `z2`.
    pub z: [(RBig, RBig); 2],
}

impl EvalPoint {
    /// Point with real arguments.
    pub fn real(params: HashMap<Var, RBig>, z1: RBig, z2: RBig) -> Self {
        EvalPoint { params, z: [(z1, RBig::ZERO), (z2, RBig::ZERO)] }
    }

    /// Whether both arguments are real.
    pub fn is_real(&self) -> bool {
        self.z.iter().all(|(_, im)| *im == RBig::ZERO)
    }

    /// The arguments as extended-precision complex numbers.
    pub fn z_complex(&self) -> [Complex; 2] {
        [to_complex(&self.z[0].0, &self.z[0].1), to_complex(&self.z[1].0, &self.z[1].1)]
    }

    /// Values of the parameters of `def`, erroring on an unbound one.
    pub fn check_bound(&self, def: &HornDefinition) -> Result<()> {
        for p in &def.params {
            if !self.params.contains_key(p) {
                return Err(Error::InvalidArgument(format!(
                    "parameter {p} of {} is unbound",
                    def.name
                )));
            }
        }
        Ok(())
    }

    /// Evaluates a rational expression in the parameters and `z1, z2`.
    pub fn eval(&self, r: &RationalExpr) -> Result<Complex> {
        let exact = r.substitute_values(&self.params)?;
        let [z1, z2] = self.z_complex();
        let (z1v, z2v) = (Var::z1(), Var::z2());
        if let Some(v) = exact.vars().iter().find(|v| **v != z1v && **v != z2v) {
            return Err(Error::InvalidArgument(format!("indeterminate {v} is unbound")));
        }
        let (n, d) = exact.eval_parts(
            complex_zero(),
            |c: &IBig| Complex::from_parts(Real::from(c.clone()).with_precision(precision_bits()).value(), real_int(0)),
            |v| if v == z1v { z1.clone() } else { z2.clone() },
        );
        if d.is_zero() {
            return Err(Error::Evaluation(format!("denominator of {r} vanishes at the point")));
        }
        Ok(n / d)
    }
}

/// Result of a truncated series evaluation.
#[derive(Clone, Debug)]
pub struct EvalReport {
    pub value: Complex,
    pub theta1: Complex,
    pub theta2: Complex,
    pub theta12: Complex,
    /// Largest relative size of the outermost shell among the reported sums.
    pub tail_bound: f64,
    pub converged: bool,
}

/// Truncated sums `Σ m1^i m2^j C(m) z1^m1 z2^m2`, i.e. the θ-monomials
/// `θ1^i θ2^j` applied to the series, for all `i + j <= max_degree`.
#[derive(Clone, Debug)]
pub struct Moments {
    pub order: usize,
    pub values: BTreeMap<(u32, u32), Complex>,
    /// Relative size of the outermost shell for each moment.
    pub tails: BTreeMap<(u32, u32), f64>,
}

impl Moments {
    pub fn get(&self, e: (u32, u32)) -> Result<&Complex> {
        self.values
            .get(&e)
            .ok_or_else(|| Error::InvalidArgument(format!("moment {e:?} was not computed")))
    }

    /// Largest shell ratio over all moments.
    pub fn tail_bound(&self) -> f64 {
        self.tails.values().cloned().fold(0.0, f64::max)
    }

    pub fn converged(&self) -> bool {
        self.tail_bound() < TAIL_TOLERANCE
    }
}

/// Exact coefficient ratio `P_j / Q_j` with the parameters bound, as a
/// function of the lattice point.
struct RatioAtParams {
    p: Polynomial,
    q: Polynomial,
}

impl RatioAtParams {
    fn new(def: &HornDefinition, axis: usize, params: &HashMap<Var, RBig>) -> Result<Self> {
        let ratio = &derived(def)?.ratios[axis - 1];
        let bind = |poly: &Polynomial| -> Result<Polynomial> {
            let r = RationalExpr::from_poly(poly).substitute_values(params)?;
            Ok(r.numer().scale(&(RBig::ONE / r.denom().as_constant().expect("polynomial input"))))
        };
        Ok(RatioAtParams { p: bind(&ratio.p)?, q: bind(&ratio.q)? })
    }

    fn at(&self, m1: i64, m2: i64) -> Result<RBig> {
        let [v1, v2] = index_vars();
        let value = |v: Var| RBig::from(if v == v1 { m1 } else if v == v2 { m2 } else { 0 });
        let p = self.p.eval_in(RBig::ZERO, |c| c.clone(), value);
        let q = self.q.eval_in(RBig::ZERO, |c| c.clone(), value);
        if q == RBig::ZERO {
            return Err(Error::Evaluation(format!(
                "coefficient ratio has a pole at lattice point ({m1}, {m2}); parameters are not generic"
            )));
        }
        Ok(p / q)
    }
}

/// Series coefficients `C(m)` for `0 <= m1, m2 <= order`, rounded to the
/// working precision, built along the lattice from the exact ratios.
pub fn coefficients(
    def: &HornDefinition,
    params: &HashMap<Var, RBig>,
    order: usize,
) -> Result<Vec<Vec<Real>>> {
    let r1 = RatioAtParams::new(def, 1, params)?;
    let r2 = RatioAtParams::new(def, 2, params)?;
    let n = order as i64;
    let mut rows = Vec::with_capacity(order + 1);
    let mut head = real_int(1);
    for m1 in 0..=n {
        if m1 > 0 {
            head = &head * to_real(&r1.at(m1 - 1, 0)?);
        }
        let mut row = Vec::with_capacity(order + 1);
        let mut c = head.clone();
        row.push(c.clone());
        for m2 in 1..=n {
            c = &c * to_real(&r2.at(m1, m2 - 1)?);
            row.push(c.clone());
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Computes all moments up to total θ-degree `max_degree` of the series
/// truncated to `0 <= m1, m2 <= order`.
pub fn series_moments(
    def: &HornDefinition,
    point: &EvalPoint,
    order: usize,
    max_degree: u32,
) -> Result<Moments> {
    if order == 0 {
        return Err(Error::InvalidArgument("truncation order must be at least 1".into()));
    }
    point.check_bound(def)?;
    let coeffs = coefficients(def, &point.params, order)?;
    let [z1, z2] = point.z_complex();
    let mut pow1 = vec![Complex::from_parts(real_int(1), real_int(0))];
    let mut pow2 = pow1.clone();
    for k in 1..=order {
        pow1.push(&pow1[k - 1] * &z1);
        pow2.push(&pow2[k - 1] * &z2);
    }
    let exps: Vec<(u32, u32)> = (0..=max_degree)
        .flat_map(|d| (0..=d).map(move |i| (i, d - i)))
        .collect();
    let mut sums: BTreeMap<(u32, u32), Complex> = exps.iter().map(|e| (*e, complex_zero())).collect();
    let mut shell: BTreeMap<(u32, u32), Real> = exps.iter().map(|e| (*e, real_int(0))).collect();
    let mut weights = vec![real_int(0); exps.len()];
    for (m1, row) in coeffs.iter().enumerate() {
        for (m2, c) in row.iter().enumerate() {
            let term = (&pow1[m1] * &pow2[m2]) * c;
            let on_shell = m1 == order || m2 == order;
            let term_abs = if on_shell { Some(term.abs()) } else { None };
            for (k, e) in exps.iter().enumerate() {
                let w = (m1 as i64).pow(e.0) * (m2 as i64).pow(e.1);
                if w == 0 {
                    continue;
                }
                weights[k] = real_int(w);
                let contribution = &term * &weights[k];
                let s = sums.get_mut(e).unwrap();
                *s = &*s + &contribution;
                if let Some(a) = &term_abs {
                    let sh = shell.get_mut(e).unwrap();
                    *sh = &*sh + a * &weights[k];
                }
            }
        }
    }
    let tails = exps
        .iter()
        .map(|e| {
            let total = abs_f64(&sums[e]);
            let sh = shell[e].to_f64().value();
            let ratio = if sh == 0.0 {
                0.0
            } else if total == 0.0 {
                f64::INFINITY
            } else {
                sh / total
            };
            (*e, ratio)
        })
        .collect();
    Ok(Moments { order, values: sums, tails })
}

/// Value of the truncated series and its first θ-derivatives.
pub fn eval_series(def: &HornDefinition, point: &EvalPoint, order: usize) -> Result<EvalReport> {
    let m = series_moments(def, point, order, 2)?;
    let pick = |e| m.values[&e].clone();
    let keys = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let tail_bound = keys.iter().map(|e| m.tails[e]).fold(0.0, f64::max);
    Ok(EvalReport {
        value: pick((0, 0)),
        theta1: pick((1, 0)),
        theta2: pick((0, 1)),
        theta12: pick((1, 1)),
        tail_bound,
        converged: tail_bound < TAIL_TOLERANCE,
    })
}

/// Applies a θ-polynomial with coefficients in the parameters and `z` to the
/// series through its moments. Returns the residual and the largest single
/// contribution, whose ratio is the relative residual.
pub fn apply_theta_polynomial(
    op: &ThetaPolynomial,
    point: &EvalPoint,
    moments: &Moments,
) -> Result<(Complex, f64)> {
    let mut acc = complex_zero();
    let mut scale = 0.0f64;
    for (e, c) in &op.terms {
        let term = point.eval(c)? * moments.get(*e)?;
        scale = scale.max(abs_f64(&term));
        acc = &acc + &term;
    }
    Ok((acc, scale))
}

/// Relative residual `|Σ|/max|term|` of a θ-polynomial on the series.
pub fn relative_residual(op: &ThetaPolynomial, point: &EvalPoint, moments: &Moments) -> Result<f64> {
    let (r, scale) = apply_theta_polynomial(op, point, moments)?;
    Ok(if scale == 0.0 { abs_f64(&r) } else { abs_f64(&r) / scale })
}

/// Truncation order used by default for numeric checks.
pub const DEFAULT_ORDER: usize = 40;

const PRIMES: [i64; 16] = [7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67];
const SAMPLE_ATTEMPTS: usize = 1000;

/// Distance from a locus below which a point is rejected: loci through the
/// origin can only be avoided by a small margin inside `|z| <= 0.1`.
fn locus_margin(p: &Polynomial) -> f64 {
    let through_origin = p.terms().all(|(m, _)| !m.is_empty());
    if through_origin {
        0.02
    } else {
        0.5
    }
}

fn poly_at(p: &Polynomial, z: &[RBig; 2]) -> f64 {
    let value = |v: Var| if v == Var::z1() { z[0].clone() } else { z[1].clone() };
    p.eval_in(RBig::ZERO, |c| c.clone(), value).to_f64().value().abs()
}

/// Deterministic generic sample points for `def`.
///
/// Parameters are `p/q` with pairwise distinct primes `q >= 7`, so every
/// integer linear combination of two or more of them is non-integral and
/// the exceptional sets are avoided; each point is checked anyway. The
/// arguments are real with `0.02 <= |z_i| <= 0.07`, kept away from every
/// singular locus, and the series with its θ-derivatives up to second
/// order must pass the tail test at the default truncation order.
pub fn sample_points(def: &HornDefinition, count: usize, seed: u64) -> Result<Vec<EvalPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<EvalPoint> = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > SAMPLE_ATTEMPTS * count.max(1) {
            return Err(Error::Numeric(format!("could not sample generic points for {}", def.name)));
        }
        let mut primes = PRIMES.to_vec();
        primes.shuffle(&mut rng);
        let mut params = HashMap::new();
        for (p, q) in def.params.iter().zip(primes) {
            let num = loop {
                let k: i64 = rng.gen_range(-3 * q..=3 * q);
                if k % q != 0 {
                    break k;
                }
            };
            params.insert(*p, RBig::from_parts(IBig::from(num), q.unsigned_abs().into()));
        }
        let mut zs = [RBig::ZERO, RBig::ZERO];
        for z in zs.iter_mut() {
            let k: i64 = rng.gen_range(20..=70);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            *z = RBig::from_parts(IBig::from(sign * k), 1000u32.into());
        }
        if def.singular_locus.iter().any(|p| poly_at(p, &zs) <= locus_margin(p)) {
            continue;
        }
        if !def.exceptional_check(&params)?.is_empty() {
            continue;
        }
        let [z1, z2] = zs;
        let point = EvalPoint::real(params, z1, z2);
        if !series_moments(def, &point, DEFAULT_ORDER, 2)?.converged() {
            continue;
        }
        if !out.contains(&point) {
            out.push(point);
        }
    }
    Ok(out)
}

/// Relative difference `|a - b| / max(|a|, |b|)` (zero when both vanish).
pub fn relative_difference(a: &Complex, b: &Complex) -> f64 {
    let scale = abs_f64(a).max(abs_f64(b));
    if scale == 0.0 {
        0.0
    } else {
        abs_f64(&(a - b)) / scale
    }
}

/// Absolute value of an exact rational as `f64`.
pub fn rational_abs_f64(r: &RBig) -> f64 {
    r.clone().abs().to_f64().value()
}
