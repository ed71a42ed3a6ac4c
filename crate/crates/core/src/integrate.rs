//! Closed-form integration over canonical, scaled and vertex-defined
//! simplices.
//!
//! The exact backbone: for a form `f_j` of degree `j` in `n` variables,
//!
//! ```text
//! ∫_Δ f_j dx = f̂_j(e) / (n+j)!  =  f̂_j(ξ_j) / n!
//! ```
//!
//! where `f̂` multiplies each coefficient `f_α` by `α_1!···α_n!` and
//! `ξ_j = e/((n+1)···(n+j))^{1/j}`. The left form stays rational and drives
//! the exact path; the right form is the floating-point evaluation-point
//! path. Real exponents replace factorials by Gamma values.

use std::fmt;
use std::thread;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{binomial, factorial, parse_rational};
use crate::poly::{rational_to_f64, ExponentVector, Polynomial};
use crate::simplex::{evaluation_point, evaluation_point_real, ScaledSimplex, Simplex, SimplexError};
use crate::specialfn::log_gamma;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    #[error("dimension mismatch: integrand has {integrand} variables, domain has {domain}")]
    DimensionMismatch { integrand: usize, domain: usize },
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error("term {term}: exponent {index} is {value}, must be greater than -1")]
    ExponentTooSmall { term: usize, index: usize, value: f64 },
    #[error("term {term} has total degree {found}, expected {expected}; all terms must share one degree")]
    MixedDegrees { term: usize, expected: f64, found: f64 },
    #[error("term {term} has {found} exponents, expected {expected}")]
    ExponentCount { term: usize, expected: usize, found: usize },
    #[error("term {term}: non-finite value")]
    NonFinite { term: usize },
    #[error("the evaluation-point form is not applicable for total degree 0")]
    NotApplicable,
    #[error("line {line}: {message}")]
    InputFormat { line: usize, message: String },
}

/// Which formula produced an [`IntegralResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntegrationMode {
    #[serde(rename = "exact-bombieri-at-e")]
    ExactBombieriAtE,
    #[serde(rename = "float-xi-points")]
    FloatXiPoints,
    #[serde(rename = "gamma-weighted")]
    GammaWeighted,
}

impl IntegrationMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntegrationMode::ExactBombieriAtE => "exact-bombieri-at-e",
            IntegrationMode::FloatXiPoints => "float-xi-points",
            IntegrationMode::GammaWeighted => "gamma-weighted",
        }
    }
}

impl fmt::Display for IntegrationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An integral value. `approx` is always present; `exact` only on the
/// rational paths, in which case `approx` is its rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult {
    exact: Option<BigRational>,
    approx: f64,
    mode: IntegrationMode,
}

impl IntegralResult {
    fn exact(value: BigRational) -> Self {
        IntegralResult {
            approx: rational_to_f64(&value),
            exact: Some(value),
            mode: IntegrationMode::ExactBombieriAtE,
        }
    }

    fn float(approx: f64, mode: IntegrationMode) -> Self {
        IntegralResult {
            exact: None,
            approx,
            mode,
        }
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn into_exact(self) -> Option<BigRational> {
        self.exact
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }

    pub fn mode(&self) -> IntegrationMode {
        self.mode
    }
}

fn check_dims(integrand: usize, domain: usize) -> Result<(), IntegrateError> {
    if integrand != domain {
        Err(IntegrateError::DimensionMismatch { integrand, domain })
    } else {
        Ok(())
    }
}

/// Exact `∫_Δ f = Σ_j f̂_j(e)/(n+j)!`.
pub fn integrate_canonical_exact(f: &Polynomial) -> IntegralResult {
    IntegralResult::exact(canonical_exact_value(f))
}

fn canonical_exact_value(f: &Polynomial) -> BigRational {
    let n = f.dimension();
    let t = f.degree() as usize;
    // f̂_j(e) per degree, accumulated over a common denominator
    let mut numer = vec![BigInt::zero(); t + 1];
    let mut denom = vec![BigInt::one(); t + 1];
    let fact: Vec<BigInt> = (0..=t).map(factorial).collect();
    for (alpha, c) in f.terms() {
        let j = alpha.degree() as usize;
        let weight = alpha
            .as_slice()
            .iter()
            .fold(BigInt::one(), |acc, &a| acc * &fact[a as usize]);
        // numer/denom + c·weight
        if c.denom() == &denom[j] {
            numer[j] += c.numer() * weight;
        } else {
            numer[j] = &numer[j] * c.denom() + c.numer() * weight * &denom[j];
            denom[j] *= c.denom();
        }
    }
    let mut total = BigRational::zero();
    let mut n_plus_j_fact = factorial(n);
    for j in 0..=t {
        if j > 0 {
            n_plus_j_fact *= n + j;
        }
        if numer[j].is_zero() {
            continue;
        }
        total += BigRational::new(numer[j].clone(), &denom[j] * &n_plus_j_fact);
    }
    total
}

/// Floating-point `(1/n!)(f̂_0 + Σ_{j≥1} f̂_j(ξ_j))`.
pub fn integrate_canonical_xi(f: &Polynomial) -> IntegralResult {
    IntegralResult::float(canonical_xi_sum(f) / factorial_f64(f.dimension()), IntegrationMode::FloatXiPoints)
}

/// `f̂_0 + Σ_{j≥1} f̂_j(ξ_j)`, without the `1/n!` factor.
fn canonical_xi_sum(f: &Polynomial) -> f64 {
    let n = f.dimension();
    f.homogeneous_parts()
        .into_iter()
        .map(|part| {
            let hat = part.body().bombieri();
            match part.degree() {
                0 => rational_to_f64(&hat.coefficient(&ExponentVector::zero(n))),
                j => hat.evaluate_f64(evaluation_point(n, j).point()),
            }
        })
        .sum()
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Exact `∫_{Δ_z} f = Σ_j f̂_j(1/z) / ((n+j)!·z_1···z_n)`.
pub fn integrate_scaled(f: &Polynomial, domain: &ScaledSimplex) -> Result<IntegralResult, IntegrateError> {
    check_dims(f.dimension(), domain.dimension())?;
    let n = f.dimension();
    let inv_z: Vec<BigRational> = domain.weights().iter().map(|z| z.recip()).collect();
    let inv_z_prod = inv_z.iter().fold(BigRational::one(), |acc, v| acc * v);
    let mut total = BigRational::zero();
    for part in f.homogeneous_parts() {
        if part.body().is_zero() {
            continue;
        }
        let j = part.degree() as usize;
        let value = part.body().bombieri().evaluate(&inv_z);
        total += value / BigRational::from_integer(factorial(n + j));
    }
    Ok(IntegralResult::exact(total * inv_z_prod))
}

/// `E_0(ℓ), ..., E_t(ℓ)` where `E_k` is the sum of all degree-`k` monomials
/// with unit coefficients. Runs the recurrence
/// `E_k^{(i)} = E_k^{(i-1)} + ℓ_i·E_{k-1}^{(i)}` over variables, `O(n·t)`.
pub fn complete_homogeneous_sums(ell: &[BigRational], t: u32) -> Vec<BigRational> {
    let t = t as usize;
    let mut e = vec![BigRational::zero(); t + 1];
    e[0] = BigRational::one();
    for l in ell {
        for k in 1..=t {
            let add = l * &e[k - 1];
            e[k] += add;
        }
    }
    e
}

/// `E_t(ℓ) = Σ_{|α|=t} ℓ^α`.
pub fn e_t(ell: &[BigRational], t: u32) -> BigRational {
    complete_homogeneous_sums(ell, t).pop().expect("non-empty")
}

/// `(ℓ·x)^t`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormPower {
    pub ell: Vec<BigRational>,
    pub power: u32,
}

impl LinearFormPower {
    pub fn new(ell: Vec<BigRational>, power: u32) -> Self {
        LinearFormPower { ell, power }
    }

    pub fn dimension(&self) -> usize {
        self.ell.len()
    }

    /// Expanded polynomial `(ℓ·x)^t`.
    pub fn expand(&self) -> Polynomial {
        let n = self.ell.len();
        let linear = Polynomial::from_terms(
            n,
            self.ell
                .iter()
                .enumerate()
                .map(|(i, l)| (ExponentVector::unit(n, i), l.clone())),
        );
        linear.pow(self.power)
    }
}

/// `∫_Δ (ℓ·x)^t dx = t!/(n+t)! · E_t(ℓ)`.
pub fn integrate_linear_form_power(lp: &LinearFormPower) -> IntegralResult {
    let n = lp.dimension();
    let t = lp.power as usize;
    let weight = BigRational::new(factorial(t), factorial(n + t));
    IntegralResult::exact(weight * e_t(&lp.ell, lp.power))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply(self, v: BigRational) -> BigRational {
        match self {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaringTerm {
    pub sign: Sign,
    pub c: Vec<BigRational>,
}

/// A form written as `Σ_i ε_i (c_i·x)^t` with `ε_i = ±1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaringDecomposition {
    terms: Vec<WaringTerm>,
    power: u32,
}

impl WaringDecomposition {
    /// Panics when the `c_i` do not all have the same length.
    pub fn new(terms: Vec<WaringTerm>, power: u32) -> Self {
        if let Some(first) = terms.first() {
            assert!(
                terms.iter().all(|t| t.c.len() == first.c.len()),
                "all linear forms must have the same dimension"
            );
        }
        WaringDecomposition { terms, power }
    }

    /// Parses lines of the form `±1 c_1 ... c_n`.
    pub fn parse(text: &str, power: u32) -> Result<Self, IntegrateError> {
        let mut terms: Vec<WaringTerm> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| IntegrateError::InputFormat {
                line: lineno + 1,
                message,
            };
            let mut fields = line.split_whitespace();
            let sign = match fields.next() {
                Some("1") | Some("+1") => Sign::Plus,
                Some("-1") => Sign::Minus,
                other => return Err(bad(format!("expected +1 or -1, found {:?}", other.unwrap_or("")))),
            };
            let c = fields
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bad(e.to_string()))?;
            if c.is_empty() {
                return Err(bad("missing coefficients".into()));
            }
            if let Some(first) = terms.first() {
                if first.c.len() != c.len() {
                    return Err(bad(format!("expected {} coefficients, found {}", first.c.len(), c.len())));
                }
            }
            terms.push(WaringTerm { sign, c });
        }
        if terms.is_empty() {
            return Err(IntegrateError::InputFormat {
                line: 0,
                message: "no terms".into(),
            });
        }
        Ok(WaringDecomposition::new(terms, power))
    }

    pub fn terms(&self) -> &[WaringTerm] {
        &self.terms
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn dimension(&self) -> Option<usize> {
        self.terms.first().map(|t| t.c.len())
    }

    pub fn expand(&self, dimension: usize) -> Polynomial {
        self.terms.iter().fold(Polynomial::zero(dimension), |acc, term| {
            let p = LinearFormPower::new(term.c.clone(), self.power).expand();
            match term.sign {
                Sign::Plus => &acc + &p,
                Sign::Minus => &acc - &p,
            }
        })
    }
}

/// Exact `∫_Ω f = |det M| · ∫_Δ f(M y + a) dy`.
pub fn integrate_simplex(s: &Simplex, f: &Polynomial) -> Result<IntegralResult, IntegrateError> {
    check_dims(f.dimension(), s.dimension())?;
    let g = s.pullback(f);
    Ok(IntegralResult::exact(s.jacobian() * canonical_exact_value(&g)))
}

/// Floating-point evaluation-point form on `Ω`: `|det M|/n!·[ĝ_0 + Σ ĝ_j(ξ_j)]`
/// where `g` is the pullback and `ξ_j = A(ψ_j - a)`.
pub fn integrate_simplex_xi(s: &Simplex, f: &Polynomial) -> Result<IntegralResult, IntegrateError> {
    check_dims(f.dimension(), s.dimension())?;
    let g = s.pullback(f);
    let jac = rational_to_f64(&s.jacobian());
    Ok(IntegralResult::float(
        jac * canonical_xi_sum(&g) / factorial_f64(s.dimension()),
        IntegrationMode::FloatXiPoints,
    ))
}

/// The points `ψ_j = M ξ_j + a ∈ Ω` for `j = 1..=t`.
pub fn simplex_evaluation_points(s: &Simplex, t: u32) -> Vec<Vec<f64>> {
    (1..=t)
        .map(|j| s.from_canonical_f64(evaluation_point(s.dimension(), j).point()))
        .collect()
}

/// Exact integral of a Waring-type form over `Ω`:
///
/// ```text
/// |det M| Σ_k C(t,k) k!/(n+k)! Σ_i ε_i (c_i·a)^{t-k} E_k(ℓ_i),   ℓ_i = Mᵀ c_i
/// ```
pub fn integrate_waring(s: &Simplex, w: &WaringDecomposition) -> Result<IntegralResult, IntegrateError> {
    let n = s.dimension();
    if let Some(d) = w.dimension() {
        check_dims(d, n)?;
    }
    let t = w.power() as usize;
    let mt = s.edge_matrix().transpose();
    // per-k inner sums Σ_i ε_i (c_i·a)^{t-k} E_k(ℓ_i)
    let mut inner = vec![BigRational::zero(); t + 1];
    for term in w.terms() {
        let ell = mt.mul_vec(&term.c);
        let ca = term
            .c
            .iter()
            .zip(s.base_point())
            .fold(BigRational::zero(), |acc, (c, a)| acc + c * a);
        let e = complete_homogeneous_sums(&ell, w.power());
        // (c·a)^{t-k}, with 0^0 = 1
        let mut ca_pow = vec![BigRational::one(); t + 1];
        for m in 1..=t {
            ca_pow[m] = &ca_pow[m - 1] * &ca;
        }
        for k in 0..=t {
            inner[k] += term.sign.apply(&ca_pow[t - k] * &e[k]);
        }
    }
    let total = inner
        .into_iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (k, v)| {
            let weight = BigRational::new(binomial(t, k) * factorial(k), factorial(n + k));
            acc + weight * v
        });
    Ok(IntegralResult::exact(s.jacobian() * total))
}

/// One term `f_α x^α` with real exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTerm {
    pub coefficient: f64,
    pub alpha: Vec<f64>,
}

/// `Σ_{α∈M} f_α x^α` with `α_i > -1`, positively homogeneous of degree
/// `t = Σ α_i` (shared by every term).
#[derive(Debug, Clone, PartialEq)]
pub struct RealExponentSum {
    dimension: usize,
    terms: Vec<RealTerm>,
    degree: f64,
}

/// Relative tolerance when comparing total degrees of real-exponent terms.
const DEGREE_TOLERANCE: f64 = 1e-12;

impl RealExponentSum {
    pub fn new(dimension: usize, terms: Vec<RealTerm>) -> Result<Self, IntegrateError> {
        if dimension == 0 {
            return Err(IntegrateError::Simplex(SimplexError::Dimension(0)));
        }
        let mut degree = None;
        for (k, term) in terms.iter().enumerate() {
            if term.alpha.len() != dimension {
                return Err(IntegrateError::ExponentCount {
                    term: k,
                    expected: dimension,
                    found: term.alpha.len(),
                });
            }
            if !term.coefficient.is_finite() || term.alpha.iter().any(|a| !a.is_finite()) {
                return Err(IntegrateError::NonFinite { term: k });
            }
            if let Some((index, &value)) = term.alpha.iter().enumerate().find(|(_, &a)| a <= -1.0) {
                return Err(IntegrateError::ExponentTooSmall { term: k, index, value });
            }
            let t: f64 = term.alpha.iter().sum();
            match degree {
                None => degree = Some(t),
                Some(d) => {
                    if (t - d).abs() > DEGREE_TOLERANCE * f64::max(1.0, d.abs()) {
                        return Err(IntegrateError::MixedDegrees {
                            term: k,
                            expected: d,
                            found: t,
                        });
                    }
                }
            }
        }
        // α_i > -1 already forces t > -n > -(1+n).
        Ok(RealExponentSum {
            dimension,
            terms,
            degree: degree.unwrap_or(0.0),
        })
    }

    /// Parses lines `coefficient α_1 ... α_n`; values are reals or `p/q`.
    pub fn parse(text: &str, dimension: Option<usize>) -> Result<Self, IntegrateError> {
        let mut terms = Vec::new();
        let mut dim = dimension;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let values = line
                .split_whitespace()
                .map(parse_real)
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| IntegrateError::InputFormat {
                    line: lineno + 1,
                    message: format!("cannot parse '{}'", line),
                })?;
            if values.len() < 2 {
                return Err(IntegrateError::InputFormat {
                    line: lineno + 1,
                    message: "expected a coefficient followed by exponents".into(),
                });
            }
            let n = *dim.get_or_insert(values.len() - 1);
            if values.len() - 1 != n {
                return Err(IntegrateError::InputFormat {
                    line: lineno + 1,
                    message: format!("expected {} exponents, found {}", n, values.len() - 1),
                });
            }
            terms.push(RealTerm {
                coefficient: values[0],
                alpha: values[1..].to_vec(),
            });
        }
        let Some(n) = dim else {
            return Err(IntegrateError::InputFormat {
                line: 0,
                message: "no terms and no dimension".into(),
            });
        };
        Self::new(n, terms)
    }

    /// Re-expresses a polynomial with a single total degree; `None` if it
    /// is not homogeneous.
    pub fn from_homogeneous(f: &Polynomial) -> Option<Self> {
        if !f.is_homogeneous() {
            return None;
        }
        let terms = f
            .terms()
            .map(|(alpha, c)| RealTerm {
                coefficient: rational_to_f64(c),
                alpha: alpha.as_slice().iter().map(|&a| f64::from(a)).collect(),
            })
            .collect();
        Self::new(f.dimension(), terms).ok()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> f64 {
        self.degree
    }

    pub fn terms(&self) -> &[RealTerm] {
        &self.terms
    }

    /// Pointwise value at a point of the open positive orthant.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                term.coefficient
                    * term
                        .alpha
                        .iter()
                        .zip(x)
                        .map(|(&a, &xi)| if a == 0.0 { 1.0 } else { xi.powf(a) })
                        .product::<f64>()
            })
            .sum()
    }

    fn log_gamma_weight(term: &RealTerm) -> f64 {
        term.alpha
            .iter()
            .map(|&a| log_gamma(1.0 + a).expect("exponents exceed -1"))
            .sum()
    }
}

fn parse_real(s: &str) -> Option<f64> {
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    parse_rational(s).ok().map(|r| rational_to_f64(&r))
}

/// `∫_Δ f = Σ_α f_α Π_i Γ(1+α_i) / Γ(1+n+t)`, term by term in log space.
pub fn integrate_real_exponents(f: &RealExponentSum) -> IntegralResult {
    let n = f.dimension() as f64;
    let log_denominator = log_gamma(1.0 + n + f.degree()).expect("1+n+t > 0");
    let value = f
        .terms()
        .iter()
        .filter(|term| term.coefficient != 0.0)
        .map(|term| {
            let magnitude =
                (term.coefficient.abs().ln() + RealExponentSum::log_gamma_weight(term) - log_denominator).exp();
            magnitude.copysign(term.coefficient)
        })
        .sum();
    IntegralResult::float(value, IntegrationMode::GammaWeighted)
}

/// Evaluation-point form `(1/n!) f̂(ξ_t)` with Gamma-weighted `f̂`.
/// Undefined when `t = 0`.
pub fn integrate_real_exponents_xi(f: &RealExponentSum) -> Result<IntegralResult, IntegrateError> {
    if f.degree() == 0.0 {
        return Err(IntegrateError::NotApplicable);
    }
    let xi = evaluation_point_real(f.dimension(), f.degree())?;
    let point = xi.point();
    let hat: f64 = f
        .terms()
        .iter()
        .map(|term| {
            let mono: f64 = term.alpha.iter().zip(point).map(|(&a, &x)| x.powf(a)).product();
            term.coefficient * RealExponentSum::log_gamma_weight(term).exp() * mono
        })
        .sum();
    Ok(IntegralResult::float(
        hat / factorial_f64(f.dimension()),
        IntegrationMode::FloatXiPoints,
    ))
}

/// Both sides of the Laplace-transform identity for `x^α` on `Δ_z`:
/// `lhs = (n+|α|)!·∫_{Δ_z} x^α dx` and
/// `rhs = ∫_{R^n_+} x^α exp(-zᵀx) dx = α_1!···α_n! · z^{-α-e}`.
pub fn laplace_identity_check(
    alpha: &ExponentVector,
    z: &ScaledSimplex,
) -> Result<(BigRational, BigRational), IntegrateError> {
    let n = alpha.dimension();
    check_dims(n, z.dimension())?;
    let monomial = Polynomial::monomial(n, alpha.clone(), BigRational::one());
    let integral = integrate_scaled(&monomial, z)?
        .into_exact()
        .expect("scaled integration is exact");
    let lhs = integral * BigRational::from_integer(factorial(n + alpha.degree() as usize));
    let rhs = alpha
        .as_slice()
        .iter()
        .zip(z.weights())
        .fold(BigRational::from_integer(alpha.factorial_product()), |acc, (&a, z)| {
            acc * num_traits::pow(z.recip(), a as usize + 1)
        });
    Ok((lhs, rhs))
}

/// Exact canonical integration of many polynomials across worker threads.
/// Output order matches input order.
pub fn integrate_canonical_exact_batch(polys: &[Polynomial]) -> Vec<IntegralResult> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(polys.len().max(1));
    if workers <= 1 {
        return polys.iter().map(integrate_canonical_exact).collect();
    }
    let chunk = polys.len().div_ceil(workers);
    thread::scope(|scope| {
        let handles: Vec<_> = polys
            .chunks(chunk)
            .map(|c| scope.spawn(move || c.iter().map(integrate_canonical_exact).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("integration worker panicked"))
            .collect()
    })
}

/// Checks `|approx - exact| ≤ tol·max(1, |exact|)`.
pub fn agrees_within(approx: f64, exact: &BigRational, tol: f64) -> bool {
    let e = rational_to_f64(exact);
    (approx - e).abs() <= tol * f64::max(1.0, e.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    fn simplex(v: &[&[i64]]) -> Simplex {
        Simplex::from_vertices(v.iter().map(|r| qs(r)).collect()).unwrap()
    }

    /// ∏ α_i! / (n+|α|)!, written out independently of the engine.
    fn dirichlet(alpha: &[u32]) -> BigRational {
        let fact = |k: u32| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
        let num = alpha.iter().fold(BigInt::one(), |acc, &a| acc * fact(a));
        let deg: u32 = alpha.iter().sum();
        BigRational::new(num, fact(alpha.len() as u32 + deg))
    }

    fn dirichlet_integral(f: &Polynomial) -> BigRational {
        f.terms()
            .fold(BigRational::zero(), |acc, (a, c)| acc + c * dirichlet(a.as_slice()))
    }

    #[test]
    fn example_exact() {
        let f = parse("x1 + x1*x2 + x2^2", 2).unwrap();
        let r = integrate_canonical_exact(&f);
        assert_eq!(r.exact_value(), Some(&q(7, 24)));
        assert_eq!(r.mode(), IntegrationMode::ExactBombieriAtE);
        assert!((r.approx() - 7.0 / 24.0).abs() < 1e-16);
    }

    #[test]
    fn constants_give_volume() {
        for n in 1..=6 {
            let r = integrate_canonical_exact(&Polynomial::one(n));
            assert_eq!(r.exact_value().unwrap(), &BigRational::new(BigInt::one(), factorial(n)));
        }
    }

    #[test]
    fn single_monomial() {
        let r = integrate_canonical_exact(&parse("x1*x2", 2).unwrap());
        assert_eq!(r.exact_value(), Some(&q(1, 24)));
    }

    #[test]
    fn example_xi_path() {
        let f = parse("x1 + x1*x2 + x2^2", 2).unwrap();
        let r = integrate_canonical_xi(&f);
        assert_eq!(r.mode(), IntegrationMode::FloatXiPoints);
        assert!(r.exact_value().is_none());
        assert!((r.approx() - 7.0 / 24.0).abs() < 1e-15);
        assert_eq!(integrate_canonical_xi(&Polynomial::zero(3)).approx(), 0.0);
    }

    #[test]
    fn xi_path_matches_exact_in_three_dims() {
        let f = parse("x1^2*x2", 3).unwrap();
        let exact = integrate_canonical_exact(&f);
        let xi = integrate_canonical_xi(&f);
        assert!(agrees_within(xi.approx(), exact.exact_value().unwrap(), 1e-12));
    }

    #[test]
    fn scaled_examples() {
        let z = ScaledSimplex::new(qs(&[2, 2])).unwrap();
        assert_eq!(integrate_scaled(&Polynomial::one(2), &z).unwrap().exact_value(), Some(&q(1, 8)));

        let z = ScaledSimplex::new(qs(&[3])).unwrap();
        assert_eq!(integrate_scaled(&parse("x1", 1).unwrap(), &z).unwrap().exact_value(), Some(&q(1, 18)));

        let f = parse("x1 + x1*x2 + x2^2 - 4", 2).unwrap();
        let e = ScaledSimplex::new(qs(&[1, 1])).unwrap();
        assert_eq!(
            integrate_scaled(&f, &e).unwrap().exact_value(),
            integrate_canonical_exact(&f).exact_value()
        );
        assert!(matches!(
            integrate_scaled(&f, &ScaledSimplex::new(qs(&[1])).unwrap()),
            Err(IntegrateError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn linear_form_powers() {
        let r = integrate_linear_form_power(&LinearFormPower::new(qs(&[1, 1]), 2));
        assert_eq!(r.exact_value(), Some(&q(1, 4)));
        let r = integrate_linear_form_power(&LinearFormPower::new(qs(&[1, 2]), 2));
        assert_eq!(r.exact_value(), Some(&q(7, 12)));
        for n in 1..=4 {
            let r = integrate_linear_form_power(&LinearFormPower::new(qs(&vec![0; n]), 3));
            assert_eq!(r.exact_value(), Some(&q(0, 1)));
        }
    }

    #[test]
    fn e_t_examples() {
        assert_eq!(e_t(&qs(&[1, 1]), 2), q(3, 1));
        assert_eq!(e_t(&[q(5, 2), q(-1, 3), q(7, 1)], 0), q(1, 1));
        assert_eq!(e_t(&qs(&[1, 2]), 3), q(15, 1));
    }

    #[test]
    fn e_t_counts_monomials() {
        for n in 1..=8usize {
            for t in 0..=10u32 {
                assert_eq!(
                    e_t(&qs(&vec![1; n]), t),
                    BigRational::from_integer(binomial(n + t as usize - 1, t as usize))
                );
            }
        }
    }

    #[test]
    fn arbitrary_simplex_examples() {
        let s = simplex(&[&[1, 1], &[2, 1], &[1, 2]]);
        let r = integrate_simplex(&s, &parse("x1", 2).unwrap()).unwrap();
        assert_eq!(r.exact_value(), Some(&q(2, 3)));

        let s = simplex(&[&[0, 0], &[2, 0], &[0, 2]]);
        let r = integrate_simplex(&s, &Polynomial::one(2)).unwrap();
        assert_eq!(r.exact_value(), Some(&q(2, 1)));

        let f = parse("3*x1^2*x2 - x2 + (1/7)", 2).unwrap();
        let canonical = Simplex::canonical(2).unwrap();
        assert_eq!(
            integrate_simplex(&canonical, &f).unwrap().exact_value(),
            integrate_canonical_exact(&f).exact_value()
        );
        let xi = integrate_simplex_xi(&s, &f).unwrap();
        let exact = integrate_simplex(&s, &f).unwrap();
        assert!(agrees_within(xi.approx(), exact.exact_value().unwrap(), 1e-12));
    }

    #[test]
    fn simplex_points_lie_on_segment() {
        let s = simplex(&[&[1, 1], &[3, 1], &[1, 3]]);
        let pts = simplex_evaluation_points(&s, 2);
        // ψ_1 = M ξ_1 + a = (1,1) + 2·(1/3, 1/3)
        assert!((pts[0][0] - (1.0 + 2.0 / 3.0)).abs() < 1e-15);
        assert!((pts[1][1] - (1.0 + 2.0 / 12f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn waring_examples() {
        let canonical = Simplex::canonical(2).unwrap();
        let single = WaringDecomposition::new(vec![WaringTerm { sign: Sign::Plus, c: qs(&[1, 2]) }], 2);
        assert_eq!(integrate_waring(&canonical, &single).unwrap().exact_value(), Some(&q(7, 12)));

        let s = simplex(&[&[1, -1], &[3, 2], &[0, 5]]);
        for t in 0..5 {
            let cancel = WaringDecomposition::new(
                vec![
                    WaringTerm { sign: Sign::Plus, c: qs(&[2, -3]) },
                    WaringTerm { sign: Sign::Minus, c: qs(&[2, -3]) },
                ],
                t,
            );
            assert_eq!(integrate_waring(&s, &cancel).unwrap().exact_value(), Some(&q(0, 1)));
        }

        let s = simplex(&[&[0, 0], &[2, 0], &[0, 2]]);
        let x1 = WaringDecomposition::new(vec![WaringTerm { sign: Sign::Plus, c: qs(&[1, 0]) }], 1);
        assert_eq!(integrate_waring(&s, &x1).unwrap().exact_value(), Some(&q(4, 3)));
    }

    #[test]
    fn waring_parse() {
        let w = WaringDecomposition::parse("+1 1 2\n-1 1/2 0\n", 3).unwrap();
        assert_eq!(w.terms().len(), 2);
        assert_eq!(w.terms()[1].sign, Sign::Minus);
        assert_eq!(w.power(), 3);
        assert!(WaringDecomposition::parse("2 1 2\n", 3).is_err());
        assert!(WaringDecomposition::parse("1 1 2\n1 1\n", 3).is_err());
        assert!(WaringDecomposition::parse("", 3).is_err());
    }

    #[test]
    fn real_exponent_examples() {
        let f = RealExponentSum::new(1, vec![RealTerm { coefficient: 1.0, alpha: vec![-0.5] }]).unwrap();
        let r = integrate_real_exponents(&f);
        assert_eq!(r.mode(), IntegrationMode::GammaWeighted);
        assert!((r.approx() - 2.0).abs() / 2.0 < 1e-12);
        let xi = integrate_real_exponents_xi(&f).unwrap();
        assert!((xi.approx() - 2.0).abs() < 1e-12);

        let f = RealExponentSum::new(2, vec![RealTerm { coefficient: 1.0, alpha: vec![0.5, 0.5] }]).unwrap();
        let expected = std::f64::consts::PI / 24.0;
        assert!((integrate_real_exponents(&f).approx() - expected).abs() / expected < 1e-12);

        let f = RealExponentSum::from_homogeneous(&parse("x1*x2", 2).unwrap()).unwrap();
        assert!((integrate_real_exponents(&f).approx() - 1.0 / 24.0).abs() * 24.0 < 1e-12);
    }

    #[test]
    fn real_exponent_validation() {
        let bad = RealExponentSum::new(2, vec![RealTerm { coefficient: 1.0, alpha: vec![-1.0, 2.0] }]);
        assert!(matches!(bad, Err(IntegrateError::ExponentTooSmall { index: 0, .. })));
        let mixed = RealExponentSum::new(
            2,
            vec![
                RealTerm { coefficient: 1.0, alpha: vec![0.5, 0.5] },
                RealTerm { coefficient: 1.0, alpha: vec![0.5, 1.5] },
            ],
        );
        assert!(matches!(mixed, Err(IntegrateError::MixedDegrees { term: 1, .. })));
        let ok = RealExponentSum::parse("2 0.1 0.2\n-1 0.3 0\n", None).unwrap();
        assert_eq!(ok.dimension(), 2);
        let zero_degree = RealExponentSum::parse("1 0.5 -0.5\n", Some(2)).unwrap();
        assert_eq!(integrate_real_exponents_xi(&zero_degree), Err(IntegrateError::NotApplicable));
        // Γ(3/2)Γ(1/2)/Γ(3) = π/4
        let r = integrate_real_exponents(&zero_degree).approx();
        assert!((r - std::f64::consts::PI / 4.0).abs() < 1e-13);
        assert!(RealExponentSum::parse("1 0.5\n1 0.5 0.5\n", None).is_err());
        assert!(RealExponentSum::parse("1 1/2 abc\n", None).is_err());
    }

    #[test]
    fn laplace_examples() {
        let (l, r) = laplace_identity_check(&ExponentVector::new(vec![0]), &ScaledSimplex::new(qs(&[1])).unwrap()).unwrap();
        assert_eq!((l, r), (q(1, 1), q(1, 1)));
        let (l, r) =
            laplace_identity_check(&ExponentVector::new(vec![1, 1]), &ScaledSimplex::new(qs(&[1, 1])).unwrap()).unwrap();
        assert_eq!((l, r), (q(1, 1), q(1, 1)));
        let (l, r) =
            laplace_identity_check(&ExponentVector::new(vec![2, 0]), &ScaledSimplex::new(qs(&[1, 2])).unwrap()).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn batch_matches_serial() {
        let polys: Vec<Polynomial> = (0..17)
            .map(|k| parse(&format!("{k}*x1^{} - x2*x3 + 1", k % 4), 3).unwrap())
            .collect();
        let batch = integrate_canonical_exact_batch(&polys);
        let serial: Vec<_> = polys.iter().map(integrate_canonical_exact).collect();
        assert_eq!(batch, serial);
    }

    fn arb_poly(max_n: usize, max_exp: u32) -> impl Strategy<Value = Polynomial> {
        (1..=max_n).prop_flat_map(move |n| {
            prop::collection::vec((prop::collection::vec(0..=max_exp, n), -9i64..=9, 1i64..=5), 0..7).prop_map(
                move |terms| {
                    Polynomial::from_terms(n, terms.into_iter().map(|(e, a, b)| (ExponentVector::new(e), q(a, b))))
                },
            )
        })
    }

    proptest! {
        #[test]
        fn exact_path_matches_dirichlet(f in arb_poly(4, 4)) {
            prop_assert_eq!(integrate_canonical_exact(&f).into_exact().unwrap(), dirichlet_integral(&f));
        }

        #[test]
        fn linearity(f in arb_poly(3, 3), a in -7i64..7, b in 1i64..5) {
            let g = parse("x1 - 2", f.dimension()).unwrap();
            let k = q(a, b);
            let lhs = integrate_canonical_exact(&(&f.scale(&k) + &g)).into_exact().unwrap();
            let rhs = k * integrate_canonical_exact(&f).into_exact().unwrap()
                + integrate_canonical_exact(&g).into_exact().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn scaling_law(f in arb_poly(3, 3), num in 1i64..9, den in 1i64..9, deg in 0u32..4) {
            // keep only the degree-`deg` part so f is homogeneous
            let parts = f.homogeneous_parts();
            let h = parts.get(deg as usize).map(|p| p.body().clone()).unwrap_or_else(|| Polynomial::zero(f.dimension()));
            let n = h.dimension();
            let lambda = q(num, den);
            let z = ScaledSimplex::new(vec![lambda.recip(); n]).unwrap();
            let lhs = integrate_scaled(&h, &z).unwrap().into_exact().unwrap();
            let rhs = num_traits::pow(lambda, n + deg as usize) * integrate_canonical_exact(&h).into_exact().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn real_path_matches_exact_on_integer_exponents(f in arb_poly(4, 4), deg in 0u32..6) {
            let parts = f.homogeneous_parts();
            if let Some(part) = parts.get(deg as usize) {
                let h = part.body();
                let real = RealExponentSum::from_homogeneous(h).unwrap();
                let exact = integrate_canonical_exact(h).into_exact().unwrap();
                let e = rational_to_f64(&exact);
                let got = integrate_real_exponents(&real).approx();
                let scale: f64 = h.terms().map(|(a, c)| (rational_to_f64(c) * rational_to_f64(&dirichlet(a.as_slice()))).abs()).sum();
                prop_assert!((got - e).abs() <= 1e-12 * scale.max(e.abs()), "got {} expected {}", got, e);
            }
        }
    }
}
