//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Polynomial`] maps dense exponent vectors to non-zero [`BigRational`]
//! coefficients. Terms are kept in graded order (total degree ascending, then
//! lexicographically descending within a degree), so iteration and printing
//! are deterministic.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use parse::{parse, ParseError};

use crate::numeric::factorial;

/// Exponent vector `α ∈ N^n`, stored densely.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    pub fn zero(dimension: usize) -> Self {
        ExponentVector(vec![0; dimension])
    }

    /// The exponent vector of the single variable `x_{index+1}`.
    pub fn unit(dimension: usize, index: usize) -> Self {
        let mut e = vec![0; dimension];
        e[index] = 1;
        ExponentVector(e)
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|α| = Σ α_i`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// `α_1! ··· α_n!`
    pub fn factorial_product(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &a| acc * factorial(a as usize))
    }

    fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `dimension` variables with rational coefficients.
///
/// Zero coefficients are never stored. The zero polynomial has an empty term
/// map and degree 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    dimension: usize,
    terms: BTreeMap<ExponentVector, BigRational>,
}

impl Polynomial {
    pub fn zero(dimension: usize) -> Self {
        assert!(dimension >= 1, "polynomial dimension must be at least 1");
        Polynomial {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dimension: usize, c: BigRational) -> Self {
        Self::monomial(dimension, ExponentVector::zero(dimension), c)
    }

    pub fn one(dimension: usize) -> Self {
        Self::constant(dimension, BigRational::one())
    }

    /// `x_{index+1}`
    pub fn variable(dimension: usize, index: usize) -> Self {
        Self::monomial(dimension, ExponentVector::unit(dimension, index), BigRational::one())
    }

    pub fn monomial(dimension: usize, alpha: ExponentVector, c: BigRational) -> Self {
        let mut p = Self::zero(dimension);
        p.add_term(alpha, c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, combining
    /// repeated exponents and dropping zeros.
    ///
    /// Panics if an exponent vector does not have length `dimension`.
    pub fn from_terms<I>(dimension: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, BigRational)>,
    {
        let mut p = Self::zero(dimension);
        for (alpha, c) in terms {
            p.add_term(alpha, c);
        }
        p
    }

    /// Adds `c·x^alpha` in place.
    pub fn add_term(&mut self, alpha: ExponentVector, c: BigRational) {
        assert_eq!(
            alpha.dimension(),
            self.dimension,
            "exponent vector length does not match polynomial dimension"
        );
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&alpha) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&alpha);
                }
            }
            None => {
                self.terms.insert(alpha, c);
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, ExponentVector::degree)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &ExponentVector) -> BigRational {
        self.terms.get(alpha).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(ExponentVector::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Splits into homogeneous parts `f_0, ..., f_t`, one per degree.
    /// Degrees with no terms yield zero polynomials.
    pub fn homogeneous_parts(&self) -> Vec<HomogeneousPart> {
        let t = self.degree() as usize;
        let mut parts: Vec<Polynomial> = (0..=t).map(|_| Polynomial::zero(self.dimension)).collect();
        for (alpha, c) in &self.terms {
            parts[alpha.degree() as usize]
                .terms
                .insert(alpha.clone(), c.clone());
        }
        parts
            .into_iter()
            .enumerate()
            .map(|(j, body)| HomogeneousPart {
                degree: j as u32,
                body,
            })
            .collect()
    }

    /// The Bombieri-type polynomial: every coefficient `f_α` is multiplied by
    /// `α_1!···α_n!`. Support is unchanged.
    pub fn bombieri(&self) -> Polynomial {
        self.map_coefficients(|alpha, c| c * BigRational::from_integer(alpha.factorial_product()))
    }

    /// Inverse of [`Polynomial::bombieri`].
    pub fn inverse_bombieri(&self) -> Polynomial {
        self.map_coefficients(|alpha, c| c / BigRational::from_integer(alpha.factorial_product()))
    }

    fn map_coefficients<F>(&self, f: F) -> Polynomial
    where
        F: Fn(&ExponentVector, &BigRational) -> BigRational,
    {
        Polynomial {
            dimension: self.dimension,
            terms: self
                .terms
                .iter()
                .map(|(alpha, c)| (alpha.clone(), f(alpha, c)))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero(self.dimension);
        }
        self.map_coefficients(|_, c| c * k)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.dimension, "point dimension mismatch");
        let powers = PowerTable::new(point, self.degree());
        self.terms
            .iter()
            .map(|(alpha, c)| {
                alpha
                    .as_slice()
                    .iter()
                    .enumerate()
                    .fold(c.clone(), |acc, (i, &a)| acc * powers.get(i, a))
            })
            .fold(BigRational::zero(), |acc, v| acc + v)
    }

    /// Floating-point evaluation. Coefficients are rounded to `f64` once.
    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.dimension, "point dimension mismatch");
        self.terms
            .iter()
            .map(|(alpha, c)| {
                let mono: f64 = alpha
                    .as_slice()
                    .iter()
                    .zip(point)
                    .map(|(&a, &x)| x.powi(a as i32))
                    .product();
                rational_to_f64(c) * mono
            })
            .sum()
    }

    /// Sum of all coefficients, i.e. the value at `e = (1, ..., 1)`.
    pub fn coefficient_sum(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(self.dimension);
        for _ in 0..k {
            result = &result * self;
        }
        result
    }
}

/// Every exponent vector in `n` variables with `|α| ≤ max_degree`, in
/// graded order. There are `C(n + max_degree, n)` of them.
pub fn monomials_up_to(n: usize, max_degree: u32) -> Vec<ExponentVector> {
    fn rec(prefix: &mut Vec<u32>, remaining_vars: usize, budget: u32, out: &mut Vec<ExponentVector>) {
        if remaining_vars == 0 {
            out.push(ExponentVector::new(prefix.clone()));
            return;
        }
        for a in 0..=budget {
            prefix.push(a);
            rec(prefix, remaining_vars - 1, budget - a, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), n, max_degree, &mut out);
    out.sort();
    out
}

/// Precomputed powers `x_i^k` for `k ≤ max_degree`.
struct PowerTable {
    rows: Vec<Vec<BigRational>>,
}

impl PowerTable {
    fn new(point: &[BigRational], max_degree: u32) -> Self {
        let rows = point
            .iter()
            .map(|x| {
                let mut row = Vec::with_capacity(max_degree as usize + 1);
                row.push(BigRational::one());
                for k in 1..=max_degree as usize {
                    let next = &row[k - 1] * x;
                    row.push(next);
                }
                row
            })
            .collect();
        PowerTable { rows }
    }

    fn get(&self, var: usize, exp: u32) -> &BigRational {
        &self.rows[var][exp as usize]
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(if r.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// The degree-`j` slice of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPart {
    degree: u32,
    body: Polynomial,
}

impl HomogeneousPart {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn body(&self) -> &Polynomial {
        &self.body
    }

    pub fn into_body(self) -> Polynomial {
        self.body
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.dimension, rhs.dimension, "dimension mismatch");
        let mut out = self.clone();
        for (alpha, c) in &rhs.terms {
            out.add_term(alpha.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.map_coefficients(|_, c| -c)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.dimension, rhs.dimension, "dimension mismatch");
        let mut out = Polynomial::zero(self.dimension);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

/// Prints in the same grammar [`parse`] accepts, e.g. `(1/2)*x1^3 - x2`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (alpha, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            let is_constant = alpha.degree() == 0;
            if is_constant || !magnitude.is_one() {
                if magnitude.is_integer() {
                    write!(f, "{}", magnitude.numer())?;
                } else {
                    write!(f, "({}/{})", magnitude.numer(), magnitude.denom())?;
                }
                if !is_constant {
                    f.write_str("*")?;
                }
            }
            let mut first = true;
            for (var, &e) in alpha.as_slice().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "x{}", var + 1)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn example_one() -> Polynomial {
        parse("x1 + x1*x2 + x2^2", 2).unwrap()
    }

    #[test]
    fn homogeneous_parts_of_example() {
        let parts = example_one().homogeneous_parts();
        assert_eq!(parts.len(), 3);
        assert!(parts[0].body().is_zero());
        assert_eq!(parts[1].body(), &parse("x1", 2).unwrap());
        assert_eq!(parts[2].body(), &parse("x1*x2 + x2^2", 2).unwrap());
        assert!(parts.iter().all(|p| p.body().is_homogeneous()));
    }

    #[test]
    fn homogeneous_parts_of_constant_and_zero() {
        let five = Polynomial::constant(3, q(5, 1));
        let parts = five.homogeneous_parts();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].body(), &five);

        let parts = Polynomial::zero(2).homogeneous_parts();
        assert_eq!(parts.len(), 1);
        assert!(parts[0].body().is_zero());
    }

    #[test]
    fn homogeneous_parts_of_form() {
        let f = parse("x1^2*x2 + x1^3", 2).unwrap();
        let parts = f.homogeneous_parts();
        assert_eq!(parts.len(), 4);
        assert!(parts[..3].iter().all(|p| p.body().is_zero()));
        assert_eq!(parts[3].body(), &f);
    }

    #[test]
    fn bombieri_of_example() {
        let hat = example_one().bombieri();
        assert_eq!(hat, parse("x1 + x1*x2 + 2*x2^2", 2).unwrap());
    }

    #[test]
    fn bombieri_factorials() {
        let f = parse("3*x1^2*x2^3", 2).unwrap();
        assert_eq!(f.bombieri().coefficient(&ev(&[2, 3])), q(36, 1));
        let multilinear = parse("x1*x2*x3 - 4*x2 + (2/3)*x1*x3 + 7", 3).unwrap();
        assert_eq!(multilinear.bombieri(), multilinear);
    }

    #[test]
    fn evaluate_float_at_second_point() {
        let f = parse("x1*x2 + 2*x2^2", 2).unwrap();
        let s = 1.0 / 12f64.sqrt();
        assert!((f.evaluate_f64(&[s, s]) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn evaluate_at_origin_is_constant_term() {
        let f = parse("(3/4) + x1 - x2^3", 2).unwrap();
        assert_eq!(f.evaluate(&[q(0, 1), q(0, 1)]), q(3, 4));
        assert_eq!(f.evaluate_f64(&[0.0, 0.0]), 0.75);
    }

    #[test]
    fn evaluate_exact() {
        let f = parse("x1 + x2", 2).unwrap();
        assert_eq!(f.evaluate(&[q(1, 1), q(1, 1)]), q(2, 1));
    }

    #[test]
    fn zero_polynomial_has_degree_zero() {
        let z = Polynomial::zero(4);
        assert_eq!(z.degree(), 0);
        assert!(z.is_empty());
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn cancellation_removes_terms() {
        let f = parse("x1 - x1 + x2", 2).unwrap();
        assert_eq!(f.len(), 1);
        let g = &f - &f;
        assert!(g.is_zero());
    }

    #[test]
    fn graded_order_printing() {
        let f = parse("x2^2 + x1*x2 + x1", 2).unwrap();
        assert_eq!(f.to_string(), "x1 + x1*x2 + x2^2");
        let g = parse("-x2 + (1/2)*x1^3", 2).unwrap();
        assert_eq!(g.to_string(), "-x2 + (1/2)*x1^3");
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_up_to(6, 10).len(), 8008);
        assert_eq!(monomials_up_to(1, 0), vec![ev(&[0])]);
        let m = monomials_up_to(2, 2);
        assert_eq!(m, [ev(&[0, 0]), ev(&[1, 0]), ev(&[0, 1]), ev(&[2, 0]), ev(&[1, 1]), ev(&[0, 2])]);
    }

    #[test]
    fn multiplication_expands() {
        let f = parse("x1 + x2", 2).unwrap();
        assert_eq!(f.pow(2), parse("x1^2 + 2*x1*x2 + x2^2", 2).unwrap());
    }
}
