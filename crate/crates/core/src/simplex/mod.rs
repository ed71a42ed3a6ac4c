//! Simplex geometry: the canonical simplex `Δ`, scaled simplices `Δ_z`,
//! vertex-defined simplices and the evaluation points `ξ_j`.
//!
//! A vertex-defined simplex with vertices `v_0, ..., v_n` carries the edge
//! matrix `M = [v_1 - v_0 | ... | v_n - v_0]`, its exact inverse `A = M⁻¹`
//! and `det M`. The map `y = A(x - v_0)` sends the simplex onto `Δ`, and
//! `x = M y + v_0` goes back.

mod linalg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use linalg::RationalMatrix;

use crate::numeric::{factorial, parse_rational, rising_product};
use crate::poly::{ExponentVector, Polynomial};
use crate::specialfn;

/// Largest supported ambient dimension.
pub const MAX_DIMENSION: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("degenerate simplex: edge matrix {matrix} is singular")]
    Degenerate { matrix: RationalMatrix },
    #[error("a simplex in R^{dimension} needs {expected} vertices, got {found}")]
    VertexCount {
        dimension: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {index} has {found} coordinates, expected {expected}")]
    CoordinateCount {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension {0} is outside the supported range 1..={max}", max = MAX_DIMENSION)]
    Dimension(usize),
    #[error("scaling vector entry {index} is {value}; all entries must be positive")]
    NonPositiveScale { index: usize, value: BigRational },
    #[error("vertex file line {line}: {message}")]
    VertexFile { line: usize, message: String },
    #[error("evaluation point for degree {0} is undefined")]
    UndefinedPoint(f64),
}

fn check_dimension(n: usize) -> Result<(), SimplexError> {
    if n == 0 || n > MAX_DIMENSION {
        Err(SimplexError::Dimension(n))
    } else {
        Ok(())
    }
}

/// `Δ = {x ≥ 0 : eᵀx ≤ 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalSimplex {
    dimension: usize,
}

impl CanonicalSimplex {
    pub fn new(dimension: usize) -> Result<Self, SimplexError> {
        check_dimension(dimension)?;
        Ok(CanonicalSimplex { dimension })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `1/n!`
    pub fn volume(&self) -> BigRational {
        BigRational::new(BigInt::one(), factorial(self.dimension))
    }

    /// The origin followed by the unit vectors.
    pub fn vertices(&self) -> Vec<Vec<BigRational>> {
        let n = self.dimension;
        std::iter::once(vec![BigRational::zero(); n])
            .chain((0..n).map(|i| {
                (0..n)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            }))
            .collect()
    }

    pub fn to_simplex(&self) -> Simplex {
        Simplex::from_vertices(self.vertices()).expect("canonical simplex is non-degenerate")
    }
}

/// `Δ_z = {x ≥ 0 : zᵀx ≤ 1}` for a positive weight vector `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledSimplex {
    z: Vec<BigRational>,
}

impl ScaledSimplex {
    pub fn new(z: Vec<BigRational>) -> Result<Self, SimplexError> {
        check_dimension(z.len())?;
        if let Some((index, value)) = z.iter().enumerate().find(|(_, v)| !v.is_positive()) {
            return Err(SimplexError::NonPositiveScale {
                index,
                value: value.clone(),
            });
        }
        Ok(ScaledSimplex { z })
    }

    pub fn dimension(&self) -> usize {
        self.z.len()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.z
    }

    /// `1/(n!·z_1···z_n)`
    pub fn volume(&self) -> BigRational {
        let prod = self.z.iter().fold(BigRational::one(), |acc, z| acc * z);
        BigRational::new(BigInt::one(), factorial(self.dimension())) / prod
    }
}

/// A full-dimensional simplex in `R^n` given by `n + 1` rational vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: Vec<Vec<BigRational>>,
    edges: RationalMatrix,
    inverse: RationalMatrix,
    determinant: BigRational,
}

impl Simplex {
    pub fn from_vertices(vertices: Vec<Vec<BigRational>>) -> Result<Self, SimplexError> {
        let n = vertices.first().map_or(0, Vec::len);
        check_dimension(n)?;
        if vertices.len() != n + 1 {
            return Err(SimplexError::VertexCount {
                dimension: n,
                expected: n + 1,
                found: vertices.len(),
            });
        }
        if let Some((index, v)) = vertices.iter().enumerate().find(|(_, v)| v.len() != n) {
            return Err(SimplexError::CoordinateCount {
                index,
                expected: n,
                found: v.len(),
            });
        }
        let base = &vertices[0];
        let mut edges = RationalMatrix::zeros(n);
        for (col, v) in vertices[1..].iter().enumerate() {
            for row in 0..n {
                edges.set(row, col, &v[row] - &base[row]);
            }
        }
        let (determinant, inverse) = edges.determinant_and_inverse();
        let Some(inverse) = inverse else {
            return Err(SimplexError::Degenerate { matrix: edges });
        };
        Ok(Simplex {
            vertices,
            edges,
            inverse,
            determinant,
        })
    }

    pub fn canonical(dimension: usize) -> Result<Self, SimplexError> {
        Ok(CanonicalSimplex::new(dimension)?.to_simplex())
    }

    /// Parses the vertex file format: one vertex per line, whitespace
    /// separated rational coordinates. Blank lines and `#` comments are
    /// skipped.
    pub fn parse_vertex_file(text: &str) -> Result<Self, SimplexError> {
        let mut vertices = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let coords = line
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| SimplexError::VertexFile {
                    line: lineno + 1,
                    message: e.to_string(),
                })?;
            vertices.push(coords);
        }
        if vertices.is_empty() {
            return Err(SimplexError::VertexFile {
                line: 0,
                message: "no vertices".into(),
            });
        }
        Self::from_vertices(vertices)
    }

    pub fn dimension(&self) -> usize {
        self.edges.size()
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    /// The base vertex `a = v_0`.
    pub fn base_point(&self) -> &[BigRational] {
        &self.vertices[0]
    }

    /// `M`, whose columns are `v_i - v_0`.
    pub fn edge_matrix(&self) -> &RationalMatrix {
        &self.edges
    }

    /// `A = M⁻¹`.
    pub fn inverse_map(&self) -> &RationalMatrix {
        &self.inverse
    }

    pub fn determinant(&self) -> &BigRational {
        &self.determinant
    }

    /// `|det M|`
    pub fn jacobian(&self) -> BigRational {
        self.determinant.abs()
    }

    /// `|det M| / n!`
    pub fn volume(&self) -> BigRational {
        self.jacobian() / BigRational::from_integer(factorial(self.dimension()))
    }

    /// `y = A(x - a)`
    pub fn to_canonical(&self, x: &[BigRational]) -> Vec<BigRational> {
        let shifted: Vec<BigRational> = x.iter().zip(self.base_point()).map(|(x, a)| x - a).collect();
        self.inverse.mul_vec(&shifted)
    }

    /// `x = M y + a`
    pub fn from_canonical(&self, y: &[BigRational]) -> Vec<BigRational> {
        self.edges
            .mul_vec(y)
            .into_iter()
            .zip(self.base_point())
            .map(|(v, a)| v + a)
            .collect()
    }

    /// Floating-point `x = M y + a`.
    pub fn from_canonical_f64(&self, y: &[f64]) -> Vec<f64> {
        let n = self.dimension();
        (0..n)
            .map(|i| {
                let base = self.base_point()[i].to_f64().unwrap_or(f64::NAN);
                self.edges
                    .row(i)
                    .iter()
                    .zip(y)
                    .fold(base, |acc, (m, y)| acc + m.to_f64().unwrap_or(f64::NAN) * y)
            })
            .collect()
    }

    /// The pulled-back integrand `g(y) = f(M y + a)`, expanded.
    pub fn pullback(&self, f: &Polynomial) -> Polynomial {
        let n = self.dimension();
        assert_eq!(f.dimension(), n, "polynomial and simplex dimensions differ");
        // x_i as a polynomial in y
        let substitutions: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut p = Polynomial::constant(n, self.base_point()[i].clone());
                for j in 0..n {
                    p.add_term(ExponentVector::unit(n, j), self.edges.get(i, j).clone());
                }
                p
            })
            .collect();
        let mut max_exp = vec![0u32; n];
        for (alpha, _) in f.terms() {
            for (m, &a) in max_exp.iter_mut().zip(alpha.as_slice()) {
                *m = (*m).max(a);
            }
        }
        let powers: Vec<Vec<Polynomial>> = substitutions
            .iter()
            .zip(&max_exp)
            .map(|(s, &m)| {
                let mut row = vec![Polynomial::one(n)];
                for k in 1..=m as usize {
                    let next = &row[k - 1] * s;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut g = Polynomial::zero(n);
        for (alpha, c) in f.terms() {
            let mut term = Polynomial::constant(n, c.clone());
            for (i, &a) in alpha.as_slice().iter().enumerate() {
                if a > 0 {
                    term = &term * &powers[i][a as usize];
                }
            }
            g = &g + &term;
        }
        g
    }
}

/// Degree attached to an evaluation point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointDegree {
    Integer(u32),
    Real(f64),
}

/// The point `ξ = e/θ` on the segment from the origin to `e/n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationPoint {
    degree: PointDegree,
    theta: f64,
    theta_power: Option<BigInt>,
    point: Vec<f64>,
}

impl EvaluationPoint {
    pub fn degree(&self) -> PointDegree {
        self.degree
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Exact `θ^j = (n+1)···(n+j)` for integer degrees.
    pub fn theta_power(&self) -> Option<&BigInt> {
        self.theta_power.as_ref()
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }
}

/// `ξ_j = e / ((n+1)···(n+j))^{1/j}`.
///
/// Panics if `n == 0` or `j == 0`.
pub fn evaluation_point(n: usize, j: u32) -> EvaluationPoint {
    assert!(n >= 1 && j >= 1, "evaluation points need n >= 1 and j >= 1");
    let product = rising_product(n, n + j as usize);
    let theta = match product.to_f64() {
        Some(p) if p.is_finite() => p.powf(1.0 / j as f64),
        _ => {
            let log_sum: f64 = (n + 1..=n + j as usize).map(|k| (k as f64).ln()).sum();
            (log_sum / j as f64).exp()
        }
    };
    EvaluationPoint {
        degree: PointDegree::Integer(j),
        theta,
        theta_power: Some(product),
        point: vec![1.0 / theta; n],
    }
}

/// `ξ_t = e/θ` with `θ^t = Γ(1+n+t)/Γ(1+n)`, for real `t > -(1+n)`, `t ≠ 0`.
pub fn evaluation_point_real(n: usize, t: f64) -> Result<EvaluationPoint, SimplexError> {
    check_dimension(n)?;
    if t == 0.0 || !t.is_finite() || t <= -(1.0 + n as f64) {
        return Err(SimplexError::UndefinedPoint(t));
    }
    let log_ratio = specialfn::log_gamma(1.0 + n as f64 + t).map_err(|_| SimplexError::UndefinedPoint(t))?
        - specialfn::log_gamma(1.0 + n as f64).expect("n >= 1");
    let theta = (log_ratio / t).exp();
    Ok(EvaluationPoint {
        degree: PointDegree::Real(t),
        theta,
        theta_power: None,
        point: vec![1.0 / theta; n],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn verts(v: &[&[i64]]) -> Vec<Vec<BigRational>> {
        v.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect()
    }

    #[test]
    fn example_points() {
        let xi1 = evaluation_point(2, 1);
        assert_eq!(xi1.point(), &[1.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(xi1.theta_power(), Some(&BigInt::from(3)));
        let xi2 = evaluation_point(2, 2);
        let expected = 1.0 / 12f64.sqrt();
        for &c in xi2.point() {
            assert!((c - expected).abs() < 1e-15);
        }
        assert_eq!(xi2.theta_power(), Some(&BigInt::from(12)));
        assert_eq!(evaluation_point(1, 1).point(), &[0.5]);
    }

    #[test]
    fn real_points() {
        let p = evaluation_point_real(1, 1.0).unwrap();
        assert!((p.theta() - 2.0).abs() < 1e-13);
        let p = evaluation_point_real(2, 2.0).unwrap();
        assert!((p.theta() - 12f64.sqrt()).abs() < 1e-12);
        let p = evaluation_point_real(1, -0.5).unwrap();
        assert!((p.theta() - 4.0 / std::f64::consts::PI).abs() < 1e-13);
        assert!(evaluation_point_real(2, 0.0).is_err());
        assert!(evaluation_point_real(2, -3.0).is_err());
    }

    #[test]
    fn theta_power_matches_product() {
        for n in 1..=8 {
            for j in 1..=20u32 {
                let p = evaluation_point(n, j);
                let exact = p.theta_power().unwrap().to_f64().unwrap();
                let rel = (p.theta().powi(j as i32) - exact).abs() / exact;
                assert!(rel < 1e-14, "n={n} j={j} rel={rel}");
                assert!(p.point().iter().all(|&c| c == p.point()[0]));
                // strictly inside Δ
                assert!(p.point()[0] > 0.0 && n as f64 * p.point()[0] < 1.0);
            }
        }
    }

    #[test]
    fn canonical_vertices() {
        let s = Simplex::from_vertices(verts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(s.base_point(), &[q(0, 1), q(0, 1)]);
        assert_eq!(s.edge_matrix(), &RationalMatrix::identity(2));
        assert_eq!(s.volume(), q(1, 2));
        assert_eq!(CanonicalSimplex::new(3).unwrap().volume(), q(1, 6));
    }

    #[test]
    fn translated_and_scaled() {
        let s = Simplex::from_vertices(verts(&[&[1, 1], &[2, 1], &[1, 2]])).unwrap();
        assert_eq!(s.base_point(), &[q(1, 1), q(1, 1)]);
        assert_eq!(s.edge_matrix(), &RationalMatrix::identity(2));
        assert_eq!(s.volume(), q(1, 2));

        let s = Simplex::from_vertices(verts(&[&[0, 0], &[2, 0], &[0, 2]])).unwrap();
        assert_eq!(s.determinant(), &q(4, 1));
        assert_eq!(s.volume(), q(2, 1));
    }

    #[test]
    fn degenerate_is_error() {
        let err = Simplex::from_vertices(verts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap_err();
        assert!(matches!(err, SimplexError::Degenerate { .. }));
        assert!(err.to_string().contains("[1 2; 1 2]"));
    }

    #[test]
    fn wrong_shapes() {
        assert!(matches!(
            Simplex::from_vertices(verts(&[&[0, 0], &[1, 0]])),
            Err(SimplexError::VertexCount { expected: 3, found: 2, .. })
        ));
        assert!(matches!(
            Simplex::from_vertices(verts(&[&[0, 0], &[1, 0], &[1]])),
            Err(SimplexError::CoordinateCount { index: 2, .. })
        ));
        assert!(matches!(Simplex::from_vertices(vec![]), Err(SimplexError::Dimension(0))));
    }

    #[test]
    fn scaled_simplex_rejects_non_positive() {
        assert!(ScaledSimplex::new(vec![q(1, 1), q(0, 1)]).is_err());
        assert!(ScaledSimplex::new(vec![q(-1, 2)]).is_err());
        assert_eq!(ScaledSimplex::new(vec![q(2, 1), q(2, 1)]).unwrap().volume(), q(1, 8));
    }

    #[test]
    fn vertex_file() {
        let s = Simplex::parse_vertex_file("# triangle\n3/2 0\n\n 5/2 0 \n3/2 1\n").unwrap();
        assert_eq!(s.dimension(), 2);
        assert_eq!(s.volume(), q(1, 2));
        assert!(matches!(
            Simplex::parse_vertex_file("0 0\n1 x\n0 1\n"),
            Err(SimplexError::VertexFile { line: 2, .. })
        ));
        assert!(matches!(
            Simplex::parse_vertex_file("0 0\n1 0\n"),
            Err(SimplexError::VertexCount { .. })
        ));
    }

    #[test]
    fn pullback_examples() {
        let s = Simplex::from_vertices(verts(&[&[1, 1], &[2, 1], &[1, 2]])).unwrap();
        assert_eq!(s.pullback(&parse("x1", 2).unwrap()), parse("x1 + 1", 2).unwrap());

        let canonical = Simplex::canonical(3).unwrap();
        let f = parse("x1^2*x3 - (2/5)*x2 + 7", 3).unwrap();
        assert_eq!(canonical.pullback(&f), f);

        let s = Simplex::from_vertices(verts(&[&[0, 0], &[2, 0], &[0, 2]])).unwrap();
        assert_eq!(s.pullback(&parse("x1*x2", 2).unwrap()), parse("4*x1*x2", 2).unwrap());
    }

    fn arb_simplex(n: usize) -> impl Strategy<Value = Simplex> {
        prop::collection::vec((-5i64..=5, 1i64..=3), (n + 1) * n)
            .prop_filter_map("degenerate", move |v| {
                let vs = v
                    .chunks(n)
                    .map(|r| r.iter().map(|&(a, b)| q(a, b)).collect())
                    .collect();
                Simplex::from_vertices(vs).ok()
            })
    }

    proptest! {
        #[test]
        fn pullback_agrees_at_vertices(s in (1usize..=3).prop_flat_map(arb_simplex),
                                       coeffs in prop::collection::vec(-5i64..=5, 10)) {
            let n = s.dimension();
            let f = Polynomial::from_terms(n, coeffs.iter().enumerate().map(|(k, &c)| {
                let mut e = vec![0u32; n];
                e[k % n] = (k / n) as u32 % 3;
                e[(k + 1) % n] += (k % 2) as u32;
                (ExponentVector::new(e), q(c, 1))
            }));
            let g = s.pullback(&f);
            if !f.is_zero() {
                prop_assert_eq!(g.degree(), f.degree());
            }
            let canonical = CanonicalSimplex::new(n).unwrap().vertices();
            for (v, u) in s.vertices().iter().zip(&canonical) {
                prop_assert_eq!(f.evaluate(v), g.evaluate(u));
                prop_assert_eq!(&s.to_canonical(v), u);
                prop_assert_eq!(&s.from_canonical(u), v);
            }
        }

        #[test]
        fn volume_is_invariant_under_relabeling(s in arb_simplex(3)) {
            let vol = s.volume();
            let vs = s.vertices().to_vec();
            for perm in permutations(vs.len()) {
                let permuted = perm.iter().map(|&i| vs[i].clone()).collect();
                prop_assert_eq!(Simplex::from_vertices(permuted).unwrap().volume(), vol.clone());
            }
        }
    }

    pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
}
