//! Integration of polynomials over simplices by evaluating Bombieri-type
//! polynomials at a handful of points.
//!
//! For `f = Σ_j f_j` (homogeneous parts) on the canonical simplex
//! `Δ = {x ≥ 0, Σ x_i ≤ 1}`:
//!
//! ```text
//! ∫_Δ f dx = (1/n!) (f̂_0 + Σ_{j=1}^t f̂_j(ξ_j)) = Σ_j f̂_j(e)/(n+j)!
//! ```
//!
//! with `f̂` the polynomial whose coefficients are `α_1!···α_n!·f_α` and
//! `ξ_j = e/((n+1)···(n+j))^{1/j}`. Arbitrary simplices are handled through
//! an exact affine pullback; sums of monomials with real exponents `> -1`
//! through Gamma weights.
//!
//! ```
//! use simplex_integrate::{integrate, poly};
//!
//! let f = poly::parse("x1 + x1*x2 + x2^2", 2).unwrap();
//! let r = integrate::integrate_canonical_exact(&f);
//! assert_eq!(r.exact_value().unwrap().to_string(), "7/24");
//! ```

pub mod cli;
pub mod integrate;
pub mod numeric;
pub mod oracle;
pub mod poly;
pub mod simplex;
pub mod specialfn;

pub use integrate::{IntegralResult, IntegrationMode};
pub use poly::{ExponentVector, Polynomial};
pub use simplex::Simplex;
