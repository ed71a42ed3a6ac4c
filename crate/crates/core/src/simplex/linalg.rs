//! Exact determinant and inverse of rational matrices.
//!
//! Denominators are cleared first, then a fraction-free (Bareiss-style)
//! Gauss-Jordan elimination runs entirely over the integers: every division
//! by the previous pivot is exact.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense square matrix of rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        RationalMatrix {
            n,
            data: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// Builds from rows. Panics if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        RationalMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, other.n);
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let v = (0..self.n).fold(BigRational::zero(), |acc, k| {
                    acc + self.get(i, k) * other.get(k, j)
                });
                out.set(i, j, v);
            }
        }
        out
    }

    /// Integer matrix `L·M` with `L` the lcm of all denominators.
    fn clear_denominators(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let lcm = self
            .data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let rows = (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect()
            })
            .collect();
        (rows, lcm)
    }

    /// Exact determinant and, when it is non-zero, the inverse.
    #[allow(clippy::needless_range_loop)]
    pub fn determinant_and_inverse(&self) -> (BigRational, Option<RationalMatrix>) {
        let n = self.n;
        if n == 0 {
            return (BigRational::one(), Some(self.clone()));
        }
        let (int_rows, scale) = self.clear_denominators();
        // augmented [N | I]
        let mut a: Vec<Vec<BigInt>> = int_rows
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                row
            })
            .collect();
        let mut prev_pivot = BigInt::one();
        let mut sign_flips = false;
        for k in 0..n {
            let Some(pivot_row) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return (BigRational::zero(), None);
            };
            if pivot_row != k {
                a.swap(pivot_row, k);
                sign_flips = !sign_flips;
            }
            let pivot = a[k][k].clone();
            for i in 0..n {
                if i == k {
                    continue;
                }
                let factor = a[i][k].clone();
                for j in 0..2 * n {
                    if j == k {
                        continue;
                    }
                    let num = &pivot * &a[i][j] - &factor * &a[k][j];
                    debug_assert!((&num % &prev_pivot).is_zero(), "fraction-free division must be exact");
                    a[i][j] = num / &prev_pivot;
                }
                a[i][k] = BigInt::zero();
            }
            prev_pivot = pivot;
        }
        // Now a = [d·I | d·N⁻¹] with d = det of the (row-swapped) integer matrix.
        let d = prev_pivot;
        let det_int = if sign_flips { -d.clone() } else { d.clone() };
        let scale_n = num_traits::pow(scale.clone(), n);
        let det = BigRational::new(det_int, scale_n);
        // M⁻¹ = (L·M)⁻¹·L = L·(right block)/d
        let mut inv = RationalMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, BigRational::new(&scale * &a[i][n + j], d.clone()));
            }
        }
        (det, Some(inv))
    }

    pub fn determinant(&self) -> BigRational {
        self.determinant_and_inverse().0
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x)?;
            }
        }
        f.write_str("]")
    }
}

/// Determinant by cofactor expansion; only for tests on tiny matrices.
#[cfg(test)]
pub(crate) fn cofactor_determinant(m: &RationalMatrix) -> BigRational {
    fn rec(rows: &[Vec<BigRational>]) -> BigRational {
        let n = rows.len();
        if n == 1 {
            return rows[0][0].clone();
        }
        let mut acc = BigRational::zero();
        for (col, x) in rows[0].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigRational>> = rows[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != col)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = x * rec(&minor);
            if col % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    let rows: Vec<Vec<BigRational>> = (0..m.size()).map(|i| m.row(i).to_vec()).collect();
    rec(&rows)
}
