//! The transposition operator as a polynomial in `S_x . S_y`.
//!
//! On two sites `S_x . S_y` acts on the total-spin-`J` subspace as the
//! scalar `x_J = J(J+1)/2 - S(S+1)`, and the swap acts there as
//! `(-1)^{2S - J}`. The coefficients `a_k` solve the Vandermonde system
//! `sum_k a_k x_J^k = (-1)^{2S-J}` for `J = 0, .., 2S`, exactly over the
//! rationals.

use alloc::vec::Vec;

use nalgebra::Complex;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::operator::{spin_operators, transposition_matrix, DenseOperator};
use super::Spin;
use crate::error::{domain, Result};

/// Largest `2S` for the exact coefficient solve.
pub const MAX_POLY_TWICE_SPIN: u32 = 12;
/// Largest `2S` for the dense two-site verification.
pub const MAX_VERIFY_TWICE_SPIN: u32 = 6;

/// Coefficients `a_0, .., a_{2S}` with `T_xy = sum_k a_k (S_x . S_y)^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPolyCoefficients {
    pub spin: Spin,
    pub coeffs: Vec<BigRational>,
}

impl SpinPolyCoefficients {
    /// The Vandermonde nodes `x_J` for `J = 0, .., 2S`.
    pub fn nodes(&self) -> Vec<BigRational> {
        nodes(self.spin)
    }

    /// Evaluates the polynomial exactly at `x`.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * x + a)
    }
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn nodes(spin: Spin) -> Vec<BigRational> {
    let t = spin.twice() as i64;
    // S(S+1) = t(t+2)/4
    (0..=t)
        .map(|j| rat(j * (j + 1), 2) - rat(t * (t + 2), 4))
        .collect()
}

/// Exact rational solution of the Vandermonde system.
pub fn swap_poly_coefficients(spin: Spin) -> Result<SpinPolyCoefficients> {
    if spin.twice() > MAX_POLY_TWICE_SPIN {
        return Err(domain("swap polynomial is solved for 2S <= 12"));
    }
    let x = nodes(spin);
    let size = x.len();
    let twice = spin.twice() as usize;
    // augmented matrix [V | rhs]
    let mut rows: Vec<Vec<BigRational>> = x
        .iter()
        .enumerate()
        .map(|(j, xj)| {
            let mut row = Vec::with_capacity(size + 1);
            let mut p = BigRational::one();
            for _ in 0..size {
                row.push(p.clone());
                p = &p * xj;
            }
            let sign = if (twice - j).is_multiple_of(2) { 1 } else { -1 };
            row.push(rat(sign, 1));
            row
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size)
            .find(|&r| !rows[r][col].is_zero())
            .expect("Vandermonde matrix with distinct nodes is invertible");
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for entry in rows[col].iter_mut() {
            *entry = &*entry * &inv;
        }
        let pivot = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= &factor * p;
                }
            }
        }
    }
    let coeffs = rows.into_iter().map(|mut r| r.pop().unwrap()).collect();
    Ok(SpinPolyCoefficients { spin, coeffs })
}

/// Largest entry of `|sum_k a_k (S_x . S_y)^k - T_xy|` on two sites.
pub fn verify_swap_poly(spin: Spin) -> Result<f64> {
    if spin.twice() > MAX_VERIFY_TWICE_SPIN {
        return Err(domain("dense swap-polynomial verification needs 2S <= 6"));
    }
    let poly = swap_poly_coefficients(spin)?;
    let dot = spin_operators(spin).two_site_dot();
    // S_x . S_y must be real symmetric before it is used as a polynomial argument
    dot.to_real_symmetric(1e-14)?;
    let dim = dot.dim();
    let mut acc = DenseOperator::zeros(dim);
    for a in poly.coeffs.iter().rev() {
        let a = a.to_f64().unwrap();
        acc = acc
            .mul(&dot)
            .add(&DenseOperator::identity(dim).scale(Complex::new(a, 0.0)));
    }
    let swap = transposition_matrix(spin.theta(), 2, 1, 2)?;
    Ok(acc.max_abs_diff(&swap))
}

impl SpinPolyCoefficients {
    /// Largest `|a_k|` as a float, for scaling tolerances.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|a| a.abs().to_f64().unwrap())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn known_low_spin_coefficients() {
        let half = swap_poly_coefficients(Spin::from_twice(1)).unwrap();
        assert_eq!(half.coeffs, vec![rat(1, 2), rat(2, 1)]);
        let one = swap_poly_coefficients(Spin::from_twice(2)).unwrap();
        assert_eq!(one.coeffs, vec![rat(-1, 1), rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn coefficients_interpolate_exactly() {
        for twice in 0..=MAX_POLY_TWICE_SPIN {
            let poly = swap_poly_coefficients(Spin::from_twice(twice)).unwrap();
            for (j, x) in poly.nodes().iter().enumerate() {
                let sign = if (twice as usize - j).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                assert_eq!(poly.eval(x), rat(sign, 1));
            }
        }
    }

    #[test]
    fn dense_verification() {
        assert!(verify_swap_poly(Spin::from_twice(1)).unwrap() <= 1e-12);
        assert!(verify_swap_poly(Spin::from_twice(2)).unwrap() <= 1e-12);
        for twice in 3..=6 {
            assert!(
                verify_swap_poly(Spin::from_twice(twice)).unwrap() <= 1e-9,
                "2S = {twice}"
            );
        }
        assert!(verify_swap_poly(Spin::from_twice(7)).is_err());
    }
}
