//! Brute-force quantum oracle on the full `theta^n`-dimensional tensor space.
//!
//! Basis vectors `|a_1, .., a_n>` are ordered row-major with vertex 1 the
//! slowest-varying digit, so a transposition operator is a digit swap on
//! basis indices. Local basis index `a` corresponds to the `S^3` eigenvalue
//! `S - a`.

mod operator;
mod swap_poly;

pub use operator::{
    hamiltonian, hamiltonian_from_edges, hamiltonian_spectrum, spectrum_from_edges, spin_operators,
    trace_exp, transposition_matrix, DenseOperator, Spectrum, SpinOperators, MAX_DENSE_DIM,
};
pub use swap_poly::{
    swap_poly_coefficients, verify_swap_poly, SpinPolyCoefficients, MAX_POLY_TWICE_SPIN,
    MAX_VERIFY_TWICE_SPIN,
};

use core::fmt;
use core::str::FromStr;

use crate::error::{domain, Error};

/// A spin quantum number `S` in `{0, 1/2, 1, 3/2, ..}`, stored as `2S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub const fn from_twice(twice: u32) -> Self {
        Spin { twice }
    }

    /// The spin with local dimension `theta = 2S + 1`.
    pub fn from_theta(theta: usize) -> crate::Result<Self> {
        if theta == 0 {
            return Err(domain("theta must be positive"));
        }
        Ok(Spin {
            twice: (theta - 1) as u32,
        })
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn theta(self) -> usize {
        self.twice as usize + 1
    }

    pub fn as_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    /// Accepts `"3/2"`, `"1"`, or `"1.5"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || domain("spin must be a nonnegative half-integer such as 1/2 or 1");
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => Ok(Spin { twice: 2 * num }),
                "2" => Ok(Spin { twice: num }),
                _ => Err(bad()),
            }
        } else if let Ok(k) = s.parse::<u32>() {
            Ok(Spin { twice: 2 * k })
        } else {
            let v: f64 = s.parse().map_err(|_| bad())?;
            let twice = v * 2.0;
            if v < 0.0 || twice != libm::round(twice) {
                return Err(bad());
            }
            Ok(Spin {
                twice: twice as u32,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn spin_parsing() {
        assert_eq!("1/2".parse::<Spin>().unwrap(), Spin::from_twice(1));
        assert_eq!("1".parse::<Spin>().unwrap(), Spin::from_twice(2));
        assert_eq!("2.5".parse::<Spin>().unwrap(), Spin::from_twice(5));
        assert_eq!("4/2".parse::<Spin>().unwrap(), Spin::from_twice(4));
        assert!("1/3".parse::<Spin>().is_err());
        assert!("0.3".parse::<Spin>().is_err());
        assert_eq!(Spin::from_twice(3).to_string(), "3/2");
        assert_eq!(Spin::from_theta(3).unwrap().to_string(), "1");
    }
}
