//! Exact and stochastic evaluation of the mean-field spin-S interchange model.
//!
//! The model lives on the complete graph with `n` vertices and local dimension
//! `theta = 2S + 1`. Its partition function `Z_n(beta) = tr exp(-(beta/n) H_n)`
//! is computed here by several independent routes:
//!
//! - [`quantum`]: dense diagonalization of the Hamiltonian built from
//!   transposition operators on the full tensor space;
//! - [`characters`]: exact sums over irreducible representations of the
//!   symmetric group, weighted by Kostka numbers;
//! - [`mc`]: Monte Carlo over Poisson transposition processes, weighting each
//!   sample by `theta^(number of cycles)`;
//! - [`variational`]: the `n -> infinity` free energy as a maximization over
//!   the ordered probability simplex, plus the closed-form critical point.
//!
//! The crate is `no_std` and only needs `alloc`. Floating-point special
//! functions come from `libm`, so results do not depend on the platform libm.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod characters;
pub mod colouring;
pub mod count;
mod error;
pub(crate) mod fmath;
pub mod logvalue;
pub mod mc;
pub mod partitions;
pub mod perm;
pub mod quantum;
pub mod variational;

pub use count::BigCount;
pub use error::{Error, Result};
pub use logvalue::LogValue;
pub use partitions::{Composition, Partition};
pub use perm::Permutation;
