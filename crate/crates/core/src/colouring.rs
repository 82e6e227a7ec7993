//! Exact small-`n` check of the colouring identity.
//!
//! For a class function `f` on the symmetric group and colour
//! probabilities `p`, colouring each vertex independently and asking that
//! every cycle be monochromatic gives two expressions for the same
//! probability: one summing over permutations, one over colour-class sizes
//! and Young subgroups. Both sides are evaluated by full enumeration of
//! `S_n`, generically over the scalar type so rational inputs are exact.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::error::{domain, Result};
use crate::partitions::{enumerate_partitions, multinomial_of};
use crate::perm::{for_each_permutation, Permutation};

/// Largest `n` accepted by [`colouring_identity_gap`].
pub const MAX_COLOURING_N: usize = 8;

/// Scalars usable on both sides of the identity (`f64`, `BigRational`).
pub trait Scalar: Clone + Signed + FromPrimitive + ToPrimitive + PartialOrd {}

impl<T: Clone + Signed + FromPrimitive + ToPrimitive + PartialOrd> Scalar for T {}

/// A function on `S_n` that depends only on cycle type.
///
/// Keys are cycle types written as decreasing part lists without zeros.
/// Cycle types absent from the map have weight zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction<T> {
    n: usize,
    weights: BTreeMap<Vec<usize>, T>,
}

impl<T: Scalar> ClassFunction<T> {
    pub fn new(n: usize) -> Self {
        ClassFunction {
            n,
            weights: BTreeMap::new(),
        }
    }

    /// Evaluates `weight` on every cycle type of `S_n`.
    pub fn from_fn(n: usize, mut weight: impl FnMut(&[usize]) -> T) -> Result<Self> {
        let mut f = Self::new(n);
        for mu in cycle_types(n)? {
            let w = weight(&mu);
            f.weights.insert(mu, w);
        }
        Ok(f)
    }

    /// The same value on every permutation.
    pub fn constant(n: usize, value: T) -> Result<Self> {
        Self::from_fn(n, |_| value.clone())
    }

    pub fn set(&mut self, cycle_type: Vec<usize>, value: T) {
        self.weights.insert(cycle_type, value);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, cycle_type: &[usize]) -> T {
        self.weights
            .get(cycle_type)
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn eval(&self, sigma: &Permutation) -> T {
        self.get(&sigma.cycle_type())
    }
}

/// All cycle types of `S_n` (partitions with unrestricted part count).
pub fn cycle_types(n: usize) -> Result<Vec<Vec<usize>>> {
    Ok(enumerate_partitions(n, n.max(2))?
        .into_iter()
        .map(|p| p.nonzero_parts().to_vec())
        .collect())
}

/// Left and right sides of the colouring identity.
pub fn colouring_sides<T: Scalar>(
    n: usize,
    theta: usize,
    p: &[T],
    f: &ClassFunction<T>,
) -> Result<(T, T)> {
    if n == 0 || n > MAX_COLOURING_N {
        return Err(domain("colouring identity is evaluated for 1 <= n <= 8"));
    }
    if p.len() != theta {
        return Err(domain("colour probability vector must have length theta"));
    }
    if f.n() != n {
        return Err(domain("class function is defined on a different S_n"));
    }
    // powers[i][k] = p_i^k
    let powers: Vec<Vec<T>> = p
        .iter()
        .map(|pi| {
            let mut row = Vec::with_capacity(n + 1);
            row.push(T::one());
            for k in 1..=n {
                let next = row[k - 1].clone() * pi.clone();
                row.push(next);
            }
            row
        })
        .collect();
    let mono: Vec<T> = (0..=n)
        .map(|k| {
            powers
                .iter()
                .fold(T::zero(), |acc, row| acc + row[k].clone())
        })
        .collect();

    let partitions = enumerate_partitions(n, theta)?;
    let mut young_sums: Vec<T> = partitions.iter().map(|_| T::zero()).collect();
    let mut left = T::zero();
    for_each_permutation(n, |sigma| {
        let ct = sigma.cycle_type();
        let fv = f.get(&ct);
        if fv.is_zero() {
            return;
        }
        let prod = ct
            .iter()
            .fold(T::one(), |acc, &len| acc * mono[len].clone());
        left = left.clone() + fv.clone() * prod;
        for (lambda, sum) in partitions.iter().zip(young_sums.iter_mut()) {
            if sigma.preserves_blocks(lambda.parts()) {
                *sum = sum.clone() + fv.clone();
            }
        }
    });

    let mut right = T::zero();
    for (lambda, young) in partitions.iter().zip(young_sums) {
        let multi = T::from_u64(multinomial_of(n, lambda.parts()).to_u64().unwrap()).unwrap();
        let colour_weight = lambda
            .rearrangements()
            .iter()
            .fold(T::zero(), |acc, kappa| {
                let term = kappa
                    .entries()
                    .iter()
                    .enumerate()
                    .fold(T::one(), |t, (i, &k)| t * powers[i][k].clone());
                acc + term
            });
        right = right + multi * colour_weight * young;
    }
    Ok((left, right))
}

/// `|left - right|` of the colouring identity, by enumeration of `S_n`.
pub fn colouring_identity_gap<T: Scalar>(
    n: usize,
    theta: usize,
    p: &[T],
    f: &ClassFunction<T>,
) -> Result<f64> {
    let (left, right) = colouring_sides(n, theta, p, f)?;
    Ok((left - right).abs().to_f64().unwrap_or(f64::INFINITY))
}
