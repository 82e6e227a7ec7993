//! Exact finite-`n` partition functions from the character decomposition.
//!
//! With `P(sigma in T_lambda)` the probability that the random permutation
//! preserves the blocks of the Young subgroup `T_lambda`,
//!
//! ```text
//! G_n(lambda) = binom(n, lambda) P(sigma in T_lambda)
//!             = sum_{mu >= lambda} d_mu K_{mu lambda} exp(E_beta(mu))
//! Z_n(beta)   = sum_lambda |K(lambda)| G_n(lambda)
//! e^{(h/theta) n} Z_n(beta, h) = sum_lambda (sum_{kappa in K(lambda)} e^{h kappa_1}) G_n(lambda)
//! ```
//!
//! where `E_beta` is [`energy_exponent`](crate::partitions::energy_exponent).
//! All combinatorial factors depend only on `(n, theta)`, so they are built
//! once into a [`CharacterTable`] and reused across inverse temperatures.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::count::{factorial, BigCount};
use crate::error::{domain, Result};
use crate::fmath;
use crate::logvalue::{LogSumExp, LogValue};
use crate::partitions::{
    dimension_of, energy_coefficient, enumerate_partitions, kostka_column, rearrangement_count,
    Partition,
};

/// One `(lambda, mu)` pair with nonzero Kostka number.
#[derive(Debug, Clone)]
pub struct KostkaEntry {
    /// Index of `mu` in [`CharacterTable::partitions`].
    pub mu: usize,
    pub value: BigCount,
}

/// Combinatorial data for all partitions of `n` into at most `theta` parts.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    n: usize,
    theta: usize,
    partitions: Vec<Partition>,
    dims: Vec<BigCount>,
    energy: Vec<f64>,
    rearrangements: Vec<BigCount>,
    /// `ln sum_{kappa in K(lambda)} e^{h kappa_1}` decomposed by the value of `kappa_1`:
    /// pairs `(value, ln count)`.
    first_entry: Vec<Vec<(usize, f64)>>,
    /// Per `lambda`, the `mu >= lambda` in table order.
    kostka: Vec<Vec<KostkaEntry>>,
}

/// Diagnostic row: `lambda`, `ln G_n(lambda)`, `|K(lambda)|`.
#[derive(Debug, Clone)]
pub struct GRow {
    pub lambda: Partition,
    pub ln_g: f64,
    pub rearrangements: BigCount,
}

/// The two bounds that sandwich `e^{(h/theta) n} Z_n(beta, h)` for `h > 0`.
#[derive(Debug, Clone, Copy)]
pub struct FieldSandwich {
    /// `sum_lambda e^{h lambda_1} G_n(lambda)`
    pub lower: LogValue,
    /// `e^{(h/theta) n} Z_n(beta, h)`
    pub middle: LogValue,
    /// `theta! * lower`
    pub upper: LogValue,
}

impl CharacterTable {
    pub fn new(n: usize, theta: usize) -> Result<Self> {
        let partitions = enumerate_partitions(n, theta)?;
        let index: BTreeMap<Vec<usize>, usize> = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.nonzero_parts().to_vec(), i))
            .collect();
        let dims = partitions
            .iter()
            .map(|p| dimension_of(p.nonzero_parts()))
            .collect();
        let energy = partitions
            .iter()
            .map(|p| energy_coefficient(p.parts()))
            .collect();
        let rearrangements = partitions.iter().map(rearrangement_count).collect();
        let first_entry = partitions
            .iter()
            .map(|p| first_entry_counts(p.parts()))
            .collect();
        let kostka = partitions
            .iter()
            .map(|lambda| {
                let mut col: Vec<KostkaEntry> = kostka_column(lambda.parts())
                    .into_iter()
                    .map(|(shape, k)| KostkaEntry {
                        mu: index[&shape],
                        value: BigCount::new(k),
                    })
                    .collect();
                col.sort_by_key(|e| e.mu);
                col
            })
            .collect();
        Ok(CharacterTable {
            n,
            theta,
            partitions,
            dims,
            energy,
            rearrangements,
            first_entry,
            kostka,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.partitions
            .iter()
            .position(|p| p.nonzero_parts() == lambda.nonzero_parts())
    }

    pub fn dimension(&self, mu: usize) -> &BigCount {
        &self.dims[mu]
    }

    /// Nonzero Kostka numbers `K_{mu lambda}` for `lambda = partitions[lambda]`.
    pub fn kostka_entries(&self, lambda: usize) -> &[KostkaEntry] {
        &self.kostka[lambda]
    }

    /// Replaces one Kostka number. Used for mutation testing of the
    /// verification suites; a table altered this way no longer describes
    /// the model.
    pub fn override_kostka(&mut self, lambda: usize, mu: usize, value: BigUint) {
        let col = &mut self.kostka[lambda];
        match col.iter_mut().find(|e| e.mu == mu) {
            Some(e) => e.value = BigCount::new(value),
            None => {
                col.push(KostkaEntry {
                    mu,
                    value: BigCount::new(value),
                });
                col.sort_by_key(|e| e.mu);
            }
        }
    }

    /// `G_n(lambda)` for the partition at index `lambda`.
    pub fn g_weight(&self, lambda: usize, beta: f64) -> LogValue {
        self.kostka[lambda]
            .iter()
            .map(|e| self.dims[e.mu].ln() + e.value.ln() + beta * self.energy[e.mu])
            .collect::<LogSumExp>()
            .finish()
    }

    /// `Z_n(beta) = sum_lambda |K(lambda)| G_n(lambda)`.
    pub fn log_z(&self, beta: f64) -> LogValue {
        (0..self.partitions.len())
            .map(|l| self.rearrangements[l].ln() + self.g_weight(l, beta).ln())
            .collect::<LogSumExp>()
            .finish()
    }

    /// `Z_n(beta, h)` including the `e^{-(h/theta) n}` prefactor.
    pub fn log_z_field(&self, beta: f64, h: f64) -> LogValue {
        if h == 0.0 {
            return self.log_z(beta);
        }
        let inner = self.log_field_sum(beta, h);
        LogValue::from_ln(inner.ln() - h * self.n as f64 / self.theta as f64)
    }

    fn log_field_sum(&self, beta: f64, h: f64) -> LogValue {
        (0..self.partitions.len())
            .map(|l| self.log_field_factor(l, h) + self.g_weight(l, beta).ln())
            .collect::<LogSumExp>()
            .finish()
    }

    /// `ln sum_{kappa in K(lambda)} e^{h kappa_1}`.
    pub fn log_field_factor(&self, lambda: usize, h: f64) -> f64 {
        self.first_entry[lambda]
            .iter()
            .map(|&(v, ln_count)| ln_count + h * v as f64)
            .collect::<LogSumExp>()
            .finish()
            .ln()
    }

    /// Both sides of the `h > 0` sandwich together with the exact middle.
    pub fn field_sandwich(&self, beta: f64, h: f64) -> FieldSandwich {
        let lower = (0..self.partitions.len())
            .map(|l| h * self.partitions[l].parts()[0] as f64 + self.g_weight(l, beta).ln())
            .collect::<LogSumExp>()
            .finish();
        let ln_theta_fact = BigCount::new(factorial(self.theta)).ln();
        FieldSandwich {
            lower,
            middle: self.log_field_sum(beta, h),
            upper: LogValue::from_ln(lower.ln() + ln_theta_fact),
        }
    }

    /// Per-`lambda` diagnostic rows in table order.
    pub fn g_rows(&self, beta: f64) -> Vec<GRow> {
        self.partitions
            .iter()
            .enumerate()
            .map(|(l, lambda)| GRow {
                lambda: lambda.clone(),
                ln_g: self.g_weight(l, beta).ln(),
                rearrangements: self.rearrangements[l].clone(),
            })
            .collect()
    }
}

/// For each distinct value `v` among the parts, `ln` of the number of
/// distinct rearrangements whose first entry is `v`.
fn first_entry_counts(parts: &[usize]) -> Vec<(usize, f64)> {
    let theta = parts.len();
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in parts {
        *mult.entry(p).or_insert(0) += 1;
    }
    let ln_fact = |k: usize| -> f64 { (2..=k).map(|j| fmath::ln(j as f64)).sum() };
    let ln_denom: f64 = mult.values().map(|&m| ln_fact(m)).sum();
    mult.iter()
        .rev()
        .map(|(&v, &m)| (v, ln_fact(theta - 1) + fmath::ln(m as f64) - ln_denom))
        .collect()
}

/// `G_n(lambda)` in log form.
pub fn g_weight(lambda: &Partition, beta: f64) -> Result<LogValue> {
    let table = CharacterTable::new(lambda.n(), lambda.theta().max(2))?;
    let idx = table
        .index_of(lambda)
        .ok_or_else(|| domain("partition not found in its own table"))?;
    Ok(table.g_weight(idx, beta))
}

/// Exact `Z_n(beta) = tr exp(-(beta/n) H_n)` in log form.
pub fn z_exact(n: usize, theta: usize, beta: f64) -> Result<LogValue> {
    Ok(CharacterTable::new(n, theta)?.log_z(beta))
}

/// Exact `Z_n(beta, h)` in log form.
pub fn z_field_exact(n: usize, theta: usize, beta: f64, h: f64) -> Result<LogValue> {
    Ok(CharacterTable::new(n, theta)?.log_z_field(beta, h))
}

/// `(1/n) ln Z_n(beta, h)`.
pub fn free_energy_density(n: usize, theta: usize, beta: f64, h: f64) -> Result<f64> {
    Ok(z_field_exact(n, theta, beta, h)?.ln() / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn g_weight_examples() {
        let beta = 0.8;
        let g = |parts: &[usize]| {
            g_weight(&Partition::new(parts.to_vec()).unwrap(), beta)
                .unwrap()
                .value()
        };
        assert!(rel(g(&[1, 0]), 1.0) < 1e-15);
        assert!(rel(g(&[2, 0]), 1.0) < 1e-15);
        assert!(rel(g(&[1, 1]), 1.0 + (-beta).exp()) < 1e-15);
    }

    #[test]
    fn z_exact_examples() {
        for theta in 2..6 {
            assert!(rel(z_exact(1, theta, 2.3).unwrap().value(), theta as f64) < 1e-15);
        }
        assert!(rel(z_exact(2, 2, 0.0).unwrap().value(), 4.0) < 1e-15);
        assert!(
            rel(
                z_exact(2, 3, 1.0).unwrap().value(),
                6.0 + 3.0 * (-1.0f64).exp()
            ) < 1e-14
        );
    }

    #[test]
    fn field_examples() {
        for &(theta, h) in &[(2usize, 0.3f64), (3, -1.2), (5, 2.0)] {
            let t = theta as f64;
            let expected = (-h / t).exp() * (h.exp() + t - 1.0);
            assert!(rel(z_field_exact(1, theta, 1.0, h).unwrap().value(), expected) < 1e-14);
        }
        let a = z_field_exact(7, 3, 1.3, 0.0).unwrap();
        let b = z_exact(7, 3, 1.3).unwrap();
        assert!(a.rel_diff(b) < 1e-12);
    }

    #[test]
    fn density_of_single_site() {
        assert!((free_energy_density(1, 4, 1.0, 0.0).unwrap() - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn infinite_temperature_counts_states() {
        for &(theta, n_max) in &[(2usize, 200usize), (3, 40), (4, 16), (5, 12)] {
            for n in 1..=n_max {
                let z = z_exact(n, theta, 0.0).unwrap().ln();
                let expected = n as f64 * (theta as f64).ln();
                assert!(
                    ((z - expected) / expected.max(1e-300)).abs() <= 1e-12,
                    "theta={theta} n={n}"
                );
            }
        }
    }

    #[test]
    fn z_decreases_in_beta() {
        let table = CharacterTable::new(9, 3).unwrap();
        let zs: Vec<f64> = (0..20).map(|k| table.log_z(0.25 * k as f64).ln()).collect();
        assert!(zs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn two_colour_kostka_numbers_are_one() {
        for n in 1..=40 {
            let table = CharacterTable::new(n, 2).unwrap();
            for l in 0..table.partitions().len() {
                let entries = table.kostka_entries(l);
                assert_eq!(entries.len(), l + 1);
                assert!(entries.iter().all(|e| e.value == 1));
            }
        }
    }

    #[test]
    fn sandwich_holds() {
        for n in [5usize, 12, 30] {
            for theta in [2usize, 3] {
                let table = CharacterTable::new(n, theta).unwrap();
                for h in [0.1, 0.7, 2.0] {
                    let s = table.field_sandwich(1.5, h);
                    assert!(s.lower.ln() <= s.middle.ln() + 1e-12);
                    assert!(s.middle.ln() <= s.upper.ln() + 1e-12);
                }
            }
        }
    }

    #[test]
    fn field_lower_bound() {
        let table = CharacterTable::new(10, 3).unwrap();
        let z0 = table.log_z(1.0).ln();
        for h in [-2.0, -0.5, 0.5, 2.0] {
            let zh = table.log_z_field(1.0, h).ln();
            assert!(zh >= z0 - h.abs() * 10.0);
        }
    }

    #[test]
    fn first_entry_counts_sum_to_rearrangements() {
        for parts in [vec![4, 4, 2], vec![3, 2, 1, 0], vec![2, 2, 2]] {
            let total: f64 = first_entry_counts(&parts)
                .iter()
                .map(|&(_, l)| l.exp())
                .sum();
            let k = rearrangement_count(&Partition::new(parts.clone()).unwrap()).to_f64();
            assert!(rel(total, k) < 1e-13, "{parts:?}");
        }
    }
}
