//! Integer partitions with at most `theta` parts.
//!
//! Partitions are stored zero-padded to exactly `theta` entries. The
//! combinatorial quantities here (multinomials, Kostka numbers, irreducible
//! dimensions) are exact big integers; the log shadow on [`BigCount`] is what
//! the character sums consume.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::count::{factorial, BigCount};
use crate::error::{domain, Result};

/// A weakly decreasing vector of `theta` nonnegative parts summing to `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

impl Partition {
    /// Builds a partition from exactly `theta = parts.len()` entries.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(domain("a partition needs at least one part"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(domain("partition parts must be weakly decreasing"));
        }
        let n = parts.iter().sum();
        if n == 0 {
            return Err(domain("partitions must have a positive sum"));
        }
        Ok(Partition { parts, n })
    }

    /// Builds a partition from its nonzero parts, padded with zeros to `theta`.
    pub fn padded(parts: &[usize], theta: usize) -> Result<Self> {
        let nonzero: Vec<usize> = parts.iter().copied().filter(|&p| p > 0).collect();
        if nonzero.len() > theta {
            return Err(domain("more nonzero parts than theta"));
        }
        let mut v = nonzero;
        v.resize(theta, 0);
        Self::new(v)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> usize {
        self.parts.len()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.iter().take_while(|&&p| p > 0).count()
    }

    pub fn nonzero_parts(&self) -> &[usize] {
        &self.parts[..self.length()]
    }

    /// All distinct reorderings of the parts, in lexicographically
    /// increasing order.
    pub fn rearrangements(&self) -> Vec<Composition> {
        let mut cur: Vec<usize> = self.parts.iter().rev().copied().collect();
        let mut out = Vec::new();
        loop {
            out.push(Composition {
                entries: cur.clone(),
                n: self.n,
            });
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{:?}", self.parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

/// A vector of `theta` nonnegative entries with no ordering constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    entries: Vec<usize>,
    n: usize,
}

impl Composition {
    pub fn new(entries: Vec<usize>) -> Self {
        let n = entries.iter().sum();
        Composition { entries, n }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The partition obtained by sorting the entries in decreasing order.
    pub fn sorted(&self) -> Result<Partition> {
        let mut v = self.entries.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v)
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All partitions of `n` into at most `theta` parts, in reverse
/// lexicographic order (largest first part first).
pub fn enumerate_partitions(n: usize, theta: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    if theta < 2 {
        return Err(domain("theta must be at least 2"));
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(theta);
    fill(n, n, theta, &mut cur, &mut out);
    Ok(out)
}

fn fill(
    remaining: usize,
    max: usize,
    slots: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(Partition {
                parts: cur.clone(),
                n: cur.iter().sum(),
            });
        }
        return;
    }
    // the remaining slots can hold at most slots * max
    if remaining > slots * max {
        return;
    }
    let lo = remaining.div_ceil(slots);
    for p in (lo..=max.min(remaining)).rev() {
        cur.push(p);
        fill(remaining - p, p, slots - 1, cur, out);
        cur.pop();
    }
}

/// `|K(lambda)| = theta! / prod_v (multiplicity of v)!`.
pub fn rearrangement_count(lambda: &Partition) -> BigCount {
    let mut denom = BigUint::one();
    for run in runs(lambda.parts()) {
        denom *= factorial(run);
    }
    BigCount::new(factorial(lambda.theta()) / denom)
}

/// Lengths of maximal runs of equal values in a sorted slice.
fn runs(parts: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        let mut j = i;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        out.push(j - i);
        i = j;
    }
    out
}

/// Dominance order: `mu_1 + ... + mu_i >= lambda_1 + ... + lambda_i` for all `i`.
///
/// Partitions of different `theta` are compared as if zero-padded.
pub fn dominates(mu: &Partition, lambda: &Partition) -> Result<bool> {
    if mu.n() != lambda.n() {
        return Err(domain("dominance needs partitions of the same n"));
    }
    Ok(dominates_slices(mu.parts(), lambda.parts()))
}

pub(crate) fn dominates_slices(mu: &[usize], lambda: &[usize]) -> bool {
    let len = mu.len().max(lambda.len());
    let (mut a, mut b) = (0usize, 0usize);
    for i in 0..len {
        a += mu.get(i).copied().unwrap_or(0);
        b += lambda.get(i).copied().unwrap_or(0);
        if a < b {
            return false;
        }
    }
    true
}

/// Kostka number `K_{mu, lambda}`: semistandard fillings of the shape `mu`
/// with content `lambda`.
pub fn kostka(mu: &Partition, lambda: &Partition) -> BigCount {
    if mu.n() != lambda.n() || !dominates_slices(mu.parts(), lambda.parts()) {
        return BigCount::zero();
    }
    BigCount::new(kostka_content(mu.nonzero_parts(), lambda.parts()))
}

/// Kostka number for an arbitrary content vector (a composition).
///
/// Filling values `1, 2, ...` in turn, the cells holding values `<= i` form
/// a shape, and consecutive shapes differ by a horizontal strip of size
/// `content[i]`. Counts are propagated layer by layer over those shapes,
/// pruned to stay inside `shape`.
pub fn kostka_content(shape: &[usize], content: &[usize]) -> BigUint {
    let shape: Vec<usize> = shape.iter().copied().filter(|&p| p > 0).collect();
    if shape.iter().sum::<usize>() != content.iter().sum::<usize>() {
        return BigUint::zero();
    }
    let layers = strip_chains(content, Some(&shape));
    layers.get(&shape).cloned().unwrap_or_else(BigUint::zero)
}

/// All `K_{mu, content}` at once: maps each shape `mu` (nonzero parts only)
/// to its nonzero Kostka number.
pub fn kostka_column(content: &[usize]) -> BTreeMap<Vec<usize>, BigUint> {
    strip_chains(content, None)
}

fn strip_chains(content: &[usize], bound: Option<&[usize]>) -> BTreeMap<Vec<usize>, BigUint> {
    let mut layer: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
    layer.insert(Vec::new(), BigUint::one());
    for &m in content {
        if m == 0 {
            continue;
        }
        let mut next: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
        for (nu, count) in &layer {
            let mut grown = Vec::new();
            let mut cur = nu.clone();
            cur.push(0);
            horizontal_strips(nu, bound, 0, m, &mut cur, &mut grown);
            for mut g in grown {
                while g.last() == Some(&0) {
                    g.pop();
                }
                *next.entry(g).or_insert_with(BigUint::zero) += count;
            }
        }
        layer = next;
    }
    layer
}

/// Enumerates shapes `cur` with `nu_j <= cur_j <= nu_{j-1}` (interlacing)
/// whose total growth over `nu` is `remaining`.
fn horizontal_strips(
    nu: &[usize],
    bound: Option<&[usize]>,
    row: usize,
    remaining: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if row == cur.len() {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let base = nu.get(row).copied().unwrap_or(0);
    let mut cap = if row == 0 {
        base + remaining
    } else {
        nu[row - 1]
    };
    if let Some(b) = bound {
        cap = cap.min(b.get(row).copied().unwrap_or(0));
    }
    if cap < base {
        return;
    }
    let max_add = (cap - base).min(remaining);
    for add in (0..=max_add).rev() {
        cur[row] = base + add;
        horizontal_strips(nu, bound, row + 1, remaining - add, cur, out);
    }
    cur[row] = base;
}

/// Multinomial coefficient `n! / (lambda_1! ... lambda_theta!)`.
pub fn multinomial(lambda: &Partition) -> BigCount {
    multinomial_of(lambda.n(), lambda.parts())
}

pub(crate) fn multinomial_of(n: usize, parts: &[usize]) -> BigCount {
    let mut denom = BigUint::one();
    for &p in parts {
        denom *= factorial(p);
    }
    BigCount::new(factorial(n) / denom)
}

/// Dimension of the irreducible representation indexed by `mu`:
/// `n! / (m_1! ... m_k!) * prod_{i<j} (m_i - m_j)` with `m_i = mu_i + k - i`
/// and `k` the number of nonzero parts.
pub fn dimension(mu: &Partition) -> BigCount {
    dimension_of(mu.nonzero_parts())
}

pub(crate) fn dimension_of(nonzero: &[usize]) -> BigCount {
    let k = nonzero.len();
    let n: usize = nonzero.iter().sum();
    let m: Vec<usize> = nonzero
        .iter()
        .enumerate()
        .map(|(i, &p)| p + k - 1 - i)
        .collect();
    let mut num = factorial(n);
    for i in 0..k {
        for j in i + 1..k {
            num *= (m[i] - m[j]) as u64;
        }
    }
    let mut denom = BigUint::one();
    for &mi in &m {
        denom *= factorial(mi);
    }
    BigCount::new(num / denom)
}

/// `(beta/2) [ sum_j mu_j (mu_j - 2j + 1) / n - (n - 1) ]`, the exponent
/// `(beta/n) binom(n,2) [r(mu) - 1]` with `r` the character ratio at a
/// transposition.
pub fn energy_exponent(mu: &Partition, beta: f64) -> f64 {
    beta * energy_coefficient(mu.parts())
}

/// `energy_exponent / beta`, independent of the inverse temperature.
pub(crate) fn energy_coefficient(parts: &[usize]) -> f64 {
    let n: usize = parts.iter().sum();
    let content: i64 = parts
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let p = p as i64;
            p * (p - 2 * (j as i64 + 1) + 1)
        })
        .sum();
    0.5 * (content as f64 / n as f64 - (n as f64 - 1.0))
}
