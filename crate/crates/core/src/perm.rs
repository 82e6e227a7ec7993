//! Permutations of `{0, .., n-1}` stored as image vectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(domain("image vector is not a bijection"));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles written with 1-based labels,
    /// e.g. `[[1, 3], [2, 6, 7, 4]]`. Omitted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &v) in cycle.iter().enumerate() {
                if v == 0 || v > n || used[v - 1] {
                    return Err(domain("cycles must be disjoint labels in 1..=n"));
                }
                used[v - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[v - 1] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// Right-multiplies by the transposition of positions `x` and `y`.
    pub fn swap(&mut self, x: usize, y: usize) {
        self.images.swap(x, y);
    }

    /// Cycle lengths in decreasing order, singletons included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_type().len()
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i32 {
        if (self.len() - self.cycle_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// True when every block of consecutive points with the given sizes is
    /// mapped into itself.
    pub fn preserves_blocks(&self, sizes: &[usize]) -> bool {
        let mut start = 0;
        for &s in sizes {
            let end = start + s;
            if self.images[start..end]
                .iter()
                .any(|&i| i < start || i >= end)
            {
                return false;
            }
            start = end;
        }
        true
    }
}

/// Calls `f` on every permutation of `{0, .., n-1}` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&Permutation)) {
    let mut p = Permutation::identity(n);
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.images.swap(0, i);
            } else {
                p.images.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    #[test]
    fn figure_permutation_has_five_cycles() {
        let s =
            Permutation::from_cycles(10, &[&[1, 3], &[2, 6, 7, 4], &[9, 10], &[5], &[8]]).unwrap();
        assert_eq!(s.cycle_count(), 5);
        assert_eq!(s.cycle_type(), vec![4, 2, 2, 1, 1]);
        assert_eq!(s.sign(), -1);
    }

    #[test]
    fn heap_enumerates_each_permutation_once() {
        let mut seen = BTreeSet::new();
        for_each_permutation(5, |p| {
            seen.insert(p.images().to_vec());
        });
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn rejects_overlapping_cycles() {
        assert!(Permutation::from_cycles(4, &[&[1, 2], &[2, 3]]).is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }
}
