//! Colexicographic subset ranking.
//!
//! Hyperedges are addressed by the rank of their vertex set in colex order:
//! `{a_1 < ... < a_k}` precedes `{b_1 < ... < b_k}` iff at the highest position
//! where they differ the `a` entry is smaller. The rank of a subset is
//! `sum C(a_i, i)` over 1-indexed positions, so ranking needs no reference to
//! the ambient vertex count and enumeration by increasing rank never reorders
//! when n grows.

use crate::error::{Error, Result};

/// Binomial coefficient C(n, k). Zero when k > n; panics if the value
/// overflows usize (far beyond every order this crate accepts).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // Running product stays integral: after step i it equals C(n-k+i, i).
        acc = acc * (n - k + i) as u128 / i as u128;
    }
    usize::try_from(acc).expect("binomial coefficient overflows usize")
}

/// Colex rank of a strictly increasing vertex set.
pub fn rank_subset(subset: &[usize]) -> Result<usize> {
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSubset(subset.to_vec()));
    }
    Ok(rank_unchecked(subset))
}

#[inline]
pub(crate) fn rank_unchecked(subset: &[usize]) -> usize {
    subset
        .iter()
        .enumerate()
        .map(|(i, &a)| binomial(a, i + 1))
        .sum()
}

/// Inverse of [`rank_subset`]: the k-subset with the given colex rank.
pub fn unrank_subset(rank: usize, k: usize) -> Vec<usize> {
    let mut rem = rank;
    let mut out = vec![0; k];
    for i in (1..=k).rev() {
        // Largest a with C(a, i) <= rem; greedy from the top is exact.
        let mut a = i - 1;
        while binomial(a + 1, i) <= rem {
            a += 1;
        }
        out[i - 1] = a;
        rem -= binomial(a, i);
    }
    out
}

/// All k-subsets of {0, .., n-1} in colex order.
pub fn subsets(n: usize, k: usize) -> Subsets {
    Subsets {
        n,
        current: (0..k).collect(),
        exhausted: k > n,
    }
}

/// Iterator produced by [`subsets`].
pub struct Subsets {
    n: usize,
    current: Vec<usize>,
    exhausted: bool,
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.exhausted {
            return None;
        }
        let item = self.current.clone();
        self.exhausted = !next_subset(&mut self.current, self.n);
        Some(item)
    }
}

/// Advance a strictly increasing subset to its colex successor within
/// {0, .., n-1}. Returns false when the input was the last subset.
pub(crate) fn next_subset(a: &mut [usize], n: usize) -> bool {
    let k = a.len();
    for i in 0..k {
        let cap = if i + 1 < k { a[i + 1] } else { n };
        if a[i] + 1 < cap {
            a[i] += 1;
            for (j, slot) in a.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            return true;
        }
    }
    false
}

/// Dense C(n, k) lookup for scan inner loops.
pub(crate) struct BinomialTable {
    cols: usize,
    data: Vec<usize>,
}

impl BinomialTable {
    pub fn new(max_n: usize, max_k: usize) -> Self {
        let cols = max_k + 1;
        let mut data = vec![0; (max_n + 1) * cols];
        for n in 0..=max_n {
            data[n * cols] = 1;
            for k in 1..=max_k.min(n) {
                data[n * cols + k] = binomial(n, k);
            }
        }
        BinomialTable { cols, data }
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize) -> usize {
        self.data[n * self.cols + k]
    }

    /// Colex rank of a strictly increasing subset, all entries within the table.
    #[inline]
    pub fn rank(&self, subset: &[usize]) -> usize {
        let mut acc = 0;
        for (i, &a) in subset.iter().enumerate() {
            acc += self.get(a, i + 1);
        }
        acc
    }
}
