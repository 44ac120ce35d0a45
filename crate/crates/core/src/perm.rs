//! Finite permutations as image tables.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Self((0..k).collect())
    }

    /// `None` unless `images` is a bijection of `0..len`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Self(images))
    }

    /// Adjacent transposition of `i` and `i + 1` in `0..k`.
    pub fn transposition(k: usize, i: usize) -> Self {
        let mut v: Vec<usize> = (0..k).collect();
        v.swap(i, i + 1);
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        Self(self.0.iter().map(|&i| next.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut v = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            v[j] = i;
        }
        Self(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Pairs `i < j` with `p(i) > p(j)`.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn length(&self) -> usize {
        self.inversions().len()
    }

    /// Direct sum: `other` acts on the indices after `self`.
    pub fn sum(&self, other: &Permutation) -> Permutation {
        let k = self.0.len();
        Self(self.0.iter().copied().chain(other.0.iter().map(|&j| j + k)).collect())
    }

    /// All permutations of `0..k` in lexicographic order.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            out.push(Self(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else { return out };
            let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
    }
}

/// Block permutation: source block `l` of size `sizes[l]` moves to slot `rho(l)`.
pub fn block_permutation(rho: &Permutation, sizes: &[usize]) -> Permutation {
    assert_eq!(rho.len(), sizes.len());
    let inv = rho.inverse();
    let mut slot_start = vec![0; sizes.len()];
    let mut acc = 0;
    for slot in 0..sizes.len() {
        slot_start[slot] = acc;
        acc += sizes[inv.apply(slot)];
    }
    let mut images = Vec::with_capacity(acc);
    for (l, &m) in sizes.iter().enumerate() {
        let start = slot_start[rho.apply(l)];
        images.extend(start..start + m);
    }
    Permutation(images)
}
