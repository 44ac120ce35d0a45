//! Braid words and the word problem.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use super::BraidError;
use crate::perm::Permutation;

/// Default cap on intermediate word length during handle reduction.
pub const DEFAULT_GROWTH_LIMIT: usize = 1 << 20;

/// A word in the Artin generators on `strands` strands.
///
/// Letter `g > 0` is the positive generator `σ_g`, which crosses the strands
/// at positions `g - 1` and `g` with the left strand passing over; `-g` is its
/// inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BraidWord {
    strands: usize,
    word: Vec<i32>,
}

#[derive(Deserialize)]
struct BraidRepr {
    strands: usize,
    word: Vec<i32>,
}

impl<'de> Deserialize<'de> for BraidWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = BraidRepr::deserialize(d)?;
        BraidWord::new(r.strands, r.word).map_err(D::Error::custom)
    }
}

impl BraidWord {
    pub fn new(strands: usize, word: Vec<i32>) -> Result<Self, BraidError> {
        if let Some(&g) = word.iter().find(|&&g| g == 0 || g.unsigned_abs() as usize >= strands.max(1)) {
            return Err(BraidError::GeneratorOutOfRange { generator: g, strands });
        }
        Ok(Self { strands, word })
    }

    pub fn empty(strands: usize) -> Self {
        Self { strands, word: Vec::new() }
    }

    pub fn generator(strands: usize, g: i32) -> Result<Self, BraidError> {
        Self::new(strands, vec![g])
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.word.iter().all(|&g| g > 0)
    }

    pub fn exponent_sum(&self) -> i64 {
        self.word.iter().map(|&g| g.signum() as i64).sum()
    }

    /// Underlying permutation: strand starting at `j` ends at `p(j)`.
    pub fn perm_image(&self) -> Permutation {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &g in &self.word {
            let i = g.unsigned_abs() as usize;
            at.swap(i - 1, i);
        }
        Permutation::from_images(at).expect("bijection").inverse()
    }

    /// Signed crossing count for each pair of strands, keyed by starting
    /// positions `a < b`, flattened row-major over the upper triangle.
    pub fn crossing_sums(&self) -> Vec<i64> {
        let k = self.strands;
        let mut sums = vec![0i64; k * k];
        let mut at: Vec<usize> = (0..k).collect();
        for &g in &self.word {
            let i = g.unsigned_abs() as usize;
            let (a, b) = (at[i - 1], at[i]);
            sums[a.min(b) * k + a.max(b)] += g.signum() as i64;
            at.swap(i - 1, i);
        }
        sums
    }

    pub fn multiply(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch(self.strands, other.strands));
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Ok(Self { strands: self.strands, word })
    }

    pub fn invert(&self) -> BraidWord {
        Self { strands: self.strands, word: self.word.iter().rev().map(|g| -g).collect() }
    }

    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.word.len());
        for &g in &self.word {
            if out.last() == Some(&-g) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        Self { strands: self.strands, word: out }
    }

    /// `self` on the first strands, `other` shifted after them.
    pub fn block_sum(&self, other: &BraidWord) -> BraidWord {
        let shift = self.strands as i32;
        let mut word = self.word.clone();
        word.extend(other.word.iter().map(|&g| g + g.signum() * shift));
        Self { strands: self.strands + other.strands, word }
    }

    /// Delete every strand except those starting at the sorted positions `keep`.
    pub fn restrict_strands(&self, keep: &[usize]) -> BraidWord {
        let kept: Vec<bool> = (0..self.strands).map(|s| keep.binary_search(&s).is_ok()).collect();
        let mut at: Vec<usize> = (0..self.strands).collect();
        let mut word = Vec::new();
        for &g in &self.word {
            let i = g.unsigned_abs() as usize;
            if kept[at[i - 1]] && kept[at[i]] {
                let rel = at[..i - 1].iter().filter(|&&s| kept[s]).count();
                word.push(g.signum() * (rel as i32 + 1));
            }
            at.swap(i - 1, i);
        }
        Self { strands: keep.len(), word }
    }

    /// Shift onto a wider braid starting at strand `offset`.
    pub fn embed(&self, offset: usize, strands: usize) -> BraidWord {
        let word = self.word.iter().map(|&g| g + g.signum() * offset as i32).collect();
        Self { strands, word }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}{:?}", self.strands, self.word)
    }
}

/// Dehornoy handle reduction to a handle-free word.
pub fn handle_reduce(b: &BraidWord, limit: usize) -> Result<BraidWord, BraidError> {
    let mut w = b.free_reduce().word;
    let mut last = vec![usize::MAX; b.strands + 1];
    let mut steps: u64 = 0;
    loop {
        // handle with the leftmost right end
        last.iter_mut().for_each(|x| *x = usize::MAX);
        let mut found = None;
        for (r, &g) in w.iter().enumerate() {
            let i = g.unsigned_abs() as usize;
            let l = last[i];
            let blocked = i > 1 && last[i - 1] != usize::MAX && (l == usize::MAX || last[i - 1] > l);
            if l != usize::MAX && w[l] == -g && !blocked {
                found = Some((l, r));
                break;
            }
            last[i] = r;
        }
        let Some((l, r)) = found else { break };
        let e = w[l].signum();
        let i = w[l].abs();
        let mut next = Vec::with_capacity(w.len() + 2 * (r - l));
        next.extend_from_slice(&w[..l]);
        for &x in &w[l + 1..r] {
            if x.abs() == i + 1 {
                next.extend([-e * (i + 1), x.signum() * i, e * (i + 1)]);
            } else {
                next.push(x);
            }
        }
        next.extend_from_slice(&w[r + 1..]);
        w = BraidWord { strands: b.strands, word: next }.free_reduce().word;
        steps += 1;
        if w.len() > limit || steps > 50 * limit as u64 {
            return Err(BraidError::ResourceLimit { length: w.len(), limit });
        }
    }
    Ok(BraidWord { strands: b.strands, word: w })
}

/// Word problem: is `b` the identity braid.
pub fn is_trivial(b: &BraidWord) -> Result<bool, BraidError> {
    is_trivial_with_limit(b, DEFAULT_GROWTH_LIMIT)
}

pub fn is_trivial_with_limit(b: &BraidWord, limit: usize) -> Result<bool, BraidError> {
    let trivial = handle_reduce(b, limit)?.is_empty();
    let invariants_ok =
        b.exponent_sum() == 0 && b.perm_image().is_identity() && b.crossing_sums().iter().all(|&s| s == 0);
    if trivial && !invariants_ok {
        return Err(BraidError::InvariantBroken(format!("{b} reduced to empty but invariants are nonzero")));
    }
    Ok(trivial)
}

pub fn braid_equal(a: &BraidWord, b: &BraidWord) -> Result<bool, BraidError> {
    is_trivial(&a.multiply(&b.invert())?)
}
