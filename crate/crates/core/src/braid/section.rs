//! Positive permutation braids, cabling and block permutations.

use super::word::BraidWord;
use super::BraidError;
use crate::maps::OrdinalMap;
use crate::ordinal::LevelDomain;
use crate::perm::{block_permutation, Permutation};

/// The positive braid with one crossing per inverted pair of `pi`.
///
/// Bubble passes swap adjacent strands whose targets are out of order, so the
/// earlier strand always crosses over the later one.
pub fn q_section(pi: &Permutation) -> BraidWord {
    let k = pi.len();
    let mut at: Vec<usize> = (0..k).collect();
    let mut word = Vec::with_capacity(pi.length());
    loop {
        let mut swapped = false;
        for i in 0..k.saturating_sub(1) {
            if pi.apply(at[i]) > pi.apply(at[i + 1]) {
                at.swap(i, i + 1);
                word.push(i as i32 + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    BraidWord::new(k, word).expect("indices in range")
}

/// Block permutation `Γ_S(rho; sizes)`.
pub fn block_perm(rho: &Permutation, sizes: &[usize]) -> Result<Permutation, BraidError> {
    if rho.len() != sizes.len() {
        return Err(BraidError::LengthMismatch(rho.len(), sizes.len()));
    }
    Ok(block_permutation(rho, sizes))
}

/// Cabling `Γ_B(rho; m)`: strand `j` of `rho` becomes `m[j]` parallel strands.
pub fn cable(rho: &BraidWord, m: &[usize]) -> Result<BraidWord, BraidError> {
    if rho.strands() != m.len() {
        return Err(BraidError::LengthMismatch(rho.strands(), m.len()));
    }
    let total: usize = m.iter().sum();
    let mut widths = m.to_vec();
    let mut word = Vec::new();
    for &g in rho.letters() {
        let i = g.unsigned_abs() as usize;
        let offset: usize = widths[..i - 1].iter().sum();
        let (a, b) = (widths[i - 1], widths[i]);
        let swap = Permutation::transposition(2, 0);
        let crossing = if g > 0 {
            q_section(&block_permutation(&swap, &[a, b]))
        } else {
            q_section(&block_permutation(&swap, &[b, a])).invert()
        };
        word.extend(crossing.letters().iter().map(|&x| x + x.signum() * offset as i32));
        widths.swap(i - 1, i);
    }
    BraidWord::new(total, word)
}

/// `q` applied to the permutation of a quasibijection of 2-ordinals.
pub fn braid_of_quasibijection(sigma: &OrdinalMap) -> Result<BraidWord, BraidError> {
    if sigma.source().domain() != LevelDomain::Finite(2) {
        return Err(BraidError::NotQuasibijection(format!("{sigma} is not a map of 2-ordinals")));
    }
    let p = sigma.permutation().ok_or_else(|| BraidError::NotQuasibijection(sigma.to_string()))?;
    Ok(q_section(&p))
}
