//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use qbench::braid::zigzag::permutation_blocks;
use qbench::braid::{BraidWord, ZigZag};
use qbench::maps::{enumerate_maps, MapFilter, OrdinalMap};
use qbench::ordinal::{enumerate_ordinals, LevelDomain, NOrdinal};
use qbench::quasicat::{HomologyResult, SimplicialComplexData};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn ord(n: u32, levels: &[i32]) -> NOrdinal {
    NOrdinal::new(LevelDomain::Finite(n), levels.to_vec()).unwrap()
}

/// Every assignment of a level to each pair `a < b` of `0..k`, kept when the
/// min rule holds on every triple. Returns the consecutive levels of each survivor.
pub fn brute_force_ordinals(n: u32, k: usize) -> Vec<Vec<i32>> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let idx = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).unwrap();
    let total = (n as u64).pow(pairs.len() as u32);
    let mut out = Vec::new();
    let mut lv = vec![0i32; pairs.len()];
    for code in 0..total {
        let mut c = code;
        for l in lv.iter_mut() {
            *l = (c % n as u64) as i32;
            c /= n as u64;
        }
        let ok = (0..k).all(|a| {
            (a + 1..k).all(|b| (b + 1..k).all(|c| lv[idx(a, c)] == lv[idx(a, b)].min(lv[idx(b, c)])))
        });
        if ok {
            out.push((0..k.saturating_sub(1)).map(|i| lv[idx(i, i + 1)]).collect());
        }
    }
    out.sort();
    out
}

/// Level between positions `a < b`, recomputed from scratch.
pub fn level_between(levels: &[i32], a: usize, b: usize) -> i32 {
    *levels[a..b].iter().min().unwrap()
}

/// Morphism test read straight off the definition.
pub fn is_morphism(t: &[i32], s: &[i32], f: &[usize]) -> bool {
    let k = t.len() + 1;
    for i in 0..k {
        for j in i + 1..k {
            let p = level_between(t, i, j);
            let (a, b) = (f[i], f[j]);
            let ok = if a == b {
                true
            } else if a < b {
                level_between(s, a, b) >= p
            } else {
                level_between(s, b, a) > p
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

fn rank_mod_p(rows: &[Vec<(usize, i64)>], cols: usize, p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![0i64; cols];
            for &(c, x) in r {
                v[c] = (v[c] + x).rem_euclid(p);
            }
            v
        })
        .collect();
    let inv = |a: i64| {
        let (mut r, mut e, mut b) = (1i64, p - 2, a);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let iv = inv(m[rank][c]);
        for x in m[rank].iter_mut() {
            *x = *x * iv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for cc in 0..cols {
                    m[r][cc] = (m[r][cc] - f * m[rank][cc]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim H_d(X; F_p)` for every degree, by dense elimination.
pub fn betti_mod_p(cx: &SimplicialComplexData, p: i64) -> Vec<usize> {
    let counts = cx.counts();
    let ranks: Vec<usize> =
        (0..counts.len()).map(|d| if d == 0 { 0 } else { rank_mod_p(&cx.boundary(d), counts[d - 1], p) }).collect();
    (0..counts.len()).map(|d| counts[d] - ranks[d] - ranks.get(d + 1).copied().unwrap_or(0)).collect()
}

/// Universal coefficients: what `betti_mod_p` must be for a claimed integral homology.
pub fn predicted_mod_p(h: &HomologyResult, p: i64, degrees: usize) -> Vec<usize> {
    let t = |d: usize| {
        h.groups.get(d).map_or(0, |g| g.torsion.iter().filter(|x| (*x % p) == 0.into()).count())
    };
    (0..degrees)
        .map(|d| h.groups.get(d).map_or(0, |g| g.rank) + t(d) + if d > 0 { t(d - 1) } else { 0 })
        .collect()
}

pub fn trim(mut v: Vec<usize>) -> Vec<usize> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

type M2 = [[i64; 2]; 2];

fn mul(a: M2, b: M2) -> M2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// Image of a 3-strand word in `SL(2, Z)` together with its exponent sum.
/// The pair determines the braid: the kernel of `B_3 -> SL(2, Z)` is generated
/// by `Δ^4`, whose exponent sum is 12.
pub fn sl2_oracle(b: &BraidWord) -> (M2, i64) {
    assert!(b.strands() <= 3);
    let s1: M2 = [[1, 1], [0, 1]];
    let s1i: M2 = [[1, -1], [0, 1]];
    let s2: M2 = [[1, 0], [-1, 1]];
    let s2i: M2 = [[1, 0], [1, 1]];
    let mut m: M2 = [[1, 0], [0, 1]];
    for &g in b.letters() {
        m = mul(m, match g {
            1 => s1,
            -1 => s1i,
            2 => s2,
            -2 => s2i,
            _ => unreachable!(),
        });
    }
    (m, b.exponent_sum())
}

pub fn sl2_trivial(b: &BraidWord) -> bool {
    sl2_oracle(b) == ([[1, 0], [0, 1]], 0)
}

pub fn quasibijections(t: &NOrdinal, s: &NOrdinal) -> Vec<OrdinalMap> {
    enumerate_maps(t, s, MapFilter::Quasibijections, 1 << 24).unwrap()
}

/// Whether the span `S <- T -> R` has a braid permutation with at least two blocks.
pub fn is_block_span(sigma: &OrdinalMap, eta: &OrdinalMap) -> bool {
    let rho = sigma.permutation().unwrap().inverse().then(&eta.permutation().unwrap());
    rho.len() == 1 || permutation_blocks(&rho).len() >= 2
}

/// A random span of 2-ordinal quasibijections on `k` points whose
/// permutation splits into blocks, by rejection.
pub fn random_block_span<R: Rng>(k: usize, rng: &mut R) -> ZigZag {
    let obs = enumerate_ordinals(2, k, 1 << 20).unwrap();
    loop {
        let t = obs.choose(rng).unwrap();
        let s = obs.choose(rng).unwrap();
        let r = obs.choose(rng).unwrap();
        let (ss, rr) = (quasibijections(t, s), quasibijections(t, r));
        let (Some(sigma), Some(eta)) = (ss.choose(rng), rr.choose(rng)) else { continue };
        if is_block_span(sigma, eta) {
            return ZigZag::span(sigma.clone(), eta.clone()).unwrap();
        }
    }
}
