//! Maps of n-ordinals.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::ordinal::{ordinal_sum, LevelDomain, NOrdinal, OrdinalError};
use crate::perm::Permutation;

/// Default cap on the number of candidate tables an enumeration may scan.
pub const DEFAULT_MAP_SEARCH_LIMIT: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// First failing pair `(i, j)` of source positions, `i < j`.
    pub pair: (usize, usize),
    /// Level `p` with `i <_p j` in the source.
    pub source_level: i32,
    pub images: (usize, usize),
    /// Why each of the three admissible cases fails.
    pub details: [String; 3],
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pair {:?} (level {}): {}", self.pair, self.source_level, self.details.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("not a morphism: {0}")]
    NotAMorphism(Box<Violation>),
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(LevelDomain, LevelDomain),
    #[error("table has length {got}, source arity is {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("image {image} out of range for target arity {arity}")]
    OutOfRange { image: usize, arity: usize },
    #[error("composition mismatch: {0}")]
    ComposeMismatch(String),
    #[error("search over {requested} tables exceeds limit {limit}")]
    ResourceLimit { requested: u64, limit: u64 },
    #[error("internal invariant broken: {0}")]
    InvariantBroken(String),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

impl MapError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::NotAMorphism(_) => "NOT_A_MORPHISM",
            Self::DomainMismatch(..) => "DOMAIN_MISMATCH",
            Self::WrongLength { .. } | Self::OutOfRange { .. } => "OUT_OF_RANGE",
            Self::ComposeMismatch(_) => "COMPOSE_MISMATCH",
            Self::ResourceLimit { .. } => "RESOURCE_LIMIT",
            Self::InvariantBroken(_) => "INVARIANT_BROKEN",
            Self::Ordinal(e) => e.code(),
        }
    }
}

/// A validated map of n-ordinals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrdinalMap {
    source: NOrdinal,
    target: NOrdinal,
    f: Vec<usize>,
}

#[derive(Deserialize)]
struct MapRepr {
    source: NOrdinal,
    target: NOrdinal,
    f: Vec<usize>,
}

impl<'de> Deserialize<'de> for OrdinalMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = MapRepr::deserialize(d)?;
        make_map(&r.source, &r.target, r.f).map_err(D::Error::custom)
    }
}

/// Check the three admissible cases for every pair; report the first failure.
pub fn check_table(t: &NOrdinal, s: &NOrdinal, f: &[usize]) -> Result<(), MapError> {
    if t.domain() != s.domain() {
        return Err(MapError::DomainMismatch(t.domain(), s.domain()));
    }
    if f.len() != t.arity() {
        return Err(MapError::WrongLength { got: f.len(), expected: t.arity() });
    }
    if let Some(&bad) = f.iter().find(|&&x| x >= s.arity()) {
        return Err(MapError::OutOfRange { image: bad, arity: s.arity() });
    }
    match first_violation(t, s, f) {
        None => Ok(()),
        Some(v) => Err(MapError::NotAMorphism(Box::new(v))),
    }
}

fn pair_ok(p: i32, a: usize, b: usize, s: &NOrdinal) -> bool {
    match a.cmp(&b) {
        Ordering::Equal => true,
        Ordering::Less => s.level(a, b) >= p,
        Ordering::Greater => s.level(b, a) > p,
    }
}

fn first_violation(t: &NOrdinal, s: &NOrdinal, f: &[usize]) -> Option<Violation> {
    for i in 0..t.arity() {
        for j in i + 1..t.arity() {
            let p = t.level(i, j);
            let (a, b) = (f[i], f[j]);
            if pair_ok(p, a, b, s) {
                continue;
            }
            let c1 = if a < b {
                format!("image relation is <_{} but needs level >= {p}", s.level(a, b))
            } else {
                "images are not in source order".to_string()
            };
            let c2 = "images differ".to_string();
            let c3 = if b < a {
                format!("reversed image relation is <_{} but needs level > {p}", s.level(b, a))
            } else {
                "images are not reversed".to_string()
            };
            return Some(Violation { pair: (i, j), source_level: p, images: (a, b), details: [c1, c2, c3] });
        }
    }
    None
}

/// Validate and build a map.
pub fn make_map(t: &NOrdinal, s: &NOrdinal, f: Vec<usize>) -> Result<OrdinalMap, MapError> {
    check_table(t, s, &f)?;
    Ok(OrdinalMap { source: t.clone(), target: s.clone(), f })
}

impl OrdinalMap {
    pub fn identity(t: &NOrdinal) -> Self {
        Self { source: t.clone(), target: t.clone(), f: (0..t.arity()).collect() }
    }

    /// The unique map to the one-point ordinal.
    pub fn terminal(t: &NOrdinal) -> Self {
        Self { source: t.clone(), target: NOrdinal::unit(t.domain()), f: vec![0; t.arity()] }
    }

    pub fn source(&self) -> &NOrdinal {
        &self.source
    }

    pub fn target(&self) -> &NOrdinal {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.f
    }

    pub fn apply(&self, i: usize) -> usize {
        self.f[i]
    }

    pub fn is_quasibijection(&self) -> bool {
        self.source.arity() == self.target.arity() && Permutation::from_images(self.f.clone()).is_some()
    }

    pub fn is_order_preserving(&self) -> bool {
        self.f.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.arity()];
        self.f.iter().for_each(|&i| hit[i] = true);
        hit.into_iter().all(|h| h)
    }

    /// Underlying permutation of a quasibijection.
    pub fn permutation(&self) -> Option<Permutation> {
        if self.source.arity() != self.target.arity() {
            return None;
        }
        Permutation::from_images(self.f.clone())
    }

    /// Sizes of the fibers over each target element.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.target.arity()];
        self.f.iter().for_each(|&i| sizes[i] += 1);
        sizes
    }

    pub fn fiber_positions(&self, i: usize) -> Vec<usize> {
        (0..self.f.len()).filter(|&x| self.f[x] == i).collect()
    }
}

impl fmt::Display for OrdinalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] -> [{}] {:?}", self.source, self.target, self.f)
    }
}

/// `omega ∘ sigma`.
pub fn compose(sigma: &OrdinalMap, omega: &OrdinalMap) -> Result<OrdinalMap, MapError> {
    if sigma.target != omega.source {
        return Err(MapError::ComposeMismatch(format!("{} is not {}", sigma.target, omega.source)));
    }
    let f: Vec<usize> = sigma.f.iter().map(|&i| omega.f[i]).collect();
    make_map(&sigma.source, &omega.target, f)
        .map_err(|e| MapError::InvariantBroken(format!("composite failed validation: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub ordinal: NOrdinal,
    pub positions: Vec<usize>,
}

pub fn fiber(sigma: &OrdinalMap, i: usize) -> Result<Fiber, MapError> {
    if i >= sigma.target.arity() {
        return Err(MapError::OutOfRange { image: i, arity: sigma.target.arity() });
    }
    let positions = sigma.fiber_positions(i);
    Ok(Fiber { ordinal: sigma.source.restrict(&positions), positions })
}

/// Restriction of `sigma` to a set of source positions, landing in the
/// induced ordinal on a set of target positions containing all images.
pub fn restrict(sigma: &OrdinalMap, src: &[usize], dst: &[usize]) -> Result<OrdinalMap, MapError> {
    let f = src
        .iter()
        .map(|&x| {
            let y = sigma.f[x];
            dst.binary_search(&y)
                .map_err(|_| MapError::ComposeMismatch(format!("image {y} not in restricted target")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    make_map(&sigma.source.restrict(src), &sigma.target.restrict(dst), f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MapClass {
    pub is_quasibijection: bool,
    pub is_order_preserving: bool,
}

pub fn classify_map(sigma: &OrdinalMap) -> MapClass {
    MapClass { is_quasibijection: sigma.is_quasibijection(), is_order_preserving: sigma.is_order_preserving() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapFilter {
    All,
    Quasibijections,
    OrderPreserving,
}

/// All valid maps `T -> S` passing `filter`, in lexicographic table order.
pub fn enumerate_maps(t: &NOrdinal, s: &NOrdinal, filter: MapFilter, limit: u64) -> Result<Vec<OrdinalMap>, MapError> {
    if t.domain() != s.domain() {
        return Err(MapError::DomainMismatch(t.domain(), s.domain()));
    }
    let (k, m) = (t.arity(), s.arity());
    let mut out = Vec::new();
    match filter {
        MapFilter::Quasibijections => {
            if k != m {
                return Ok(out);
            }
            let requested = (1..=k as u64).product::<u64>();
            if requested > limit {
                return Err(MapError::ResourceLimit { requested, limit });
            }
            for p in Permutation::all(k) {
                if first_violation(t, s, p.images()).is_none() {
                    out.push(OrdinalMap { source: t.clone(), target: s.clone(), f: p.images().to_vec() });
                }
            }
        }
        MapFilter::All | MapFilter::OrderPreserving => {
            if k > 0 && m == 0 {
                return Ok(out);
            }
            let requested = (m as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
            if requested > limit {
                return Err(MapError::ResourceLimit { requested, limit });
            }
            let mut f = vec![0usize; k];
            loop {
                let op_ok = filter == MapFilter::All || f.windows(2).all(|w| w[0] <= w[1]);
                if op_ok && first_violation(t, s, &f).is_none() {
                    out.push(OrdinalMap { source: t.clone(), target: s.clone(), f: f.clone() });
                }
                let mut i = k;
                loop {
                    if i == 0 {
                        return Ok(out);
                    }
                    i -= 1;
                    if f[i] + 1 < m {
                        f[i] += 1;
                        f[i + 1..].iter_mut().for_each(|x| *x = 0);
                        break;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Split at every level-0 gap.
pub fn block_decompose(t: &NOrdinal) -> Vec<NOrdinal> {
    block_bounds(t).into_iter().map(|(a, b)| t.restrict(&(a..b).collect::<Vec<_>>())).collect()
}

/// Half-open position ranges of the blocks.
pub fn block_bounds(t: &NOrdinal) -> Vec<(usize, usize)> {
    if t.arity() == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut start = 0;
    for (i, &l) in t.levels().iter().enumerate() {
        if l == 0 {
            out.push((start, i + 1));
            start = i + 1;
        }
    }
    out.push((start, t.arity()));
    out
}

/// Direct sum of maps.
pub fn map_sum(a: &OrdinalMap, b: &OrdinalMap) -> Result<OrdinalMap, MapError> {
    let source = ordinal_sum(&a.source, &b.source)?;
    let target = ordinal_sum(&a.target, &b.target)?;
    let shift = a.target.arity();
    let f = a.f.iter().copied().chain(b.f.iter().map(|&x| x + shift)).collect();
    make_map(&source, &target, f)
}

/// Restrictions of `sigma` over the blocks of its target.
pub fn block_decompose_map(sigma: &OrdinalMap) -> Result<Vec<OrdinalMap>, MapError> {
    let mut parts = Vec::new();
    let mut cursor = 0;
    for (a, b) in block_bounds(&sigma.target) {
        let pre: Vec<usize> = (0..sigma.f.len()).filter(|&x| (a..b).contains(&sigma.f[x])).collect();
        if pre.iter().enumerate().any(|(o, &x)| x != cursor + o) {
            return Err(MapError::InvariantBroken(format!("preimage of block {a}..{b} is not contiguous")));
        }
        cursor += pre.len();
        let dst: Vec<usize> = (a..b).collect();
        parts.push(restrict(sigma, &pre, &dst)?);
    }
    Ok(parts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub pi: OrdinalMap,
    pub middle: NOrdinal,
    pub nu: OrdinalMap,
}

/// Factor `sigma = nu ∘ pi` with `pi` a quasibijection and `nu` order preserving.
///
/// The middle ordinal lists the source elements fiber by fiber, each fiber in
/// source order. Consecutive elements of one fiber sit at the top level;
/// consecutive elements of different fibers inherit the target relation.
pub fn factorize(sigma: &OrdinalMap) -> Result<Factorization, MapError> {
    let t = &sigma.source;
    let s = &sigma.target;
    let domain = t.domain();
    let mut order: Vec<usize> = (0..t.arity()).collect();
    order.sort_by_key(|&x| (sigma.f[x], x));
    let levels: Vec<i32> = order
        .windows(2)
        .map(|w| {
            let (a, b) = (sigma.f[w[0]], sigma.f[w[1]]);
            if a == b {
                domain.top()
            } else {
                s.level(a, b)
            }
        })
        .collect();
    let middle = if t.arity() == 0 { NOrdinal::empty(domain) } else { NOrdinal::new(domain, levels)? };
    let mut pi_table = vec![0; t.arity()];
    for (pos, &x) in order.iter().enumerate() {
        pi_table[x] = pos;
    }
    let nu_table: Vec<usize> = order.iter().map(|&x| sigma.f[x]).collect();
    let broken = |what: &str, e: MapError| MapError::InvariantBroken(format!("{what}: {e}"));
    let pi = make_map(t, &middle, pi_table).map_err(|e| broken("pi", e))?;
    let nu = make_map(&middle, s, nu_table).map_err(|e| broken("nu", e))?;
    let check = compose(&pi, &nu)?;
    if check.f != sigma.f || !pi.is_quasibijection() || !nu.is_order_preserving() {
        return Err(MapError::InvariantBroken("factorization clauses".into()));
    }
    Ok(Factorization { pi, middle, nu })
}

/// `pi` is increasing on every fiber of `nu`.
pub fn preserves_fiber_order(pi: &OrdinalMap, nu: &OrdinalMap) -> bool {
    let mut last: Vec<Option<usize>> = vec![None; nu.target.arity()];
    for x in 0..pi.f.len() {
        let y = pi.f[x];
        let b = nu.f[y];
        if last[b].is_some_and(|prev| prev > y) {
            return false;
        }
        last[b] = Some(y);
    }
    true
}
