//! n-ordinals in canonical level-sequence form.
//!
//! An ordinal of arity `k` is stored as its `k - 1` consecutive levels:
//! `levels[i] = p` means `i <_p i+1`. The relation between positions `a < b`
//! is the minimum of the levels strictly between them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default cap on the number of ordinals a single enumeration may produce.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("level {level} is outside the domain {domain}")]
    LevelOutOfDomain { level: i64, domain: LevelDomain },
    #[error("axiom {axiom} violated at {witness:?}")]
    AxiomViolation { axiom: u8, witness: Vec<usize> },
    #[error("no relation recorded between {0} and {1}")]
    MissingPair(usize, usize),
    #[error("element {0} related to itself")]
    SameElement(usize),
    #[error("element {element} out of range for arity {arity}")]
    OutOfRange { element: usize, arity: usize },
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(LevelDomain, LevelDomain),
    #[error("cannot suspend from {from} into {to}")]
    TargetTooSmall { from: LevelDomain, to: LevelDomain },
    #[error("enumeration of {requested} items exceeds limit {limit}")]
    ResourceLimit { requested: u64, limit: u64 },
    #[error("malformed tree: {0}")]
    MalformedTree(String),
}

impl OrdinalError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::LevelOutOfDomain { .. } => "LEVEL_OUT_OF_DOMAIN",
            Self::AxiomViolation { .. } => "AXIOM_VIOLATION",
            Self::MissingPair(..) => "MISSING_PAIR",
            Self::SameElement(_) => "SAME_ELEMENT",
            Self::OutOfRange { .. } => "OUT_OF_RANGE",
            Self::DomainMismatch(..) => "DOMAIN_MISMATCH",
            Self::TargetTooSmall { .. } => "TARGET_TOO_SMALL",
            Self::ResourceLimit { .. } => "RESOURCE_LIMIT",
            Self::MalformedTree(_) => "MALFORMED_TREE",
        }
    }
}

/// The set of admissible levels: `{0, ..., n-1}` or the non-positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LevelDomain {
    Finite(u32),
    Infinite,
}

impl LevelDomain {
    pub fn contains(self, level: i64) -> bool {
        match self {
            Self::Finite(n) => level >= 0 && level < n as i64,
            Self::Infinite => level <= 0,
        }
    }

    /// Largest level, i.e. the finest relation.
    pub fn top(self) -> i32 {
        match self {
            Self::Finite(n) => n as i32 - 1,
            Self::Infinite => 0,
        }
    }

    /// Smallest level, if any.
    pub fn bottom(self) -> Option<i32> {
        match self {
            Self::Finite(_) => Some(0),
            Self::Infinite => None,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Self::Finite(n) => Some(n),
            Self::Infinite => None,
        }
    }
}

impl fmt::Display for LevelDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(n) => write!(f, "{n}"),
            Self::Infinite => write!(f, "inf"),
        }
    }
}

/// A canonical n-ordinal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NOrdinal {
    domain: LevelDomain,
    arity: usize,
    levels: Vec<i32>,
}

impl NOrdinal {
    /// Build an ordinal of arity `levels.len() + 1`.
    pub fn new(domain: LevelDomain, levels: Vec<i32>) -> Result<Self, OrdinalError> {
        for &l in &levels {
            if !domain.contains(l as i64) {
                return Err(OrdinalError::LevelOutOfDomain { level: l as i64, domain });
            }
        }
        if let LevelDomain::Finite(0) = domain {
            return Err(OrdinalError::LevelOutOfDomain { level: 0, domain });
        }
        let arity = levels.len() + 1;
        Ok(Self { domain, arity, levels })
    }

    pub fn empty(domain: LevelDomain) -> Self {
        Self { domain, arity: 0, levels: Vec::new() }
    }

    /// The one-point ordinal `U_n`.
    pub fn unit(domain: LevelDomain) -> Self {
        Self { domain, arity: 1, levels: Vec::new() }
    }

    /// Arity `k` with every consecutive pair at the same level.
    pub fn constant(domain: LevelDomain, arity: usize, level: i32) -> Result<Self, OrdinalError> {
        if arity == 0 {
            return Ok(Self::empty(domain));
        }
        Self::new(domain, vec![level; arity - 1])
    }

    pub fn domain(&self) -> LevelDomain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn levels(&self) -> &[i32] {
        &self.levels
    }

    /// Level of the relation between positions `a < b`.
    pub fn level(&self, a: usize, b: usize) -> i32 {
        debug_assert!(a < b && b < self.arity);
        self.levels[a..b].iter().copied().min().expect("a < b")
    }

    /// Relation between two positions: `(Less, p)` means `a <_p b`.
    pub fn relation_of(&self, a: usize, b: usize) -> Result<(Ordering, i32), OrdinalError> {
        for e in [a, b] {
            if e >= self.arity {
                return Err(OrdinalError::OutOfRange { element: e, arity: self.arity });
            }
        }
        match a.cmp(&b) {
            Ordering::Equal => Err(OrdinalError::SameElement(a)),
            Ordering::Less => Ok((Ordering::Less, self.level(a, b))),
            Ordering::Greater => Ok((Ordering::Greater, self.level(b, a))),
        }
    }

    /// Full relation table over positions.
    pub fn relation_table(&self) -> RelationTable {
        let mut t = RelationTable::new(self.domain, self.arity);
        for a in 0..self.arity {
            for b in a + 1..self.arity {
                t.insert(a, b, self.level(a, b)).expect("fresh table");
            }
        }
        t
    }

    /// Induced ordinal on a strictly increasing list of positions.
    pub fn restrict(&self, positions: &[usize]) -> NOrdinal {
        if positions.is_empty() {
            return Self::empty(self.domain);
        }
        let levels = positions.windows(2).map(|w| self.level(w[0], w[1])).collect();
        Self { domain: self.domain, arity: positions.len(), levels }
    }

    /// Change the domain without touching levels.
    pub fn with_domain(&self, domain: LevelDomain) -> Result<Self, OrdinalError> {
        if self.arity == 0 {
            return Ok(Self::empty(domain));
        }
        Self::new(domain, self.levels.clone())
    }
}

impl fmt::Display for NOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity == 0 {
            return write!(f, "()");
        }
        write!(f, "0")?;
        for (i, l) in self.levels.iter().enumerate() {
            write!(f, "<{l} {}", i + 1)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct OrdinalRepr {
    n: serde_json::Value,
    levels: Vec<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arity: Option<usize>,
}

pub(crate) fn domain_to_json(d: LevelDomain) -> serde_json::Value {
    match d {
        LevelDomain::Finite(n) => serde_json::Value::from(n),
        LevelDomain::Infinite => serde_json::Value::from("inf"),
    }
}

pub(crate) fn domain_from_json(v: &serde_json::Value) -> Option<LevelDomain> {
    match v {
        serde_json::Value::String(s) if s == "inf" => Some(LevelDomain::Infinite),
        serde_json::Value::Number(x) => x.as_u64().and_then(|n| u32::try_from(n).ok()).map(LevelDomain::Finite),
        _ => None,
    }
}

impl Serialize for NOrdinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OrdinalRepr {
            n: domain_to_json(self.domain),
            levels: self.levels.clone(),
            arity: (self.arity == 0).then_some(0),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NOrdinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = OrdinalRepr::deserialize(d)?;
        let domain = domain_from_json(&r.n).ok_or_else(|| D::Error::custom("n must be a positive integer or \"inf\""))?;
        match r.arity {
            Some(0) if r.levels.is_empty() => Ok(NOrdinal::empty(domain)),
            Some(k) if k != r.levels.len() + 1 => Err(D::Error::custom("arity disagrees with levels")),
            _ => NOrdinal::new(domain, r.levels).map_err(D::Error::custom),
        }
    }
}

/// Explicit pairwise relations over labels `0..arity`.
///
/// An entry for `(a, b)` with `a < b` stores which of the two comes first
/// and the level of the relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTable {
    domain: LevelDomain,
    arity: usize,
    entries: BTreeMap<(usize, usize), (Ordering, i32)>,
}

impl RelationTable {
    pub fn new(domain: LevelDomain, arity: usize) -> Self {
        Self { domain, arity, entries: BTreeMap::new() }
    }

    pub fn domain(&self) -> LevelDomain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Record `a <_level b`.
    pub fn insert(&mut self, a: usize, b: usize, level: i32) -> Result<(), OrdinalError> {
        for e in [a, b] {
            if e >= self.arity {
                return Err(OrdinalError::OutOfRange { element: e, arity: self.arity });
            }
        }
        if a == b {
            return Err(OrdinalError::AxiomViolation { axiom: 1, witness: vec![a] });
        }
        if !self.domain.contains(level as i64) {
            return Err(OrdinalError::LevelOutOfDomain { level: level as i64, domain: self.domain });
        }
        let (key, dir) = if a < b { ((a, b), Ordering::Less) } else { ((b, a), Ordering::Greater) };
        match self.entries.get(&key) {
            Some(&old) if old != (dir, level) => {
                Err(OrdinalError::AxiomViolation { axiom: 2, witness: vec![key.0, key.1] })
            }
            _ => {
                self.entries.insert(key, (dir, level));
                Ok(())
            }
        }
    }

    /// `Some(p)` when `a <_p b` is recorded.
    pub fn less(&self, a: usize, b: usize) -> Option<i32> {
        if a == b {
            return None;
        }
        let (key, want) = if a < b { ((a, b), Ordering::Less) } else { ((b, a), Ordering::Greater) };
        match self.entries.get(&key) {
            Some(&(dir, l)) if dir == want => Some(l),
            _ => None,
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i32)> + '_ {
        self.entries.iter().map(|(&(a, b), &(dir, l))| match dir {
            Ordering::Less => (a, b, l),
            _ => (b, a, l),
        })
    }
}

/// A canonical ordinal together with the label sitting at each position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Canonicalized {
    pub ordinal: NOrdinal,
    /// `order[i]` is the label at position `i`.
    pub order: Vec<usize>,
}

/// Validate a relation table and return its canonical form.
pub fn from_relations(table: &RelationTable) -> Result<Canonicalized, OrdinalError> {
    let k = table.arity;
    for a in 0..k {
        for b in a + 1..k {
            if !table.entries.contains_key(&(a, b)) {
                return Err(OrdinalError::MissingPair(a, b));
            }
        }
    }
    for a in 0..k {
        for b in 0..k {
            let Some(p) = table.less(a, b) else { continue };
            for c in 0..k {
                let Some(q) = table.less(b, c) else { continue };
                if table.less(a, c) != Some(p.min(q)) {
                    return Err(OrdinalError::AxiomViolation { axiom: 3, witness: vec![a, b, c] });
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        if a == b {
            Ordering::Equal
        } else if table.less(a, b).is_some() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    });
    let levels: Vec<i32> = order.windows(2).map(|w| table.less(w[0], w[1]).expect("sorted")).collect();
    let ordinal = if k == 0 { NOrdinal::empty(table.domain) } else { NOrdinal::new(table.domain, levels)? };
    Ok(Canonicalized { ordinal, order })
}

/// Ordinal sum: every element of `a` precedes every element of `b` at the
/// join level, which is 0 in both domains.
pub fn ordinal_sum(a: &NOrdinal, b: &NOrdinal) -> Result<NOrdinal, OrdinalError> {
    if a.domain != b.domain {
        return Err(OrdinalError::DomainMismatch(a.domain, b.domain));
    }
    if a.arity == 0 {
        return Ok(b.clone());
    }
    if b.arity == 0 {
        return Ok(a.clone());
    }
    let mut levels = a.levels.clone();
    levels.push(0);
    levels.extend_from_slice(&b.levels);
    NOrdinal::new(a.domain, levels)
}

/// Sum of a list of ordinals over a common domain.
pub fn ordinal_sum_all(domain: LevelDomain, parts: &[NOrdinal]) -> Result<NOrdinal, OrdinalError> {
    parts.iter().try_fold(NOrdinal::empty(domain), |acc, p| ordinal_sum(&acc, p))
}

/// Shift levels up by `n - m`.
pub fn suspend_vertical(r: &NOrdinal, n: u32) -> Result<NOrdinal, OrdinalError> {
    let target = LevelDomain::Finite(n);
    let m = match r.domain {
        LevelDomain::Finite(m) if m <= n => m,
        _ => return Err(OrdinalError::TargetTooSmall { from: r.domain, to: target }),
    };
    let shift = (n - m) as i32;
    if r.arity == 0 {
        return Ok(NOrdinal::empty(target));
    }
    NOrdinal::new(target, r.levels.iter().map(|l| l + shift).collect())
}

/// Keep levels, enlarge the domain.
pub fn suspend_horizontal(r: &NOrdinal, n: u32) -> Result<NOrdinal, OrdinalError> {
    let target = LevelDomain::Finite(n);
    match r.domain {
        LevelDomain::Finite(m) if m <= n => r.with_domain(target),
        _ => Err(OrdinalError::TargetTooSmall { from: r.domain, to: target }),
    }
}

/// Embed into the infinite domain via `q -> q - n + 1`.
pub fn suspend_infinity(r: &NOrdinal) -> Result<NOrdinal, OrdinalError> {
    let n = match r.domain {
        LevelDomain::Finite(n) => n as i32,
        LevelDomain::Infinite => return Ok(r.clone()),
    };
    if r.arity == 0 {
        return Ok(NOrdinal::empty(LevelDomain::Infinite));
    }
    NOrdinal::new(LevelDomain::Infinite, r.levels.iter().map(|q| q - n + 1).collect())
}

/// Number of n-ordinals of arity `k`.
pub fn count_ordinals(n: u32, k: usize) -> u64 {
    if k <= 1 {
        1
    } else {
        (n as u64).saturating_pow((k - 1) as u32)
    }
}

/// All n-ordinals of arity `k` in lexicographic order of level sequences.
pub fn enumerate_ordinals(n: u32, k: usize, limit: u64) -> Result<Vec<NOrdinal>, OrdinalError> {
    let total = count_ordinals(n, k);
    if total > limit {
        return Err(OrdinalError::ResourceLimit { requested: total, limit });
    }
    if n == 0 {
        return Err(OrdinalError::LevelOutOfDomain { level: 0, domain: LevelDomain::Finite(0) });
    }
    let domain = LevelDomain::Finite(n);
    if k == 0 {
        return Ok(vec![NOrdinal::empty(domain)]);
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0i32; k - 1];
    loop {
        out.push(NOrdinal { domain, arity: k, levels: cur.clone() });
        let mut i = cur.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] + 1 < n as i32 {
                cur[i] += 1;
                cur[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

/// A planar rooted tree; serialized as nested arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tree(pub Vec<Tree>);

impl Tree {
    fn depth_check(&self, depth: u32, n: u32) -> Result<usize, OrdinalError> {
        if depth == n {
            return if self.0.is_empty() {
                Ok(1)
            } else {
                Err(OrdinalError::MalformedTree(format!("node at depth {n} has children")))
            };
        }
        if self.0.is_empty() && depth > 0 {
            return Err(OrdinalError::MalformedTree(format!("leaf at depth {depth}, expected {n}")));
        }
        self.0.iter().map(|c| c.depth_check(depth + 1, n)).sum()
    }
}

/// Pruned planar tree of height `n`; leaves are the elements.
pub fn to_tree(r: &NOrdinal) -> Result<Tree, OrdinalError> {
    let n = r.domain.finite().ok_or(OrdinalError::DomainMismatch(r.domain, LevelDomain::Finite(1)))?;
    fn build(levels: &[i32], depth: i32, n: i32) -> Tree {
        if depth == n {
            return Tree(Vec::new());
        }
        // split into children at gaps of level == depth
        let mut children = Vec::new();
        let mut start = 0;
        for (i, &l) in levels.iter().enumerate() {
            if l == depth {
                children.push(build(&levels[start..i], depth + 1, n));
                start = i + 1;
            }
        }
        children.push(build(&levels[start..], depth + 1, n));
        Tree(children)
    }
    if r.arity == 0 {
        return Ok(Tree(Vec::new()));
    }
    Ok(build(&r.levels, 0, n as i32))
}

/// Inverse of [`to_tree`].
pub fn from_tree(t: &Tree, n: u32) -> Result<NOrdinal, OrdinalError> {
    if n == 0 {
        return Err(OrdinalError::MalformedTree("height 0".into()));
    }
    let domain = LevelDomain::Finite(n);
    if t.0.is_empty() {
        return Ok(NOrdinal::empty(domain));
    }
    t.depth_check(0, n)?;
    fn walk(t: &Tree, depth: i32, levels: &mut Vec<i32>) {
        for (i, c) in t.0.iter().enumerate() {
            if i > 0 {
                levels.push(depth);
            }
            walk(c, depth + 1, levels);
        }
    }
    let mut levels = Vec::new();
    walk(t, 0, &mut levels);
    NOrdinal::new(domain, levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(n: u32, l: &[i32]) -> NOrdinal {
        NOrdinal::new(LevelDomain::Finite(n), l.to_vec()).unwrap()
    }

    #[test]
    fn relation_examples() {
        let r = ord(2, &[0, 1, 1]);
        assert_eq!(r.relation_of(0, 3).unwrap(), (Ordering::Less, 0));
        assert_eq!(r.relation_of(2, 1).unwrap(), (Ordering::Greater, 1));
        assert_eq!(r.relation_of(1, 1), Err(OrdinalError::SameElement(1)));
        assert!(matches!(r.relation_of(0, 4), Err(OrdinalError::OutOfRange { .. })));
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(matches!(
            NOrdinal::new(LevelDomain::Finite(2), vec![2]),
            Err(OrdinalError::LevelOutOfDomain { level: 2, .. })
        ));
        assert!(NOrdinal::new(LevelDomain::Infinite, vec![1]).is_err());
        assert!(NOrdinal::new(LevelDomain::Infinite, vec![-3, 0]).is_ok());
    }

    #[test]
    fn axiom_three_witness() {
        let mut t = RelationTable::new(LevelDomain::Finite(2), 3);
        t.insert(0, 1, 0).unwrap();
        t.insert(1, 2, 1).unwrap();
        t.insert(2, 0, 1).unwrap();
        assert_eq!(from_relations(&t), Err(OrdinalError::AxiomViolation { axiom: 3, witness: vec![0, 1, 2] }));
    }

    #[test]
    fn axiom_two_conflict() {
        let mut t = RelationTable::new(LevelDomain::Finite(2), 2);
        t.insert(0, 1, 0).unwrap();
        assert!(matches!(t.insert(1, 0, 0), Err(OrdinalError::AxiomViolation { axiom: 2, .. })));
        assert!(matches!(t.insert(1, 1, 0), Err(OrdinalError::AxiomViolation { axiom: 1, .. })));
    }

    #[test]
    fn missing_pair() {
        let mut t = RelationTable::new(LevelDomain::Finite(2), 3);
        t.insert(0, 1, 0).unwrap();
        assert_eq!(from_relations(&t), Err(OrdinalError::MissingPair(0, 2)));
    }

    #[test]
    fn relabelled_table_canonicalizes() {
        // 2 <_1 0 <_0 1
        let mut t = RelationTable::new(LevelDomain::Finite(2), 3);
        t.insert(2, 0, 1).unwrap();
        t.insert(0, 1, 0).unwrap();
        t.insert(2, 1, 0).unwrap();
        let c = from_relations(&t).unwrap();
        assert_eq!(c.ordinal, ord(2, &[1, 0]));
        assert_eq!(c.order, vec![2, 0, 1]);
    }

    #[test]
    fn sums_and_suspensions() {
        let a = ord(2, &[1]);
        let b = ord(2, &[]);
        assert_eq!(ordinal_sum(&a, &b).unwrap(), ord(2, &[1, 0]));
        assert_eq!(ordinal_sum(&NOrdinal::empty(LevelDomain::Finite(2)), &a).unwrap(), a);
        let c = ord(3, &[0]);
        assert!(matches!(ordinal_sum(&a, &c), Err(OrdinalError::DomainMismatch(..))));
        assert_eq!(suspend_vertical(&ord(1, &[0, 0]), 3).unwrap(), ord(3, &[2, 2]));
        assert_eq!(suspend_horizontal(&ord(1, &[0, 0]), 3).unwrap(), ord(3, &[0, 0]));
        assert!(matches!(suspend_vertical(&ord(3, &[0]), 2), Err(OrdinalError::TargetTooSmall { .. })));
        let inf = suspend_infinity(&ord(3, &[0, 2])).unwrap();
        assert_eq!(inf.levels(), &[-2, 0]);
    }

    #[test]
    fn infinity_suspension_stabilizes() {
        for r in enumerate_ordinals(2, 4, 100).unwrap() {
            let s = suspend_vertical(&r, 3).unwrap();
            assert_eq!(suspend_infinity(&s).unwrap(), suspend_infinity(&r).unwrap());
        }
    }

    #[test]
    fn enumeration_order_and_count() {
        let all = enumerate_ordinals(2, 3, 100).unwrap();
        let seqs: Vec<_> = all.iter().map(|r| r.levels().to_vec()).collect();
        assert_eq!(seqs, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(enumerate_ordinals(3, 0, 10).unwrap().len(), 1);
        assert_eq!(enumerate_ordinals(3, 1, 10).unwrap().len(), 1);
        assert!(matches!(enumerate_ordinals(3, 20, 1000), Err(OrdinalError::ResourceLimit { .. })));
    }

    #[test]
    fn tree_examples() {
        let t = to_tree(&ord(2, &[0, 1, 1])).unwrap();
        assert_eq!(serde_json::to_string(&t).unwrap(), "[[[]],[[],[],[]]]");
        let u = to_tree(&NOrdinal::unit(LevelDomain::Finite(2))).unwrap();
        assert_eq!(serde_json::to_string(&u).unwrap(), "[[[]]]");
        let bad: Tree = serde_json::from_str("[[[]],[]]").unwrap();
        assert!(matches!(from_tree(&bad, 2), Err(OrdinalError::MalformedTree(_))));
    }

    #[test]
    fn json_roundtrip() {
        let r = ord(3, &[2, 0]);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"n":3,"levels":[2,0]}"#);
        assert_eq!(serde_json::from_str::<NOrdinal>(&s).unwrap(), r);
        let e = NOrdinal::empty(LevelDomain::Infinite);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<NOrdinal>(&s).unwrap(), e);
    }
}
