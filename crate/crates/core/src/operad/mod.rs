//! Operads valued in finite sets: symmetric, braided, mixed 2- and n-operads.
//!
//! Elements of a carrier are indices `0..size`. Symmetric, braided and mixed
//! operads are indexed by 1-ordinals, so the object `[m]` is the 1-ordinal
//! with `m + 1` elements and order preserving surjections are maps of
//! 1-ordinals. For these flavors `bound` is the largest `m`; for n-operads it
//! is the largest arity.

pub mod build;
pub mod bundle;
pub mod check;
pub mod desym;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::braid::{q_section, BraidError, BraidWord};
use crate::maps::{enumerate_maps, make_map, MapError, MapFilter, OrdinalMap};
use crate::ordinal::{enumerate_ordinals, LevelDomain, NOrdinal, OrdinalError, DEFAULT_ENUMERATION_LIMIT};
use crate::perm::Permutation;

pub use build::{as_braided, endomorphism_symmetric_operad, graded_pair_operad, terminal_operad, EndOperad};
pub use bundle::{from_bundle, to_bundle};
pub use check::{check_operad_axioms, check_square_equivariance, AxiomReport, Failure};
pub use desym::{
    braided_action_from_quasisymmetric, desymmetrise, extend_multiplication, factorization_independence,
    induced_action, is_locally_constant, is_quasisymmetric, BraidedAction, Desymmetrised, Extended, QuasiReport,
};

/// Cap on the total number of table entries materialised at once.
pub const DEFAULT_TABLE_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error("missing table for {0}")]
    MissingTable(String),
    #[error("bound {requested} exceeds available {available}")]
    BoundExceeded { requested: usize, available: usize },
    #[error("{what}: {requested} exceeds limit {limit}")]
    ResourceLimit { what: String, requested: u64, limit: u64 },
    #[error("not quasisymmetric: {0}")]
    NotQuasisymmetric(String),
    #[error("relation failed: {0}")]
    RelationFailed(String),
    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("malformed bundle: {0}")]
    MalformedBundle(String),
    #[error("element {element} out of range for carrier of size {size}")]
    ElementOutOfRange { element: u32, size: usize },
    #[error("internal invariant broken: {0}")]
    InvariantBroken(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Braid(#[from] BraidError),
}

impl OperadError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::MissingTable(_) => "MISSING_TABLE",
            Self::BoundExceeded { .. } => "BOUND_EXCEEDED",
            Self::ResourceLimit { .. } => "RESOURCE_LIMIT",
            Self::NotQuasisymmetric(_) => "NOT_QUASISYMMETRIC",
            Self::RelationFailed(_) => "RELATION_FAILED",
            Self::FlavorMismatch(_) => "FLAVOR_MISMATCH",
            Self::Precondition(_) => "PRECONDITION",
            Self::MalformedBundle(_) => "MALFORMED_BUNDLE",
            Self::ElementOutOfRange { .. } => "OUT_OF_RANGE",
            Self::InvariantBroken(_) => "INVARIANT_BROKEN",
            Self::Map(e) => e.code(),
            Self::Ordinal(e) => e.code(),
            Self::Braid(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    Symmetric,
    Braided,
    Mixed2,
    NOperad(u32),
}

impl Flavor {
    pub fn domain(self) -> LevelDomain {
        match self {
            Self::NOperad(n) => LevelDomain::Finite(n),
            _ => LevelDomain::Finite(1),
        }
    }

    pub fn has_actions(self) -> bool {
        !matches!(self, Self::NOperad(_))
    }

    /// Largest number of elements of an index ordinal.
    pub fn max_arity(self, bound: usize) -> usize {
        match self {
            Self::NOperad(_) => bound,
            _ => bound + 1,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Symmetric => write!(f, "symmetric"),
            Self::Braided => write!(f, "braided"),
            Self::Mixed2 => write!(f, "mixed2"),
            Self::NOperad(n) => write!(f, "n{n}"),
        }
    }
}

impl FromStr for Flavor {
    type Err = OperadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symmetric" => Ok(Self::Symmetric),
            "braided" => Ok(Self::Braided),
            "mixed2" => Ok(Self::Mixed2),
            _ => s
                .strip_prefix('n')
                .and_then(|n| n.parse::<u32>().ok())
                .filter(|&n| n >= 1)
                .map(Self::NOperad)
                .ok_or_else(|| OperadError::MalformedBundle(format!("unknown flavor {s:?}"))),
        }
    }
}

impl Serialize for Flavor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Flavor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An operad evaluated element by element.
pub trait Operad: Sync {
    fn flavor(&self) -> Flavor;
    fn bound(&self) -> usize;
    fn carrier_size(&self, t: &NOrdinal) -> Result<usize, OperadError>;
    fn unit(&self) -> u32;
    /// `μ_σ(a; b_0, …, b_k)`, one argument per fiber of `sigma`.
    fn mult(&self, sigma: &OrdinalMap, a: u32, b: &[u32]) -> Result<u32, OperadError>;
    /// Generator `g` acting on the carrier of the given arity; `g < 0` is the inverse.
    fn act(&self, arity: usize, g: i32, x: u32) -> Result<u32, OperadError>;

    fn label(&self, _t: &NOrdinal, x: u32) -> String {
        x.to_string()
    }

    fn as_finite(&self) -> Option<&FiniteOperad> {
        None
    }
}

impl<O: Operad + ?Sized> Operad for &O {
    fn flavor(&self) -> Flavor {
        (**self).flavor()
    }
    fn bound(&self) -> usize {
        (**self).bound()
    }
    fn carrier_size(&self, t: &NOrdinal) -> Result<usize, OperadError> {
        (**self).carrier_size(t)
    }
    fn unit(&self) -> u32 {
        (**self).unit()
    }
    fn mult(&self, sigma: &OrdinalMap, a: u32, b: &[u32]) -> Result<u32, OperadError> {
        (**self).mult(sigma, a, b)
    }
    fn act(&self, arity: usize, g: i32, x: u32) -> Result<u32, OperadError> {
        (**self).act(arity, g, x)
    }
    fn label(&self, t: &NOrdinal, x: u32) -> String {
        (**self).label(t, x)
    }
    fn as_finite(&self) -> Option<&FiniteOperad> {
        (**self).as_finite()
    }
}

/// `A(g_1) ∘ … ∘ A(g_r)` for the word `g_1 … g_r`.
pub fn act_word<O: Operad + ?Sized>(op: &O, w: &BraidWord, x: u32) -> Result<u32, OperadError> {
    let mut x = x;
    for &g in w.letters().iter().rev() {
        x = op.act(w.strands(), g, x)?;
    }
    Ok(x)
}

/// Action of a permutation through its positive lift.
pub fn act_perm<O: Operad + ?Sized>(op: &O, p: &Permutation, x: u32) -> Result<u32, OperadError> {
    act_word(op, &q_section(p), x)
}

/// The index object of the given arity.
pub fn index_ordinal(flavor: Flavor, arity: usize) -> NOrdinal {
    let d = flavor.domain();
    if arity == 0 {
        NOrdinal::empty(d)
    } else {
        NOrdinal::constant(d, arity, 0).expect("level 0 is in every domain")
    }
}

/// Order preserving surjection of 1-ordinals with the given fiber sizes.
pub fn op_surjection(sizes: &[usize]) -> Result<OrdinalMap, OperadError> {
    if sizes.contains(&0) {
        return Err(OperadError::Precondition(format!("empty fiber in {sizes:?}")));
    }
    let f: Vec<usize> = sizes.iter().enumerate().flat_map(|(i, &m)| std::iter::repeat(i).take(m)).collect();
    let d = Flavor::Symmetric;
    Ok(make_map(&index_ordinal(d, f.len()), &index_ordinal(d, sizes.len()), f)?)
}

/// Index ordinals of arity `1..=max_arity`, by arity then levels.
pub fn index_ordinals(flavor: Flavor, bound: usize) -> Result<Vec<NOrdinal>, OperadError> {
    let n = flavor.domain().finite().expect("finite domain");
    let mut out = Vec::new();
    for k in 1..=flavor.max_arity(bound) {
        out.extend(enumerate_ordinals(n, k, DEFAULT_ENUMERATION_LIMIT)?);
    }
    Ok(out)
}

/// The morphisms that carry multiplication tables: surjections between index
/// ordinals, order preserving ones only for the flavors indexed by `[m]`.
pub fn morphisms(flavor: Flavor, bound: usize) -> Result<Vec<OrdinalMap>, OperadError> {
    let objs = index_ordinals(flavor, bound)?;
    let filter = if flavor.has_actions() { MapFilter::OrderPreserving } else { MapFilter::All };
    let mut out = Vec::new();
    for t in &objs {
        for s in objs.iter().filter(|s| s.arity() <= t.arity()) {
            out.extend(enumerate_maps(t, s, filter, DEFAULT_ENUMERATION_LIMIT)?.into_iter().filter(|m| m.is_surjective()));
        }
    }
    Ok(out)
}

/// Fiber ordinals of a map, in target order.
pub fn fiber_ordinals(sigma: &OrdinalMap) -> Vec<NOrdinal> {
    (0..sigma.target().arity()).map(|i| sigma.source().restrict(&sigma.fiber_positions(i))).collect()
}

/// A multiplication table over `A_S × A_{T_0} × … × A_{T_k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    dims: Vec<usize>,
    data: Vec<u32>,
}

impl Table {
    pub fn new(dims: Vec<usize>, data: Vec<u32>) -> Result<Self, OperadError> {
        let want: usize = dims.iter().product();
        if want != data.len() {
            return Err(OperadError::MalformedBundle(format!("table has {} entries, dims {dims:?}", data.len())));
        }
        Ok(Self { dims, data })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn offset(&self, a: u32, b: &[u32]) -> usize {
        let mut idx = a as usize;
        for (d, &x) in self.dims[1..].iter().zip(b) {
            idx = idx * d + x as usize;
        }
        idx
    }

    #[inline]
    pub fn get(&self, a: u32, b: &[u32]) -> u32 {
        self.data[self.offset(a, b)]
    }

    /// The input tuple stored at a flat offset.
    pub fn tuple_at(&self, mut offset: usize) -> Vec<u32> {
        let mut t = vec![0u32; self.dims.len()];
        for (slot, &d) in t.iter_mut().zip(&self.dims).rev() {
            *slot = (offset % d) as u32;
            offset /= d;
        }
        t
    }

    /// Fill a table by evaluating `f` on every input tuple.
    pub fn fill(
        dims: Vec<usize>,
        f: impl Fn(u32, &[u32]) -> Result<u32, OperadError> + Sync,
    ) -> Result<Self, OperadError> {
        let rest: usize = dims[1..].iter().product();
        let chunks: Vec<Vec<u32>> = (0..dims[0] as u32)
            .into_par_iter()
            .map(|a| {
                let mut out = Vec::with_capacity(rest);
                for_each_tuple(&dims[1..], |b| {
                    out.push(f(a, b));
                });
                out.into_iter().collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { dims, data: chunks.concat() })
    }
}

/// Visit every tuple of the mixed-radix space `dims` in lexicographic order.
pub fn for_each_tuple(dims: &[usize], mut f: impl FnMut(&[u32])) {
    if dims.contains(&0) {
        return;
    }
    let mut t = vec![0u32; dims.len()];
    loop {
        f(&t);
        let mut i = dims.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if (t[i] as usize) < dims[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

/// A fully tabulated operad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOperad {
    flavor: Flavor,
    bound: usize,
    carriers: BTreeMap<NOrdinal, Vec<String>>,
    unit: u32,
    /// Per arity, the image of `x` under generator `g` at `[g - 1][x]`.
    actions: BTreeMap<usize, Vec<Vec<u32>>>,
    inverse_actions: BTreeMap<usize, Vec<Option<Vec<u32>>>>,
    mult: BTreeMap<OrdinalMap, Table>,
}

fn invert(images: &[u32]) -> Option<Vec<u32>> {
    let mut inv = vec![u32::MAX; images.len()];
    for (x, &y) in images.iter().enumerate() {
        let slot = inv.get_mut(y as usize)?;
        if *slot != u32::MAX {
            return None;
        }
        *slot = x as u32;
    }
    Some(inv)
}

impl FiniteOperad {
    /// Assemble and validate shapes and element ranges.
    pub fn from_parts(
        flavor: Flavor,
        bound: usize,
        carriers: BTreeMap<NOrdinal, Vec<String>>,
        unit: u32,
        actions: BTreeMap<usize, Vec<Vec<u32>>>,
        mult: BTreeMap<OrdinalMap, Table>,
    ) -> Result<Self, OperadError> {
        let objs = index_ordinals(flavor, bound)?;
        for t in &objs {
            match carriers.get(t) {
                Some(c) if !c.is_empty() => {}
                _ => return Err(OperadError::MalformedBundle(format!("carrier for {t} missing or empty"))),
            }
        }
        let u = index_ordinal(flavor, 1);
        if unit as usize >= carriers[&u].len() {
            return Err(OperadError::ElementOutOfRange { element: unit, size: carriers[&u].len() });
        }
        let mut inverse_actions = BTreeMap::new();
        if flavor.has_actions() {
            for k in 1..=flavor.max_arity(bound) {
                let size = carriers[&index_ordinal(flavor, k)].len();
                let gens = actions.get(&k).map(Vec::as_slice).unwrap_or(&[]);
                if gens.len() != k - 1 {
                    return Err(OperadError::MalformedBundle(format!("arity {k} needs {} generators", k - 1)));
                }
                for g in gens {
                    if g.len() != size {
                        return Err(OperadError::MalformedBundle(format!("action at arity {k} has wrong length")));
                    }
                    if let Some(&bad) = g.iter().find(|&&y| y as usize >= size) {
                        return Err(OperadError::ElementOutOfRange { element: bad, size });
                    }
                }
                inverse_actions.insert(k, gens.iter().map(|g| invert(g)).collect());
            }
        } else if !actions.is_empty() {
            return Err(OperadError::MalformedBundle("n-operads carry no generator actions".into()));
        }
        let op = Self { flavor, bound, carriers, unit, actions, inverse_actions, mult };
        for sigma in morphisms(flavor, bound)? {
            let t = op.mult.get(&sigma).ok_or_else(|| OperadError::MissingTable(sigma.to_string()))?;
            let dims = op.dims_for(&sigma)?;
            if t.dims != dims {
                return Err(OperadError::MalformedBundle(format!("table for {sigma} has dims {:?}", t.dims)));
            }
            let out = op.carrier_size(sigma.source())?;
            if let Some(&bad) = t.data.iter().find(|&&y| y as usize >= out) {
                return Err(OperadError::ElementOutOfRange { element: bad, size: out });
            }
        }
        Ok(op)
    }

    /// Tabulate every structure map of `op` within `bound`.
    pub fn tabulate<O: Operad + ?Sized>(op: &O, bound: usize) -> Result<Self, OperadError> {
        let flavor = op.flavor();
        if bound > op.bound() {
            return Err(OperadError::BoundExceeded { requested: bound, available: op.bound() });
        }
        let mut carriers: BTreeMap<NOrdinal, Vec<String>> = BTreeMap::new();
        for t in index_ordinals(flavor, bound)? {
            let size = op.carrier_size(&t)?;
            carriers.insert(t.clone(), (0..size as u32).map(|x| op.label(&t, x)).collect());
        }
        let mut actions = BTreeMap::new();
        if flavor.has_actions() {
            for k in 1..=flavor.max_arity(bound) {
                let size = carriers[&index_ordinal(flavor, k)].len() as u32;
                let gens = (1..k as i32)
                    .map(|g| (0..size).into_par_iter().map(|x| op.act(k, g, x)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                actions.insert(k, gens);
            }
        }
        let maps = morphisms(flavor, bound)?;
        let mut total: u64 = 0;
        let mut dims_list = Vec::with_capacity(maps.len());
        for sigma in &maps {
            let mut dims = vec![carriers[sigma.target()].len()];
            dims.extend(fiber_ordinals(sigma).iter().map(|f| carriers[f].len()));
            total = total.saturating_add(dims.iter().map(|&d| d as u64).product::<u64>());
            dims_list.push(dims);
        }
        if total > DEFAULT_TABLE_LIMIT {
            return Err(OperadError::ResourceLimit {
                what: "table entries".into(),
                requested: total,
                limit: DEFAULT_TABLE_LIMIT,
            });
        }
        let mut mult = BTreeMap::new();
        for (sigma, dims) in maps.into_iter().zip(dims_list) {
            let t = Table::fill(dims, |a, b| op.mult(&sigma, a, b))?;
            mult.insert(sigma, t);
        }
        Self::from_parts(flavor, bound, carriers, op.unit(), actions, mult)
    }

    pub fn carriers(&self) -> &BTreeMap<NOrdinal, Vec<String>> {
        &self.carriers
    }

    pub fn actions(&self) -> &BTreeMap<usize, Vec<Vec<u32>>> {
        &self.actions
    }

    pub fn tables(&self) -> &BTreeMap<OrdinalMap, Table> {
        &self.mult
    }

    pub fn table(&self, sigma: &OrdinalMap) -> Result<&Table, OperadError> {
        self.mult.get(sigma).ok_or_else(|| OperadError::MissingTable(sigma.to_string()))
    }

    /// Inverse of generator `g` at the given arity, if it is a bijection.
    pub fn inverse_action(&self, arity: usize, g: usize) -> Option<&[u32]> {
        self.inverse_actions.get(&arity)?.get(g - 1)?.as_deref()
    }

    fn dims_for(&self, sigma: &OrdinalMap) -> Result<Vec<usize>, OperadError> {
        let mut dims = vec![self.carrier_size(sigma.target())?];
        for f in fiber_ordinals(sigma) {
            dims.push(self.carrier_size(&f)?);
        }
        Ok(dims)
    }

    /// The same data under another flavor with the same index objects.
    pub fn with_flavor(&self, flavor: Flavor) -> Result<Self, OperadError> {
        if flavor.domain() != self.flavor.domain() || flavor.has_actions() != self.flavor.has_actions() {
            return Err(OperadError::FlavorMismatch(format!("{} cannot be read as {flavor}", self.flavor)));
        }
        Ok(Self { flavor, ..self.clone() })
    }

    /// Overwrite one table entry.
    pub fn set_entry(&mut self, sigma: &OrdinalMap, a: u32, b: &[u32], value: u32) -> Result<(), OperadError> {
        let out = self.carrier_size(sigma.source())?;
        if value as usize >= out {
            return Err(OperadError::ElementOutOfRange { element: value, size: out });
        }
        let t = self.mult.get_mut(sigma).ok_or_else(|| OperadError::MissingTable(sigma.to_string()))?;
        if b.len() + 1 != t.dims.len() || a as usize >= t.dims[0] || b.iter().zip(&t.dims[1..]).any(|(&x, &d)| x as usize >= d)
        {
            return Err(OperadError::Precondition(format!("input out of range for {sigma}")));
        }
        let off = t.offset(a, b);
        t.data[off] = value;
        Ok(())
    }

    /// Overwrite one generator image.
    pub fn set_action(&mut self, arity: usize, g: usize, x: u32, value: u32) -> Result<(), OperadError> {
        let size = self.carrier_size(&index_ordinal(self.flavor, arity))?;
        if x as usize >= size || value as usize >= size {
            return Err(OperadError::ElementOutOfRange { element: x.max(value), size });
        }
        let gens = self
            .actions
            .get_mut(&arity)
            .filter(|v| g >= 1 && g <= v.len())
            .ok_or_else(|| OperadError::Precondition(format!("no generator {g} at arity {arity}")))?;
        gens[g - 1][x as usize] = value;
        let inv = invert(&gens[g - 1]);
        self.inverse_actions.get_mut(&arity).expect("present")[g - 1] = inv;
        Ok(())
    }
}

impl Operad for FiniteOperad {
    fn flavor(&self) -> Flavor {
        self.flavor
    }

    fn bound(&self) -> usize {
        self.bound
    }

    fn carrier_size(&self, t: &NOrdinal) -> Result<usize, OperadError> {
        self.carriers.get(t).map(Vec::len).ok_or(OperadError::BoundExceeded {
            requested: if self.flavor.has_actions() { t.arity().saturating_sub(1) } else { t.arity() },
            available: self.bound,
        })
    }

    fn unit(&self) -> u32 {
        self.unit
    }

    fn mult(&self, sigma: &OrdinalMap, a: u32, b: &[u32]) -> Result<u32, OperadError> {
        let t = self.table(sigma)?;
        if b.len() + 1 != t.dims.len() {
            return Err(OperadError::Precondition(format!("{} arguments for {sigma}", b.len())));
        }
        for (&x, &d) in std::iter::once(&a).chain(b).zip(&t.dims) {
            if x as usize >= d {
                return Err(OperadError::ElementOutOfRange { element: x, size: d });
            }
        }
        Ok(t.get(a, b))
    }

    fn act(&self, arity: usize, g: i32, x: u32) -> Result<u32, OperadError> {
        if !self.flavor.has_actions() {
            return Err(OperadError::FlavorMismatch(format!("{} has no generator actions", self.flavor)));
        }
        let gi = g.unsigned_abs() as usize;
        let gens = self
            .actions
            .get(&arity)
            .filter(|v| gi >= 1 && gi <= v.len())
            .ok_or_else(|| OperadError::Precondition(format!("no generator {g} at arity {arity}")))?;
        let size = gens[gi - 1].len();
        if x as usize >= size {
            return Err(OperadError::ElementOutOfRange { element: x, size });
        }
        if g > 0 {
            Ok(gens[gi - 1][x as usize])
        } else {
            let inv = self
                .inverse_action(arity, gi)
                .ok_or_else(|| OperadError::Precondition(format!("generator {gi} at arity {arity} is not invertible")))?;
            Ok(inv[x as usize])
        }
    }

    fn label(&self, t: &NOrdinal, x: u32) -> String {
        self.carriers.get(t).and_then(|c| c.get(x as usize)).cloned().unwrap_or_else(|| x.to_string())
    }

    fn as_finite(&self) -> Option<&FiniteOperad> {
        Some(self)
    }
}
