//! Fox–Neuwirth strata of configurations with exact rational coordinates.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ordinal::{count_ordinals, enumerate_ordinals, from_relations, LevelDomain, OrdinalError, RelationTable};
use crate::perm::Permutation;
pub use crate::quasicat::LabeledStructure as StratumLabel;

/// Cap on `n^(k-1) * k!` for the label universe.
pub const MAX_UNIVERSE: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("points {0} and {1} coincide")]
    EqualPoints(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{what} exceed limit {limit}")]
    ResourceLimit { what: &'static str, limit: u64 },
    #[error("malformed configuration: {0}")]
    Malformed(String),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

impl StrataError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::EqualPoints(..) => "EQUAL_POINTS",
            Self::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Self::ResourceLimit { .. } => "RESOURCE_LIMIT",
            Self::Malformed(_) => "MALFORMED_INPUT",
            Self::Ordinal(e) => e.code(),
        }
    }
}

/// `k` labelled points in `Q^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    dim: usize,
    points: Vec<Vec<BigRational>>,
}

impl Configuration {
    pub fn new(dim: usize, points: Vec<Vec<BigRational>>) -> Result<Self, StrataError> {
        if dim == 0 {
            return Err(StrataError::DimensionMismatch("dimension 0".into()));
        }
        if let Some(i) = points.iter().position(|p| p.len() != dim) {
            return Err(StrataError::DimensionMismatch(format!("point {i} has {} coordinates, expected {dim}", points[i].len())));
        }
        for a in 0..points.len() {
            for b in a + 1..points.len() {
                if points[a] == points[b] {
                    return Err(StrataError::EqualPoints(a, b));
                }
            }
        }
        Ok(Self { dim, points })
    }

    pub fn from_integers(dim: usize, points: &[Vec<i64>]) -> Result<Self, StrataError> {
        let pts = points.iter().map(|p| p.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
        Self::new(dim, pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<BigRational>] {
        &self.points
    }

    /// `self + t (other - self)`, pointwise.
    pub fn lerp(&self, other: &Configuration, t: &BigRational) -> Result<Configuration, StrataError> {
        if self.dim != other.dim || self.len() != other.len() {
            return Err(StrataError::DimensionMismatch(format!(
                "{} points in dimension {} vs {} in dimension {}",
                self.len(),
                self.dim,
                other.len(),
                other.dim
            )));
        }
        let points = self
            .points
            .iter()
            .zip(&other.points)
            .map(|(x, y)| x.iter().zip(y).map(|(a, b)| a + t * (b - a)).collect())
            .collect();
        Configuration::new(self.dim, points)
    }
}

#[derive(Serialize, Deserialize)]
struct RawConfiguration {
    dim: usize,
    points: Vec<Vec<String>>,
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawConfiguration { dim: self.dim, points: self.points.iter().map(|p| p.iter().map(ToString::to_string).collect()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawConfiguration::deserialize(d)?;
        let points = raw
            .points
            .iter()
            .map(|p| p.iter().map(|x| BigRational::from_str(x.trim()).map_err(|_| D::Error::custom(format!("bad rational {x:?}")))).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Configuration::new(raw.dim, points).map_err(D::Error::custom)
    }
}

/// `(p, positive)`: the first `p` coordinates agree and coordinate `p` of
/// `y - x` has the given sign.
pub fn direction_class(x: &[BigRational], y: &[BigRational]) -> Result<(usize, bool), StrataError> {
    if x.len() != y.len() {
        return Err(StrataError::DimensionMismatch(format!("{} vs {} coordinates", x.len(), y.len())));
    }
    match x.iter().zip(y).position(|(a, b)| a != b) {
        Some(p) => Ok((p, y[p] > x[p])),
        None => Err(StrataError::EqualPoints(0, 1)),
    }
}

/// The stratum containing `c`, as a canonical ordinal with the label at each position.
pub fn classify_stratum(c: &Configuration) -> Result<StratumLabel, StrataError> {
    let k = c.len();
    let mut table = RelationTable::new(LevelDomain::Finite(c.dim as u32), k);
    for a in 0..k {
        for b in a + 1..k {
            let (p, up) =
                direction_class(&c.points[a], &c.points[b]).map_err(|_| StrataError::EqualPoints(a, b))?;
            if up {
                table.insert(a, b, p as i32)?;
            } else {
                table.insert(b, a, p as i32)?;
            }
        }
    }
    let canon = from_relations(&table)?;
    let labels = Permutation::from_images(canon.order).expect("canonical order is a permutation");
    Ok(StratumLabel { ordinal: canon.ordinal, labels })
}

/// Whether `c` lies in the stratum `label`, checked pair by pair.
pub fn in_stratum(c: &Configuration, label: &StratumLabel) -> Result<bool, StrataError> {
    let k = c.len();
    if label.ordinal.arity() != k || label.ordinal.domain() != LevelDomain::Finite(c.dim as u32) {
        return Ok(false);
    }
    let at = label.labels.images();
    for i in 0..k {
        for j in i + 1..k {
            let (p, up) = direction_class(&c.points[at[i]], &c.points[at[j]])
                .map_err(|_| StrataError::EqualPoints(at[i], at[j]))?;
            if !up || p as i32 != label.ordinal.level(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A point of the stratum: coordinate `p` of position `i` is `spread` times the
/// number of consecutive gaps at level `p` before `i`.
pub fn sample_stratum(label: &StratumLabel, spread: &BigRational) -> Result<Configuration, StrataError> {
    let LevelDomain::Finite(n) = label.ordinal.domain() else {
        return Err(StrataError::DimensionMismatch("strata need a finite level domain".into()));
    };
    let n = n as usize;
    if !spread.is_positive() {
        return Err(StrataError::Malformed("spread must be positive".into()));
    }
    let k = label.ordinal.arity();
    let mut counts = vec![BigInt::zero(); n];
    let mut points = vec![Vec::new(); k];
    for i in 0..k {
        if i > 0 {
            counts[label.ordinal.levels()[i - 1] as usize] += 1;
        }
        points[label.labels.apply(i)] = counts.iter().map(|c| BigRational::from_integer(c.clone()) * spread).collect();
    }
    Configuration::new(n, points)
}

/// Every labelled stratum of `k` points in `R^n`.
pub fn all_labels(n: u32, k: usize) -> Result<Vec<StratumLabel>, StrataError> {
    let fact = (1..=k as u64).try_fold(1u64, |a, b| a.checked_mul(b)).unwrap_or(u64::MAX);
    let size = count_ordinals(n, k).saturating_mul(fact);
    if size > MAX_UNIVERSE {
        return Err(StrataError::ResourceLimit { what: "stratum labels", limit: MAX_UNIVERSE });
    }
    let perms = Permutation::all(k);
    let mut out = Vec::with_capacity(size as usize);
    for ordinal in enumerate_ordinals(n, k, MAX_UNIVERSE)? {
        for p in &perms {
            out.push(StratumLabel { ordinal: ordinal.clone(), labels: p.clone() });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub n: u32,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub universe: usize,
    pub observed: usize,
    /// Trials whose configuration lies in exactly one stratum of the universe.
    pub unique: usize,
    pub pass: bool,
    /// First trial violating uniqueness, with its configuration.
    pub witness: Option<Configuration>,
    pub tally: BTreeMap<String, usize>,
}

/// Grid half-width for random coordinates; small enough that lower strata show up.
const GRID: i64 = 2;

fn random_configuration(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Configuration {
    loop {
        let points: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-GRID..=GRID)).collect()).collect();
        if let Ok(c) = Configuration::from_integers(n, &points) {
            return c;
        }
    }
}

fn label_key(l: &StratumLabel) -> String {
    format!("{} {:?}", l.ordinal, l.labels.images())
}

/// Sample configurations and check each lies in exactly one stratum.
pub fn verify_partition(n: u32, k: usize, trials: usize, seed: u64) -> Result<PartitionReport, StrataError> {
    if n == 0 {
        return Err(StrataError::DimensionMismatch("dimension 0".into()));
    }
    let universe = all_labels(n, k)?;
    let results = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let c = random_configuration(n as usize, k, &mut rng);
            let label = classify_stratum(&c)?;
            let mut hits = Vec::new();
            for l in &universe {
                if in_stratum(&c, l)? {
                    hits.push(l);
                }
            }
            let ok = hits.len() == 1 && *hits[0] == label;
            Ok((c, label, ok))
        })
        .collect::<Result<Vec<_>, StrataError>>()?;
    let mut tally = BTreeMap::new();
    let mut unique = 0;
    let mut witness = None;
    for (c, label, ok) in results {
        *tally.entry(label_key(&label)).or_insert(0) += 1;
        if ok {
            unique += 1;
        } else if witness.is_none() {
            witness = Some(c);
        }
    }
    Ok(PartitionReport {
        n,
        k,
        trials,
        seed,
        universe: universe.len(),
        observed: tally.len(),
        unique,
        pass: unique == trials,
        witness,
        tally,
    })
}

/// Whether the segment from a point of `lower` towards a point of `upper`
/// leaves `lower` straight into `upper`, tested at `t = 1, 1/2, …, 1/2^steps`.
pub fn degeneration_check(upper: &StratumLabel, lower: &StratumLabel, steps: u32) -> Result<bool, StrataError> {
    if upper.ordinal.domain() != lower.ordinal.domain() || upper.ordinal.arity() != lower.ordinal.arity() {
        return Err(StrataError::DimensionMismatch(format!("{} vs {}", upper.ordinal, lower.ordinal)));
    }
    if upper == lower {
        return Ok(false);
    }
    let one = BigRational::from_integer(1.into());
    let c = sample_stratum(lower, &one)?;
    let c1 = sample_stratum(upper, &one)?;
    if classify_stratum(&c)? != *lower {
        return Ok(false);
    }
    let mut t = one;
    for _ in 0..=steps {
        let x = match c.lerp(&c1, &t) {
            Ok(x) => x,
            Err(StrataError::EqualPoints(..)) => return Ok(false),
            Err(e) => return Err(e),
        };
        if classify_stratum(&x)? != *upper {
            return Ok(false);
        }
        t /= BigRational::from_integer(2.into());
    }
    Ok(true)
}
