//! Concrete operads: terminal, endomorphism, and a small non-quasisymmetric one.

use std::collections::BTreeMap;

use super::{index_ordinal, index_ordinals, morphisms, FiniteOperad, Flavor, Operad, OperadError, Table};
use crate::maps::OrdinalMap;
use crate::ordinal::{LevelDomain, NOrdinal};

/// Largest carrier the endomorphism operad will index.
pub const MAX_END_CARRIER: u64 = 1 << 24;

struct Terminal {
    flavor: Flavor,
    bound: usize,
}

impl Operad for Terminal {
    fn flavor(&self) -> Flavor {
        self.flavor
    }
    fn bound(&self) -> usize {
        self.bound
    }
    fn carrier_size(&self, _t: &NOrdinal) -> Result<usize, OperadError> {
        Ok(1)
    }
    fn unit(&self) -> u32 {
        0
    }
    fn mult(&self, _sigma: &OrdinalMap, _a: u32, _b: &[u32]) -> Result<u32, OperadError> {
        Ok(0)
    }
    fn act(&self, _arity: usize, _g: i32, _x: u32) -> Result<u32, OperadError> {
        Ok(0)
    }
    fn label(&self, _t: &NOrdinal, _x: u32) -> String {
        "*".into()
    }
}

/// Every carrier a single point.
pub fn terminal_operad(flavor: Flavor, bound: usize) -> Result<FiniteOperad, OperadError> {
    FiniteOperad::tabulate(&Terminal { flavor, bound }, bound)
}

/// Endomorphism operad of a finite set `{0, …, q-1}`.
///
/// An element of `A_[m]` is a function `X^{m+1} -> X` stored as the base-`q`
/// number whose digit `i` is the value on the input with base-`q` digits
/// `x_0, x_1, …` (least significant first).
#[derive(Debug, Clone)]
pub struct EndOperad {
    q: u64,
    bound: usize,
}

impl EndOperad {
    pub fn new(q: usize, bound: usize) -> Result<Self, OperadError> {
        if q == 0 {
            return Err(OperadError::Precondition("empty set".into()));
        }
        Ok(Self { q: q as u64, bound })
    }

    fn inputs(&self, arity: usize) -> Result<u64, OperadError> {
        self.q.checked_pow(arity as u32).filter(|&n| n <= 32).ok_or_else(|| self.too_big(arity))
    }

    fn too_big(&self, arity: usize) -> OperadError {
        OperadError::ResourceLimit { what: format!("carrier of arity {arity}"), requested: u64::MAX, limit: MAX_END_CARRIER }
    }

    fn size(&self, arity: usize) -> Result<u64, OperadError> {
        let n = self.inputs(arity)?;
        let s = self.q.checked_pow(n as u32).ok_or_else(|| self.too_big(arity))?;
        if s > MAX_END_CARRIER {
            return Err(OperadError::ResourceLimit { what: format!("carrier of arity {arity}"), requested: s, limit: MAX_END_CARRIER });
        }
        Ok(s)
    }

    #[inline]
    fn digit(&self, f: u64, i: u64) -> u64 {
        (f / self.q.pow(i as u32)) % self.q
    }

    fn check_index(&self, t: &NOrdinal) -> Result<(), OperadError> {
        if t.domain() != LevelDomain::Finite(1) {
            return Err(OperadError::FlavorMismatch(format!("{t} is not a 1-ordinal")));
        }
        if t.arity() == 0 || t.arity() > self.bound + 1 {
            return Err(OperadError::BoundExceeded { requested: t.arity().saturating_sub(1), available: self.bound });
        }
        Ok(())
    }
}

impl Operad for EndOperad {
    fn flavor(&self) -> Flavor {
        Flavor::Symmetric
    }

    fn bound(&self) -> usize {
        self.bound
    }

    fn carrier_size(&self, t: &NOrdinal) -> Result<usize, OperadError> {
        self.check_index(t)?;
        Ok(self.size(t.arity())? as usize)
    }

    fn unit(&self) -> u32 {
        (0..self.q).map(|i| i * self.q.pow(i as u32)).sum::<u64>() as u32
    }

    fn mult(&self, sigma: &OrdinalMap, a: u32, b: &[u32]) -> Result<u32, OperadError> {
        self.check_index(sigma.source())?;
        self.check_index(sigma.target())?;
        let k = sigma.target().arity();
        if b.len() != k || !sigma.is_surjective() {
            return Err(OperadError::Precondition(format!("{} arguments for {sigma}", b.len())));
        }
        let n = sigma.source().arity();
        let fibers: Vec<Vec<usize>> = (0..k).map(|i| sigma.fiber_positions(i)).collect();
        let q = self.q;
        let mut out = 0u64;
        let mut x = vec![0u64; n];
        for idx in 0..self.inputs(n)? {
            let mut rest = idx;
            for xj in x.iter_mut() {
                *xj = rest % q;
                rest /= q;
            }
            let mut outer = 0u64;
            for (i, pos) in fibers.iter().enumerate().rev() {
                let sub = pos.iter().rev().fold(0u64, |acc, &p| acc * q + x[p]);
                outer = outer * q + self.digit(b[i] as u64, sub);
            }
            out += self.digit(a as u64, outer) * q.pow(idx as u32);
        }
        Ok(out as u32)
    }

    fn act(&self, arity: usize, g: i32, x: u32) -> Result<u32, OperadError> {
        let gi = g.unsigned_abs() as usize;
        if gi == 0 || gi >= arity {
            return Err(OperadError::Precondition(format!("no generator {g} at arity {arity}")));
        }
        let q = self.q;
        let (lo, hi) = (q.pow(gi as u32 - 1), q.pow(gi as u32));
        let mut out = 0u64;
        for idx in 0..self.inputs(arity)? {
            let (u, v) = ((idx / lo) % q, (idx / hi) % q);
            let swapped = idx - u * lo - v * hi + v * lo + u * hi;
            out += self.digit(x as u64, swapped) * q.pow(idx as u32);
        }
        Ok(out as u32)
    }

    fn label(&self, t: &NOrdinal, x: u32) -> String {
        let n = self.inputs(t.arity()).unwrap_or(0);
        (0..n).map(|i| char::from_digit(self.digit(x as u64, i) as u32, 36).unwrap_or('?')).collect()
    }
}

/// Tabulated endomorphism operad of a `q`-element set up to `[bound]`.
pub fn endomorphism_symmetric_operad(q: usize, bound: usize) -> Result<FiniteOperad, OperadError> {
    FiniteOperad::tabulate(&EndOperad::new(q, bound)?, bound)
}

/// A 2-operad up to arity 2 whose two arity-2 carriers have different sizes.
///
/// `A_[1]` has two points, every other carrier one. Multiplication returns
/// the argument forced by the unit laws and the first point otherwise.
pub fn graded_pair_operad() -> Result<FiniteOperad, OperadError> {
    let flavor = Flavor::NOperad(2);
    let big = NOrdinal::new(LevelDomain::Finite(2), vec![1])?;
    let mut carriers = BTreeMap::new();
    for t in index_ordinals(flavor, 2)? {
        let labels = if t == big { vec!["p".to_string(), "q".to_string()] } else { vec!["*".to_string()] };
        carriers.insert(t, labels);
    }
    let u = index_ordinal(flavor, 1);
    let mut mult = BTreeMap::new();
    for sigma in morphisms(flavor, 2)? {
        let mut dims = vec![carriers[sigma.target()].len()];
        dims.extend(super::fiber_ordinals(&sigma).iter().map(|f| carriers[f].len()));
        let to_unit = *sigma.target() == u;
        let identity = sigma == OrdinalMap::identity(sigma.source());
        let t = Table::fill(dims, |a, b| Ok(if to_unit { b[0] } else if identity { a } else { 0 }))?;
        mult.insert(sigma, t);
    }
    FiniteOperad::from_parts(flavor, 2, carriers, 0, BTreeMap::new(), mult)
}

/// Read a symmetric operad as braided or mixed through `Br -> S`.
pub fn as_braided(op: &FiniteOperad, flavor: Flavor) -> Result<FiniteOperad, OperadError> {
    if op.flavor() != Flavor::Symmetric || !matches!(flavor, Flavor::Braided | Flavor::Mixed2) {
        return Err(OperadError::FlavorMismatch(format!("cannot read {} as {flavor}", op.flavor())));
    }
    op.with_flavor(flavor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{op_surjection, Operad};

    #[test]
    fn end_sizes() {
        let e = EndOperad::new(2, 3).unwrap();
        assert_eq!(e.carrier_size(&index_ordinal(Flavor::Symmetric, 2)).unwrap(), 16);
        assert_eq!(e.carrier_size(&index_ordinal(Flavor::Symmetric, 4)).unwrap(), 65536);
        assert_eq!(e.unit(), 0b10);
        assert_eq!(EndOperad::new(3, 1).unwrap().carrier_size(&index_ordinal(Flavor::Symmetric, 1)).unwrap(), 27);
    }

    #[test]
    fn end_composition() {
        let e = EndOperad::new(2, 2).unwrap();
        // and(x0, x1) = 0b1000, not(x) = 0b01
        let and = 0b1000;
        let not = 0b01;
        let sigma = op_surjection(&[1, 1]).unwrap();
        // and(not x0, x1): true only on x0=0, x1=1, input index 2
        assert_eq!(e.mult(&sigma, and, &[not, e.unit()]).unwrap(), 0b0100);
        // swapping inputs of and(not x0, x1) gives and(x0, not x1)
        assert_eq!(e.act(2, 1, 0b0100).unwrap(), 0b0010);
    }

    #[test]
    fn terminal_is_points() {
        let t = terminal_operad(Flavor::NOperad(2), 3).unwrap();
        assert!(t.carriers().values().all(|c| c.len() == 1));
        assert_eq!(t.unit(), 0);
    }

    #[test]
    fn end_of_point_is_terminal() {
        let e = endomorphism_symmetric_operad(1, 2).unwrap();
        assert!(e.carriers().values().all(|c| c.len() == 1));
    }
}
