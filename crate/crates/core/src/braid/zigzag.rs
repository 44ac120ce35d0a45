//! Zig-zags of quasibijections of 2-ordinals and their braids.

use serde::{Deserialize, Serialize};

use super::section::braid_of_quasibijection;
use super::word::{braid_equal, BraidWord};
use super::BraidError;
use crate::maps::{compose, make_map, restrict, OrdinalMap};
use crate::ordinal::{ordinal_sum_all, LevelDomain, NOrdinal};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Traversed against the map: the path moves from target to source.
    Back,
    Fwd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leg {
    pub dir: Direction,
    pub map: OrdinalMap,
}

impl Leg {
    pub fn back(map: OrdinalMap) -> Self {
        Self { dir: Direction::Back, map }
    }

    pub fn fwd(map: OrdinalMap) -> Self {
        Self { dir: Direction::Fwd, map }
    }

    fn start(&self) -> &NOrdinal {
        match self.dir {
            Direction::Back => self.map.target(),
            Direction::Fwd => self.map.source(),
        }
    }

    fn end(&self) -> &NOrdinal {
        match self.dir {
            Direction::Back => self.map.source(),
            Direction::Fwd => self.map.target(),
        }
    }
}

/// A path of quasibijections, each leg traversed forward or backward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigZag {
    pub legs: Vec<Leg>,
}

impl ZigZag {
    pub fn new(legs: Vec<Leg>) -> Result<Self, BraidError> {
        let z = Self { legs };
        z.validate()?;
        Ok(z)
    }

    /// `S <-sigma- T -eta-> R`.
    pub fn span(sigma: OrdinalMap, eta: OrdinalMap) -> Result<Self, BraidError> {
        Self::new(vec![Leg::back(sigma), Leg::fwd(eta)])
    }

    pub fn validate(&self) -> Result<(), BraidError> {
        let first = self.legs.first().ok_or_else(|| BraidError::EndpointMismatch("empty zig-zag".into()))?;
        for (i, leg) in self.legs.iter().enumerate() {
            if leg.map.source().domain() != LevelDomain::Finite(2) || !leg.map.is_quasibijection() {
                return Err(BraidError::NotQuasibijection(format!("leg {i}: {}", leg.map)));
            }
        }
        let mut cur = first.start();
        for (i, leg) in self.legs.iter().enumerate() {
            if leg.start() != cur {
                return Err(BraidError::EndpointMismatch(format!("leg {i} starts at {} but path is at {cur}", leg.start())));
            }
            cur = leg.end();
        }
        Ok(())
    }

    pub fn start(&self) -> &NOrdinal {
        self.legs[0].start()
    }

    pub fn end(&self) -> &NOrdinal {
        self.legs[self.legs.len() - 1].end()
    }

    pub fn strands(&self) -> usize {
        self.start().arity()
    }

    /// Compose adjacent legs of the same direction.
    pub fn normalize(&self) -> Result<ZigZag, BraidError> {
        let mut out: Vec<Leg> = Vec::new();
        for leg in &self.legs {
            match out.last_mut() {
                Some(prev) if prev.dir == leg.dir => {
                    prev.map = match leg.dir {
                        Direction::Fwd => compose(&prev.map, &leg.map)?,
                        Direction::Back => compose(&leg.map, &prev.map)?,
                    };
                }
                _ => out.push(leg.clone()),
            }
        }
        Ok(ZigZag { legs: out })
    }
}

/// Product of `q(leg)` over the path, inverting backward legs.
pub fn braid_of_zigzag(z: &ZigZag) -> Result<BraidWord, BraidError> {
    z.validate()?;
    let mut b = BraidWord::empty(z.strands());
    for leg in &z.legs {
        let q = braid_of_quasibijection(&leg.map)?;
        b = b.multiply(&match leg.dir {
            Direction::Back => q.invert(),
            Direction::Fwd => q,
        })?;
    }
    Ok(b)
}

/// Vertical maps relating the block sum of the components to a span with
/// the original outer objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitFrame {
    pub xi: OrdinalMap,
    pub zeta: OrdinalMap,
    pub kappa: OrdinalMap,
    /// Block sum of the components.
    pub top: ZigZag,
    /// Same outer objects as the input, middle object gathered by blocks.
    pub bottom: ZigZag,
    /// Bijection from the input middle object onto the gathered one.
    pub gathering: Permutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitResult {
    /// Half-open position ranges of the blocks of the underlying permutation.
    pub blocks: Vec<(usize, usize)>,
    pub components: Vec<ZigZag>,
    pub frame: SplitFrame,
    pub braids: Vec<BraidWord>,
}

/// Finest interval blocks of a permutation.
pub fn permutation_blocks(p: &Permutation) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let (mut start, mut reach) = (0, 0);
    for i in 0..p.len() {
        reach = reach.max(p.apply(i));
        if reach == i {
            out.push((start, i + 1));
            start = i + 1;
        }
    }
    out
}

fn sum_maps(parts: &[OrdinalMap]) -> Result<OrdinalMap, BraidError> {
    let domain = LevelDomain::Finite(2);
    let source = ordinal_sum_all(domain, &parts.iter().map(|m| m.source().clone()).collect::<Vec<_>>())?;
    let target = ordinal_sum_all(domain, &parts.iter().map(|m| m.target().clone()).collect::<Vec<_>>())?;
    let mut f = Vec::new();
    let mut shift = 0;
    for m in parts {
        f.extend(m.table().iter().map(|&x| x + shift));
        shift += m.target().arity();
    }
    Ok(make_map(&source, &target, f)?)
}

/// Split a span whose braid permutation is a block sum into one span per block.
pub fn split_zigzag(z: &ZigZag) -> Result<SplitResult, BraidError> {
    z.validate()?;
    let broken = |what: &str| BraidError::InvariantBroken(what.to_string());
    let (sigma, eta) = match z.legs.as_slice() {
        [Leg { dir: Direction::Back, map: s }, Leg { dir: Direction::Fwd, map: e }] => (s, e),
        _ => return Err(BraidError::NotBlockDecomposable("expected exactly a backward then a forward leg".into())),
    };
    let ps = sigma.permutation().expect("validated");
    let pe = eta.permutation().expect("validated");
    let rho = ps.inverse().then(&pe);
    let blocks = permutation_blocks(&rho);
    let k = rho.len();
    if blocks.len() < 2 && k > 1 {
        return Err(BraidError::NotBlockDecomposable(format!("permutation {:?} has a single block", rho.images())));
    }
    let (s, r) = (sigma.target(), eta.target());
    let mut components = Vec::new();
    let mut braids = Vec::new();
    let mut sig_parts = Vec::new();
    let mut eta_parts = Vec::new();
    let mut gathered_order = Vec::with_capacity(k);
    for &(a, b) in &blocks {
        let block: Vec<usize> = (a..b).collect();
        let pre: Vec<usize> = (0..k).filter(|&x| (a..b).contains(&ps.apply(x))).collect();
        let sj = restrict(sigma, &pre, &block)?;
        let ej = restrict(eta, &pre, &block)?;
        let zj = ZigZag::span(sj.clone(), ej.clone())?;
        let bj = braid_of_zigzag(&zj)?;
        let tau: Vec<usize> = block.iter().map(|&x| rho.apply(x) - a).collect();
        if bj.perm_image().images() != tau.as_slice() {
            return Err(broken("component braid has the wrong permutation"));
        }
        gathered_order.extend_from_slice(&pre);
        components.push(zj);
        braids.push(bj);
        sig_parts.push(sj);
        eta_parts.push(ej);
    }
    let top_sigma = sum_maps(&sig_parts)?;
    let top_eta = sum_maps(&eta_parts)?;
    let middle = top_sigma.source().clone();
    let xi = make_map(top_sigma.target(), s, (0..k).collect())?;
    let zeta = make_map(top_eta.target(), r, (0..k).collect())?;
    let kappa = OrdinalMap::identity(&middle);
    let bottom_sigma = make_map(&middle, s, gathered_order.iter().map(|&x| sigma.apply(x)).collect())?;
    let bottom_eta = make_map(&middle, r, gathered_order.iter().map(|&x| eta.apply(x)).collect())?;
    // diagram commutes as set maps
    if compose(&top_sigma, &xi)?.table() != compose(&kappa, &bottom_sigma)?.table()
        || compose(&top_eta, &zeta)?.table() != compose(&kappa, &bottom_eta)?.table()
    {
        return Err(broken("frame does not commute"));
    }
    let mut g = vec![0; k];
    for (pos, &x) in gathered_order.iter().enumerate() {
        g[x] = pos;
    }
    let gathering = Permutation::from_images(g).expect("bijection");
    let bs = bottom_sigma.permutation().expect("bijection");
    let be = bottom_eta.permutation().expect("bijection");
    if gathering.then(&bs) != ps || gathering.then(&be) != pe {
        return Err(broken("gathering does not factor the legs"));
    }
    // positive braids compose without cancellation when lengths add
    if ps.length() != gathering.length() + bs.length() || pe.length() != gathering.length() + be.length() {
        return Err(broken("gathering is not length additive"));
    }
    let top = ZigZag::span(top_sigma, top_eta)?;
    let bottom = ZigZag::span(bottom_sigma, bottom_eta)?;
    let bz = braid_of_zigzag(z)?;
    let sum = braids.iter().fold(BraidWord::empty(0), |acc, b| acc.block_sum(b));
    if !braid_equal(&bz, &braid_of_zigzag(&bottom)?)? || !braid_equal(&braid_of_zigzag(&top)?, &sum)? {
        return Err(broken("frame rows have different braids"));
    }
    if !braid_equal(&bz, &sum)? {
        return Err(broken("braid of the span differs from the block sum"));
    }
    let frame = SplitFrame { xi, zeta, kappa, top, bottom, gathering };
    Ok(SplitResult { blocks, components, frame, braids })
}
