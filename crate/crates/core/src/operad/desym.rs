//! Desymmetrisation, induced quasibijection actions, extension of the
//! multiplication along factorizations and the braided action.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::Serialize;

use super::{act_perm, fiber_ordinals, index_ordinal, op_surjection, Flavor, Operad, OperadError, Table};
use crate::maps::{enumerate_maps, factorize, make_map, restrict, MapFilter, OrdinalMap};
use crate::ordinal::{enumerate_ordinals, LevelDomain, NOrdinal, DEFAULT_ENUMERATION_LIMIT};
use crate::perm::Permutation;

/// Pullback of a symmetric operad along the total order: `A_T = A_[|T|-1]`.
#[derive(Debug, Clone)]
pub struct Desymmetrised<O> {
    inner: O,
    n: u32,
    bound: usize,
}

pub fn desymmetrise<O: Operad>(sym: O, n: u32, bound: usize) -> Result<Desymmetrised<O>, OperadError> {
    if sym.flavor() != Flavor::Symmetric {
        return Err(OperadError::FlavorMismatch(format!("desymmetrise needs a symmetric operad, got {}", sym.flavor())));
    }
    if n == 0 {
        return Err(OperadError::Precondition("n must be positive".into()));
    }
    let available = Flavor::Symmetric.max_arity(sym.bound());
    if bound > available {
        return Err(OperadError::BoundExceeded { requested: bound, available });
    }
    Ok(Desymmetrised { inner: sym, n, bound })
}

impl<O: Operad> Desymmetrised<O> {
    pub fn inner(&self) -> &O {
        &self.inner
    }

    fn check(&self, t: &NOrdinal) -> Result<(), OperadError> {
        if t.domain() != LevelDomain::Finite(self.n) {
            return Err(OperadError::FlavorMismatch(format!("{t} is not a {}-ordinal", self.n)));
        }
        if t.arity() == 0 || t.arity() > self.bound {
            return Err(OperadError::BoundExceeded { requested: t.arity(), available: self.bound });
        }
        Ok(())
    }
}

/// Position of each element once sorted by `(f(x), x)`.
fn fiber_sort(f: &[usize]) -> Permutation {
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by_key(|&x| (f[x], x));
    Permutation::from_images(order).expect("bijection").inverse()
}

impl<O: Operad> Operad for Desymmetrised<O> {
    fn flavor(&self) -> Flavor {
        Flavor::NOperad(self.n)
    }

    fn bound(&self) -> usize {
        self.bound
    }

    fn carrier_size(&self, t: &NOrdinal) -> Result<usize, OperadError> {
        self.check(t)?;
        self.inner.carrier_size(&index_ordinal(Flavor::Symmetric, t.arity()))
    }

    fn unit(&self) -> u32 {
        self.inner.unit()
    }

    fn mult(&self, sigma: &OrdinalMap, a: u32, b: &[u32]) -> Result<u32, OperadError> {
        self.check(sigma.source())?;
        self.check(sigma.target())?;
        if !sigma.is_surjective() {
            return Err(OperadError::Precondition(format!("{sigma} is not surjective")));
        }
        let nu = op_surjection(&sigma.fiber_sizes())?;
        let c = self.inner.mult(&nu, a, b)?;
        act_perm(&self.inner, &fiber_sort(sigma.table()), c)
    }

    fn act(&self, _arity: usize, _g: i32, _x: u32) -> Result<u32, OperadError> {
        Err(OperadError::FlavorMismatch("n-operads carry no generator actions".into()))
    }

    fn label(&self, t: &NOrdinal, x: u32) -> String {
        self.inner.label(&index_ordinal(Flavor::Symmetric, t.arity()), x)
    }
}

/// `A(σ): A_S -> A_T`, `a ↦ m_σ(a; e, …, e)`.
pub fn induced_action<O: Operad + ?Sized>(op: &O, sigma: &OrdinalMap) -> Result<Vec<u32>, OperadError> {
    if !sigma.is_quasibijection() {
        return Err(OperadError::Precondition(format!("{sigma} is not a quasibijection")));
    }
    let units = vec![op.unit(); sigma.target().arity()];
    let size = op.carrier_size(sigma.target())? as u32;
    (0..size).into_par_iter().map(|a| op.mult(sigma, a, &units)).collect()
}

/// All quasibijections between `n`-ordinals of arity `1..=bound`.
pub fn quasibijections(n: u32, bound: usize) -> Result<Vec<OrdinalMap>, OperadError> {
    let mut out = Vec::new();
    for k in 1..=bound {
        let objs = enumerate_ordinals(n, k, DEFAULT_ENUMERATION_LIMIT)?;
        for t in &objs {
            for s in &objs {
                out.extend(enumerate_maps(t, s, MapFilter::Quasibijections, DEFAULT_ENUMERATION_LIMIT)?);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiReport {
    pub holds: bool,
    pub checked: usize,
    pub witness: Option<OrdinalMap>,
    pub reason: Option<String>,
}

fn n_of<O: Operad + ?Sized>(op: &O) -> Result<u32, OperadError> {
    match op.flavor() {
        Flavor::NOperad(n) => Ok(n),
        f => Err(OperadError::FlavorMismatch(format!("expected an n-operad, got {f}"))),
    }
}

fn scan<O: Operad + ?Sized>(
    op: &O,
    bound: usize,
    verdict: impl Fn(&OrdinalMap, &[u32], usize, usize) -> Option<String>,
) -> Result<QuasiReport, OperadError> {
    if bound > op.bound() {
        return Err(OperadError::BoundExceeded { requested: bound, available: op.bound() });
    }
    let maps = quasibijections(n_of(op)?, bound)?;
    for sigma in &maps {
        let f = induced_action(op, sigma)?;
        let (src, dst) = (op.carrier_size(sigma.target())?, op.carrier_size(sigma.source())?);
        if let Some(reason) = verdict(sigma, &f, src, dst) {
            return Ok(QuasiReport { holds: false, checked: maps.len(), witness: Some(sigma.clone()), reason: Some(reason) });
        }
    }
    Ok(QuasiReport { holds: true, checked: maps.len(), witness: None, reason: None })
}

/// Every induced `A(σ)` is a bijection.
pub fn is_quasisymmetric<O: Operad + ?Sized>(op: &O, bound: usize) -> Result<QuasiReport, OperadError> {
    scan(op, bound, |_, f, src, dst| {
        if src != dst {
            return Some(format!("carriers have sizes {src} and {dst}"));
        }
        let mut seen = vec![false; dst];
        for (x, &y) in f.iter().enumerate() {
            if std::mem::replace(&mut seen[y as usize], true) {
                return Some(format!("A(sigma) is not injective at element {x}"));
            }
        }
        None
    })
}

/// Every induced `A(σ): A_S -> A_T` satisfies `pred(images, |A_T|)`.
pub fn is_locally_constant<O: Operad + ?Sized>(
    op: &O,
    pred: &(dyn Fn(&[u32], usize) -> bool + Sync),
    bound: usize,
) -> Result<QuasiReport, OperadError> {
    scan(op, bound, |_, f, _, dst| (!pred(f, dst)).then(|| "predicate rejects A(sigma)".to_string()))
}

type ActionPair = Arc<(Vec<u32>, Vec<u32>)>;

/// The multiplication of a quasisymmetric n-operad recomputed from its order
/// preserving part and its quasibijection actions.
pub struct Extended<O> {
    base: O,
    bound: usize,
    cache: RwLock<HashMap<OrdinalMap, ActionPair>>,
}

impl<O: Operad> Extended<O> {
    pub fn new(base: O, bound: usize) -> Result<Self, OperadError> {
        let q = is_quasisymmetric(&base, bound)?;
        if !q.holds {
            let w = q.witness.map(|m| m.to_string()).unwrap_or_default();
            return Err(OperadError::NotQuasisymmetric(format!("{w}: {}", q.reason.unwrap_or_default())));
        }
        Ok(Self { base, bound, cache: RwLock::new(HashMap::new()) })
    }

    pub fn base(&self) -> &O {
        &self.base
    }

    /// `A(π)` and its inverse.
    fn action(&self, pi: &OrdinalMap) -> Result<ActionPair, OperadError> {
        if let Some(p) = self.cache.read().expect("lock").get(pi) {
            return Ok(p.clone());
        }
        let fwd = induced_action(&self.base, pi)?;
        let mut inv = vec![u32::MAX; fwd.len()];
        for (x, &y) in fwd.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        if inv.contains(&u32::MAX) {
            return Err(OperadError::NotQuasisymmetric(format!("A({pi}) is not a bijection")));
        }
        let pair = Arc::new((fwd, inv));
        self.cache.write().expect("lock").insert(pi.clone(), pair.clone());
        Ok(pair)
    }

    /// `A(π)(μ_ν(a; A(π_0)^{-1} b_0, …))` for `σ = ν ∘ π`.
    pub fn mult_via(&self, pi: &OrdinalMap, nu: &OrdinalMap, a: u32, b: &[u32]) -> Result<u32, OperadError> {
        let sigma_table: Vec<usize> = pi.table().iter().map(|&y| nu.apply(y)).collect();
        let mut args = Vec::with_capacity(b.len());
        for (i, &bi) in b.iter().enumerate() {
            let src: Vec<usize> = (0..sigma_table.len()).filter(|&x| sigma_table[x] == i).collect();
            let pi_i = restrict(pi, &src, &nu.fiber_positions(i))?;
            args.push(self.action(&pi_i)?.1[bi as usize]);
        }
        let c = self.base.mult(nu, a, &args)?;
        Ok(self.action(pi)?.0[c as usize])
    }
}

impl<O: Operad> Operad for Extended<O> {
    fn flavor(&self) -> Flavor {
        self.base.flavor()
    }

    fn bound(&self) -> usize {
        self.bound
    }

    fn carrier_size(&self, t: &NOrdinal) -> Result<usize, OperadError> {
        self.base.carrier_size(t)
    }

    fn unit(&self) -> u32 {
        self.base.unit()
    }

    fn mult(&self, sigma: &OrdinalMap, a: u32, b: &[u32]) -> Result<u32, OperadError> {
        if sigma.is_order_preserving() {
            return self.base.mult(sigma, a, b);
        }
        let f = factorize(sigma)?;
        self.mult_via(&f.pi, &f.nu, a, b)
    }

    fn act(&self, arity: usize, g: i32, x: u32) -> Result<u32, OperadError> {
        self.base.act(arity, g, x)
    }

    fn label(&self, t: &NOrdinal, x: u32) -> String {
        self.base.label(t, x)
    }
}

fn table_dims<O: Operad + ?Sized>(op: &O, sigma: &OrdinalMap) -> Result<Vec<usize>, OperadError> {
    let mut dims = vec![op.carrier_size(sigma.target())?];
    for f in fiber_ordinals(sigma) {
        dims.push(op.carrier_size(&f)?);
    }
    Ok(dims)
}

/// `μ_σ` for an arbitrary morphism, computed along `factorize(σ)`.
pub fn extend_multiplication<O: Operad>(op: O, sigma: &OrdinalMap) -> Result<Table, OperadError> {
    let ext = Extended::new(op, sigma.source().arity())?;
    Table::fill(table_dims(&ext, sigma)?, |a, b| ext.mult(sigma, a, b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub factorizations: Vec<NOrdinal>,
    pub agree: bool,
    pub witness: Option<(NOrdinal, Vec<u32>)>,
}

/// Recompute `μ_σ` through every factorization `σ = ν' ∘ π'` with `π'`
/// preserving the order on fibers, and compare the tables.
pub fn factorization_independence<O: Operad>(
    ext: &Extended<O>,
    sigma: &OrdinalMap,
) -> Result<IndependenceReport, OperadError> {
    let t = sigma.source();
    let pi_table: Vec<usize> = fiber_sort(sigma.table()).images().to_vec();
    let mut nu_table: Vec<usize> = sigma.table().to_vec();
    nu_table.sort_unstable();
    let n = t.domain().finite().expect("finite domain");
    let mut middles = Vec::new();
    let mut tables: Vec<Table> = Vec::new();
    let dims = table_dims(ext, sigma)?;
    for m in enumerate_ordinals(n, t.arity(), DEFAULT_ENUMERATION_LIMIT)? {
        let (Ok(pi), Ok(nu)) = (make_map(t, &m, pi_table.clone()), make_map(&m, sigma.target(), nu_table.clone())) else {
            continue;
        };
        tables.push(Table::fill(dims.clone(), |a, b| ext.mult_via(&pi, &nu, a, b))?);
        middles.push(m);
    }
    let mut witness = None;
    if let Some(first) = tables.first() {
        for (m, tab) in middles.iter().zip(&tables).skip(1) {
            if let Some(off) = (0..first.data().len()).find(|&i| first.data()[i] != tab.data()[i]) {
                witness = Some((m.clone(), first.tuple_at(off)));
                break;
            }
        }
    }
    Ok(IndependenceReport { factorizations: middles, agree: witness.is_none(), witness })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub i: usize,
    pub j: usize,
    pub holds: bool,
}

/// Generator actions on `A_{S[k-1]}` with their relation checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraidedAction {
    pub strands: usize,
    pub carrier_size: usize,
    #[serde(skip)]
    pub generators: Vec<Vec<u32>>,
    /// Number of points each generator moves.
    pub moved: Vec<usize>,
    pub relations: Vec<RelationCheck>,
}

/// Act by `σ_i` through the zig-zag `S <-id- T -s_i-> S`, with `T` the all-0
/// and `S` the all-1 2-ordinal on `k` points: `σ_i = A(id)^{-1} ∘ A(s_i)`.
pub fn braided_action_from_quasisymmetric<O: Operad + ?Sized>(op: &O, k: usize) -> Result<BraidedAction, OperadError> {
    if op.flavor() != Flavor::NOperad(2) {
        return Err(OperadError::FlavorMismatch(format!("expected a 2-operad, got {}", op.flavor())));
    }
    if k == 0 || k > op.bound() {
        return Err(OperadError::BoundExceeded { requested: k, available: op.bound() });
    }
    let d = LevelDomain::Finite(2);
    let (t, s) = (NOrdinal::constant(d, k, 0)?, NOrdinal::constant(d, k, 1)?);
    let id = make_map(&t, &s, (0..k).collect())?;
    let a_id = induced_action(op, &id)?;
    let size = op.carrier_size(&s)?;
    let mut inv = vec![u32::MAX; op.carrier_size(&t)?];
    if inv.len() != size {
        return Err(OperadError::NotQuasisymmetric(format!("A({id}) changes size")));
    }
    for (x, &y) in a_id.iter().enumerate() {
        inv[y as usize] = x as u32;
    }
    if inv.contains(&u32::MAX) {
        return Err(OperadError::NotQuasisymmetric(format!("A({id}) is not a bijection")));
    }
    let mut generators = Vec::with_capacity(k.saturating_sub(1));
    for i in 1..k {
        let si = make_map(&t, &s, Permutation::transposition(k, i - 1).images().to_vec())?;
        let g: Vec<u32> = induced_action(op, &si)?.into_iter().map(|y| inv[y as usize]).collect();
        let mut seen = vec![false; size];
        if g.iter().any(|&y| std::mem::replace(&mut seen[y as usize], true)) {
            return Err(OperadError::NotQuasisymmetric(format!("A({si}) is not a bijection")));
        }
        generators.push(g);
    }
    let apply = |word: &[usize], x: u32| word.iter().rev().fold(x, |x, &g| generators[g - 1][x as usize]);
    let mut relations = Vec::new();
    for i in 1..k {
        for j in i + 1..k {
            let (relation, l, r) = if j == i + 1 {
                ("yang-baxter", vec![i, j, i], vec![j, i, j])
            } else {
                ("far-commutation", vec![i, j], vec![j, i])
            };
            if let Some(x) = (0..size as u32).into_par_iter().find_first(|&x| apply(&l, x) != apply(&r, x)) {
                return Err(OperadError::RelationFailed(format!("{relation} ({i}, {j}) at element {x}")));
            }
            relations.push(RelationCheck { relation: relation.into(), i, j, holds: true });
        }
    }
    let moved = generators.iter().map(|g| g.iter().enumerate().filter(|&(x, &y)| x as u32 != y).count()).collect();
    Ok(BraidedAction { strands: k, carrier_size: size, generators, moved, relations })
}
