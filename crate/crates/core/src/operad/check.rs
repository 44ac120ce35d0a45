//! Exhaustive axiom checks over tabulated operads.

use rayon::prelude::*;
use serde::Serialize;

use super::{
    fiber_ordinals, for_each_tuple, index_ordinal, index_ordinals, morphisms, op_surjection, FiniteOperad, Flavor,
    Operad, OperadError, Table,
};
use crate::braid::{braid_equal, cable, q_section, BraidWord};
use crate::maps::{compose, restrict, OrdinalMap};
use crate::perm::{block_permutation, Permutation};

/// Failures kept in a report; the count covers all of them.
pub const MAX_REPORTED_FAILURES: usize = 200;

/// Largest arity the checker handles.
pub const MAX_CHECK_ARITY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub axiom: String,
    pub morphisms: Vec<String>,
    pub input: Vec<u32>,
    pub expected: u32,
    pub got: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub pass: bool,
    pub flavor: Flavor,
    pub bound: usize,
    pub instances: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
}

impl AxiomReport {
    pub fn axioms_failed(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.failures.iter().map(|f| f.axiom.as_str()).collect();
        v.dedup();
        v
    }
}

type Eval<'a> = Box<dyn Fn(&[u32]) -> (u32, u32) + Sync + 'a>;

/// One axiom instance: `eval` returns `(got, expected)` on every input tuple.
struct Instance<'a> {
    axiom: &'static str,
    morphisms: Vec<String>,
    dims: Vec<usize>,
    eval: Eval<'a>,
}

/// A word compiled to generator arrays, applied last letter first.
#[derive(Clone)]
struct Compiled<'a>(Vec<&'a [u32]>);

impl Compiled<'_> {
    #[inline]
    fn apply(&self, x: u32) -> u32 {
        self.0.iter().fold(x, |x, g| g[x as usize])
    }
}

fn compile<'a>(op: &'a FiniteOperad, w: &BraidWord) -> Option<Compiled<'a>> {
    let k = w.strands();
    let mut steps = Vec::with_capacity(w.len());
    for &g in w.letters().iter().rev() {
        let gi = g.unsigned_abs() as usize;
        let arr: &[u32] = if g > 0 { op.actions().get(&k)?.get(gi - 1)? } else { op.inverse_action(k, gi)? };
        steps.push(arr);
    }
    Some(Compiled(steps))
}

fn run(instances: &[Instance<'_>]) -> (u64, u64, Vec<Failure>) {
    let results: Vec<(u64, u64, Vec<Failure>)> = instances
        .par_iter()
        .map(|inst| {
            let rest = &inst.dims[1..];
            let parts: Vec<(u64, u64, Vec<Failure>)> = (0..inst.dims[0] as u32)
                .into_par_iter()
                .map(|a| {
                    let mut count = 0u64;
                    let mut bad = 0u64;
                    let mut fails = Vec::new();
                    let mut input = vec![0u32; inst.dims.len()];
                    input[0] = a;
                    for_each_tuple(rest, |b| {
                        input[1..].copy_from_slice(b);
                        count += 1;
                        let (got, expected) = (inst.eval)(&input);
                        if got != expected {
                            bad += 1;
                            if fails.len() < MAX_REPORTED_FAILURES {
                                fails.push(Failure {
                                    axiom: inst.axiom.to_string(),
                                    morphisms: inst.morphisms.clone(),
                                    input: input.clone(),
                                    expected,
                                    got,
                                });
                            }
                        }
                    });
                    (count, bad, fails)
                })
                .collect();
            merge(parts)
        })
        .collect();
    merge(results)
}

fn merge(parts: Vec<(u64, u64, Vec<Failure>)>) -> (u64, u64, Vec<Failure>) {
    let mut total = (0, 0, Vec::new());
    for (c, b, f) in parts {
        total.0 += c;
        total.1 += b;
        let room = MAX_REPORTED_FAILURES - total.2.len();
        total.2.extend(f.into_iter().take(room));
    }
    total
}

fn buf(xs: impl Iterator<Item = u32>) -> ([u32; MAX_CHECK_ARITY], usize) {
    let mut out = [0u32; MAX_CHECK_ARITY];
    let mut n = 0;
    for x in xs {
        out[n] = x;
        n += 1;
    }
    (out, n)
}

fn dims_of(op: &FiniteOperad, sigma: &OrdinalMap) -> Result<Vec<usize>, OperadError> {
    let mut d = vec![op.carrier_size(sigma.target())?];
    for f in fiber_ordinals(sigma) {
        d.push(op.carrier_size(&f)?);
    }
    Ok(d)
}

fn unit_instances(op: &FiniteOperad) -> Result<Vec<Instance<'_>>, OperadError> {
    let e = op.unit();
    let mut out = Vec::new();
    for t in index_ordinals(op.flavor(), op.bound())? {
        let n = op.carrier_size(&t)?;
        let id = OrdinalMap::identity(&t);
        let tid = op.table(&id)?;
        let k = t.arity();
        out.push(Instance {
            axiom: "unit-left",
            morphisms: vec![id.to_string()],
            dims: vec![n],
            eval: Box::new(move |x| {
                let (b, m) = buf(std::iter::repeat(e).take(k));
                (tid.get(x[0], &b[..m]), x[0])
            }),
        });
        let term = OrdinalMap::terminal(&t);
        let tt = op.table(&term)?;
        out.push(Instance {
            axiom: "unit-right",
            morphisms: vec![term.to_string()],
            dims: vec![n],
            eval: Box::new(move |x| (tt.get(e, &[x[0]]), x[0])),
        });
    }
    Ok(out)
}

fn assoc_instances<'a>(op: &'a FiniteOperad, maps: &[OrdinalMap]) -> Result<Vec<Instance<'a>>, OperadError> {
    let mut out = Vec::new();
    for sigma in maps {
        for omega in maps.iter().filter(|w| w.source() == sigma.target()) {
            let comp = compose(sigma, omega)?;
            let (ts, tw, tc) = (op.table(sigma)?, op.table(omega)?, op.table(&comp)?);
            let r = omega.target().arity();
            let mut parts: Vec<(&Table, Vec<usize>)> = Vec::with_capacity(r);
            for i in 0..r {
                let si = omega.fiber_positions(i);
                let ti = comp.fiber_positions(i);
                let sub = restrict(sigma, &ti, &si)?;
                parts.push((op.table(&sub)?, si));
            }
            let mut dims = vec![op.carrier_size(omega.target())?];
            dims.extend(fiber_ordinals(omega).iter().map(|f| op.carrier_size(f)).collect::<Result<Vec<_>, _>>()?);
            dims.extend(fiber_ordinals(sigma).iter().map(|f| op.carrier_size(f)).collect::<Result<Vec<_>, _>>()?);
            out.push(Instance {
                axiom: "associativity",
                morphisms: vec![sigma.to_string(), omega.to_string()],
                dims,
                eval: Box::new(move |x| {
                    let a = x[0];
                    let (b, c) = x[1..].split_at(r);
                    let got = ts.get(tw.get(a, b), c);
                    let (inner, m) = buf(parts.iter().enumerate().map(|(i, (t, si))| {
                        let (cs, l) = buf(si.iter().map(|&s| c[s]));
                        t.get(b[i], &cs[..l])
                    }));
                    (got, tc.get(a, &inner[..m]))
                }),
            });
        }
    }
    Ok(out)
}

fn relation_instances(op: &FiniteOperad) -> Result<(Vec<Instance<'_>>, Vec<Failure>), OperadError> {
    let flavor = op.flavor();
    let mut out = Vec::new();
    let mut direct = Vec::new();
    for k in 2..=flavor.max_arity(op.bound()) {
        let n = op.carrier_size(&index_ordinal(flavor, k))?;
        let mut pair = |axiom: &'static str, l: Vec<i32>, r: Vec<i32>| -> Result<(), OperadError> {
            let (lw, rw) = (BraidWord::new(k, l)?, BraidWord::new(k, r)?);
            if let (Some(lc), Some(rc)) = (compile(op, &lw), compile(op, &rw)) {
                out.push(Instance {
                    axiom,
                    morphisms: vec![lw.to_string(), rw.to_string()],
                    dims: vec![n],
                    eval: Box::new(move |x| (lc.apply(x[0]), rc.apply(x[0]))),
                });
            }
            Ok(())
        };
        for g in 1..k as i32 {
            if flavor == Flavor::Symmetric {
                pair("action-involution", vec![g, g], vec![])?;
            } else if op.inverse_action(k, g as usize).is_none() {
                let arr = &op.actions()[&k][g as usize - 1];
                let mut seen = vec![u32::MAX; n];
                for (x, &y) in arr.iter().enumerate() {
                    if seen[y as usize] != u32::MAX {
                        direct.push(Failure {
                            axiom: "action-bijective".into(),
                            morphisms: vec![BraidWord::new(k, vec![g])?.to_string()],
                            input: vec![seen[y as usize], x as u32],
                            expected: u32::MAX,
                            got: y,
                        });
                        break;
                    }
                    seen[y as usize] = x as u32;
                }
            }
        }
        for i in 1..k as i32 {
            for j in i + 2..k as i32 {
                pair("action-far-commutation", vec![i, j], vec![j, i])?;
            }
            if i + 1 < k as i32 {
                pair("action-braid", vec![i, i + 1, i], vec![i + 1, i, i + 1])?;
            }
        }
    }
    Ok((out, direct))
}

/// `μ_{σ'}(A(w_a) a; A(w_j) b_{p(j)}) = A(w_out) μ_σ(a; b)`.
#[allow(clippy::too_many_arguments)]
fn permuted_instance<'a>(
    op: &'a FiniteOperad,
    axiom: &'static str,
    sigma_prime: &OrdinalMap,
    p: &Permutation,
    wa: &BraidWord,
    fiber_words: &[BraidWord],
    wout: &BraidWord,
    label: String,
) -> Result<Option<Instance<'a>>, OperadError> {
    let m_prime = sigma_prime.fiber_sizes();
    let mut m = vec![0; m_prime.len()];
    for (j, &mj) in m_prime.iter().enumerate() {
        m[p.apply(j)] = mj;
    }
    let sigma = op_surjection(&m)?;
    let (tsp, ts) = (op.table(sigma_prime)?, op.table(&sigma)?);
    let (Some(ca), Some(co)) = (compile(op, wa), compile(op, wout)) else { return Ok(None) };
    let mut cf = Vec::with_capacity(fiber_words.len());
    for w in fiber_words {
        match compile(op, w) {
            Some(c) => cf.push(c),
            None => return Ok(None),
        }
    }
    let pv: Vec<usize> = p.images().to_vec();
    Ok(Some(Instance {
        axiom,
        morphisms: vec![sigma_prime.to_string(), label],
        dims: dims_of(op, &sigma)?,
        eval: Box::new(move |x| {
            let a = x[0];
            let b = &x[1..];
            let (c, l) = buf(pv.iter().enumerate().map(|(j, &pj)| cf[j].apply(b[pj])));
            let got = tsp.get(ca.apply(a), &c[..l]);
            (got, co.apply(ts.get(a, b)))
        }),
    }))
}

/// `A(w_l) μ_σ(a; A(u_i) b_i) = A(w_r) μ_σ(a; A(v_i) b_i)`.
fn fiberwise_instance<'a>(
    op: &'a FiniteOperad,
    axiom: &'static str,
    sigma: &OrdinalMap,
    (wl, ul): (&BraidWord, &[BraidWord]),
    (wr, vr): (&BraidWord, &[BraidWord]),
    label: String,
) -> Result<Option<Instance<'a>>, OperadError> {
    let ts = op.table(sigma)?;
    let all = |ws: &[BraidWord]| ws.iter().map(|w| compile(op, w)).collect::<Option<Vec<_>>>();
    let (Some(cl), Some(cr), Some(cu), Some(cv)) = (compile(op, wl), compile(op, wr), all(ul), all(vr)) else {
        return Ok(None);
    };
    Ok(Some(Instance {
        axiom,
        morphisms: vec![sigma.to_string(), label],
        dims: dims_of(op, sigma)?,
        eval: Box::new(move |x| {
            let a = x[0];
            let b = &x[1..];
            let (u, n) = buf(b.iter().zip(&cu).map(|(&y, c)| c.apply(y)));
            let (v, _) = buf(b.iter().zip(&cv).map(|(&y, c)| c.apply(y)));
            (cl.apply(ts.get(a, &u[..n])), cr.apply(ts.get(a, &v[..n])))
        }),
    }))
}

fn all_tuples(sizes: &[usize]) -> Vec<Vec<Permutation>> {
    let mut out = vec![Vec::new()];
    for &m in sizes {
        let perms = Permutation::all(m);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                perms.iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.push(p.clone());
                    v
                })
            })
            .collect();
    }
    out
}

fn direct_sum(ps: &[Permutation]) -> Permutation {
    ps.iter().fold(Permutation::identity(0), |acc, p| acc.sum(p))
}

fn empty_words(sizes: &[usize]) -> Vec<BraidWord> {
    sizes.iter().map(|&m| BraidWord::empty(m)).collect()
}

fn perm_label(p: &Permutation) -> String {
    format!("rho={:?}", p.images())
}

fn equivariance_instances<'a>(op: &'a FiniteOperad, maps: &[OrdinalMap]) -> Result<Vec<Instance<'a>>, OperadError> {
    let flavor = op.flavor();
    let mut out = Vec::new();
    let mut push = |i: Option<Instance<'a>>| out.extend(i);
    for sp in maps {
        let k = sp.target().arity();
        let n = sp.source().arity();
        let m_prime = sp.fiber_sizes();
        let none = empty_words(&m_prime);
        // first condition: permuting the target
        let rhos: Vec<BraidWord> = match flavor {
            Flavor::Braided => (1..k as i32).flat_map(|g| [g, -g]).map(|g| BraidWord::new(k, vec![g])).collect::<Result<_, _>>()?,
            _ => Permutation::all(k).iter().filter(|p| !p.is_identity()).map(q_section).collect(),
        };
        for rho in rhos {
            let p = rho.perm_image();
            let wout = match flavor {
                Flavor::Braided => cable(&rho, &m_prime)?,
                _ => q_section(&block_permutation(&p, &m_prime)),
            };
            let label = if flavor == Flavor::Braided { format!("braid={rho}") } else { perm_label(&p) };
            push(permuted_instance(op, "equivariance-1", sp, &p, &rho, &none, &wout, label)?);
        }
        // second condition: acting inside the fibers
        let sigma = sp;
        let m = &m_prime;
        let offsets: Vec<usize> = m.iter().scan(0, |acc, &x| {
            let o = *acc;
            *acc += x;
            Some(o)
        }).collect();
        let empty_n = BraidWord::empty(n);
        match flavor {
            Flavor::Symmetric => {
                for tuple in all_tuples(m) {
                    if tuple.iter().all(Permutation::is_identity) {
                        continue;
                    }
                    let fw: Vec<BraidWord> = tuple.iter().map(q_section).collect();
                    let wout = q_section(&direct_sum(&tuple));
                    let label = format!("rhos={:?}", tuple.iter().map(|p| p.images().to_vec()).collect::<Vec<_>>());
                    push(fiberwise_instance(op, "equivariance-2", sigma, (&empty_n, &fw), (&wout, &none), label)?);
                }
            }
            Flavor::Braided => {
                for (i, &mi) in m.iter().enumerate() {
                    for g in (1..mi as i32).flat_map(|g| [g, -g]) {
                        let mut fw = none.clone();
                        fw[i] = BraidWord::new(mi, vec![g])?;
                        let wout = fw[i].embed(offsets[i], n);
                        let label = format!("fiber={i} braid={}", fw[i]);
                        push(fiberwise_instance(op, "equivariance-2", sigma, (&empty_n, &fw), (&wout, &none), label)?);
                    }
                }
            }
            Flavor::Mixed2 => {
                let f = sigma.table();
                let perms = Permutation::all(n);
                for p in &perms {
                    for pp in &perms {
                        if p == pp || (0..n).any(|x| f[p.apply(x)] != f[pp.apply(x)]) {
                            continue;
                        }
                        let (qp, qpp) = (q_section(p), q_section(pp));
                        let w = qpp.invert().multiply(&qp)?;
                        let gammas: Vec<BraidWord> = (0..k)
                            .map(|i| w.restrict_strands(&(offsets[i]..offsets[i] + m[i]).collect::<Vec<_>>()))
                            .collect();
                        let split = gammas.iter().fold(BraidWord::empty(0), |acc, g| acc.block_sum(g));
                        if !braid_equal(&w, &split)? {
                            return Err(OperadError::InvariantBroken(format!("{w} does not split over the fibers")));
                        }
                        let label = format!("p={:?} p'={:?}", p.images(), pp.images());
                        push(fiberwise_instance(op, "equivariance-2", sigma, (&qp, &none), (&qpp, &gammas), label)?);
                    }
                }
            }
            Flavor::NOperad(_) => {}
        }
    }
    Ok(out)
}

fn finish(op: &FiniteOperad, instances: Vec<Instance<'_>>, mut direct: Vec<Failure>) -> AxiomReport {
    let (count, bad, fails) = run(&instances);
    let failure_count = bad + direct.len() as u64;
    direct.extend(fails);
    direct.truncate(MAX_REPORTED_FAILURES);
    AxiomReport {
        pass: failure_count == 0,
        flavor: op.flavor(),
        bound: op.bound(),
        instances: count,
        failure_count,
        failures: direct,
    }
}

fn with_tables<O: Operad + ?Sized, R>(
    op: &O,
    bound: usize,
    f: impl FnOnce(&FiniteOperad) -> Result<R, OperadError>,
) -> Result<R, OperadError> {
    if bound > op.bound() {
        return Err(OperadError::BoundExceeded { requested: bound, available: op.bound() });
    }
    if op.flavor().max_arity(bound) > MAX_CHECK_ARITY {
        return Err(OperadError::BoundExceeded { requested: bound, available: MAX_CHECK_ARITY });
    }
    match op.as_finite() {
        Some(fin) if fin.bound() == bound => f(fin),
        _ => f(&FiniteOperad::tabulate(op, bound)?),
    }
}

/// Instantiate every axiom of the operad's flavor over all morphisms and
/// elements within `bound`.
pub fn check_operad_axioms<O: Operad + ?Sized>(op: &O, bound: usize) -> Result<AxiomReport, OperadError> {
    with_tables(op, bound, |fin| {
        let maps = morphisms(fin.flavor(), bound)?;
        let (mut instances, direct) =
            if fin.flavor().has_actions() { relation_instances(fin)? } else { (Vec::new(), Vec::new()) };
        instances.extend(unit_instances(fin)?);
        instances.extend(assoc_instances(fin, &maps)?);
        if fin.flavor().has_actions() {
            instances.extend(equivariance_instances(fin, &maps)?);
        }
        Ok(finish(fin, instances, direct))
    })
}

/// Symmetric equivariance as one condition per commuting square
/// `σ ∘ ρ' = ρ ∘ σ'` with bijective verticals.
pub fn check_square_equivariance<O: Operad + ?Sized>(op: &O, bound: usize) -> Result<AxiomReport, OperadError> {
    if op.flavor() != Flavor::Symmetric {
        return Err(OperadError::FlavorMismatch(format!("square form needs a symmetric operad, got {}", op.flavor())));
    }
    with_tables(op, bound, |fin| {
        let mut instances = Vec::new();
        for sp in morphisms(Flavor::Symmetric, bound)? {
            let k = sp.target().arity();
            let n = sp.source().arity();
            let m_prime = sp.fiber_sizes();
            let starts_prime: Vec<usize> = (0..k).map(|j| sp.fiber_positions(j)[0]).collect();
            for rho in Permutation::all(k) {
                let mut m = vec![0; k];
                for j in 0..k {
                    m[rho.apply(j)] = m_prime[j];
                }
                let sigma = op_surjection(&m)?;
                let starts: Vec<usize> = (0..k).map(|i| sigma.fiber_positions(i)[0]).collect();
                for tuple in all_tuples(&m_prime) {
                    if rho.is_identity() && tuple.iter().all(Permutation::is_identity) {
                        continue;
                    }
                    let mut img = vec![0; n];
                    for j in 0..k {
                        for t in 0..m_prime[j] {
                            img[starts_prime[j] + t] = starts[rho.apply(j)] + tuple[j].apply(t);
                        }
                    }
                    let rho_prime = Permutation::from_images(img).expect("bijection");
                    let fw: Vec<BraidWord> = tuple.iter().map(q_section).collect();
                    let label = format!("rho={:?} rho'={:?}", rho.images(), rho_prime.images());
                    instances.extend(permuted_instance(
                        fin,
                        "equivariance-square",
                        &sp,
                        &rho,
                        &q_section(&rho),
                        &fw,
                        &q_section(&rho_prime),
                        label,
                    )?);
                }
            }
        }
        Ok(finish(fin, instances, Vec::new()))
    })
}
