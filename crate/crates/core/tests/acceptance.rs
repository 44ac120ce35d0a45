//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use num_rational::BigRational;
use qbench::braid::*;
use qbench::maps::*;
use qbench::operad::*;
use qbench::ordinal::{count_ordinals, enumerate_ordinals, DEFAULT_ENUMERATION_LIMIT};
use qbench::perm::Permutation;
use qbench::quasicat::category::DEFAULT_SIZE_LIMIT;
use qbench::quasicat::*;
use qbench::strata::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIMPLICES: usize = 5_000_000;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("{what} took {t:?}, limit {limit:?}"));
    }
    Ok(())
}

fn c1_counts() -> Check {
    let start = Instant::now();
    let mut cases = 0;
    for n in 1..=3u32 {
        for k in 1..=5usize {
            let brute = brute_force_ordinals(n, k);
            let want = (n as u64).pow(k as u32 - 1);
            ensure!(count_ordinals(n, k) == want, "count({n},{k}) = {}", count_ordinals(n, k));
            ensure!(brute.len() as u64 == want, "brute force ({n},{k}) found {}", brute.len());
            let ours: Vec<Vec<i32>> =
                enumerate_ordinals(n, k, DEFAULT_ENUMERATION_LIMIT).unwrap().iter().map(|o| o.levels().to_vec()).collect();
            ensure!(ours == brute, "enumeration ({n},{k}) differs from brute force");
            cases += 1;
        }
    }
    within(start, Duration::from_secs(10), "counts")?;
    Ok(format!("{cases} cases in {:?}", start.elapsed()))
}

fn homology_case(name: &str, cx: SimplicialComplexData, want: &[(usize, &[u64])], start: Instant) -> Result<(), String> {
    cx.check_boundary_squared().map_err(|e| format!("{name}: {e}"))?;
    let h = homology(&cx, None).map_err(|e| format!("{name}: {e}"))?;
    let expected: Vec<HomologyGroup> = want.iter().map(|&(r, t)| HomologyGroup::with_torsion(r, t)).collect();
    let mut got = h.groups.clone();
    while got.len() > expected.len() && got.last().is_some_and(|g| g.rank == 0 && g.torsion.is_empty()) {
        got.pop();
    }
    ensure!(got == expected, "{name}: got {got:?}");
    for p in [2, 3, 1_000_003] {
        let deg = cx.counts().len();
        ensure!(trim(betti_mod_p(&cx, p)) == trim(predicted_mod_p(&h, p, deg)), "{name}: mod {p} Betti numbers disagree");
    }
    within(start, Duration::from_secs(60), name)
}

fn c2_homology() -> Check {
    let t = Instant::now();
    homology_case("Q_2(2)", nerve(&build_q(2, 2, DEFAULT_SIZE_LIMIT).unwrap(), None, SIMPLICES).unwrap(), &[(1, &[]), (1, &[])], t)?;
    let t = Instant::now();
    let q32 = nerve(&build_q(3, 2, DEFAULT_SIZE_LIMIT).unwrap(), None, SIMPLICES).unwrap();
    ensure!(q32.euler_characteristic() == 1, "chi(Q_3(2)) = {}", q32.euler_characteristic());
    homology_case("Q_3(2)", q32, &[(1, &[]), (0, &[2]), (0, &[])], t)?;
    let t = Instant::now();
    homology_case(
        "J_3(2)",
        order_complex(&build_j(3, 2, DEFAULT_SIZE_LIMIT).unwrap(), None, SIMPLICES).unwrap(),
        &[(1, &[]), (0, &[]), (1, &[])],
        t,
    )?;
    let t = Instant::now();
    homology_case(
        "J_2(3)",
        order_complex(&build_j(2, 3, DEFAULT_SIZE_LIMIT).unwrap(), None, SIMPLICES).unwrap(),
        &[(1, &[]), (3, &[]), (2, &[])],
        t,
    )?;
    let t = Instant::now();
    homology_case(
        "Q_2(3)",
        nerve(&build_q(2, 3, DEFAULT_SIZE_LIMIT).unwrap(), None, SIMPLICES).unwrap(),
        &[(1, &[]), (1, &[]), (0, &[])],
        t,
    )?;
    Ok("5 complexes match, mod 2/3/1000003 consistent".into())
}

fn c3_connectivity() -> Check {
    for n in 1..=3 {
        for k in 1..=4 {
            let q = build_q(n, k, DEFAULT_SIZE_LIMIT).unwrap();
            let low = nerve(&q, Some(1), SIMPLICES).unwrap();
            let h0 = homology(&low, Some(0)).unwrap().groups[0].clone();
            ensure!(h0 == HomologyGroup::free(1), "H_0(Q_{n}({k})) = {h0:?}");
            ensure!(connected_components(&q) == 1, "Q_{n}({k}) has several components");
        }
    }
    Ok("12 categories connected".into())
}

fn c4_functoriality() -> Check {
    let mut pairs = 0;
    for k in 1..=4 {
        let obs = enumerate_ordinals(2, k, DEFAULT_ENUMERATION_LIMIT).unwrap();
        for a in &obs {
            for b in &obs {
                for sigma in quasibijections(a, b) {
                    let qs = braid_of_quasibijection(&sigma).unwrap();
                    for c in &obs {
                        for xi in quasibijections(b, c) {
                            let whole = braid_of_quasibijection(&compose(&sigma, &xi).unwrap()).unwrap();
                            let parts = qs.multiply(&braid_of_quasibijection(&xi).unwrap()).unwrap();
                            ensure!(braid_equal(&whole, &parts).unwrap(), "{sigma} then {xi}");
                            pairs += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} composable pairs"))
}

fn c5_artin() -> Check {
    let mut n = 0;
    for k in 3..=6 {
        for i in 1..k {
            for j in 1..k {
                if i != j {
                    let c = artin_diagram_check(k, i, j).map_err(|e| format!("({k},{i},{j}): {e}"))?;
                    c.verify().map_err(|e| format!("({k},{i},{j}): {e}"))?;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} certificates"))
}

fn c6_factorize() -> Check {
    let mut n_maps = 0;
    for n in 1..=3 {
        let obs: Vec<_> =
            (1..=4).flat_map(|k| enumerate_ordinals(n, k, DEFAULT_ENUMERATION_LIMIT).unwrap()).collect();
        for t in &obs {
            for s in &obs {
                for sigma in enumerate_maps(t, s, MapFilter::All, DEFAULT_MAP_SEARCH_LIMIT).unwrap() {
                    let fz = factorize(&sigma).map_err(|e| format!("{sigma}: {e}"))?;
                    ensure!(compose(&fz.pi, &fz.nu).unwrap() == sigma, "{sigma}: composite differs");
                    ensure!(classify_map(&fz.pi).is_quasibijection, "{sigma}: first factor not a quasibijection");
                    ensure!(classify_map(&fz.nu).is_order_preserving, "{sigma}: second factor not order preserving");
                    ensure!(preserves_fiber_order(&fz.pi, &fz.nu), "{sigma}: fiber order not preserved");
                    n_maps += 1;
                }
            }
        }
    }
    Ok(format!("{n_maps} morphisms"))
}

fn split_agrees(z: &ZigZag) -> Result<(), String> {
    let r = split_zigzag(z).map_err(|e| e.to_string())?;
    let sum = r.braids.iter().fold(BraidWord::empty(0), |acc, b| acc.block_sum(b));
    ensure!(braid_equal(&braid_of_zigzag(z).unwrap(), &sum).unwrap(), "split disagrees");
    Ok(())
}

fn c7_split() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 0..100 {
        let k = rng.gen_range(2..=6);
        let z = random_block_span(k, &mut rng);
        split_agrees(&z).map_err(|e| format!("random span {t}: {e}"))?;
    }
    let obs = enumerate_ordinals(2, 4, DEFAULT_ENUMERATION_LIMIT).unwrap();
    let mut family = 0;
    for t in &obs {
        for s in &obs {
            for sigma in quasibijections(t, s) {
                for r in &obs {
                    for eta in quasibijections(t, r) {
                        if is_block_span(&sigma, &eta) {
                            split_agrees(&ZigZag::span(sigma.clone(), eta).unwrap())?;
                            family += 1;
                        }
                    }
                }
            }
        }
    }
    ensure!(family > 0, "empty 4-strand family");
    Ok(format!("100 random spans, {family} four-strand spans"))
}

/// Applies a random braid relation somewhere in `w`, or inserts a cancelling pair.
fn rewrite<R: Rng>(w: &mut Vec<i32>, rng: &mut R) {
    let spots: Vec<usize> = (0..w.len().saturating_sub(2))
        .filter(|&i| w[i] == w[i + 2] && w[i].signum() == w[i + 1].signum() && w[i].abs() != w[i + 1].abs())
        .collect();
    if !spots.is_empty() && rng.gen_bool(0.6) {
        let i = spots[rng.gen_range(0..spots.len())];
        let (a, b) = (w[i], w[i + 1]);
        w.splice(i..i + 3, [b, a, b]);
    } else {
        let g = if rng.gen_bool(0.5) { 1 } else { 2 } * if rng.gen_bool(0.5) { 1 } else { -1 };
        let at = rng.gen_range(0..=w.len());
        w.splice(at..at, [g, -g]);
    }
}

fn judge(b: &BraidWord) -> Result<bool, String> {
    let t = is_trivial(b).map_err(|e| e.to_string())?;
    ensure!(t == sl2_trivial(b), "{:?}: is_trivial {t}, oracle disagrees", b.letters());
    if t {
        ensure!(b.exponent_sum() == 0, "{:?}: trivial with nonzero exponent sum", b.letters());
        ensure!(b.perm_image() == Permutation::identity(3), "{:?}: trivial with nontrivial permutation", b.letters());
    }
    if b.free_reduce().is_empty() {
        ensure!(t, "{:?}: freely trivial but reported nontrivial", b.letters());
    }
    Ok(t)
}

fn c8_word_problem() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let gens = [1, -1, 2, -2];
    let mut trivial = 0;
    for _ in 0..1000 {
        let len = rng.gen_range(0..=20);
        let w: Vec<i32> = (0..len).map(|_| gens[rng.gen_range(0..4)]).collect();
        trivial += judge(&BraidWord::new(3, w).unwrap())? as usize;
    }
    let mut built = 0;
    for _ in 0..300 {
        let len = rng.gen_range(1..=8);
        let u: Vec<i32> = (0..len).map(|_| gens[rng.gen_range(0..4)]).collect();
        let mut v = u.clone();
        for _ in 0..rng.gen_range(1..=4) {
            rewrite(&mut v, &mut rng);
        }
        let ub = BraidWord::new(3, u).unwrap();
        let vb = BraidWord::new(3, v).unwrap();
        let z = ub.multiply(&vb.invert()).unwrap();
        ensure!(judge(&z)?, "{:?}: constructed trivial word reported nontrivial", z.letters());
        let off = z.multiply(&BraidWord::generator(3, 1).unwrap()).unwrap();
        ensure!(!judge(&off)?, "{:?}: perturbed word reported trivial", off.letters());
        built += 1;
    }
    Ok(format!("1000 random words ({trivial} trivial), {built} constructed trivial words, 0 disagreements"))
}

fn bijective(images: &[u32], size: usize) -> bool {
    let mut seen = vec![false; size];
    images.len() == size && images.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true))
}

fn desym_end(bound: usize) -> FiniteOperad {
    let d = desymmetrise(EndOperad::new(2, bound - 1).unwrap(), 2, bound).unwrap();
    FiniteOperad::tabulate(&d, bound).unwrap()
}

fn c9_operads() -> Check {
    for f in [Flavor::Symmetric, Flavor::Braided, Flavor::Mixed2, Flavor::NOperad(1), Flavor::NOperad(2), Flavor::NOperad(3)] {
        let r = check_operad_axioms(&terminal_operad(f, 3).unwrap(), 3).unwrap();
        ensure!(r.pass, "terminal {f}: {:?}", r.failures.first());
    }
    let e = endomorphism_symmetric_operad(2, 2).unwrap();
    let r = check_operad_axioms(&e, 2).unwrap();
    ensure!(r.pass, "End symmetric: {:?}", r.failures.first());
    let dt = desym_end(3);
    let r = check_operad_axioms(&dt, 3).unwrap();
    ensure!(r.pass, "desymmetrised End: {:?}", r.failures.first());
    let q = is_quasisymmetric(&dt, 3).unwrap();
    ensure!(q.holds, "desymmetrised End not quasisymmetric: {:?}", q.witness);
    let lc = is_locally_constant(&dt, &bijective, 3).unwrap();
    ensure!(lc.holds == q.holds, "locally constant disagrees with quasisymmetric");
    let g = graded_pair_operad().unwrap();
    let (gq, glc) = (is_quasisymmetric(&g, 2).unwrap(), is_locally_constant(&g, &bijective, 2).unwrap());
    ensure!(!gq.holds && gq.witness.is_some() && glc.holds == gq.holds, "graded pair not rejected");

    let mut bad = e.clone();
    let sigma = op_surjection(&[2, 1]).unwrap();
    let old = bad.table(&sigma).unwrap().get(0b0110, &[0b1000, 0b01]);
    bad.set_entry(&sigma, 0b0110, &[0b1000, 0b01], old ^ 1).unwrap();
    let r = check_operad_axioms(&bad, 2).unwrap();
    ensure!(!r.pass && r.failures.first().is_some_and(|f| f.expected != f.got), "corrupted End table not caught");
    let mut bad = dt.clone();
    let tau = bad.tables().keys().find(|m| m.source().arity() == 3 && m.target().arity() == 2).unwrap().clone();
    let old = bad.table(&tau).unwrap().get(5, &[3, 1]);
    bad.set_entry(&tau, 5, &[3, 1], old ^ 2).unwrap();
    let r = check_operad_axioms(&bad, 3).unwrap();
    ensure!(!r.pass && !r.failures.is_empty(), "corrupted desymmetrised table not caught");
    let mut bad = endomorphism_symmetric_operad(2, 1).unwrap();
    let y = bad.act(2, 1, 0b0010).unwrap();
    bad.set_action(2, 1, 0b0010, 0b0010).unwrap();
    bad.set_action(2, 1, y, y).unwrap();
    let r = check_operad_axioms(&bad, 1).unwrap();
    ensure!(!r.pass && !r.failures.is_empty(), "corrupted action not caught");
    Ok("terminal x6, End, desymmetrised End, 3 injected faults caught".into())
}

fn c10_braided_action() -> Check {
    let d = desymmetrise(EndOperad::new(2, 3).unwrap(), 2, 4).unwrap();
    let mut relations = 0;
    for k in 1..=4 {
        let b = braided_action_from_quasisymmetric(&d, k).map_err(|e| e.to_string())?;
        ensure!(b.generators.len() == k - 1, "k={k}: {} generators", b.generators.len());
        for r in &b.relations {
            ensure!(r.holds, "k={k}: relation fails: {r:?}");
            relations += 1;
        }
    }
    Ok(format!("{relations} relations hold on every carrier element"))
}

fn c11_extension() -> Check {
    let dt = desym_end(3);
    let ext = Extended::new(&dt, 3).map_err(|e| e.to_string())?;
    for (sigma, table) in dt.tables() {
        ensure!(&extend_multiplication(&dt, sigma).unwrap() == table, "{sigma}: extension differs from table");
        let ind = factorization_independence(&ext, sigma).unwrap();
        ensure!(ind.agree, "{sigma}: {:?}", ind.witness);
    }
    let r = check_operad_axioms(&ext, 3).unwrap();
    ensure!(r.pass, "extended structure: {:?}", r.failures.first());
    Ok(format!("{} morphisms independent, {} axiom instances", dt.tables().len(), r.instances))
}

fn c12_strata() -> Check {
    let spreads: [BigRational; 2] = [BigRational::from_integer(1.into()), "3/7".parse().unwrap()];
    let mut labels = 0;
    for n in 1..=3 {
        for k in 1..=4 {
            for label in all_labels(n, k).unwrap() {
                for spread in &spreads {
                    let c = sample_stratum(&label, spread).unwrap();
                    ensure!(classify_stratum(&c).unwrap() == label, "round trip fails for {label:?}");
                }
                labels += 1;
            }
        }
    }
    let r = verify_partition(2, 3, 10_000, 0).unwrap();
    ensure!(r.pass && r.universe == 24 && r.unique == 10_000, "partition: {:?}", r.witness);
    let mut covers = 0;
    for n in 1..=3 {
        for k in 1..=3 {
            let j = build_j(n, k, DEFAULT_SIZE_LIMIT).unwrap();
            for (x, y) in j.covers() {
                ensure!(degeneration_check(&j.elements[x], &j.elements[y], 16).unwrap(), "cover {x} > {y} not realized");
                ensure!(!degeneration_check(&j.elements[y], &j.elements[x], 16).unwrap(), "reverse of cover {x} > {y} realized");
                covers += 1;
            }
        }
    }
    Ok(format!("{labels} labels, 10000 samples unique over 24, {covers} covers"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("ordinal counts", c1_counts),
        ("configuration space homology", c2_homology),
        ("connectivity", c3_connectivity),
        ("braid functoriality", c4_functoriality),
        ("Artin certificates", c5_artin),
        ("factorization contract", c6_factorize),
        ("zig-zag splitting", c7_split),
        ("word problem", c8_word_problem),
        ("operad checks", c9_operads),
        ("braided action", c10_braided_action),
        ("extension", c11_extension),
        ("strata", c12_strata),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let t = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({t:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({t:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
