use proptest::prelude::*;
use qbench::maps::OrdinalMap;
use qbench::operad::*;

fn bijective(images: &[u32], size: usize) -> bool {
    let mut seen = vec![false; size];
    images.len() == size && images.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true))
}

fn desym_end(bound: usize) -> FiniteOperad {
    let d = desymmetrise(EndOperad::new(2, bound - 1).unwrap(), 2, bound).unwrap();
    FiniteOperad::tabulate(&d, bound).unwrap()
}

#[test]
fn terminal_every_flavor() {
    for f in [Flavor::Symmetric, Flavor::Braided, Flavor::Mixed2, Flavor::NOperad(1), Flavor::NOperad(2), Flavor::NOperad(3)] {
        let t = terminal_operad(f, 3).unwrap();
        let r = check_operad_axioms(&t, 3).unwrap();
        assert!(r.pass, "{f}: {:?}", r.failures.first());
        assert!(r.instances > 0);
    }
}

#[test]
fn end_all_action_flavors() {
    let e = endomorphism_symmetric_operad(2, 2).unwrap();
    assert!(check_operad_axioms(&e, 2).unwrap().pass);
    assert!(check_square_equivariance(&e, 2).unwrap().pass);
    for f in [Flavor::Braided, Flavor::Mixed2] {
        assert!(check_operad_axioms(&as_braided(&e, f).unwrap(), 2).unwrap().pass, "{f}");
    }
    let e3 = endomorphism_symmetric_operad(3, 0).unwrap();
    assert!(check_operad_axioms(&e3, 0).unwrap().pass);
}

#[test]
fn lazy_and_tabulated_agree() {
    let lazy = EndOperad::new(2, 2).unwrap();
    let a = check_operad_axioms(&lazy, 2).unwrap();
    let b = check_operad_axioms(&endomorphism_symmetric_operad(2, 2).unwrap(), 2).unwrap();
    assert_eq!(a, b);
}

#[test]
fn desymmetrised_end() {
    let dt = desym_end(3);
    let r = check_operad_axioms(&dt, 3).unwrap();
    assert!(r.pass, "{:?}", r.failures.first());
    let q = is_quasisymmetric(&dt, 3).unwrap();
    assert!(q.holds);
    let lc = is_locally_constant(&dt, &bijective, 3).unwrap();
    assert_eq!(lc.holds, q.holds);
    assert_eq!(lc.checked, q.checked);
}

#[test]
fn graded_pair_is_an_operad_but_not_quasisymmetric() {
    let g = graded_pair_operad().unwrap();
    assert!(check_operad_axioms(&g, 2).unwrap().pass);
    let q = is_quasisymmetric(&g, 2).unwrap();
    assert!(!q.holds);
    assert!(q.witness.is_some());
    assert_eq!(is_locally_constant(&g, &bijective, 2).unwrap().holds, q.holds);
    assert_eq!(Extended::new(&g, 2).err().map(|e| e.code()), Some("NOT_QUASISYMMETRIC"));
}

#[test]
fn corrupted_table_is_caught() {
    let mut e = endomorphism_symmetric_operad(2, 2).unwrap();
    let sigma = op_surjection(&[2, 1]).unwrap();
    let (a, b) = (0b0110u32, [0b1000u32, 0b01]);
    let old = e.table(&sigma).unwrap().get(a, &b);
    e.set_entry(&sigma, a, &b, old ^ 1).unwrap();
    let r = check_operad_axioms(&e, 2).unwrap();
    assert!(!r.pass);
    assert!(r.axioms_failed().contains(&"associativity"));
    let f = &r.failures[0];
    assert_ne!(f.expected, f.got);
    assert!(!f.morphisms.is_empty());
    assert!(!check_square_equivariance(&e, 2).unwrap().pass);
}

#[test]
fn corrupted_desymmetrised_table_is_caught() {
    let mut dt = desym_end(3);
    let sigma = dt.tables().keys().find(|m| m.source().arity() == 3 && m.target().arity() == 2).unwrap().clone();
    let old = dt.table(&sigma).unwrap().get(5, &[3, 1]);
    dt.set_entry(&sigma, 5, &[3, 1], old ^ 2).unwrap();
    let r = check_operad_axioms(&dt, 3).unwrap();
    assert!(!r.pass);
    assert!(r.failure_count > 0);
}

#[test]
fn corrupted_action_is_caught() {
    let mut e = endomorphism_symmetric_operad(2, 1).unwrap();
    let x = 0b0010;
    let y = e.act(2, 1, x).unwrap();
    e.set_action(2, 1, x, x).unwrap();
    e.set_action(2, 1, y, y).unwrap();
    let r = check_operad_axioms(&e, 1).unwrap();
    assert!(!r.pass);
    assert!(!check_square_equivariance(&e, 1).unwrap().pass);
}

#[test]
fn extension_reproduces_tables() {
    let dt = desym_end(3);
    let ext = Extended::new(&dt, 3).unwrap();
    for (sigma, table) in dt.tables() {
        assert_eq!(&extend_multiplication(&dt, sigma).unwrap(), table, "{sigma}");
        let ind = factorization_independence(&ext, sigma).unwrap();
        assert!(ind.agree, "{sigma}: {:?}", ind.witness);
        assert!(!ind.factorizations.is_empty());
    }
    let r = check_operad_axioms(&ext, 3).unwrap();
    assert!(r.pass);
}

#[test]
fn several_factorizations_exist() {
    let dt = desym_end(3);
    let ext = Extended::new(&dt, 3).unwrap();
    let most = dt.tables().keys().map(|s| factorization_independence(&ext, s).unwrap().factorizations.len()).max();
    assert!(most.unwrap() > 1);
}

#[test]
fn braided_action_on_desymmetrised_end() {
    let lazy = EndOperad::new(2, 3).unwrap();
    let d = desymmetrise(&lazy, 2, 4).unwrap();
    for k in 1..=4 {
        let b = braided_action_from_quasisymmetric(&d, k).unwrap();
        assert_eq!(b.generators.len(), k.saturating_sub(1));
        assert!(b.relations.iter().all(|r| r.holds));
        for (i, g) in b.generators.iter().enumerate() {
            for (x, &y) in g.iter().enumerate() {
                assert_eq!(y, lazy.act(k, i as i32 + 1, x as u32).unwrap());
            }
        }
    }
}

#[test]
fn bundles_round_trip_and_validate() {
    for op in [desym_end(3), endomorphism_symmetric_operad(2, 2).unwrap(), graded_pair_operad().unwrap()] {
        let b = to_bundle(&op);
        assert_eq!(from_bundle(&b).unwrap(), op);
    }
    let mut b = to_bundle(&endomorphism_symmetric_operad(2, 1).unwrap());
    b["mult"]["1+1"][0][0][0] = 99.into();
    assert_eq!(from_bundle(&b).unwrap_err().code(), "OUT_OF_RANGE");
}

/// Truth-table composition written directly: input `x` of the composite
/// feeds fiber `i` the coordinates of `x` at the positions mapping to `i`.
fn compose_by_hand(sigma: &OrdinalMap, a: u32, b: &[u32]) -> u32 {
    let n = sigma.source().arity();
    let k = sigma.target().arity();
    let mut out = 0;
    for x in 0..(1u32 << n) {
        let bit = |j: usize| (x >> j) & 1;
        let mut outer = 0;
        for i in 0..k {
            let pos: Vec<usize> = (0..n).filter(|&j| sigma.table()[j] == i).collect();
            let inner: u32 = pos.iter().enumerate().map(|(t, &j)| bit(j) << t).sum();
            outer |= ((b[i] >> inner) & 1) << i;
        }
        out |= ((a >> outer) & 1) << x;
    }
    out
}

proptest! {
    #[test]
    fn end_mult_matches_hand_composition(sizes in prop::collection::vec(1..3usize, 1..4), seed in any::<u64>()) {
        prop_assume!(sizes.iter().sum::<usize>() <= 4);
        let e = EndOperad::new(2, 3).unwrap();
        let sigma = op_surjection(&sizes).unwrap();
        let a = (seed as u32) & ((1u32 << (1 << sizes.len())) - 1);
        let b: Vec<u32> = sizes.iter().enumerate().map(|(i, &m)| ((seed >> (16 + 8 * i)) as u32) & ((1u32 << (1 << m)) - 1)).collect();
        prop_assert_eq!(e.mult(&sigma, a, &b).unwrap(), compose_by_hand(&sigma, a, &b));
    }

    #[test]
    fn swaps_are_involutions(x in 0u32..256, g in 1i32..3) {
        let e = EndOperad::new(2, 2).unwrap();
        prop_assert_eq!(e.act(3, g, e.act(3, g, x).unwrap()).unwrap(), x);
    }
}
