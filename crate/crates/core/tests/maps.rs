mod common;

use common::{is_morphism, ord};
use proptest::prelude::*;
use qbench::maps::*;
use qbench::ordinal::{enumerate_ordinals, ordinal_sum_all, NOrdinal, DEFAULT_ENUMERATION_LIMIT};

fn ordinals_up_to(n: u32, max_k: usize) -> Vec<NOrdinal> {
    (1..=max_k).flat_map(|k| enumerate_ordinals(n, k, DEFAULT_ENUMERATION_LIMIT).unwrap()).collect()
}

fn all_maps(n: u32, max_k: usize) -> Vec<OrdinalMap> {
    let obs = ordinals_up_to(n, max_k);
    let mut out = Vec::new();
    for t in &obs {
        for s in &obs {
            out.extend(enumerate_maps(t, s, MapFilter::All, DEFAULT_MAP_SEARCH_LIMIT).unwrap());
        }
    }
    out
}

#[test]
fn enumeration_matches_definition() {
    for n in 1..=3 {
        let obs = ordinals_up_to(n, 3);
        for t in &obs {
            for s in &obs {
                let found: Vec<Vec<usize>> = enumerate_maps(t, s, MapFilter::All, DEFAULT_MAP_SEARCH_LIMIT)
                    .unwrap()
                    .iter()
                    .map(|m| m.table().to_vec())
                    .collect();
                let mut expected = Vec::new();
                let (kt, ks) = (t.arity(), s.arity());
                for code in 0..ks.pow(kt as u32) {
                    let f: Vec<usize> = (0..kt).map(|i| code / ks.pow(i as u32) % ks).collect();
                    if is_morphism(t.levels(), s.levels(), &f) {
                        expected.push(f);
                    }
                }
                expected.sort();
                let mut got = found.clone();
                got.sort();
                assert_eq!(got, expected, "{t} -> {s}");
                for f in found {
                    assert!(check_table(t, s, &f).is_ok());
                }
            }
        }
    }
}

#[test]
fn factorization_contract_exhaustive() {
    for n in 1..=3 {
        for sigma in all_maps(n, 4) {
            let fz = factorize(&sigma).unwrap();
            assert_eq!(compose(&fz.pi, &fz.nu).unwrap(), sigma);
            assert!(classify_map(&fz.pi).is_quasibijection);
            assert!(classify_map(&fz.nu).is_order_preserving);
            assert!(preserves_fiber_order(&fz.pi, &fz.nu));
            if n == 1 {
                assert!(fz.pi.table().iter().enumerate().all(|(i, &x)| i == x));
            }
        }
    }
}

#[test]
fn singleton_fibers_give_target() {
    for sigma in all_maps(2, 3).into_iter().filter(|m| m.is_quasibijection()) {
        let fz = factorize(&sigma).unwrap();
        assert_eq!(&fz.middle, sigma.target());
        assert_eq!(fz.nu, OrdinalMap::identity(sigma.target()));
        assert_eq!(fz.pi, sigma);
    }
}

#[test]
fn composite_fiber_sizes() {
    let maps = all_maps(2, 3);
    for sigma in &maps {
        for omega in maps.iter().filter(|w| w.source() == sigma.target()) {
            let c = compose(sigma, omega).unwrap();
            for i in 0..omega.target().arity() {
                let over: usize = fiber(omega, i).unwrap().positions.iter().map(|&j| sigma.fiber_sizes()[j]).sum();
                assert_eq!(c.fiber_sizes()[i], over);
            }
        }
    }
}

#[test]
fn block_parts_sum_back() {
    for sigma in all_maps(2, 4) {
        let Ok(parts) = block_decompose_map(&sigma) else { continue };
        let total = parts.iter().skip(1).fold(parts[0].clone(), |acc, p| map_sum(&acc, p).unwrap());
        assert_eq!(total, sigma);
    }
}

#[test]
fn fiber_example() {
    let sigma = make_map(&ord(2, &[1, 0]), &ord(2, &[0]), vec![0, 0, 1]).unwrap();
    assert_eq!(fiber(&sigma, 0).unwrap().ordinal, ord(2, &[1]));
}

proptest! {
    #[test]
    fn random_tables_validate_like_the_definition(
        t in prop::collection::vec(0..3i32, 0..5),
        s in prop::collection::vec(0..3i32, 0..4),
        seed in any::<u64>(),
    ) {
        let (tt, ss) = (ord(3, &t), ord(3, &s));
        let f: Vec<usize> = (0..tt.arity()).map(|i| ((seed >> (4 * i)) as usize) % ss.arity()).collect();
        prop_assert_eq!(check_table(&tt, &ss, &f).is_ok(), is_morphism(&t, &s, &f));
    }

    #[test]
    fn sums_of_blocks(parts in prop::collection::vec(prop::collection::vec(1..2i32, 0..3), 1..4)) {
        let blocks: Vec<NOrdinal> = parts.iter().map(|l| ord(2, l)).collect();
        let whole = ordinal_sum_all(blocks[0].domain(), &blocks).unwrap();
        prop_assert_eq!(block_decompose(&whole), blocks);
    }
}
