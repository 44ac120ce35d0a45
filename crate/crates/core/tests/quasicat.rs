mod common;

use common::{betti_mod_p, predicted_mod_p, trim};
use qbench::quasicat::*;
use qbench::quasicat::category::DEFAULT_SIZE_LIMIT;

const SIMPLICES: usize = 5_000_000;

fn check(cx: &SimplicialComplexData, expected: &[(usize, &[u64])]) {
    cx.check_boundary_squared().unwrap();
    let h = homology(cx, None).unwrap();
    let want = HomologyResult { groups: expected.iter().map(|&(r, t)| HomologyGroup::with_torsion(r, t)).collect() };
    let got_trimmed: Vec<_> = h.groups.iter().take(expected.len()).cloned().collect();
    assert_eq!(got_trimmed, want.groups);
    assert!(h.groups[expected.len()..].iter().all(|g| g.rank == 0 && g.torsion.is_empty()));
    assert_eq!(h.euler_characteristic(), cx.euler_characteristic());
    for p in [2, 3, 1_000_003] {
        let deg = cx.counts().len();
        assert_eq!(trim(betti_mod_p(cx, p)), trim(predicted_mod_p(&h, p, deg)), "p={p}");
    }
}

#[test]
fn configuration_space_table() {
    let q22 = nerve(&build_q(2, 2, DEFAULT_SIZE_LIMIT).unwrap(), None, SIMPLICES).unwrap();
    check(&q22, &[(1, &[]), (1, &[])]);
    let q32 = nerve(&build_q(3, 2, DEFAULT_SIZE_LIMIT).unwrap(), None, SIMPLICES).unwrap();
    check(&q32, &[(1, &[]), (0, &[2]), (0, &[])]);
    let j32 = order_complex(&build_j(3, 2, DEFAULT_SIZE_LIMIT).unwrap(), None, SIMPLICES).unwrap();
    check(&j32, &[(1, &[]), (0, &[]), (1, &[])]);
    let j23 = order_complex(&build_j(2, 3, DEFAULT_SIZE_LIMIT).unwrap(), None, SIMPLICES).unwrap();
    check(&j23, &[(1, &[]), (3, &[]), (2, &[])]);
    let q23 = nerve(&build_q(2, 3, DEFAULT_SIZE_LIMIT).unwrap(), None, SIMPLICES).unwrap();
    check(&q23, &[(1, &[]), (1, &[]), (0, &[])]);
}

#[test]
fn q22_by_hand() {
    let q = build_q(2, 2, DEFAULT_SIZE_LIMIT).unwrap();
    assert_eq!(q.objects.len(), 2);
    let non_id = q.morphisms.iter().enumerate().filter(|(i, _)| !q.is_identity(*i)).count();
    assert_eq!(non_id, 2);
    let cx = nerve(&q, None, SIMPLICES).unwrap();
    // two vertices, two parallel edges, nothing composable
    assert_eq!(trim(cx.counts()), vec![2, 2]);
}

#[test]
fn structural_invariants() {
    for n in 1..=3 {
        for k in 1..=4 {
            let q = build_q(n, k, DEFAULT_SIZE_LIMIT).unwrap();
            assert_strict(&q).unwrap();
            assert_eq!(connected_components(&q), 1, "n={n} k={k}");
            let low = nerve(&q, Some(1), SIMPLICES).unwrap();
            assert_eq!(homology(&low, Some(0)).unwrap().groups[0], HomologyGroup::free(1), "n={n} k={k}");
            if n * k as u32 <= 8 {
                let cx = nerve(&q, None, SIMPLICES).unwrap();
                cx.check_boundary_squared().unwrap();
                let h = homology(&cx, None).unwrap();
                assert_eq!(h.euler_characteristic(), cx.euler_characteristic());
            }
            if k <= 3 {
                let j = build_j(n, k, DEFAULT_SIZE_LIMIT).unwrap();
                find_isomorphism(&quotient_j(&j).unwrap(), &q).unwrap();
            }
        }
    }
}

#[test]
fn poset_size_and_orientation() {
    let j = build_j(2, 2, DEFAULT_SIZE_LIMIT).unwrap();
    assert_eq!(j.elements.len(), 4);
    // the two vertical strata sit below both horizontal ones
    for x in 0..4 {
        let level = j.elements[x].ordinal.levels()[0];
        assert_eq!(j.below[x].len(), if level == 0 { 2 } else { 0 });
    }
}

#[test]
fn dot_mentions_every_object() {
    let q = build_q(2, 3, DEFAULT_SIZE_LIMIT).unwrap();
    let dot = category_to_dot(&q);
    assert!(dot.starts_with("digraph"));
    for o in &q.objects {
        assert!(dot.contains(&format!("{:?}", o.levels())), "{o}");
    }
}
