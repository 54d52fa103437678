mod common;

use std::time::Instant;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use symmetria::pairing::{
    brute_force_assignment, build_affinity, default_pair_count, solve_assignment, AffinityMatrix,
};
use symmetria::signatures::FeatureSet;
use symmetria::SymmetryError;

fn symmetric(d: usize, q: f64, entries: &[f64]) -> AffinityMatrix {
    let mut w = DMatrix::from_element(d, d, q);
    let mut it = entries.iter();
    for a in 0..d {
        for b in a + 1..d {
            let v = *it.next().unwrap();
            w[(a, b)] = v;
            w[(b, a)] = v;
        }
    }
    AffinityMatrix::from_matrix(w, q).unwrap()
}

fn features(hks_rows: Vec<Vec<f64>>, signs: Vec<Vec<i8>>) -> FeatureSet {
    let d = hks_rows.len();
    let h = hks_rows[0].len();
    FeatureSet {
        indices: (0..d).collect(),
        energies: vec![1.0; d],
        hks: DMatrix::from_fn(h, d, |s, j| hks_rows[j][s]),
        signs,
        t_h: 1.0,
        time_samples: vec![1.0; h],
    }
}

/// Minimum over all sets of `c` disjoint pairs, enumerated independently of the library.
fn enumerate_min(w: &DMatrix<f64>, c: usize) -> f64 {
    fn go(w: &DMatrix<f64>, used: &mut Vec<bool>, start: usize, left: usize) -> f64 {
        if left == 0 {
            return 0.0;
        }
        let d = w.nrows();
        let mut best = f64::INFINITY;
        for a in start..d {
            if used[a] {
                continue;
            }
            used[a] = true;
            for b in a + 1..d {
                if used[b] {
                    continue;
                }
                used[b] = true;
                best = best.min(2.0 * w[(a, b)] + go(w, used, a + 1, left - 1));
                used[b] = false;
            }
            used[a] = false;
        }
        best
    }
    go(w, &mut vec![false; w.nrows()], 0, c)
}

#[test]
fn affinity_examples() {
    let f = features(vec![vec![0.5, 0.2], vec![0.5, 0.2]], vec![vec![1, -1], vec![1, 1]]);
    let w = build_affinity(&f, 100.0);
    assert_eq!(w.w[(0, 1)], 0.0);
    assert_eq!(w.w[(0, 0)], 100.0);
    assert_eq!(w.w[(1, 1)], 100.0);
    let f = features(vec![vec![0.0, 0.0], vec![0.3, 0.0]], vec![vec![1, -1], vec![1, -1]]);
    assert!((build_affinity(&f, 100.0).w[(0, 1)] - 100.3).abs() < 1e-12);
}

#[test]
fn spec_style_instances() {
    let aff = symmetric(4, 50.0, &[1.0, 10.0, 12.0, 11.0, 13.0, 1.0]);
    let p = solve_assignment(&aff, 2).unwrap();
    assert_eq!(p.pairs, vec![(0, 1), (2, 3)]);
    assert_eq!(p.total_cost, 4.0);
    let tiny = symmetric(2, 1.0, &[0.5]);
    assert!(matches!(solve_assignment(&tiny, 2), Err(SymmetryError::Infeasible { .. })));
    assert!(matches!(brute_force_assignment(&tiny, 2), Err(SymmetryError::Infeasible { .. })));

    let mut rng = common::rng(8);
    let entries: Vec<f64> = (0..28).map(|_| rng.gen_range(0.0..10.0)).collect();
    let aff = symmetric(8, 100.0, &entries);
    let exact = solve_assignment(&aff, 3).unwrap();
    assert!((exact.total_cost - enumerate_min(&aff.w, 3)).abs() < 1e-12);
    assert_eq!(exact, brute_force_assignment(&aff, 3).unwrap());
}

#[test]
fn pi_matrix_is_a_symmetric_partial_matching() {
    let mut rng = common::rng(11);
    let entries: Vec<f64> = (0..45).map(|_| rng.gen_range(0.0..1.0)).collect();
    let aff = symmetric(10, 5.0, &entries);
    let p = solve_assignment(&aff, 4).unwrap();
    let pi = p.pi_matrix(10);
    assert_eq!(pi, pi.transpose());
    assert_eq!(pi.iter().map(|&x| x as usize).sum::<usize>(), 8);
    assert!((0..10).all(|i| pi[(i, i)] == 0 && pi.row(i).iter().map(|&x| x as usize).sum::<usize>() <= 1));
}

#[test]
fn penalty_dominance_avoids_equal_sign_vectors() {
    let mut rng = common::rng(12);
    for _ in 0..50 {
        let d = 2 * rng.gen_range(2..=6);
        let hks: Vec<Vec<f64>> = (0..d).map(|_| (0..5).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
        // half of the features carry one sign pattern, half the other
        let signs: Vec<Vec<i8>> = (0..d).map(|j| vec![1, if j % 2 == 0 { 1 } else { -1 }]).collect();
        let f = features(hks, signs);
        let c = default_pair_count(d, 8);
        let mut dists: Vec<f64> = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                dists.push(f.hks_distance(a, b));
            }
        }
        dists.sort_by(|a, b| b.total_cmp(a));
        let q = 1.01 * dists.iter().take(c).sum::<f64>();
        let p = solve_assignment(&build_affinity(&f, q), c).unwrap();
        assert!(p.pairs.iter().all(|&(a, b)| f.signs[a] != f.signs[b]));
    }
}

#[test]
fn largest_instances_are_fast() {
    let mut rng = common::rng(13);
    for _ in 0..5 {
        let entries: Vec<f64> = (0..300).map(|_| rng.gen_range(0.0..1.0) + if rng.gen_bool(0.5) { 3.0 } else { 0.0 }).collect();
        let aff = symmetric(25, 3.0, &entries);
        let start = Instant::now();
        let p = solve_assignment(&aff, 8).unwrap();
        assert!(start.elapsed().as_secs_f64() < 1.0);
        assert_eq!(p.pairs.len(), 8);
    }
}

fn instance() -> impl Strategy<Value = (usize, usize, Vec<f64>, f64)> {
    (2usize..=10).prop_flat_map(|d| {
        (
            Just(d),
            1..=d / 2,
            prop::collection::vec(0.0f64..10.0, d * (d - 1) / 2),
            0.5f64..50.0,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn branch_and_bound_matches_brute_force((d, c, entries, q) in instance()) {
        let aff = symmetric(d, q, &entries);
        let exact = solve_assignment(&aff, c).unwrap();
        let brute = brute_force_assignment(&aff, c).unwrap();
        prop_assert!((exact.total_cost - brute.total_cost).abs() <= 1e-9 * brute.total_cost.max(1.0));
        prop_assert!((exact.total_cost - enumerate_min(&aff.w, c)).abs() <= 1e-9 * brute.total_cost.max(1.0));
        prop_assert_eq!(exact.pairs.len(), c);
    }

    #[test]
    fn constant_shift_keeps_the_argmin(
        (d, c, entries, _q) in instance(),
        shift in 0u32..20,
    ) {
        // integer weights keep the shifted costs exact
        let ints: Vec<f64> = entries.iter().map(|v| v.floor()).collect();
        let shifted: Vec<f64> = ints.iter().map(|v| v + shift as f64).collect();
        let a = solve_assignment(&symmetric(d, 100.0, &ints), c).unwrap();
        let b = solve_assignment(&symmetric(d, 100.0, &shifted), c).unwrap();
        prop_assert_eq!(&a.pairs, &b.pairs);
        prop_assert_eq!(b.total_cost - a.total_cost, 2.0 * c as f64 * shift as f64);
    }
}
