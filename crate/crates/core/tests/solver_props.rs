use approx::assert_relative_eq;
use latticeperfect_core::coloring::{ColoringMatrix, MergerMap};
use latticeperfect_core::linalg::DenseMatrix;
use latticeperfect_core::solver::{
    jacobian, lift_via_merger, max_norm, residual, solve_all, stability, value_partition,
    Nonlinearity, SolverConfig, Verdict,
};
use proptest::prelude::*;

fn four() -> ColoringMatrix {
    ColoringMatrix::from_array(4, [[0, 2, 2, 0], [2, 0, 0, 2], [2, 0, 0, 2], [0, 2, 2, 0]])
}

fn matrix_with_row_sum(n: usize, k: u32) -> impl Strategy<Value = ColoringMatrix> {
    proptest::collection::vec(proptest::collection::vec(0u32..=k, n - 1), n).prop_map(move |rows| {
        let rows: Vec<Vec<u32>> = rows
            .into_iter()
            .map(|mut cuts| {
                cuts.push(0);
                cuts.push(k);
                cuts.sort_unstable();
                cuts.windows(2).map(|w| w[1] - w[0]).collect()
            })
            .collect();
        ColoringMatrix::new(k as usize, &rows).unwrap()
    })
}

/// Sorted eigenvalues from nalgebra's Schur decomposition.
fn oracle_eigs(a: &DenseMatrix) -> Vec<(f64, f64)> {
    let n = a.dim();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| a[(i, j)]);
    let mut e: Vec<(f64, f64)> = m
        .complex_eigenvalues()
        .iter()
        .map(|c| (c.re, c.im))
        .collect();
    e.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobian_matches_central_differences(
        m in (1usize..5).prop_flat_map(|n| matrix_with_row_sum(n, 4)),
        a in 0.1f64..0.9,
        d in 0.001f64..2.0,
        seed in proptest::collection::vec(-1.0f64..2.0, 4),
    ) {
        let f = Nonlinearity::nagumo(a).unwrap();
        let v: Vec<f64> = seed[..m.n()].to_vec();
        let j = jacobian(&m, d, &f, &v).unwrap();
        let h = 1e-6;
        for col in 0..m.n() {
            let mut vp = v.clone();
            let mut vm = v.clone();
            vp[col] += h;
            vm[col] -= h;
            let rp = residual(&m, d, &f, &vp).unwrap();
            let rm = residual(&m, d, &f, &vm).unwrap();
            for row in 0..m.n() {
                let fd = (rp[row] - rm[row]) / (2.0 * h);
                let exact = j[(row, col)];
                prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0), "{fd} vs {exact}");
            }
        }
    }

    #[test]
    fn eigenvalues_match_nalgebra(entries in proptest::collection::vec(-3.0f64..3.0, 1..50)) {
        let n = (entries.len() as f64).sqrt() as usize;
        let a = DenseMatrix::from_fn(n, |i, j| entries[i * n + j]);
        let mut ours = a.eigenvalues().unwrap();
        ours.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let theirs = oracle_eigs(&a);
        prop_assert_eq!(ours.len(), theirs.len());
        // compare as multisets by greedy nearest matching
        let mut used = vec![false; n];
        for (re, im) in &ours {
            let best = theirs
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .min_by(|(_, x), (_, y)| {
                    let dx = (x.0 - re).hypot(x.1 - im);
                    let dy = (y.0 - re).hypot(y.1 - im);
                    dx.total_cmp(&dy)
                })
                .unwrap();
            used[best.0] = true;
            prop_assert!((best.1 .0 - re).hypot(best.1 .1 - im) < 1e-6, "{ours:?} vs {theirs:?}");
        }
    }

    #[test]
    fn homogeneous_roots_are_exact(m in (1usize..5).prop_flat_map(|n| matrix_with_row_sum(n, 6)), a in 0.05f64..0.95, d in 0.0f64..3.0) {
        let f = Nonlinearity::nagumo(a).unwrap();
        for r in f.real_roots() {
            let v = vec![r; m.n()];
            prop_assert!(max_norm(&residual(&m, d, &f, &v).unwrap()) <= 1e-14);
        }
    }

    #[test]
    fn count_invariant_under_permutation(perm_seed in 0usize..24, d in prop_oneof![Just(0.005), Just(0.05), Just(0.2)]) {
        let mut perm: Vec<usize> = (0..4).collect();
        let mut s = perm_seed;
        for i in (1..4).rev() {
            perm.swap(i, s % (i + 1));
            s /= i + 1;
        }
        let f = Nonlinearity::nagumo(0.4).unwrap();
        let mut cfg = SolverConfig::new(d);
        cfg.random_seeds = 16;
        let base = solve_all(&four(), &f, &cfg).unwrap().len();
        cfg.rng_seed = 7;
        let permuted = solve_all(&four().permuted(&perm), &f, &cfg).unwrap().len();
        prop_assert_eq!(base, permuted);
    }
}

#[test]
fn eigenvalues_of_stability_matrix_agree_with_oracle() {
    let f = Nonlinearity::nagumo(0.4).unwrap();
    let set = solve_all(&four(), &f, &SolverConfig::new(0.005)).unwrap();
    for rec in &set.records {
        let j = jacobian(&four(), 0.005, &f, &rec.v).unwrap();
        let abscissa = oracle_eigs(&j)
            .iter()
            .map(|e| e.0)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_relative_eq!(abscissa, rec.spectral_abscissa, epsilon = 1e-9);
    }
}

#[test]
fn four_color_breakdown_by_value_partition() {
    let f = Nonlinearity::nagumo(0.4).unwrap();
    let set = solve_all(&four(), &f, &SolverConfig::new(0.005)).unwrap();
    assert_eq!(set.len(), 81);
    let mut homogeneous = 0;
    let mut checker = 0;
    let mut stripes = 0;
    let mut three = 0;
    let mut distinct = 0;
    for rec in &set.records {
        let p = value_partition(&rec.v, 1e-8);
        let classes = p.iter().max().unwrap() + 1;
        match classes {
            1 => homogeneous += 1,
            2 if p == [0, 1, 1, 0] => checker += 1,
            2 => stripes += 1,
            3 => three += 1,
            _ => distinct += 1,
        }
    }
    assert_eq!(
        (homogeneous, checker, stripes, three, distinct),
        (3, 6, 12, 36, 24)
    );
}

#[test]
fn merged_solutions_keep_their_verdicts() {
    let f = Nonlinearity::nagumo(0.4).unwrap();
    let d = 0.005;
    let coarse = ColoringMatrix::from_array(4, [[0, 2, 2], [4, 0, 0], [4, 0, 0]]);
    let phi = MergerMap::new(vec![0, 1, 2, 0]).unwrap();
    let set = solve_all(&coarse, &f, &SolverConfig::new(d)).unwrap();
    assert_eq!(set.len(), 27);
    let mut compared = 0;
    for rec in &set.records {
        let fine = lift_via_merger(&rec.v, &phi).unwrap();
        let fine_rec = stability(&four(), d, &f, &fine, 1e-9).unwrap();
        assert!(fine_rec.residual_norm <= 1e-12);
        if rec.verdict != Verdict::Marginal && fine_rec.verdict != Verdict::Marginal {
            compared += 1;
            // coarse instability lifts; coarse stability may be lost in the finer system
            if rec.verdict == Verdict::Unstable {
                assert_eq!(fine_rec.verdict, Verdict::Unstable);
            }
        }
    }
    assert!(compared > 0);
}

#[test]
fn polynomial_without_roots_uses_random_seeds_only() {
    let f = Nonlinearity::polynomial(vec![1.0, 0.0, 1.0]).unwrap();
    let set = solve_all(
        &ColoringMatrix::from_array(2, [[0, 2], [2, 0]]),
        &f,
        &SolverConfig::new(0.1),
    )
    .unwrap();
    assert_eq!(set.structured_seeds, 0);
    assert!(set.is_empty());
}
