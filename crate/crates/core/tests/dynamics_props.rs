use std::sync::Arc;

use latticeperfect_core::coloring::{refine_field, ColoringMatrix, ValueField};
use latticeperfect_core::dynamics::{
    integrate, perturb_relax, stationary_residual, tree_counterexample, tree_spine_for_islands,
    RelaxOptions, RelaxVerdict,
};
use latticeperfect_core::generators::{motif_tiling, Motif};
use latticeperfect_core::lattice::{GridKind, Patch};
use latticeperfect_core::solver::{lift_solution, solve_all, Nonlinearity, SolverConfig, Verdict};
use proptest::prelude::*;

fn four() -> ColoringMatrix {
    ColoringMatrix::from_array(4, [[0, 2, 2, 0], [2, 0, 0, 2], [2, 0, 0, 2], [0, 2, 2, 0]])
}

fn four_color_layout(size: usize) -> latticeperfect_core::Coloring {
    motif_tiling(
        GridKind::Square,
        &Motif::new(2, 2, vec![0, 1, 2, 3]).unwrap(),
        size,
        size,
    )
    .unwrap()
}

#[test]
fn lifted_solutions_are_stationary_on_the_lattice() {
    let f = Nonlinearity::nagumo(0.4).unwrap();
    let d = 0.005;
    let set = solve_all(&four(), &f, &SolverConfig::new(d)).unwrap();
    let layout = four_color_layout(8);
    for rec in &set.records {
        let field = lift_solution(&layout, &four(), &rec.v).unwrap();
        assert!(stationary_residual(&field, d, &f) <= 1e-10);
    }
}

#[test]
fn stationary_lift_does_not_drift() {
    let f = Nonlinearity::nagumo(0.4).unwrap();
    let d = 0.005;
    let set = solve_all(&four(), &f, &SolverConfig::new(d)).unwrap();
    let field = lift_solution(&four_color_layout(4), &four(), &set.records[40].v).unwrap();
    let stats = integrate(&field, d, &f, 50.0, 0.05).unwrap();
    assert!(stats.max_drift <= 1e-6, "{}", stats.max_drift);
}

/// Halving the step divides the error of a non-stationary run by about 16.
#[test]
fn runge_kutta_is_fourth_order() {
    let f = Nonlinearity::nagumo(0.3).unwrap();
    let p = Arc::new(Patch::torus(GridKind::Triangular, 4, 4).unwrap());
    let values: Vec<f64> = (0..p.len())
        .map(|v| ((v * 37) % 11) as f64 / 10.0)
        .collect();
    let field = ValueField::new(p, values).unwrap();
    let run = |dt: f64| {
        integrate(&field, 0.2, &f, 2.0, dt)
            .unwrap()
            .final_field
            .into_values()
    };
    let reference = run(0.0025);
    let err = |dt: f64| {
        run(dt)
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let (e1, e2, e3) = (err(0.08), err(0.04), err(0.02));
    let (r1, r2) = (e1 / e2, e2 / e3);
    assert!(r1 > 16.0 / 4.0 && r1 < 16.0 * 4.0, "ratio {r1}");
    assert!(r2 > 16.0 / 4.0 && r2 < 16.0 * 4.0, "ratio {r2}");
}

#[test]
fn relax_verdicts_follow_eigenvalues() {
    let f = Nonlinearity::nagumo(0.4).unwrap();
    let d = 0.005;
    let set = solve_all(&four(), &f, &SolverConfig::new(d)).unwrap();
    let layout = four_color_layout(4);
    let mut checked = 0;
    for rec in set.records.iter().step_by(7) {
        let field = lift_solution(&layout, &four(), &rec.v).unwrap();
        let out = perturb_relax(&field, d, &f, RelaxOptions::default()).unwrap();
        let expected = match rec.verdict {
            Verdict::Stable => RelaxVerdict::Returned,
            Verdict::Unstable => RelaxVerdict::Escaped,
            Verdict::Marginal => continue,
        };
        assert_eq!(out.verdict, expected, "v = {:?}", rec.v);
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn tree_islands_force_more_classes() {
    let mut counts = Vec::new();
    for islands in [4, 5, 6] {
        let ex = tree_counterexample(0.0, 1.0, tree_spine_for_islands(islands), 10).unwrap();
        assert!(stationary_residual(&ex.field, 1.0, &ex.f) <= 1e-12);
        let r = refine_field(&ex.field, 1e-8);
        assert!(r.stabilized);
        counts.push(r.interior_class_count);
    }
    assert!(counts[0] < counts[1] && counts[1] < counts[2], "{counts:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nagumo_keeps_unit_interval(
        values in proptest::collection::vec(0.0f64..=1.0, 16),
        a in 0.1f64..0.9,
        d in 0.0f64..1.0,
    ) {
        let f = Nonlinearity::nagumo(a).unwrap();
        let p = Arc::new(Patch::torus(GridKind::Square, 4, 4).unwrap());
        let field = ValueField::new(p, values).unwrap();
        let stats = integrate(&field, d, &f, 5.0, 0.1).unwrap();
        prop_assert!(stats.min_value >= -1e-12 && stats.max_value <= 1.0 + 1e-12);
    }
}
