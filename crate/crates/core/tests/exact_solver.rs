mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rabi_spectrum::exact::{
    exact_levels, relative_residual, symmetric_eigenpairs, symmetric_eigenvalues,
    tridiagonal_eigenvalues,
};
use rabi_spectrum::model::{build_hamiltonian, Truncation};
use rabi_spectrum::{ConvergencePolicy, ModelParams, OperatorMatrix};

use common::characteristic_roots;

fn params(omega0: f64, omega: f64, lambda: f64) -> ModelParams {
    ModelParams::new(omega0, omega, lambda).unwrap()
}

#[test]
fn bare_corner_matches_characteristic_roots() {
    let h = build_hamiltonian(&params(1.0, 1.0, 0.1), Truncation::new(2).unwrap()).unwrap();
    let roots = characteristic_roots(h.as_matrix(), -2.0, 2.0, 4000);
    assert_eq!(roots.len(), 4);
    let values = symmetric_eigenvalues(&h, 4).unwrap();
    for (v, r) in values.iter().zip(&roots) {
        assert!((v - r).abs() < 1e-12, "{v} vs {r}");
    }
    // Frozen from the characteristic polynomial.
    let frozen = [-0.504_987_562_112_089, 0.4, 0.6, 1.504_987_562_112_089];
    for (v, f) in values.iter().zip(frozen) {
        assert!((v - f).abs() < 1e-12);
    }
}

#[test]
fn resonant_levels_are_stable_under_doubling() {
    // Values recorded at nmax = 400 and 800, identical to 16 digits.
    let (levels, report) =
        exact_levels(&params(1.0, 1.0, 0.6), 2, &ConvergencePolicy::default()).unwrap();
    assert!(report.converged);
    assert!((levels[0].energy + 0.6976152906570706).abs() < 1e-10);
    assert!((levels[1].energy + 0.2739104587310732).abs() < 1e-10);
}

#[test]
fn report_lists_truncations_tried() {
    let (_, report) =
        exact_levels(&params(1.0, 0.75, 1.5), 6, &ConvergencePolicy::default()).unwrap();
    assert!(report.nmax_sequence.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(report.final_nmax, *report.nmax_sequence.last().unwrap());
    assert!(report
        .per_level_drift
        .iter()
        .all(|&d| (0.0..1e-8).contains(&d)));
}

#[test]
fn residuals_are_small() {
    let h = build_hamiltonian(&params(1.0, 1.3, 1.1), Truncation::new(120).unwrap()).unwrap();
    let (values, vectors) = symmetric_eigenpairs(&h).unwrap();
    for (k, &value) in values.iter().enumerate().take(60) {
        let r = relative_residual(&h, value, &vectors.column(k).into_owned());
        assert!(r < 1e-9, "level {k}: {r:e}");
    }
    let fast = symmetric_eigenvalues(&h, 60).unwrap();
    for (a, b) in fast.iter().zip(&values) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn drift_shrinks_with_truncation() {
    for g in [0.5, 1.5, 2.5] {
        let p = params(1.0, 1.0, g);
        let solve = |n| {
            symmetric_eigenvalues(
                &build_hamiltonian(&p, Truncation::new(n).unwrap()).unwrap(),
                10,
            )
            .unwrap()
        };
        let drift = |a: Vec<f64>, b: Vec<f64>| {
            a.iter()
                .zip(&b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        };
        // Compare coarse truncations, where drift is still measurable.
        let coarse = drift(solve(20), solve(40));
        let fine = drift(solve(40), solve(80));
        assert!(fine <= coarse, "g={g}: {fine:e} > {coarse:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_match_characteristic_roots(entries in prop::collection::vec(-3.0f64..3.0, 6)) {
        // Random symmetric 3×3, diagonally shifted apart so roots are simple.
        let m = DMatrix::from_row_slice(3, 3, &[
            entries[0] - 4.0, entries[1], entries[2],
            entries[1], entries[3], entries[4],
            entries[2], entries[4], entries[5] + 4.0,
        ]);
        let values = symmetric_eigenvalues(&OperatorMatrix::from_matrix(m.clone()), 3).unwrap();
        let trace: f64 = m.trace();
        prop_assert!((values.iter().sum::<f64>() - trace).abs() < 1e-10);
        let det = common::determinant(&m);
        prop_assert!((values.iter().product::<f64>() - det).abs() < 1e-9 * det.abs().max(1.0));
    }

    #[test]
    fn tridiagonal_trace_and_order(d in prop::collection::vec(-5.0f64..5.0, 2..30), scale in 0.0f64..2.0) {
        let e: Vec<f64> = (1..d.len()).map(|i| scale * (i as f64).sqrt()).collect();
        let values = tridiagonal_eigenvalues(&d, &e).unwrap();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = d.iter().sum();
        prop_assert!((values.iter().sum::<f64>() - trace).abs() < 1e-9 * (1.0 + trace.abs()));
    }
}
