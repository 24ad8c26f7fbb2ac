//! Dense symmetric eigensolution of the truncated Hamiltonian, with a
//! truncation schedule that is extended until the requested levels stop
//! moving.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SymmetricTridiagonal};
use serde::{Deserialize, Serialize};

use crate::approx::LabeledLevel;
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, Branch, ModelParams, OperatorMatrix, Truncation};

const SYMMETRY_TOL: f64 = 1e-12;
const QL_MAX_SWEEPS: usize = 60;

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson-type shifts. `offdiag[i]` couples `diag[i]` and `diag[i+1]`.
///
/// Returns the eigenvalues ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if offdiag.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "tridiagonal: {} diagonal entries need {} off-diagonal entries, got {}",
            n,
            n - 1,
            offdiag.len()
        )));
    }
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > QL_MAX_SWEEPS {
                return Err(Error::EigenNoConvergence {
                    iterations: QL_MAX_SWEEPS,
                });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn check_symmetric(matrix: &OperatorMatrix) -> Result<()> {
    let asymmetry = matrix.max_asymmetry();
    if asymmetry > SYMMETRY_TOL * matrix.max_abs() {
        return Err(Error::NotSymmetric { asymmetry });
    }
    Ok(())
}

/// The `count` algebraically smallest eigenvalues of a symmetric matrix,
/// ascending. Householder tridiagonalization followed by implicit QL.
pub fn symmetric_eigenvalues(matrix: &OperatorMatrix, count: usize) -> Result<Vec<f64>> {
    let dim = matrix.dim();
    if count == 0 || count > dim {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue count must be in 1..={dim}, got {count}"
        )));
    }
    check_symmetric(matrix)?;
    let mut values = if dim == 1 {
        vec![matrix.get(0, 0)]
    } else {
        let tri = SymmetricTridiagonal::new(matrix.as_matrix().clone());
        let (d, e) = tri.unpack_tridiagonal();
        tridiagonal_eigenvalues(d.as_slice(), e.as_slice())?
    };
    values.truncate(count);
    Ok(values)
}

/// Full eigendecomposition, ascending, with eigenvectors as columns.
/// Used for residual checks.
pub fn symmetric_eigenpairs(matrix: &OperatorMatrix) -> Result<(Vec<f64>, DMatrix<f64>)> {
    check_symmetric(matrix)?;
    let max_iter = 100 * matrix.dim().max(1);
    let eig = SymmetricEigen::try_new(matrix.as_matrix().clone(), f64::EPSILON, max_iter).ok_or(
        Error::EigenNoConvergence {
            iterations: max_iter,
        },
    )?;
    let mut order: Vec<usize> = (0..matrix.dim()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    Ok((values, vectors))
}

/// `‖Hv - Ev‖ / (‖H‖ ‖v‖)` with the Frobenius norm for `‖H‖`.
pub fn relative_residual(matrix: &OperatorMatrix, value: f64, vector: &DVector<f64>) -> f64 {
    let h = matrix.as_matrix();
    let r = h * vector - vector * value;
    r.norm() / (h.norm() * vector.norm())
}

/// Truncations to try and the drift tolerance (in units of `ω0`) between
/// successive ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePolicy {
    pub schedule: Vec<usize>,
    pub tol_over_omega0: f64,
}

impl Default for ConvergencePolicy {
    fn default() -> Self {
        Self {
            schedule: vec![100, 200, 400],
            tol_over_omega0: 1e-8,
        }
    }
}

impl ConvergencePolicy {
    /// `start`, `2·start`, `4·start`.
    pub fn doubling_from(start: usize) -> Self {
        Self {
            schedule: vec![start, 2 * start, 4 * start],
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.schedule.len() < 2 {
            return Err(Error::InvalidArgument(
                "convergence schedule needs at least two truncations".into(),
            ));
        }
        if !self.schedule.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "convergence schedule must be strictly increasing".into(),
            ));
        }
        if self.tol_over_omega0.is_nan() || self.tol_over_omega0 <= 0.0 {
            return Err(Error::InvalidArgument(
                "convergence tolerance must be > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Truncations tried and the drift of each requested level between the
/// last two of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub nmax_sequence: Vec<usize>,
    pub per_level_drift: Vec<f64>,
    pub converged: bool,
    pub final_nmax: usize,
}

/// Synthetic label for the level at `rank`: rank 0 is `(minus, 0)` and
/// ranks `2k-1`, `2k` form pair `k`.
pub fn rank_label(rank: usize) -> (Branch, usize) {
    if rank == 0 {
        (Branch::Minus, 0)
    } else if rank % 2 == 1 {
        (Branch::Minus, rank.div_ceil(2))
    } else {
        (Branch::Plus, rank / 2)
    }
}

/// Lowest `count` eigenvalues of the full Hamiltonian, extending the
/// truncation along `policy.schedule` until every level drifts by less
/// than `tol_over_omega0 · ω0`.
pub fn exact_levels(
    params: &ModelParams,
    count: usize,
    policy: &ConvergencePolicy,
) -> Result<(Vec<LabeledLevel>, ConvergenceReport)> {
    params.validate()?;
    policy.validate()?;
    if count == 0 {
        return Err(Error::InvalidArgument("level count must be >= 1".into()));
    }
    let first = Truncation::new(policy.schedule[0])?;
    if count > first.nmax() {
        return Err(Error::InvalidArgument(format!(
            "level count {count} exceeds the smallest truncation {}",
            first.nmax()
        )));
    }

    let tol = policy.tol_over_omega0 * params.omega0;
    let mut tried = Vec::new();
    let mut previous: Option<Vec<f64>> = None;
    let mut drift = vec![f64::INFINITY; count];

    for &nmax in &policy.schedule {
        let trunc = Truncation::new(nmax)?;
        let h = build_hamiltonian(params, trunc)?;
        let values = symmetric_eigenvalues(&h, count)?;
        tried.push(nmax);

        if let Some(prev) = &previous {
            drift = prev
                .iter()
                .zip(&values)
                .map(|(a, b)| (a - b).abs())
                .collect();
            if drift.iter().all(|&d| d < tol) {
                let report = ConvergenceReport {
                    nmax_sequence: tried,
                    per_level_drift: drift,
                    converged: true,
                    final_nmax: nmax,
                };
                return Ok((label_by_rank(&values), report));
            }
        }
        previous = Some(values);
    }

    let report = ConvergenceReport {
        final_nmax: *tried.last().expect("schedule is non-empty"),
        nmax_sequence: tried,
        per_level_drift: drift,
        converged: false,
    };
    Err(Error::TruncationNoConvergence {
        g: params.lambda / params.omega0,
        report,
    })
}

fn label_by_rank(values: &[f64]) -> Vec<LabeledLevel> {
    values
        .iter()
        .enumerate()
        .map(|(rank, &energy)| {
            let (branch, n) = rank_label(rank);
            LabeledLevel::new(branch, n, energy)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows<const N: usize>(rows: [[f64; N]; N]) -> OperatorMatrix {
        OperatorMatrix::from_matrix(DMatrix::from_fn(N, N, |i, j| rows[i][j]))
    }

    #[test]
    fn diagonal_and_pauli_examples() {
        let m = from_rows([[3.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]]);
        assert_eq!(symmetric_eigenvalues(&m, 3).unwrap(), vec![1.0, 2.0, 3.0]);

        let sx = from_rows([[0.0, 1.0], [1.0, 0.0]]);
        let v = symmetric_eigenvalues(&sx, 2).unwrap();
        assert!((v[0] + 1.0).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let m = from_rows([[0.0, 1.0], [0.5, 0.0]]);
        assert!(matches!(
            symmetric_eigenvalues(&m, 1),
            Err(Error::NotSymmetric { .. })
        ));
        let sx = from_rows([[0.0, 1.0], [1.0, 0.0]]);
        assert!(symmetric_eigenvalues(&sx, 0).is_err());
        assert!(symmetric_eigenvalues(&sx, 3).is_err());
        assert!(tridiagonal_eigenvalues(&[1.0, 2.0], &[]).is_err());
    }

    #[test]
    fn rank_labels() {
        let labels: Vec<_> = (0..5).map(rank_label).collect();
        assert_eq!(
            labels,
            vec![
                (Branch::Minus, 0),
                (Branch::Minus, 1),
                (Branch::Plus, 1),
                (Branch::Minus, 2),
                (Branch::Plus, 2)
            ]
        );
    }

    #[test]
    fn exact_limits() {
        let p = ModelParams::new(1.0, 0.0, 0.5).unwrap();
        let (levels, report) = exact_levels(&p, 4, &ConvergencePolicy::default()).unwrap();
        assert!(report.converged);
        for (l, e) in levels.iter().zip([-0.25, -0.25, 0.75, 0.75]) {
            assert!((l.energy - e).abs() < 1e-9, "{} vs {e}", l.energy);
        }

        let p = ModelParams::new(1.0, 0.75, 0.0).unwrap();
        let (levels, _) = exact_levels(&p, 4, &ConvergencePolicy::default()).unwrap();
        for (l, e) in levels.iter().zip([-0.375, 0.375, 0.625, 1.375]) {
            assert!((l.energy - e).abs() < 1e-12);
        }
    }

    #[test]
    fn policy_validation() {
        let p = ModelParams::new(1.0, 1.0, 0.3).unwrap();
        let bad = ConvergencePolicy {
            schedule: vec![100],
            tol_over_omega0: 1e-8,
        };
        assert!(exact_levels(&p, 2, &bad).is_err());
        let bad = ConvergencePolicy {
            schedule: vec![200, 100],
            tol_over_omega0: 1e-8,
        };
        assert!(exact_levels(&p, 2, &bad).is_err());
        assert!(exact_levels(&p, 101, &ConvergencePolicy::default()).is_err());
    }

    #[test]
    fn non_convergence_carries_report() {
        // Far too small a basis for λ = 3.
        let p = ModelParams::new(1.0, 1.0, 3.0).unwrap();
        let policy = ConvergencePolicy {
            schedule: vec![4, 6, 8],
            tol_over_omega0: 1e-8,
        };
        match exact_levels(&p, 2, &policy) {
            Err(Error::TruncationNoConvergence { report, .. }) => {
                assert!(!report.converged);
                assert_eq!(report.nmax_sequence, vec![4, 6, 8]);
                assert_eq!(report.final_nmax, 8);
                assert_eq!(report.per_level_drift.len(), 2);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
