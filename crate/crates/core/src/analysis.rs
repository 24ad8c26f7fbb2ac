//! Coupling sweeps and rank-aligned error metrics between methods.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::approx::{approximate_levels, ApproxMethod, LabeledLevel};
use crate::error::{Error, Result};
use crate::exact::{exact_levels, ConvergencePolicy};
use crate::model::{Branch, ModelParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub omega0: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub g_min: f64,
    pub g_max: f64,
    pub steps: usize,
    pub methods: Vec<ApproxMethod>,
    pub levels: usize,
    pub policy: ConvergencePolicy,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        ModelParams::new(self.omega0, self.omega, 0.0)?;
        if !(self.g_min.is_finite() && self.g_max.is_finite()) {
            return Err(Error::InvalidArgument(
                "coupling bounds must be finite".into(),
            ));
        }
        if self.g_min < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "gmin must be >= 0, got {}",
                self.g_min
            )));
        }
        if self.g_min > self.g_max {
            return Err(Error::InvalidArgument(format!(
                "gmin ({}) must not exceed gmax ({})",
                self.g_min, self.g_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "steps must be >= 2, got {}",
                self.steps
            )));
        }
        if self.levels == 0 {
            return Err(Error::InvalidArgument("levels must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one method is required".into(),
            ));
        }
        Ok(())
    }

    /// Uniform grid including both endpoints; collapses to one point when
    /// `g_min == g_max`.
    pub fn grid(&self) -> Vec<f64> {
        if self.g_min == self.g_max {
            return vec![self.g_min];
        }
        let last = self.steps - 1;
        let width = self.g_max - self.g_min;
        (0..self.steps)
            .map(|i| match i {
                0 => self.g_min,
                i if i == last => self.g_max,
                i => self.g_min + width * (i as f64) / (last as f64),
            })
            .collect()
    }

    /// Methods deduplicated, in enumeration order.
    pub fn ordered_methods(&self) -> Vec<ApproxMethod> {
        let mut m = self.methods.clone();
        m.sort();
        m.dedup();
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub g: f64,
    pub method: ApproxMethod,
    pub rank: usize,
    /// `None` for the exact method, whose labels are only rank-derived.
    pub branch: Option<Branch>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub energy_over_omega0: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Energies of one `(g, method)` group, by rank.
    pub fn energies(&self, g: f64, method: ApproxMethod) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.g == g && r.method == method)
            .map(|r| r.energy_over_omega0)
            .collect()
    }

    /// Rows whose coupling satisfies `keep`.
    pub fn filter_g(&self, keep: impl Fn(f64) -> bool) -> SweepTable {
        SweepTable {
            rows: self.rows.iter().copied().filter(|r| keep(r.g)).collect(),
        }
    }
}

/// Lowest levels of one method at one parameter point.
pub fn method_levels(
    method: ApproxMethod,
    params: &ModelParams,
    count: usize,
    policy: &ConvergencePolicy,
) -> Result<Vec<LabeledLevel>> {
    match method {
        ApproxMethod::Exact => exact_levels(params, count, policy).map(|(levels, _)| levels),
        m => approximate_levels(m, params, count),
    }
}

/// Energies (in units of `ω0`) of every method at every grid point, rows
/// ordered by `(g, method, rank)`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let methods = spec.ordered_methods();
    let mut rows = Vec::new();
    for g in spec.grid() {
        let params = ModelParams::new(spec.omega0, spec.omega, g * spec.omega0)?;
        for &method in &methods {
            let levels = method_levels(method, &params, spec.levels, &spec.policy)?;
            let exact = method == ApproxMethod::Exact;
            rows.extend(levels.iter().enumerate().map(|(rank, level)| SweepRow {
                g,
                method,
                rank,
                branch: (!exact).then_some(level.branch),
                n: (!exact).then_some(level.n),
                energy_over_omega0: level.energy / spec.omega0,
            }));
        }
    }
    Ok(SweepTable { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEntry {
    pub method: ApproxMethod,
    pub rank: usize,
    pub max_abs_error_over_omega0: f64,
    pub argmax_g: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub entries: Vec<ErrorEntry>,
}

impl ErrorSummary {
    pub fn get(&self, method: ApproxMethod, rank: usize) -> Option<&ErrorEntry> {
        self.entries
            .iter()
            .find(|e| e.method == method && e.rank == rank)
    }

    /// Maximum error of `method` at `rank`; panics if absent.
    pub fn max_error(&self, method: ApproxMethod, rank: usize) -> f64 {
        self.get(method, rank)
            .unwrap_or_else(|| panic!("no error entry for {method} rank {rank}"))
            .max_abs_error_over_omega0
    }
}

/// Per `(method, rank)` maximum over the sweep of `|E_method - E_reference|`
/// in units of `ω0`, and the first coupling where it is attained.
pub fn error_summary(table: &SweepTable, reference: ApproxMethod) -> Result<ErrorSummary> {
    let reference_rows: BTreeMap<(u64, usize), f64> = table
        .rows
        .iter()
        .filter(|r| r.method == reference)
        .map(|r| ((r.g.to_bits(), r.rank), r.energy_over_omega0))
        .collect();

    let mut worst: BTreeMap<(ApproxMethod, usize), (f64, f64)> = BTreeMap::new();
    for row in &table.rows {
        let reference_energy = reference_rows
            .get(&(row.g.to_bits(), row.rank))
            .ok_or_else(|| {
                Error::MissingReference(format!("{reference} at g = {}, rank {}", row.g, row.rank))
            })?;
        let err = (row.energy_over_omega0 - reference_energy).abs();
        let slot = worst.entry((row.method, row.rank)).or_insert((err, row.g));
        if err > slot.0 {
            *slot = (err, row.g);
        }
    }

    Ok(ErrorSummary {
        entries: worst
            .into_iter()
            .map(|((method, rank), (err, g))| ErrorEntry {
                method,
                rank,
                max_abs_error_over_omega0: err,
                argmax_g: g,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(methods: Vec<ApproxMethod>, g_min: f64, g_max: f64, steps: usize) -> SweepSpec {
        SweepSpec {
            omega0: 1.0,
            omega: 1.0,
            g_min,
            g_max,
            steps,
            methods,
            levels: 2,
            policy: ConvergencePolicy::default(),
        }
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let s = spec(vec![ApproxMethod::Rwa], 0.1, 0.7, 7);
        let grid = s.grid();
        assert_eq!(grid.len(), 7);
        assert_eq!(grid[0], 0.1);
        assert_eq!(grid[6], 0.7);
        assert_eq!(spec(vec![ApproxMethod::Rwa], 0.0, 0.0, 5).grid(), vec![0.0]);
    }

    #[test]
    fn single_point_rwa() {
        let t = run_sweep(&spec(vec![ApproxMethod::Rwa], 0.0, 0.0, 2)).unwrap();
        assert_eq!(t.energies(0.0, ApproxMethod::Rwa), vec![-0.5, 0.5]);
    }

    #[test]
    fn invalid_specs() {
        assert!(run_sweep(&spec(vec![ApproxMethod::Rwa], 0.5, 0.1, 3)).is_err());
        assert!(run_sweep(&spec(vec![ApproxMethod::Rwa], 0.0, 1.0, 1)).is_err());
        assert!(run_sweep(&spec(vec![], 0.0, 1.0, 3)).is_err());
        assert!(run_sweep(&spec(vec![ApproxMethod::Rwa], -0.1, 1.0, 3)).is_err());
        let mut s = spec(vec![ApproxMethod::Rwa], 0.0, 1.0, 3);
        s.levels = 0;
        assert!(run_sweep(&s).is_err());
    }

    #[test]
    fn rows_are_ordered_and_rank_sorted() {
        let methods = vec![
            ApproxMethod::Grwa,
            ApproxMethod::Rwa,
            ApproxMethod::Adiabatic,
        ];
        let mut s = spec(methods, 0.0, 2.0, 9);
        s.levels = 5;
        let t = run_sweep(&s).unwrap();
        assert_eq!(t.rows.len(), 9 * 3 * 5);
        let keys: Vec<_> = t
            .rows
            .iter()
            .map(|r| (r.g.to_bits(), r.method, r.rank))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for w in t.rows.windows(2) {
            if w[0].g == w[1].g && w[0].method == w[1].method {
                assert!(w[0].energy_over_omega0 <= w[1].energy_over_omega0);
            }
        }
    }

    #[test]
    fn self_error_is_zero() {
        let methods = vec![ApproxMethod::Grwa, ApproxMethod::Rwa];
        let t = run_sweep(&spec(methods, 0.0, 1.0, 5)).unwrap();
        let summary = error_summary(&t, ApproxMethod::Grwa).unwrap();
        assert_eq!(summary.max_error(ApproxMethod::Grwa, 0), 0.0);
        assert_eq!(summary.max_error(ApproxMethod::Grwa, 1), 0.0);
        assert!(summary.max_error(ApproxMethod::Rwa, 1) > 0.0);
    }

    #[test]
    fn missing_reference_is_reported() {
        let t = run_sweep(&spec(vec![ApproxMethod::Rwa], 0.0, 1.0, 3)).unwrap();
        assert!(matches!(
            error_summary(&t, ApproxMethod::Exact),
            Err(Error::MissingReference(_))
        ));
    }
}
