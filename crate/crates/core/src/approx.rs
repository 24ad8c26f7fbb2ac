//! Closed-form and 2×2-block spectra: RWA, adiabatic approximation and
//! the generalized RWA (GRWA).
//!
//! Every generator returns the lowest `count` levels in ascending energy
//! order. Pair labels follow the block they come from; within a block
//! `Minus` is the lower eigenvalue.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Branch, ModelParams};
use crate::special::{displaced_overlap, laguerre_unchecked};

/// Hard cap on the number of blocks scanned while collecting levels.
const MAX_BLOCKS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproxMethod {
    Rwa,
    Adiabatic,
    Grwa,
    Exact,
}

impl ApproxMethod {
    pub const ALL: [ApproxMethod; 4] = [
        ApproxMethod::Rwa,
        ApproxMethod::Adiabatic,
        ApproxMethod::Grwa,
        ApproxMethod::Exact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ApproxMethod::Rwa => "rwa",
            ApproxMethod::Adiabatic => "adiabatic",
            ApproxMethod::Grwa => "grwa",
            ApproxMethod::Exact => "exact",
        }
    }
}

impl std::fmt::Display for ApproxMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ApproxMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rwa" => Ok(ApproxMethod::Rwa),
            "adiabatic" => Ok(ApproxMethod::Adiabatic),
            "grwa" => Ok(ApproxMethod::Grwa),
            "exact" => Ok(ApproxMethod::Exact),
            other => Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledLevel {
    pub branch: Branch,
    pub n: usize,
    pub energy: f64,
}

impl LabeledLevel {
    pub fn new(branch: Branch, n: usize, energy: f64) -> Self {
        Self { branch, n, energy }
    }
}

/// Real symmetric 2×2 matrix `[[a, b], [b, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricBlock {
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl SymmetricBlock {
    /// `(lower, upper)` eigenvalues.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.a + self.d);
        let radius = (0.5 * (self.d - self.a)).hypot(self.b);
        (mean - radius, mean + radius)
    }

    pub fn with_negated_coupling(self) -> Self {
        Self { b: -self.b, ..self }
    }
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidArgument("level count must be >= 1".into()));
    }
    Ok(())
}

/// Collects levels from successive blocks until no later block can
/// contribute to the lowest `count`. `floor(k)` must bound from below every
/// level of every block with index `>= k`.
fn lowest_levels(
    count: usize,
    mut levels: Vec<LabeledLevel>,
    first_block: usize,
    mut block: impl FnMut(usize) -> [LabeledLevel; 2],
    floor: impl Fn(usize) -> f64,
) -> Vec<LabeledLevel> {
    let mut k = first_block;
    while k < MAX_BLOCKS {
        if levels.len() >= count {
            sort_levels(&mut levels);
            if floor(k) > levels[count - 1].energy {
                break;
            }
        }
        levels.extend(block(k));
        k += 1;
    }
    sort_levels(&mut levels);
    levels.truncate(count);
    levels
}

fn sort_levels(levels: &mut [LabeledLevel]) {
    levels.sort_by(|x, y| x.energy.total_cmp(&y.energy));
}

fn pair(block_index: usize, block: SymmetricBlock) -> [LabeledLevel; 2] {
    let (lo, hi) = block.eigenvalues();
    [
        LabeledLevel::new(Branch::Minus, block_index, lo),
        LabeledLevel::new(Branch::Plus, block_index, hi),
    ]
}

/// RWA block `N >= 1` over `{|+x,N-1⟩, |-x,N⟩}`.
pub fn rwa_block(params: &ModelParams, n: usize) -> Result<SymmetricBlock> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "RWA block index must be >= 1".into(),
        ));
    }
    Ok(SymmetricBlock {
        a: params.bare_energy(Branch::Plus, n - 1),
        b: (n as f64).sqrt() * params.lambda,
        d: params.bare_energy(Branch::Minus, n),
    })
}

/// Standard rotating-wave spectrum: uncoupled ground level `-Ω/2` and
/// one 2×2 block per excitation number.
pub fn rwa_levels(params: &ModelParams, count: usize) -> Result<Vec<LabeledLevel>> {
    params.validate()?;
    check_count(count)?;
    let p = *params;
    let ground = LabeledLevel::new(Branch::Minus, 0, p.bare_energy(Branch::Minus, 0));
    // Block k has both eigenvalues above (k-1)ω0 + min(Ω/2, ω0 - Ω/2) - √k λ,
    // which is increasing in k once k > λ²/(4ω0²).
    let turn = (p.lambda * p.lambda / (4.0 * p.omega0 * p.omega0)).ceil() as usize + 1;
    let floor = move |k: usize| {
        if k < turn {
            return f64::NEG_INFINITY;
        }
        let kf = k as f64;
        (kf - 1.0) * p.omega0 + (0.5 * p.omega).min(p.omega0 - 0.5 * p.omega) - kf.sqrt() * p.lambda
    };
    Ok(lowest_levels(
        count,
        vec![ground],
        1,
        |k| pair(k, rwa_block(&p, k).expect("validated")),
        floor,
    ))
}

/// Adiabatic level `E_{±,N} = E_N ± (Ω/2)⟨N_-|N_+⟩`. The branch is the
/// sign in that formula, not an energy ordering.
pub fn adiabatic_energy(params: &ModelParams, branch: Branch, n: usize) -> f64 {
    let overlap = displaced_overlap(n, n, params.coupling_ratio());
    params.displaced_energy(n) + branch.sign() * 0.5 * params.omega * overlap
}

pub fn adiabatic_levels(params: &ModelParams, count: usize) -> Result<Vec<LabeledLevel>> {
    params.validate()?;
    check_count(count)?;
    let p = *params;
    let g = p.lambda / p.omega0;
    Ok(lowest_levels(
        count,
        Vec::new(),
        0,
        |k| {
            [
                LabeledLevel::new(Branch::Minus, k, adiabatic_energy(&p, Branch::Minus, k)),
                LabeledLevel::new(Branch::Plus, k, adiabatic_energy(&p, Branch::Plus, k)),
            ]
        },
        move |k| p.omega0 * (k as f64 - g * g) - 0.5 * p.omega,
    ))
}

/// GRWA block `N >= 1`: `[[E_{+,N-1}, Ω'_{N-1,N}/2], [Ω'_{N-1,N}/2, E_{-,N}]]`
/// with `Ω'_{M,N} = Ω⟨M_-|N_+⟩`.
pub fn grwa_block(params: &ModelParams, n: usize) -> Result<SymmetricBlock> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "GRWA block index must be >= 1; the ground level is unblocked".into(),
        ));
    }
    let overlap = displaced_overlap(n - 1, n, params.coupling_ratio());
    Ok(SymmetricBlock {
        a: adiabatic_energy(params, Branch::Plus, n - 1),
        b: 0.5 * params.omega * overlap,
        d: adiabatic_energy(params, Branch::Minus, n),
    })
}

/// Closed-form GRWA pair for block `block >= 1`, i.e. the levels built from
/// `L_{N}`, `L_{N+1}` and `L_N^1` with `N = block - 1`.
pub fn grwa_pair_energies(params: &ModelParams, block: usize) -> Result<(f64, f64)> {
    params.validate()?;
    if block == 0 {
        return Err(Error::InvalidArgument(
            "GRWA block index must be >= 1".into(),
        ));
    }
    let n = block - 1;
    let w0 = params.omega0;
    let om = params.omega;
    let g = params.lambda / w0;
    let x = 4.0 * g * g;
    let damp = (-2.0 * g * g).exp();
    let l_n = laguerre_unchecked(n, 0.0, x);
    let l_n1 = laguerre_unchecked(n + 1, 0.0, x);
    let l_n_assoc = laguerre_unchecked(n, 1.0, x);

    let centre = (n as f64 + 0.5) * w0 - params.lambda * g + 0.25 * om * damp * (l_n - l_n1);
    let half_gap = 0.5 * w0 - 0.25 * om * damp * (l_n + l_n1);
    let coupling = g * om * damp * l_n_assoc / ((n + 1) as f64).sqrt();
    let radius = half_gap.hypot(coupling);
    Ok((centre - radius, centre + radius))
}

/// GRWA spectrum: ground level `E_{-,0}` of the adiabatic approximation plus
/// the closed-form pair of every block.
pub fn grwa_levels(params: &ModelParams, count: usize) -> Result<Vec<LabeledLevel>> {
    params.validate()?;
    check_count(count)?;
    let p = *params;
    let g = p.lambda / p.omega0;
    let ground = LabeledLevel::new(Branch::Minus, 0, adiabatic_energy(&p, Branch::Minus, 0));
    Ok(lowest_levels(
        count,
        vec![ground],
        1,
        |k| {
            let (lo, hi) = grwa_pair_energies(&p, k).expect("validated");
            [
                LabeledLevel::new(Branch::Minus, k, lo),
                LabeledLevel::new(Branch::Plus, k, hi),
            ]
        },
        // Diagonals are >= (k-1)ω0 - λ²/ω0 - Ω/2 and the coupling is <= Ω/2.
        move |k| p.omega0 * (k as f64 - 1.0 - g * g) - p.omega,
    ))
}

pub fn approximate_levels(
    method: ApproxMethod,
    params: &ModelParams,
    count: usize,
) -> Result<Vec<LabeledLevel>> {
    match method {
        ApproxMethod::Rwa => rwa_levels(params, count),
        ApproxMethod::Adiabatic => adiabatic_levels(params, count),
        ApproxMethod::Grwa => grwa_levels(params, count),
        ApproxMethod::Exact => Err(Error::InvalidArgument(
            "exact levels come from the exact solver".into(),
        )),
    }
}
