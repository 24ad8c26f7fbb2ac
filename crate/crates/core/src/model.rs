//! Model parameters and operators on the truncated Fock ⊗ spin space.
//!
//! The product basis is ordered `|-x,0⟩, |+x,0⟩, |-x,1⟩, |+x,1⟩, ...`, i.e.
//! the state `|s,N⟩` sits at index `2N + s` with `s = 0` for `-x` and
//! `s = 1` for `+x`. Spin operators are written in the `σ_x` eigenbasis.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::DimensionlessCoupling;

/// Oscillator frequency `omega0`, spin splitting `omega` and coupling
/// `lambda` of `H = ω0 a†a + (Ω/2)σ_x + λσ_z(a† + a)`, with ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega0: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(omega0: f64, omega: f64, lambda: f64) -> Result<Self> {
        let p = Self {
            omega0,
            omega,
            lambda,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.omega0.is_finite() && self.omega.is_finite() && self.lambda.is_finite();
        if !finite {
            return Err(Error::InvalidParams(format!(
                "non-finite parameter in {self:?}"
            )));
        }
        if self.omega0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega0 must be > 0, got {}",
                self.omega0
            )));
        }
        if self.omega < 0.0 {
            return Err(Error::InvalidParams(format!(
                "Omega must be >= 0, got {}",
                self.omega
            )));
        }
        if self.lambda < 0.0 {
            return Err(Error::InvalidParams(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// `λ/ω0`.
    pub fn coupling_ratio(&self) -> DimensionlessCoupling {
        DimensionlessCoupling::new(self.lambda / self.omega0)
            .expect("validated parameters give a valid coupling ratio")
    }

    /// Uncoupled energy `E^(0)_{±,N} = Nω0 ± Ω/2`.
    pub fn bare_energy(&self, branch: Branch, n: usize) -> f64 {
        n as f64 * self.omega0 + branch.sign() * 0.5 * self.omega
    }

    /// Displaced-oscillator energy `E_N = ω0 (N - λ²/ω0²)`.
    pub fn displaced_energy(&self, n: usize) -> f64 {
        let g = self.lambda / self.omega0;
        self.omega0 * (n as f64 - g * g)
    }
}

/// Number of Fock levels kept; the product space has dimension `2 * nmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    nmax: usize,
}

impl Truncation {
    pub fn new(nmax: usize) -> Result<Self> {
        if nmax < 2 {
            return Err(Error::InvalidArgument(format!(
                "nmax must be >= 2, got {nmax}"
            )));
        }
        Ok(Self { nmax })
    }

    pub fn nmax(self) -> usize {
        self.nmax
    }

    pub fn dim(self) -> usize {
        2 * self.nmax
    }

    /// Fock indices below this bound are unaffected by the cutoff when
    /// states are displaced by `g` in either direction: a displaced Fock
    /// state `|N⟩` spreads over roughly `2g√N` levels, so the bulk stops
    /// `4g√nmax + 10` levels short of `nmax`.
    pub fn bulk_limit(self, g: DimensionlessCoupling) -> usize {
        let margin = (4.0 * g.value() * (self.nmax as f64).sqrt()).ceil() as usize + 10;
        self.nmax.saturating_sub(margin)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Minus => -1.0,
            Branch::Plus => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Minus => "minus",
            Branch::Plus => "plus",
        }
    }
}

/// A `(branch, N)` label; used for `|±x,N⟩`, `|±z,N_±⟩` and `|Ψ_{±,N}⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisLabel {
    pub branch: Branch,
    pub n: usize,
}

impl BasisLabel {
    pub fn new(branch: Branch, n: usize) -> Self {
        Self { branch, n }
    }

    pub fn minus(n: usize) -> Self {
        Self::new(Branch::Minus, n)
    }

    pub fn plus(n: usize) -> Self {
        Self::new(Branch::Plus, n)
    }

    /// Position in the interleaved product basis.
    pub fn index(self) -> usize {
        2 * self.n
            + match self.branch {
                Branch::Minus => 0,
                Branch::Plus => 1,
            }
    }

    pub fn from_index(index: usize) -> Self {
        let branch = if index.is_multiple_of(2) {
            Branch::Minus
        } else {
            Branch::Plus
        };
        Self::new(branch, index / 2)
    }
}

/// Dense real square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix(DMatrix<f64>);

impl OperatorMatrix {
    pub fn from_matrix(m: DMatrix<f64>) -> Self {
        assert!(m.is_square(), "operator matrices are square");
        Self(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    /// Element between two product-basis labels.
    pub fn element(&self, row: BasisLabel, col: BasisLabel) -> f64 {
        self.0[(row.index(), col.index())]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        self.max_asymmetry() <= rel_tol * self.max_abs()
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// `self ⊗ other` in nalgebra's Kronecker convention (outer index from
    /// `self`).
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }
}

impl std::ops::Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 * &rhs.0)
    }
}

impl std::ops::Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 + &rhs.0)
    }
}

impl std::ops::Mul<&OperatorMatrix> for f64 {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&rhs.0 * self)
    }
}

pub mod ops {
    //! Matrix factories. Oscillator operators act on `nmax` Fock levels,
    //! spin operators on the `{-x, +x}` pair.

    use super::OperatorMatrix;

    /// Annihilation operator `a`.
    pub fn annihilation(nmax: usize) -> OperatorMatrix {
        let mut m = OperatorMatrix::zeros(nmax);
        for n in 1..nmax {
            m.0[(n - 1, n)] = (n as f64).sqrt();
        }
        m
    }

    /// Creation operator `a†`.
    pub fn creation(nmax: usize) -> OperatorMatrix {
        annihilation(nmax).transpose()
    }

    pub fn number(nmax: usize) -> OperatorMatrix {
        let mut m = OperatorMatrix::zeros(nmax);
        for n in 0..nmax {
            m.0[(n, n)] = n as f64;
        }
        m
    }

    pub fn fock_identity(nmax: usize) -> OperatorMatrix {
        OperatorMatrix::identity(nmax)
    }

    pub fn spin_identity() -> OperatorMatrix {
        OperatorMatrix::identity(2)
    }

    pub fn sigma_x() -> OperatorMatrix {
        spin([[-1.0, 0.0], [0.0, 1.0]])
    }

    pub fn sigma_z() -> OperatorMatrix {
        spin([[0.0, 1.0], [1.0, 0.0]])
    }

    /// `iσ_y = σ_z σ_x`, which is real.
    pub fn i_sigma_y() -> OperatorMatrix {
        spin([[0.0, 1.0], [-1.0, 0.0]])
    }

    /// `σ_+ = (σ_z - iσ_y)/2 = |+x⟩⟨-x|`.
    pub fn sigma_plus() -> OperatorMatrix {
        spin([[0.0, 0.0], [1.0, 0.0]])
    }

    /// `σ_- = (σ_z + iσ_y)/2 = |-x⟩⟨+x|`.
    pub fn sigma_minus() -> OperatorMatrix {
        spin([[0.0, 1.0], [0.0, 0.0]])
    }

    /// Embeds a spin operator and an oscillator operator into the
    /// interleaved product basis.
    pub fn product(spin_op: &OperatorMatrix, fock_op: &OperatorMatrix) -> OperatorMatrix {
        fock_op.kron(spin_op)
    }

    fn spin(rows: [[f64; 2]; 2]) -> OperatorMatrix {
        let mut m = OperatorMatrix::zeros(2);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.0[(i, j)] = *v;
            }
        }
        m
    }
}

/// Full Hamiltonian `ω0 a†a + (Ω/2)σ_x + λσ_z(a† + a)` on the truncated
/// product basis.
pub fn build_hamiltonian(params: &ModelParams, trunc: Truncation) -> Result<OperatorMatrix> {
    params.validate()?;
    let nmax = trunc.nmax();
    let a = ops::annihilation(nmax);
    let ad = ops::creation(nmax);
    let oscillator = ops::product(&ops::spin_identity(), &ops::number(nmax));
    let spin = ops::product(&ops::sigma_x(), &ops::fock_identity(nmax));
    let coupling = ops::product(&ops::sigma_z(), &(&ad + &a));

    let h = &(&(params.omega0 * &oscillator) + &((0.5 * params.omega) * &spin))
        + &(params.lambda * &coupling);
    Ok(h)
}

/// `exp(∓g(a† - a))` on `nmax` Fock levels: `Plus` gives `e^{-g(a†-a)}`,
/// whose columns are the states `|N_+⟩`, and `Minus` gives `e^{+g(a†-a)}`.
///
/// The generator is antisymmetric, so the truncated exponential is
/// orthogonal; only columns near the cutoff are distorted.
pub fn displacement_matrix(
    g: DimensionlessCoupling,
    sign: Branch,
    trunc: Truncation,
) -> OperatorMatrix {
    let nmax = trunc.nmax();
    if g.value() == 0.0 {
        return OperatorMatrix::identity(nmax);
    }
    let a = ops::annihilation(nmax).into_matrix();
    let generator = (a.transpose() - a) * (-sign.sign() * g.value());
    OperatorMatrix(generator.exp())
}

/// Columns are the adiabatic states
/// `|Ψ_{±,N}⟩ = (|+z,N_+⟩ ± |-z,N_-⟩)/√2`, ordered
/// `Ψ_{-,0}, Ψ_{+,0}, Ψ_{-,1}, ...`, in the product basis.
pub fn adiabatic_basis(params: &ModelParams, trunc: Truncation) -> Result<OperatorMatrix> {
    params.validate()?;
    let g = params.coupling_ratio();
    let d_plus = displacement_matrix(g, Branch::Plus, trunc);
    let d_minus = displacement_matrix(g, Branch::Minus, trunc);
    let nmax = trunc.nmax();
    let mut b = OperatorMatrix::zeros(trunc.dim());

    // |±z⟩ = (|+x⟩ ± |-x⟩)/√2, so
    // Ψ_{s,N} = ½[|+x⟩(|N_+⟩ + s|N_-⟩) + |-x⟩(|N_+⟩ - s|N_-⟩)].
    for n in 0..nmax {
        for branch in [Branch::Minus, Branch::Plus] {
            let col = BasisLabel::new(branch, n).index();
            let s = branch.sign();
            for k in 0..nmax {
                let p = d_plus.get(k, n);
                let m = d_minus.get(k, n);
                b.0[(BasisLabel::plus(k).index(), col)] = 0.5 * (p + s * m);
                b.0[(BasisLabel::minus(k).index(), col)] = 0.5 * (p - s * m);
            }
        }
    }
    Ok(b)
}

/// `Bᵀ H B` with `B` from [`adiabatic_basis`]: the Hamiltonian written in
/// the adiabatic basis.
pub fn transformed_hamiltonian(params: &ModelParams, trunc: Truncation) -> Result<OperatorMatrix> {
    let h = build_hamiltonian(params, trunc)?;
    let b = adiabatic_basis(params, trunc)?;
    let t = b.0.transpose() * &h.0 * &b.0;
    Ok(OperatorMatrix((&t + t.transpose()) * 0.5))
}
