//! Two-outcome observables, density matrices, Bell states and Born-rule
//! joint statistics for a pair of qubits.
//!
//! Party A is always the left Kronecker factor and party B the right one.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, pauli, Complex64, ComplexMatrix, HERMITIAN_TOL};
use crate::rng::SplitMix64;

pub const BLOCH_UNIT_TOL: f64 = 1e-12;
pub const DICHOTOMIC_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
pub const PROBABILITY_TOL: f64 = 1e-12;
pub const PROBABILITY_SUM_TOL: f64 = 1e-10;

/// Unit vector on the Bloch sphere. Serialized as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = Error;

    fn try_from([x, y, z]: [f64; 3]) -> Result<Self> {
        Self::new(x, y, z)
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(v: BlochVector) -> Self {
        v.as_array()
    }
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm_sq = x * x + y * y + z * z;
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > BLOCH_UNIT_TOL {
            return Err(Error::NonUnitBloch {
                norm: norm_sq.sqrt(),
            });
        }
        Ok(Self { x, y, z })
    }

    /// Rescales an arbitrary nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NonUnitBloch { norm: n });
        }
        Self::new(x / n, y / n, z / n)
    }

    /// Direction `cos θ·ẑ + sin θ·x̂` in the x–z plane.
    pub fn planar(theta: f64) -> Self {
        Self {
            x: theta.sin(),
            y: 0.0,
            z: theta.cos(),
        }
    }

    pub fn random(rng: &mut SplitMix64) -> Self {
        let [x, y, z] = rng.unit_vector3();
        Self::normalized(x, y, z).expect("unit_vector3 output is normalizable")
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn negated(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Hermitian 2×2 operator with spectrum {+1, −1}.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable {
    matrix: ComplexMatrix,
    label: String,
}

impl DichotomicObservable {
    /// Validates an arbitrary 2×2 matrix as a ±1-valued observable.
    pub fn from_matrix(matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if matrix.dim() != 2 {
            return Err(Error::DimensionMismatch {
                op: "observable",
                left: 2,
                right: matrix.dim(),
            });
        }
        let residual = matrix.hermiticity_residual();
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let square = &matrix * &matrix;
        let residual = (&square - &ComplexMatrix::identity(2)).frobenius_norm();
        if residual > DICHOTOMIC_TOL {
            return Err(Error::NotDichotomic { label, residual });
        }
        Ok(Self { matrix, label })
    }

    /// `n_x σ_x + n_y σ_y + n_z σ_z`.
    pub fn from_bloch(n: BlochVector, label: impl Into<String>) -> Self {
        let [sx, sy, sz] = pauli::all();
        let m = &(&sx.scale_real(n.x) + &sy.scale_real(n.y)) + &sz.scale_real(n.z);
        Self::from_matrix(m, label).expect("unit Bloch vector yields a dichotomic observable")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The observable with outcomes swapped, `−M`.
    pub fn negated(&self) -> Self {
        Self {
            matrix: -&self.matrix,
            label: self.label.clone(),
        }
    }

    /// Recovers `n_k = Tr(M σ_k)/2`.
    pub fn bloch_vector(&self) -> BlochVector {
        let [x, y, z] = pauli::all().map(|s| (&self.matrix * &s).trace().re / 2.0);
        BlochVector { x, y, z }
    }
}

/// `n·σ` for a (validated) unit Bloch vector.
pub fn observable_from_bloch(n: BlochVector) -> DichotomicObservable {
    DichotomicObservable::from_bloch(n, "")
}

/// Spectral projectors `P± = (I ± M)/2`.
pub fn projectors(obs: &DichotomicObservable) -> (ComplexMatrix, ComplexMatrix) {
    let id = ComplexMatrix::identity(2);
    let plus = (&id + obs.matrix()).scale_real(0.5);
    let minus = (&id - obs.matrix()).scale_real(0.5);
    (plus, minus)
}

/// Positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let residual = matrix.hermiticity_residual();
        if residual > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (relative residual {residual:.3e})"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace {:.12} + {:.3e}i differs from 1",
                trace.re, trace.im
            )));
        }
        let min_eigenvalue = *hermitian_eigen(&matrix)?
            .eigenvalues
            .last()
            .expect("nonempty spectrum");
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eigenvalue:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Rank-one projector onto `psi / ‖psi‖`.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidDensity(
                "zero or non-finite state vector".into(),
            ));
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&unit, &unit)?)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(a: &Self, b: &Self) -> Self {
        Self {
            matrix: a.matrix.kron(&b.matrix),
        }
    }

    /// Random product of two random pure qubit states.
    pub fn random_product(rng: &mut SplitMix64) -> Self {
        let a = Self::from_pure(&rng.unit_complex_vector(2)).expect("unit vector");
        let b = Self::from_pure(&rng.unit_complex_vector(2)).expect("unit vector");
        Self::product(&a, &b)
    }

    /// Random two-qubit state: a mixture of up to four random pure states.
    pub fn random(rng: &mut SplitMix64) -> Self {
        let rank = 1 + (rng.next_u64() % 4) as usize;
        let weights: Vec<f64> = (0..rank).map(|_| rng.next_f64() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        let mut m = ComplexMatrix::zeros(4);
        for w in weights {
            let psi = rng.unit_complex_vector(4);
            let proj = ComplexMatrix::outer(&psi, &psi).expect("equal lengths");
            m = &m + &proj.scale_real(w / total);
        }
        Self::new(m).expect("convex combination of pure states")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `Re Tr(ρ O)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        Ok(self.matrix.matmul(op)?.trace().re)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// The four maximally entangled two-qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi_plus",
            BellState::PhiMinus => "phi_minus",
            BellState::PsiPlus => "psi_plus",
            BellState::PsiMinus => "psi_minus",
        }
    }

    /// Amplitudes in the basis |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn amplitudes(self) -> [Complex64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = |x: f64| Complex64::new(x, 0.0);
        match self {
            BellState::PhiPlus => [c(h), c(0.0), c(0.0), c(h)],
            BellState::PhiMinus => [c(h), c(0.0), c(0.0), c(-h)],
            BellState::PsiPlus => [c(0.0), c(h), c(h), c(0.0)],
            BellState::PsiMinus => [c(0.0), c(h), c(-h), c(0.0)],
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellState {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == s || (s == "singlet" && *b == BellState::PsiMinus))
            .ok_or_else(|| format!("unknown Bell state {s:?}"))
    }
}

/// Density matrix of a named Bell state. `PsiMinus` is the singlet.
pub fn bell_state(name: BellState) -> DensityMatrix {
    DensityMatrix::from_pure(&name.amplitudes()).expect("normalized amplitudes")
}

/// Born-rule probabilities of the four joint outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointOutcomeDistribution {
    pub pp: f64,
    pub pm: f64,
    pub mp: f64,
    pub mm: f64,
}

impl JointOutcomeDistribution {
    pub fn new(pp: f64, pm: f64, mp: f64, mm: f64) -> Result<Self> {
        let d = Self { pp, pm, mp, mm };
        let cells = d.cells();
        if let Some(p) = cells
            .iter()
            .find(|p| !(-PROBABILITY_TOL..=1.0 + PROBABILITY_TOL).contains(*p))
        {
            return Err(Error::InvalidDistribution(format!(
                "cell probability {p} outside [0, 1]"
            )));
        }
        let sum: f64 = cells.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum}"
            )));
        }
        Ok(d)
    }

    /// Cells in the canonical order (+,+), (+,−), (−,+), (−,−).
    pub fn cells(&self) -> [f64; 4] {
        [self.pp, self.pm, self.mp, self.mm]
    }

    /// `p(+,+) + p(−,−) − p(+,−) − p(−,+)`.
    pub fn correlation(&self) -> f64 {
        self.pp + self.mm - self.pm - self.mp
    }

    /// Probability that party A sees +1.
    pub fn marginal_a_plus(&self) -> f64 {
        self.pp + self.pm
    }

    /// Probability that party B sees +1.
    pub fn marginal_b_plus(&self) -> f64 {
        self.pp + self.mp
    }
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            op: "two-qubit state",
            left: 4,
            right: rho.dim(),
        })
    }
}

/// `p(α, β) = Tr(ρ (P_α ⊗ P_β))`.
pub fn joint_distribution(
    rho: &DensityMatrix,
    a: &DichotomicObservable,
    b: &DichotomicObservable,
) -> Result<JointOutcomeDistribution> {
    check_two_qubit(rho)?;
    let (a_plus, a_minus) = projectors(a);
    let (b_plus, b_minus) = projectors(b);
    let p = |pa: &ComplexMatrix, pb: &ComplexMatrix| rho.expectation(&pa.kron(pb));
    JointOutcomeDistribution::new(
        p(&a_plus, &b_plus)?,
        p(&a_plus, &b_minus)?,
        p(&a_minus, &b_plus)?,
        p(&a_minus, &b_minus)?,
    )
}

/// `Tr(ρ (A ⊗ B))`.
pub fn correlation(
    rho: &DensityMatrix,
    a: &DichotomicObservable,
    b: &DichotomicObservable,
) -> Result<f64> {
    check_two_qubit(rho)?;
    rho.expectation(&a.matrix().kron(b.matrix()))
}
