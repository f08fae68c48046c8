//! CHSH operator, its square identity, and the spectral violation test.
//!
//! For two-outcome observables `a₁, a₂` (party A) and `b₁, b₂` (party B),
//!
//! ```text
//! C  = ½[a₁⊗(b₁+b₂) + a₂⊗(b₁−b₂)]
//! C² = I − ¼·[a₁,a₂]⊗[b₁,b₂]
//! ```
//!
//! The sign of the commutator term is not assumed: [`verify_identity_sign`]
//! determines it by evaluating the residual of both conventions over random
//! scenarios, and the test suite pins [`COMMUTATOR_TERM_SIGN`] to that result.
//! Since `‖[x,y]‖ ≤ 2` for ±1-valued `x, y`, the identity gives
//! `‖C‖ ≤ √2`, and `‖C‖ ≤ 1` whenever either local commutator vanishes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, operator_norm, pauli, ComplexMatrix, I};
use crate::quantum::{correlation, BlochVector, DensityMatrix, DichotomicObservable};
use crate::rng::SplitMix64;

/// Tolerance above the classical value 2 before a violation is reported.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Residual below which the square identity counts as verified.
pub const IDENTITY_TOL: f64 = 1e-9;

const CROSS_PARTY_TOL: f64 = 1e-12;

/// Sign `s` in `C² = I + s·¼·[a₁,a₂]⊗[b₁,b₂]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentitySign {
    Plus,
    Minus,
}

impl IdentitySign {
    pub const BOTH: [IdentitySign; 2] = [IdentitySign::Plus, IdentitySign::Minus];

    pub fn value(self) -> f64 {
        match self {
            IdentitySign::Plus => 1.0,
            IdentitySign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            IdentitySign::Plus => '+',
            IdentitySign::Minus => '-',
        }
    }
}

impl fmt::Display for IdentitySign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Sign of the commutator term in the square identity, as established by
/// [`verify_identity_sign`].
pub const COMMUTATOR_TERM_SIGN: IdentitySign = IdentitySign::Minus;

/// Four two-outcome observables, optionally with a shared two-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct ChshScenario {
    pub a1: DichotomicObservable,
    pub a2: DichotomicObservable,
    pub b1: DichotomicObservable,
    pub b2: DichotomicObservable,
    pub state: Option<DensityMatrix>,
}

impl ChshScenario {
    pub fn new(
        a1: DichotomicObservable,
        a2: DichotomicObservable,
        b1: DichotomicObservable,
        b2: DichotomicObservable,
        state: Option<DensityMatrix>,
    ) -> Result<Self> {
        if let Some(rho) = &state {
            if rho.dim() != 4 {
                return Err(Error::DimensionMismatch {
                    op: "scenario state",
                    left: 4,
                    right: rho.dim(),
                });
            }
        }
        let id = pauli::identity();
        let mut worst: f64 = 0.0;
        for a in [&a1, &a2] {
            for b in [&b1, &b2] {
                let full_a = a.matrix().kron(&id);
                let full_b = id.kron(b.matrix());
                worst = worst.max(full_a.commutator(&full_b)?.frobenius_norm());
            }
        }
        if worst > CROSS_PARTY_TOL {
            return Err(Error::CrossPartyNoncommuting { residual: worst });
        }
        Ok(Self {
            a1: a1.with_label("A1"),
            a2: a2.with_label("A2"),
            b1: b1.with_label("B1"),
            b2: b2.with_label("B2"),
            state,
        })
    }

    /// Scenario from four Bloch directions.
    pub fn from_bloch(
        a1: BlochVector,
        a2: BlochVector,
        b1: BlochVector,
        b2: BlochVector,
        state: Option<DensityMatrix>,
    ) -> Result<Self> {
        Self::new(
            DichotomicObservable::from_bloch(a1, "A1"),
            DichotomicObservable::from_bloch(a2, "A2"),
            DichotomicObservable::from_bloch(b1, "B1"),
            DichotomicObservable::from_bloch(b2, "B2"),
            state,
        )
    }

    /// Settings that reach the Tsirelson value on the singlet:
    /// `a₁ = σ_z, a₂ = σ_x, b₁ = −(σ_z+σ_x)/√2, b₂ = (σ_x−σ_z)/√2`.
    pub fn tsirelson(state: Option<DensityMatrix>) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_bloch(
            BlochVector::new(0.0, 0.0, 1.0).expect("unit"),
            BlochVector::new(1.0, 0.0, 0.0).expect("unit"),
            BlochVector::normalized(-h, 0.0, -h).expect("unit"),
            BlochVector::normalized(h, 0.0, -h).expect("unit"),
            state,
        )
        .expect("valid settings")
    }

    /// Four independent uniformly random observables, no state.
    pub fn random(rng: &mut SplitMix64) -> Self {
        let [a1, a2, b1, b2] = [(); 4].map(|_| BlochVector::random(rng));
        Self::from_bloch(a1, a2, b1, b2, None).expect("valid settings")
    }

    pub fn with_state(mut self, state: DensityMatrix) -> Result<Self> {
        if state.dim() != 4 {
            return Err(Error::DimensionMismatch {
                op: "scenario state",
                left: 4,
                right: state.dim(),
            });
        }
        self.state = Some(state);
        Ok(self)
    }

    /// Observables in the order a₁, a₂, b₁, b₂.
    pub fn observables(&self) -> [&DichotomicObservable; 4] {
        [&self.a1, &self.a2, &self.b1, &self.b2]
    }

    /// `[a₁, a₂]` as a 2×2 matrix.
    pub fn comm_a(&self) -> ComplexMatrix {
        self.a1
            .matrix()
            .commutator(self.a2.matrix())
            .expect("2x2 observables")
    }

    /// `[b₁, b₂]` as a 2×2 matrix.
    pub fn comm_b(&self) -> ComplexMatrix {
        self.b1
            .matrix()
            .commutator(self.b2.matrix())
            .expect("2x2 observables")
    }
}

/// Correlations for the four setting pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlations {
    pub e11: f64,
    pub e12: f64,
    pub e21: f64,
    pub e22: f64,
}

impl Correlations {
    /// `E₁₁ + E₁₂ + E₂₁ − E₂₂`.
    pub fn chsh(&self) -> f64 {
        self.e11 + self.e12 + self.e21 - self.e22
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.e11, self.e12, self.e21, self.e22]
    }

    pub fn from_array([e11, e12, e21, e22]: [f64; 4]) -> Self {
        Self { e11, e12, e21, e22 }
    }
}

/// `C = ½[a₁⊗(b₁+b₂) + a₂⊗(b₁−b₂)]`, a 4×4 Hermitian matrix.
pub fn chsh_operator(sc: &ChshScenario) -> ComplexMatrix {
    let b_sum = sc.b1.matrix() + sc.b2.matrix();
    let b_diff = sc.b1.matrix() - sc.b2.matrix();
    let c = &sc.a1.matrix().kron(&b_sum) + &sc.a2.matrix().kron(&b_diff);
    c.scale_real(0.5)
}

/// `‖C² − (I + s·¼·[a₁,a₂]⊗[b₁,b₂])‖_F`.
pub fn chsh_square_identity_residual(sc: &ChshScenario, sign: IdentitySign) -> f64 {
    let c = chsh_operator(sc);
    let square = &c * &c;
    let term = sc
        .comm_a()
        .kron(&sc.comm_b())
        .scale_real(0.25 * sign.value());
    let rhs = &ComplexMatrix::identity(4) + &term;
    (&square - &rhs).frobenius_norm()
}

/// Outcome of the randomized sign check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub trials: usize,
    pub seed: u64,
    pub max_residual_plus: f64,
    pub max_residual_minus: f64,
}

impl IdentityCheck {
    pub fn max_residual(&self, sign: IdentitySign) -> f64 {
        match sign {
            IdentitySign::Plus => self.max_residual_plus,
            IdentitySign::Minus => self.max_residual_minus,
        }
    }

    /// Signs whose worst residual is within [`IDENTITY_TOL`].
    pub fn passing(&self) -> Vec<IdentitySign> {
        IdentitySign::BOTH
            .into_iter()
            .filter(|&s| self.max_residual(s) <= IDENTITY_TOL)
            .collect()
    }

    /// The unique passing sign, if exactly one passes.
    pub fn verified(&self) -> Option<IdentitySign> {
        match self.passing().as_slice() {
            [s] => Some(*s),
            _ => None,
        }
    }
}

/// Evaluates both sign conventions on the given scenarios.
pub fn check_identity_on<'a>(
    scenarios: impl IntoIterator<Item = &'a ChshScenario>,
    seed: u64,
) -> IdentityCheck {
    let mut check = IdentityCheck {
        trials: 0,
        seed,
        max_residual_plus: 0.0,
        max_residual_minus: 0.0,
    };
    for sc in scenarios {
        check.trials += 1;
        check.max_residual_plus = check
            .max_residual_plus
            .max(chsh_square_identity_residual(sc, IdentitySign::Plus));
        check.max_residual_minus = check
            .max_residual_minus
            .max(chsh_square_identity_residual(sc, IdentitySign::Minus));
    }
    check
}

/// Brute-force sign oracle over `trials` random scenarios drawn from `seed`.
pub fn verify_identity_sign(trials: usize, seed: u64) -> IdentityCheck {
    let mut rng = SplitMix64::new(seed);
    let scenarios: Vec<ChshScenario> = (0..trials)
        .map(|_| ChshScenario::random(&mut rng))
        .collect();
    check_identity_on(&scenarios, seed)
}

/// True iff `C² ≤ I`, i.e. no state can exceed |S| = 2.
pub fn check_state_independent_bound(sc: &ChshScenario) -> Result<bool> {
    Ok(operator_norm(&chsh_operator(sc))? <= 1.0 + VIOLATION_TOL)
}

/// `E₁₁ + E₁₂ + E₂₁ − E₂₂` on the scenario's state.
pub fn s_value(sc: &ChshScenario) -> Result<f64> {
    Ok(correlations(sc)?.chsh())
}

/// Quantum correlations `Tr(ρ aᵢ⊗bⱼ)` on the scenario's state.
pub fn correlations(sc: &ChshScenario) -> Result<Correlations> {
    let rho = sc.state.as_ref().ok_or(Error::MissingState)?;
    Ok(Correlations {
        e11: correlation(rho, &sc.a1, &sc.b1)?,
        e12: correlation(rho, &sc.a1, &sc.b2)?,
        e21: correlation(rho, &sc.a2, &sc.b1)?,
        e22: correlation(rho, &sc.a2, &sc.b2)?,
    })
}

/// Supremum of |S| over all two-qubit states, `2‖C‖`.
pub fn max_s_over_states(sc: &ChshScenario) -> Result<f64> {
    Ok(2.0 * operator_norm(&chsh_operator(sc))?)
}

/// A state attaining [`max_s_over_states`]: the eigenvector of `C` at its
/// top eigenvalue. The two-qubit CHSH spectrum is symmetric about zero, so
/// this gives `S = +2‖C‖`; the bottom eigenvector is used only if the top
/// one falls short of the norm.
pub fn optimal_state(sc: &ChshScenario) -> Result<DensityMatrix> {
    let eig = hermitian_eigen(&chsh_operator(sc))?;
    let top = eig.eigenvalues[0];
    let bottom = eig.eigenvalues[eig.eigenvalues.len() - 1];
    let k = if top + 1e-12 >= -bottom {
        0
    } else {
        eig.dominant_index()
    };
    DensityMatrix::from_pure(&eig.eigenvector(k))
}

/// Operator norm of the Hermitian matrix `i[x, y]`.
pub fn commutator_norm(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<f64> {
    operator_norm(&x.commutator(y)?.scale(I))
}

/// Full numerical summary of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshReport {
    /// S on the scenario's state, when one is given.
    pub s_value: Option<f64>,
    pub max_s_over_states: f64,
    pub chsh_operator_norm: f64,
    pub comm_a_norm: f64,
    pub comm_b_norm: f64,
    /// Residual of the square identity under [`COMMUTATOR_TERM_SIGN`].
    pub identity_residual: f64,
    pub identity_sign: IdentitySign,
    pub violates: bool,
}

pub fn analyze(sc: &ChshScenario) -> Result<ChshReport> {
    let norm = operator_norm(&chsh_operator(sc))?;
    let max_s = 2.0 * norm;
    let s = match sc.state {
        Some(_) => Some(s_value(sc)?),
        None => None,
    };
    Ok(ChshReport {
        s_value: s,
        max_s_over_states: max_s,
        chsh_operator_norm: norm,
        comm_a_norm: commutator_norm(sc.a1.matrix(), sc.a2.matrix())?,
        comm_b_norm: commutator_norm(sc.b1.matrix(), sc.b2.matrix())?,
        identity_residual: chsh_square_identity_residual(sc, COMMUTATOR_TERM_SIGN),
        identity_sign: COMMUTATOR_TERM_SIGN,
        violates: max_s > 2.0 + VIOLATION_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{bell_state, BellState};
    use std::f64::consts::SQRT_2;

    fn z() -> BlochVector {
        BlochVector::new(0.0, 0.0, 1.0).unwrap()
    }

    fn all_z() -> ChshScenario {
        ChshScenario::from_bloch(z(), z(), z(), z(), None).unwrap()
    }

    fn singlet_tsirelson() -> ChshScenario {
        ChshScenario::tsirelson(Some(bell_state(BellState::PsiMinus)))
    }

    #[test]
    fn degenerate_settings_collapse() {
        let sc = all_z();
        let c = chsh_operator(&sc);
        assert_eq!(c, pauli::z().kron(&pauli::z()));
        assert_eq!(operator_norm(&c).unwrap(), 1.0);
    }

    #[test]
    fn equal_b_settings_give_product() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..20 {
            let b = BlochVector::random(&mut rng);
            let sc = ChshScenario::from_bloch(
                BlochVector::random(&mut rng),
                BlochVector::random(&mut rng),
                b,
                b,
                None,
            )
            .unwrap();
            let expected = sc.a1.matrix().kron(sc.b1.matrix());
            assert!((&chsh_operator(&sc) - &expected).frobenius_norm() < 1e-15);
            assert!((operator_norm(&expected).unwrap() - 1.0).abs() < 1e-12);
            assert!(check_state_independent_bound(&sc).unwrap());
        }
    }

    #[test]
    fn tsirelson_operator_norm() {
        let c = chsh_operator(&singlet_tsirelson());
        assert!(c.is_hermitian());
        assert!((operator_norm(&c).unwrap() - SQRT_2).abs() <= 1e-10);
        assert!(!check_state_independent_bound(&singlet_tsirelson()).unwrap());
    }

    #[test]
    fn identity_sign_is_pinned() {
        let check = verify_identity_sign(1000, 0x5EED);
        assert_eq!(check.verified(), Some(COMMUTATOR_TERM_SIGN));
        assert!(check.max_residual(COMMUTATOR_TERM_SIGN) <= IDENTITY_TOL);
        assert!(check.max_residual(IdentitySign::Plus) > 1e-3);
    }

    #[test]
    fn identity_at_tsirelson_settings() {
        let sc = singlet_tsirelson();
        let plus = chsh_square_identity_residual(&sc, IdentitySign::Plus);
        let minus = chsh_square_identity_residual(&sc, IdentitySign::Minus);
        assert!(minus <= 1e-10);
        assert!(plus > 1e-10);
    }

    #[test]
    fn identity_signs_agree_when_a_side_compatible() {
        let mut rng = SplitMix64::new(2);
        for _ in 0..100 {
            let a = BlochVector::random(&mut rng);
            let sc = ChshScenario::from_bloch(
                a,
                a,
                BlochVector::random(&mut rng),
                BlochVector::random(&mut rng),
                None,
            )
            .unwrap();
            let plus = chsh_square_identity_residual(&sc, IdentitySign::Plus);
            let minus = chsh_square_identity_residual(&sc, IdentitySign::Minus);
            assert_eq!(plus, minus);
            assert!(plus <= 1e-10);
        }
    }

    #[test]
    fn s_value_on_singlet_tsirelson() {
        let sc = singlet_tsirelson();
        let e = correlations(&sc).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (got, want) in e.as_array().into_iter().zip([h, h, h, -h]) {
            assert!((got - want).abs() <= 1e-12);
        }
        let s = s_value(&sc).unwrap();
        assert!((s - 2.0 * SQRT_2).abs() <= 1e-9);
        let rho = sc.state.as_ref().unwrap();
        let two_tr = 2.0 * rho.expectation(&chsh_operator(&sc)).unwrap();
        assert!((s - two_tr).abs() <= 1e-10);
    }

    #[test]
    fn s_value_requires_state() {
        assert_eq!(s_value(&all_z()), Err(Error::MissingState));
    }

    #[test]
    fn s_value_on_maximally_mixed_vanishes() {
        let sc = ChshScenario::tsirelson(Some(DensityMatrix::maximally_mixed(4)));
        assert!(s_value(&sc).unwrap().abs() < 1e-15);
    }

    #[test]
    fn product_states_obey_classical_bound() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..1000 {
            let sc = ChshScenario::random(&mut rng)
                .with_state(DensityMatrix::random_product(&mut rng))
                .unwrap();
            assert!(s_value(&sc).unwrap().abs() <= 2.0 + 1e-9);
        }
    }

    #[test]
    fn max_s_cases() {
        assert!((max_s_over_states(&singlet_tsirelson()).unwrap() - 2.0 * SQRT_2).abs() <= 1e-9);
        assert_eq!(max_s_over_states(&all_z()).unwrap(), 2.0);
    }

    #[test]
    fn optimal_state_attains_max() {
        let mut rng = SplitMix64::new(4);
        for _ in 0..200 {
            let sc = ChshScenario::random(&mut rng);
            let max_s = max_s_over_states(&sc).unwrap();
            let rho = optimal_state(&sc).unwrap();
            let s = s_value(&sc.clone().with_state(rho).unwrap()).unwrap();
            assert!((s - max_s).abs() <= 1e-9, "{s} vs {max_s}");
        }
    }

    #[test]
    fn analyze_tsirelson() {
        let r = analyze(&singlet_tsirelson()).unwrap();
        assert!((r.comm_a_norm - 2.0).abs() < 1e-12);
        assert!((r.comm_b_norm - 2.0).abs() < 1e-12);
        assert!((r.max_s_over_states - 2.0 * SQRT_2).abs() <= 1e-9);
        assert!((r.chsh_operator_norm - SQRT_2).abs() <= 1e-10);
        assert!(r.violates);
        assert!(r.identity_residual <= 1e-10);
        assert!((r.s_value.unwrap() - 2.0 * SQRT_2).abs() <= 1e-9);
    }

    #[test]
    fn analyze_compatible_a_side() {
        let mut rng = SplitMix64::new(5);
        let a = BlochVector::random(&mut rng);
        let sc = ChshScenario::from_bloch(
            a,
            a,
            BlochVector::random(&mut rng),
            BlochVector::random(&mut rng),
            None,
        )
        .unwrap();
        let r = analyze(&sc).unwrap();
        assert_eq!(r.comm_a_norm, 0.0);
        assert!(!r.violates);
        assert_eq!(r.s_value, None);
    }

    #[test]
    fn analyze_all_z() {
        let r = analyze(&all_z()).unwrap();
        assert_eq!((r.comm_a_norm, r.comm_b_norm), (0.0, 0.0));
        assert_eq!(r.max_s_over_states, 2.0);
        assert!(!r.violates);
    }

    #[test]
    fn scenario_rejects_wrong_state_dimension() {
        let err = all_z()
            .with_state(DensityMatrix::maximally_mixed(2))
            .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }
}
