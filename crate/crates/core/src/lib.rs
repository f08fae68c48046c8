//! CHSH analysis for two qubits.
//!
//! The crate builds CHSH operators from four ±1-valued observables, checks
//! the operator identity `C² = I − ¼[a₁,a₂]⊗[b₁,b₂]`, decides violation
//! spectrally through `‖C‖`, simulates Bell-test runs, and enumerates the
//! local deterministic strategies that bound |S| by 2 classically.
//!
//! Modules, bottom-up:
//!
//! - [`linalg`]: dense complex matrices, Kronecker products, Jacobi eigensolver
//! - [`quantum`]: observables, density matrices, Bell states, Born-rule statistics
//! - [`chsh`]: CHSH operator, square identity, spectral bound, reports
//! - [`lhv`]: local hidden-variable strategies and mixtures
//! - [`sampler`]: seeded Monte Carlo runs
//! - [`sweep`]: planar settings, incompatibility sweeps, settings optimizer

#![forbid(unsafe_code)]

pub mod chsh;
pub mod error;
pub mod lhv;
pub mod linalg;
pub mod optimize;
pub mod quantum;
pub mod rng;
pub mod sampler;
pub mod sweep;

pub use chsh::{
    analyze, check_state_independent_bound, chsh_operator, chsh_square_identity_residual,
    max_s_over_states, s_value, verify_identity_sign, ChshReport, ChshScenario, Correlations,
    IdentityCheck, IdentitySign, COMMUTATOR_TERM_SIGN,
};
pub use error::{Error, Result};
pub use lhv::{classical_max, enumerate_strategies, mixture_correlations, LhvMixture, LhvStrategy};
pub use linalg::{hermitian_eigen, operator_norm, Complex64, ComplexMatrix, EigenDecomposition};
pub use quantum::{
    bell_state, correlation, joint_distribution, observable_from_bloch, projectors, BellState,
    BlochVector, DensityMatrix, DichotomicObservable, JointOutcomeDistribution,
};
pub use rng::SplitMix64;
pub use sampler::{run_experiment, sample_pair, OutcomeCounts, RunConfig, RunResult};
pub use sweep::{
    incompatibility_sweep, optimize_settings, settings_to_scenario, OptimizedSettings,
    PlanarSettings, SweepResult, SweepRow,
};
