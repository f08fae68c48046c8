//! Shared inputs for the criterion benches.

use chsh_core::{bell_state, BellState, ChshScenario, ComplexMatrix, SplitMix64};

/// Singlet with the Tsirelson settings.
pub fn tsirelson_singlet() -> ChshScenario {
    ChshScenario::tsirelson(Some(bell_state(BellState::PsiMinus)))
}

/// A fixed batch of random Hermitian matrices of size `n`.
pub fn hermitian_batch(n: usize, count: usize) -> Vec<ComplexMatrix> {
    let mut rng = SplitMix64::new(0xBE7C);
    (0..count)
        .map(|_| chsh_core::rng::random_hermitian(&mut rng, n))
        .collect()
}
