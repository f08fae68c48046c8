//! Statistical behaviour of the Monte Carlo runner.

use chsh_core::{
    bell_state, run_experiment, s_value, BellState, ChshScenario, DensityMatrix, RunConfig,
    SplitMix64,
};

fn singlet_run(shots: u64, seed: u64) -> (f64, f64, f64) {
    let sc = ChshScenario::tsirelson(Some(bell_state(BellState::PsiMinus)));
    let exact = s_value(&sc).unwrap();
    let r = run_experiment(&RunConfig::new(shots, seed, sc).unwrap()).unwrap();
    (r.s_hat, r.s_stderr, exact)
}

#[test]
fn coverage_within_five_sigma() {
    let mut rng = SplitMix64::new(2024);
    let mut inside = 0;
    let seeds = 200;
    for _ in 0..seeds {
        let sc = ChshScenario::random(&mut rng)
            .with_state(DensityMatrix::random(&mut rng))
            .unwrap();
        let exact = s_value(&sc).unwrap();
        let r = run_experiment(&RunConfig::new(20_000, rng.next_u64(), sc).unwrap()).unwrap();
        // Pure states can give |E| = 1 exactly, where the stderr vanishes.
        if (r.s_hat - exact).abs() <= 5.0 * r.s_stderr + 1e-12 {
            inside += 1;
        }
    }
    assert!(inside as f64 >= 0.99 * seeds as f64, "{inside}/{seeds}");
}

#[test]
fn error_shrinks_with_shots() {
    let mut small = 0.0;
    let mut large = 0.0;
    for seed in 0..50 {
        let (s, _, exact) = singlet_run(10_000, seed);
        small += (s - exact).abs();
        let (s, _, exact) = singlet_run(1_000_000, seed);
        large += (s - exact).abs();
    }
    assert!(large < small, "mean error {large} at 1e6 vs {small} at 1e4");
}

#[test]
fn empirical_no_signaling() {
    let sc = ChshScenario::tsirelson(Some(bell_state(BellState::PsiMinus)));
    for seed in 0..10 {
        let r = run_experiment(&RunConfig::new(200_000, seed, sc.clone()).unwrap()).unwrap();
        let n = r.shots_per_pair as f64;
        // Party A's frequency for a1 from pair (a1,b1) vs (a1,b2), and for a2.
        for (i, j) in [(0, 1), (2, 3)] {
            let f1 = r.counts[i].a_plus_frequency();
            let f2 = r.counts[j].a_plus_frequency();
            let se = (f1 * (1.0 - f1) / n + f2 * (1.0 - f2) / n).sqrt();
            assert!((f1 - f2).abs() <= 5.0 * se, "seed {seed}: {f1} vs {f2}");
        }
    }
}

#[test]
fn result_serializes_losslessly() {
    let sc = ChshScenario::tsirelson(Some(bell_state(BellState::PsiMinus)));
    let r = run_experiment(&RunConfig::new(1000, 9, sc).unwrap()).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: chsh_core::RunResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}
