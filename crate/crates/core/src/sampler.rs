//! Seeded Monte Carlo Bell-test runs.
//!
//! Each setting pair draws i.i.d. joint outcomes by inverse-CDF over the
//! cells (+,+), (+,−), (−,+), (−,−) in that order. Pair `k` (A₁B₁, A₁B₂,
//! A₂B₁, A₂B₂ for k = 0..4) uses its own [`SplitMix64`] stream seeded with
//! [`derive_seed`]`(master, k)`, so the pairs can be sampled in parallel and
//! still reproduce bit for bit.

use serde::{Deserialize, Serialize};

use crate::chsh::{ChshScenario, Correlations};
use crate::error::{Error, Result};
use crate::quantum::{joint_distribution, DensityMatrix, DichotomicObservable};
use crate::rng::{derive_seed, SplitMix64};

/// Setting pairs in stream-derivation order.
pub const SETTING_PAIRS: [&str; 4] = ["A1B1", "A1B2", "A2B1", "A2B2"];

/// Joint outcome counts for one setting pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub pp: u64,
    pub pm: u64,
    pub mp: u64,
    pub mm: u64,
}

impl OutcomeCounts {
    pub fn total(&self) -> u64 {
        self.pp + self.pm + self.mp + self.mm
    }

    /// `(n₊₊ + n₋₋ − n₊₋ − n₋₊) / n`.
    pub fn correlation(&self) -> f64 {
        let agree = (self.pp + self.mm) as f64;
        let disagree = (self.pm + self.mp) as f64;
        (agree - disagree) / self.total() as f64
    }

    /// Observed frequency of +1 on party A.
    pub fn a_plus_frequency(&self) -> f64 {
        (self.pp + self.pm) as f64 / self.total() as f64
    }

    fn bump(&mut self, cell: usize) {
        match cell {
            0 => self.pp += 1,
            1 => self.pm += 1,
            2 => self.mp += 1,
            _ => self.mm += 1,
        }
    }
}

/// Draws `shots` joint outcomes of `(a, b)` on `rho`.
pub fn sample_pair(
    rho: &DensityMatrix,
    a: &DichotomicObservable,
    b: &DichotomicObservable,
    shots: u64,
    stream: &mut SplitMix64,
) -> Result<OutcomeCounts> {
    if shots == 0 {
        return Err(Error::InvalidShots(shots));
    }
    let dist = joint_distribution(rho, a, b)?;
    let cells = dist.cells().map(|p| p.max(0.0));
    let total: f64 = cells.iter().sum();
    let mut cdf = [0.0; 4];
    let mut acc = 0.0;
    for (c, p) in cdf.iter_mut().zip(cells) {
        acc += p / total;
        *c = acc;
    }
    // Rounding can leave cdf[3] a hair below 1; draws past it go to the last
    // cell with positive mass.
    let fallback = cells
        .iter()
        .rposition(|&p| p > 0.0)
        .expect("positive total");

    let mut counts = OutcomeCounts::default();
    for _ in 0..shots {
        let u = stream.next_f64();
        let cell = cdf.iter().position(|&c| u < c).unwrap_or(fallback);
        counts.bump(cell);
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub shots_per_pair: u64,
    pub seed: u64,
    pub scenario: ChshScenario,
}

impl RunConfig {
    pub fn new(shots_per_pair: u64, seed: u64, scenario: ChshScenario) -> Result<Self> {
        if shots_per_pair == 0 {
            return Err(Error::InvalidShots(shots_per_pair));
        }
        if scenario.state.is_none() {
            return Err(Error::MissingState);
        }
        Ok(Self {
            shots_per_pair,
            seed,
            scenario,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub shots_per_pair: u64,
    /// Indexed like [`SETTING_PAIRS`].
    pub counts: [OutcomeCounts; 4],
    pub e_hat: Correlations,
    pub s_hat: f64,
    pub s_stderr: f64,
    pub seed: u64,
}

/// Runs all four setting pairs, one thread per pair.
pub fn run_experiment(cfg: &RunConfig) -> Result<RunResult> {
    if cfg.shots_per_pair == 0 {
        return Err(Error::InvalidShots(cfg.shots_per_pair));
    }
    let sc = &cfg.scenario;
    let rho = sc.state.as_ref().ok_or(Error::MissingState)?;
    let pairs = [
        (&sc.a1, &sc.b1),
        (&sc.a1, &sc.b2),
        (&sc.a2, &sc.b1),
        (&sc.a2, &sc.b2),
    ];

    let results: Vec<Result<OutcomeCounts>> = std::thread::scope(|scope| {
        let handles: Vec<_> = pairs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                scope.spawn(move || {
                    let mut stream = SplitMix64::new(derive_seed(cfg.seed, k as u64));
                    sample_pair(rho, a, b, cfg.shots_per_pair, &mut stream)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampling thread panicked"))
            .collect()
    });

    let mut counts = [OutcomeCounts::default(); 4];
    for (slot, r) in counts.iter_mut().zip(results) {
        *slot = r?;
    }
    let e_hat = Correlations::from_array(counts.map(|c| c.correlation()));
    let n = cfg.shots_per_pair as f64;
    let variance: f64 = e_hat
        .as_array()
        .iter()
        .map(|e| ((1.0 - e * e) / n).max(0.0))
        .sum();
    Ok(RunResult {
        shots_per_pair: cfg.shots_per_pair,
        counts,
        e_hat,
        s_hat: e_hat.chsh(),
        s_stderr: variance.sqrt(),
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsh::s_value;
    use crate::linalg::Complex64;
    use crate::quantum::{bell_state, BellState, BlochVector};

    fn z() -> DichotomicObservable {
        DichotomicObservable::from_bloch(BlochVector::new(0.0, 0.0, 1.0).unwrap(), "z")
    }

    #[test]
    fn singlet_zz_never_agrees() {
        let rho = bell_state(BellState::PsiMinus);
        let mut stream = SplitMix64::new(99);
        let c = sample_pair(&rho, &z(), &z(), 50_000, &mut stream).unwrap();
        assert_eq!((c.pp, c.mm), (0, 0));
        assert_eq!(c.total(), 50_000);
    }

    #[test]
    fn deterministic_product_state() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let rho = DensityMatrix::from_pure(&[one, zero, zero, zero]).unwrap();
        let c = sample_pair(&rho, &z(), &z(), 1000, &mut SplitMix64::new(1)).unwrap();
        assert_eq!(c.pp, 1000);
    }

    #[test]
    fn repeatable_for_fixed_seed() {
        let rho = bell_state(BellState::PhiPlus);
        let x = DichotomicObservable::from_bloch(BlochVector::new(1.0, 0.0, 0.0).unwrap(), "x");
        let first = sample_pair(&rho, &z(), &x, 10_000, &mut SplitMix64::new(5)).unwrap();
        let second = sample_pair(&rho, &z(), &x, 10_000, &mut SplitMix64::new(5)).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn zero_shots_rejected() {
        let rho = bell_state(BellState::PsiMinus);
        assert_eq!(
            sample_pair(&rho, &z(), &z(), 0, &mut SplitMix64::new(0)),
            Err(Error::InvalidShots(0))
        );
        let sc = ChshScenario::tsirelson(Some(rho));
        assert_eq!(RunConfig::new(0, 1, sc), Err(Error::InvalidShots(0)));
        assert_eq!(
            RunConfig::new(10, 1, ChshScenario::tsirelson(None)),
            Err(Error::MissingState)
        );
    }

    #[test]
    fn run_is_bit_identical() {
        let sc = ChshScenario::tsirelson(Some(bell_state(BellState::PsiMinus)));
        let cfg = RunConfig::new(20_000, 42, sc).unwrap();
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.s_hat.to_bits(), b.s_hat.to_bits());
        for c in a.counts {
            assert_eq!(c.total(), 20_000);
        }
        assert_eq!(a.seed, 42);
    }

    #[test]
    fn run_tracks_exact_value() {
        let sc = ChshScenario::tsirelson(Some(bell_state(BellState::PsiMinus)));
        let exact = s_value(&sc).unwrap();
        let r = run_experiment(&RunConfig::new(100_000, 7, sc).unwrap()).unwrap();
        assert!((r.s_hat - exact).abs() <= 5.0 * r.s_stderr);
    }

    #[test]
    fn maximally_mixed_run_centers_on_zero() {
        let sc = ChshScenario::tsirelson(Some(DensityMatrix::maximally_mixed(4)));
        let r = run_experiment(&RunConfig::new(100_000, 3, sc).unwrap()).unwrap();
        assert!(r.s_hat.abs() <= 5.0 * r.s_stderr);
        assert!((r.s_stderr - (4.0 / 100_000.0_f64).sqrt()).abs() < 1e-3);
    }
}
