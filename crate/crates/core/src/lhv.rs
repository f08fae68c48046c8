//! Local deterministic strategies and their mixtures.
//!
//! A hidden variable λ fixes all four outcomes at once, and each outcome
//! depends only on the local setting. There are 2⁴ = 16 such strategies;
//! every local model for the CHSH scenario is a mixture of them.

use serde::{Deserialize, Serialize};

use crate::chsh::Correlations;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

pub const STRATEGY_COUNT: usize = 16;

const WEIGHT_TOL: f64 = 1e-12;
const WEIGHT_SUM_TOL: f64 = 1e-10;

/// Deterministic outcome assignment `(a₁, a₂, b₁, b₂) ∈ {±1}⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LhvStrategy {
    a1: i8,
    a2: i8,
    b1: i8,
    b2: i8,
}

fn outcome(v: i8) -> Result<i8> {
    match v {
        1 | -1 => Ok(v),
        other => Err(Error::InvalidOutcome(other)),
    }
}

impl LhvStrategy {
    pub fn new(a1: i8, a2: i8, b1: i8, b2: i8) -> Result<Self> {
        Ok(Self {
            a1: outcome(a1)?,
            a2: outcome(a2)?,
            b1: outcome(b1)?,
            b2: outcome(b2)?,
        })
    }

    /// Strategy number `index` in the canonical order; bit 3 is a₁, bit 0 is
    /// b₂, and a set bit means −1.
    fn from_index(index: usize) -> Self {
        let bit = |k: usize| if index >> k & 1 == 1 { -1 } else { 1 };
        Self {
            a1: bit(3),
            a2: bit(2),
            b1: bit(1),
            b2: bit(0),
        }
    }

    pub fn outcomes(&self) -> [i8; 4] {
        [self.a1, self.a2, self.b1, self.b2]
    }

    /// `a₁b₁ + a₁b₂ + a₂b₁ − a₂b₂` in integer arithmetic.
    pub fn s_exact(&self) -> i32 {
        let (a1, a2, b1, b2) = (
            self.a1 as i32,
            self.a2 as i32,
            self.b1 as i32,
            self.b2 as i32,
        );
        a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2
    }

    /// Products `aᵢbⱼ` in the order (1,1), (1,2), (2,1), (2,2).
    pub fn products(&self) -> [i32; 4] {
        let [a1, a2, b1, b2] = self.outcomes().map(i32::from);
        [a1 * b1, a1 * b2, a2 * b1, a2 * b2]
    }
}

/// All 16 strategies, lexicographic in (a₁, a₂, b₁, b₂) with +1 before −1.
pub fn enumerate_strategies() -> Vec<LhvStrategy> {
    (0..STRATEGY_COUNT).map(LhvStrategy::from_index).collect()
}

pub fn strategy_s_value(st: &LhvStrategy) -> f64 {
    f64::from(st.s_exact())
}

/// Maximum of S over local deterministic strategies (exactly 2).
pub fn classical_max() -> f64 {
    let max = enumerate_strategies()
        .iter()
        .map(LhvStrategy::s_exact)
        .max()
        .expect("nonempty");
    f64::from(max)
}

/// Minimum of S over local deterministic strategies (exactly −2).
pub fn classical_min() -> f64 {
    let min = enumerate_strategies()
        .iter()
        .map(LhvStrategy::s_exact)
        .min()
        .expect("nonempty");
    f64::from(min)
}

/// Probability distribution over the 16 strategies, in enumeration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhvMixture {
    weights: [f64; STRATEGY_COUNT],
}

impl LhvMixture {
    pub fn new(weights: [f64; STRATEGY_COUNT]) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < -WEIGHT_TOL) {
            return Err(Error::InvalidMixture(format!("weight {w} is negative")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMixture(format!("weights sum to {sum}")));
        }
        Ok(Self { weights })
    }

    pub fn uniform() -> Self {
        Self {
            weights: [1.0 / STRATEGY_COUNT as f64; STRATEGY_COUNT],
        }
    }

    pub fn point_mass(index: usize) -> Self {
        let mut weights = [0.0; STRATEGY_COUNT];
        weights[index] = 1.0;
        Self { weights }
    }

    /// Weights drawn from a flat Dirichlet distribution.
    pub fn random(rng: &mut SplitMix64) -> Self {
        let mut weights = [0.0; STRATEGY_COUNT];
        for w in &mut weights {
            *w = -(1.0 - rng.next_f64()).ln();
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Self { weights }
    }

    pub fn weights(&self) -> &[f64; STRATEGY_COUNT] {
        &self.weights
    }
}

/// `Eᵢⱼ = Σ_λ w_λ aᵢ(λ) bⱼ(λ)`.
pub fn mixture_correlations(mix: &LhvMixture) -> Correlations {
    let mut e = [0.0; 4];
    for (w, st) in mix.weights.iter().zip(enumerate_strategies()) {
        for (acc, p) in e.iter_mut().zip(st.products()) {
            *acc += w * f64::from(p);
        }
    }
    Correlations::from_array(e)
}
