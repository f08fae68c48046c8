//! Planar settings, incompatibility sweeps, and the settings optimizer.
//!
//! Every observable here lies in the x–z plane: `cos θ·σ_z + sin θ·σ_x`.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chsh::{analyze, ChshScenario};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::optimize::{coordinate_ascent, normalize_angle, AscentOutcome};
use crate::quantum::{BlochVector, DensityMatrix};
use crate::rng::{derive_seed, SplitMix64};

/// Cycle cap for coordinate ascent.
pub const MAX_CYCLES: usize = 200;

/// Master seed for optimizer starting points.
pub const OPTIMIZER_SEED: u64 = 0x0C45_4A5E_ED00_0001;

/// Restarts and tolerance of the inner B-side search in sweeps.
const SWEEP_RESTARTS: usize = 4;
const SWEEP_TOL: f64 = 1e-13;

/// Angles (radians, in `[0, 2π)`) of a₁, a₂, b₁, b₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarSettings {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl PlanarSettings {
    /// Normalizes each angle into `[0, 2π)`.
    pub fn new(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Self {
        Self::from_array([alpha1, alpha2, beta1, beta2])
    }

    pub fn from_array(angles: [f64; 4]) -> Self {
        let [alpha1, alpha2, beta1, beta2] = angles.map(normalize_angle);
        Self {
            alpha1,
            alpha2,
            beta1,
            beta2,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.alpha1, self.alpha2, self.beta1, self.beta2]
    }
}

/// Builds the scenario with observables along `(sin θ, 0, cos θ)`.
pub fn settings_to_scenario(
    ps: &PlanarSettings,
    state: Option<DensityMatrix>,
) -> Result<ChshScenario> {
    let [a1, a2, b1, b2] = ps.as_array().map(BlochVector::planar);
    ChshScenario::from_bloch(a1, a2, b1, b2, state)
}

/// Fast S evaluation for planar settings, skipping scenario validation.
///
/// Uses `Tr(ρ M) = Σᵢⱼ ρᵢⱼ Mⱼᵢ` with the real 4×4 `M = A⊗B`.
struct PlanarObjective {
    rho: ComplexMatrix,
}

impl PlanarObjective {
    fn correlation(&self, alpha: f64, beta: f64) -> f64 {
        let a = [[alpha.cos(), alpha.sin()], [alpha.sin(), -alpha.cos()]];
        let b = [[beta.cos(), beta.sin()], [beta.sin(), -beta.cos()]];
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let m_ji = a[j / 2][i / 2] * b[j % 2][i % 2];
                acc += self.rho.get(i, j).re * m_ji;
            }
        }
        acc
    }

    fn s(&self, [a1, a2, b1, b2]: [f64; 4]) -> f64 {
        self.correlation(a1, b1) + self.correlation(a1, b2) + self.correlation(a2, b1)
            - self.correlation(a2, b2)
    }
}

/// Settings found by [`optimize_settings`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizedSettings {
    pub settings: PlanarSettings,
    pub s: f64,
    /// False when the best restart hit the cycle cap.
    pub converged: bool,
    pub cycles: usize,
}

fn restart_starts(count: usize, seed: u64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|r| {
            let mut rng = SplitMix64::new(derive_seed(seed, r as u64));
            (0..4)
                .map(|_| rng.uniform(0.0, std::f64::consts::TAU))
                .collect()
        })
        .collect()
}

/// Picks the highest value; exact ties go to the lexicographically smallest
/// angle tuple.
fn better<const N: usize>(a: &AscentOutcome<N>, b: &AscentOutcome<N>) -> bool {
    a.value > b.value
        || (a.value == b.value
            && a.point
                .iter()
                .zip(&b.point)
                .find(|(x, y)| x != y)
                .is_some_and(|(x, y)| x < y))
}

fn best_of<const N: usize>(outcomes: Vec<AscentOutcome<N>>) -> AscentOutcome<N> {
    let mut iter = outcomes.into_iter();
    let mut best = iter.next().expect("at least one restart");
    for o in iter {
        if better(&o, &best) {
            best = o;
        }
    }
    best
}

/// Coordinate ascent over all four angles maximizing S on `state`, best of
/// `restarts` deterministic starting points.
pub fn optimize_settings(
    state: &DensityMatrix,
    restarts: usize,
    tol: f64,
) -> Result<OptimizedSettings> {
    if restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be ≥ 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol must be > 0, got {tol}"
        )));
    }
    check_state(state)?;
    let objective = PlanarObjective {
        rho: state.matrix().clone(),
    };
    let outcomes: Vec<AscentOutcome<4>> = restart_starts(restarts, OPTIMIZER_SEED)
        .into_par_iter()
        .map(|start| {
            let start = [start[0], start[1], start[2], start[3]];
            coordinate_ascent(|p| objective.s(*p), start, tol, MAX_CYCLES)
        })
        .collect();
    let best = best_of(outcomes);
    Ok(OptimizedSettings {
        settings: PlanarSettings::from_array(best.point),
        s: best.value,
        converged: best.converged,
        cycles: best.cycles,
    })
}

fn check_state(state: &DensityMatrix) -> Result<()> {
    if state.dim() == 4 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            op: "two-qubit state",
            left: 4,
            right: state.dim(),
        })
    }
}

/// One point of an incompatibility sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Angle between a₁ and a₂.
    pub phi: f64,
    pub settings: PlanarSettings,
    pub comm_a_norm: f64,
    pub comm_b_norm: f64,
    /// `2‖C‖` at these settings.
    pub max_s: f64,
    /// S on the sweep state at these settings.
    pub s_singlet: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub phi_steps: usize,
    pub phi_start: f64,
    pub phi_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub grid: GridSpec,
    pub rows: Vec<SweepRow>,
    pub best: SweepRow,
}

/// `k`-th of `steps` evenly spaced points on `[0, π/2]`; both ends are exact.
pub fn grid_phi(k: usize, steps: usize) -> f64 {
    FRAC_PI_2 * (k as f64 / (steps - 1) as f64)
}

/// Sweeps the A-side angle φ over `[0, π/2]` with `a₁ = σ_z` and
/// `a₂ = cos φ·σ_z + sin φ·σ_x`. For each φ the B-side angles maximize S on
/// `state`; the row records both local commutator norms and `2‖C‖`.
pub fn incompatibility_sweep(phi_steps: usize, state: &DensityMatrix) -> Result<SweepResult> {
    if phi_steps < 2 {
        return Err(Error::DegenerateGrid(format!(
            "phi_steps must be ≥ 2, got {phi_steps}"
        )));
    }
    check_state(state)?;
    let objective = PlanarObjective {
        rho: state.matrix().clone(),
    };
    let starts = restart_starts(SWEEP_RESTARTS, OPTIMIZER_SEED ^ 0xB);

    let rows: Vec<SweepRow> = (0..phi_steps)
        .into_par_iter()
        .map(|k| {
            let phi = grid_phi(k, phi_steps);
            let outcomes = starts
                .iter()
                .map(|s| {
                    coordinate_ascent(
                        |b: &[f64; 2]| objective.s([0.0, phi, b[0], b[1]]),
                        [s[0], s[1]],
                        SWEEP_TOL,
                        MAX_CYCLES,
                    )
                })
                .collect();
            let best = best_of(outcomes);
            let settings = PlanarSettings::new(0.0, phi, best.point[0], best.point[1]);
            let sc = settings_to_scenario(&settings, Some(state.clone()))?;
            let report = analyze(&sc)?;
            Ok(SweepRow {
                phi,
                settings,
                comm_a_norm: report.comm_a_norm,
                comm_b_norm: report.comm_b_norm,
                max_s: report.max_s_over_states,
                s_singlet: report.s_value.expect("state present"),
            })
        })
        .collect::<Result<_>>()?;

    let mut best = rows[0].clone();
    for row in &rows[1..] {
        if row.max_s > best.max_s {
            best = row.clone();
        }
    }
    Ok(SweepResult {
        grid: GridSpec {
            phi_steps,
            phi_start: 0.0,
            phi_end: FRAC_PI_2,
        },
        rows,
        best,
    })
}
