//! TOML scenario files.
//!
//! Observables come either as Bloch vectors:
//!
//! ```toml
//! [observables]
//! a1 = [0.0, 0.0, 1.0]
//! a2 = [1.0, 0.0, 0.0]
//! b1 = [0.7071067811865476, 0.0, 0.7071067811865476]
//! b2 = [-0.7071067811865476, 0.0, 0.7071067811865476]
//!
//! [state]
//! name = "singlet"
//! ```
//!
//! or as angles in the x–z plane (`[angles]`, direction `cos θ·ẑ + sin θ·x̂`).
//! The optional `[state]` table holds either `name` (a Bell state or
//! `"maximally_mixed"`) or `density`, sixteen `[re, im]` pairs in row-major
//! order.

use std::path::Path;

use chsh_core::linalg::Complex64;
use chsh_core::{
    bell_state, BellState, BlochVector, ChshScenario, ComplexMatrix, DensityMatrix, Error,
};
use serde::{Deserialize, Serialize};

use crate::failure::Failure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observables: Option<BlochSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<AngleSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochSet {
    pub a1: [f64; 3],
    pub a2: [f64; 3],
    pub b1: [f64; 3],
    pub b2: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleSet {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<[f64; 2]>>,
}

pub const MAXIMALLY_MIXED: &str = "maximally_mixed";

/// Every accepted state name, in display order.
pub fn state_names() -> Vec<&'static str> {
    let mut names: Vec<&str> = BellState::ALL.iter().map(|b| b.name()).collect();
    names.push("singlet");
    names.push(MAXIMALLY_MIXED);
    names
}

/// Resolves a state name; unknown names are a validation failure listing
/// the accepted ones.
pub fn named_state(name: &str) -> Result<DensityMatrix, Failure> {
    if name == MAXIMALLY_MIXED {
        return Ok(DensityMatrix::maximally_mixed(4));
    }
    name.parse::<BellState>().map(bell_state).map_err(|_| {
        Failure::validation(format!(
            "unknown state {name:?}; valid names: {}",
            state_names().join(", ")
        ))
    })
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|f| f.prefixed(&path.display().to_string()))
    }

    /// Parses the TOML text; syntax and schema errors carry line and column.
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Failure::parse(e.to_string()))?;
        match (&file.observables, &file.angles) {
            (Some(_), Some(_)) => Err(Failure::parse(
                "give either [observables] or [angles], not both",
            )),
            (None, None) => Err(Failure::parse("missing [observables] or [angles] table")),
            _ => Ok(file),
        }
    }

    pub fn to_scenario(&self) -> Result<ChshScenario, Failure> {
        let vectors = match (&self.observables, &self.angles) {
            (Some(o), None) => [
                bloch("observables.a1", o.a1)?,
                bloch("observables.a2", o.a2)?,
                bloch("observables.b1", o.b1)?,
                bloch("observables.b2", o.b2)?,
            ],
            (None, Some(a)) => [
                planar("angles.a1", a.a1)?,
                planar("angles.a2", a.a2)?,
                planar("angles.b1", a.b1)?,
                planar("angles.b2", a.b2)?,
            ],
            _ => {
                return Err(Failure::parse(
                    "need exactly one of [observables] or [angles]",
                ))
            }
        };
        let state = self.state.as_ref().map(StateSpec::to_density).transpose()?;
        let [a1, a2, b1, b2] = vectors;
        ChshScenario::from_bloch(a1, a2, b1, b2, state).map_err(Failure::from)
    }
}

impl StateSpec {
    pub fn to_density(&self) -> Result<DensityMatrix, Failure> {
        match (&self.name, &self.density) {
            (Some(name), None) => named_state(name),
            (None, Some(pairs)) => {
                if pairs.len() != 16 {
                    return Err(Failure::parse(format!(
                        "state.density: expected 16 [re, im] pairs, got {}",
                        pairs.len()
                    )));
                }
                let data = pairs
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                let m = ComplexMatrix::new(4, data).map_err(|e| field("state.density", e))?;
                DensityMatrix::new(m).map_err(|e| field("state.density", e))
            }
            (Some(_), Some(_)) => Err(Failure::parse(
                "state: give either name or density, not both",
            )),
            (None, None) => Err(Failure::parse("state: needs name or density")),
        }
    }
}

fn bloch(name: &str, [x, y, z]: [f64; 3]) -> Result<BlochVector, Failure> {
    BlochVector::new(x, y, z).map_err(|e| field(name, e))
}

fn planar(name: &str, theta: f64) -> Result<BlochVector, Failure> {
    if !theta.is_finite() {
        return Err(Failure::validation(format!("{name}: angle must be finite")));
    }
    Ok(BlochVector::planar(theta))
}

fn field(name: &str, e: Error) -> Failure {
    Failure::from(e).prefixed(name)
}
