//! Machine-readable report files.
//!
//! Every JSON report has the same envelope: tool name, tool version, the
//! command that produced it, a full echo of the inputs, and the result.
//! Floats are written in shortest round-trip form, so reading a report back
//! reproduces the values bit for bit.

use chsh_core::{ChshReport, IdentityCheck, IdentitySign, LhvStrategy, RunResult, SweepResult};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::failure::Failure;
use crate::scenario::ScenarioFile;

pub const TOOL: &str = "chsh";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile<I, R> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input: I,
    pub report: R,
}

impl<I: Serialize, R: Serialize> ReportFile<I, R> {
    pub fn new(command: &str, input: I, report: R) -> Self {
        Self {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: command.to_string(),
            input,
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report types serialize");
        text.push('\n');
        text
    }
}

impl<I: DeserializeOwned, R: DeserializeOwned> ReportFile<I, R> {
    pub fn from_json(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| Failure::parse(format!("report: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeInput {
    pub scenario: ScenarioFile,
}

pub type AnalyzeReport = ReportFile<AnalyzeInput, ChshReport>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityInput {
    pub trials: usize,
    pub seed: u64,
    /// Whether a₂ was forced equal to a₁.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub check: IdentityCheck,
    pub passing: Vec<IdentitySign>,
    pub verified: Option<IdentitySign>,
}

pub type IdentityReport = ReportFile<IdentityInput, IdentityResult>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateInput {
    pub scenario: ScenarioFile,
    pub shots_per_pair: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateResult {
    pub run: RunResult,
    /// Exact S on the same scenario, for comparison with `run.s_hat`.
    pub s_exact: f64,
}

pub type SimulateReport = ReportFile<SimulateInput, SimulateResult>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepInput {
    pub phi_steps: usize,
    pub state: String,
}

pub type SweepReport = ReportFile<SweepInput, SweepResult>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhvInput {}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LhvRow {
    pub a1: i8,
    pub a2: i8,
    pub b1: i8,
    pub b2: i8,
    pub s: i32,
}

impl From<&LhvStrategy> for LhvRow {
    fn from(st: &LhvStrategy) -> Self {
        let [a1, a2, b1, b2] = st.outcomes();
        Self {
            a1,
            a2,
            b1,
            b2,
            s: st.s_exact(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhvResult {
    pub strategies: Vec<LhvRow>,
    pub classical_max: f64,
    pub classical_min: f64,
}

pub type LhvReport = ReportFile<LhvInput, LhvResult>;

/// One line of the sweep CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCsvRow {
    pub phi: f64,
    pub comm_a_norm: f64,
    pub comm_b_norm: f64,
    pub max_s: f64,
    pub s_singlet: f64,
}

fn csv_text<T: Serialize>(rows: impl IntoIterator<Item = T>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("flat rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

pub fn sweep_csv(result: &SweepResult) -> String {
    csv_text(result.rows.iter().map(|r| SweepCsvRow {
        phi: r.phi,
        comm_a_norm: r.comm_a_norm,
        comm_b_norm: r.comm_b_norm,
        max_s: r.max_s,
        s_singlet: r.s_singlet,
    }))
}

pub fn lhv_csv(result: &LhvResult) -> String {
    csv_text(result.strategies.iter().copied())
}

pub fn read_csv<T: DeserializeOwned>(text: &str) -> Result<Vec<T>, Failure> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::parse(format!("csv: {e}")))
}
