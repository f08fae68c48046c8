use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use chsh_core::chsh::check_identity_on;
use chsh_core::lhv::classical_min;
use chsh_core::sampler::SETTING_PAIRS;
use chsh_core::{
    analyze, classical_max, enumerate_strategies, incompatibility_sweep, run_experiment, s_value,
    verify_identity_sign, BlochVector, ChshScenario, IdentitySign, RunConfig, SplitMix64,
    COMMUTATOR_TERM_SIGN,
};
use clap::{Parser, Subcommand, ValueEnum};

use crate::failure::{ExitCode, Failure};
use crate::report::*;
use crate::scenario::{named_state, ScenarioFile};

#[derive(Debug, Parser)]
#[command(
    name = "chsh",
    version,
    about = "CHSH operator analysis and Bell-test simulation"
)]
pub struct Cli {
    /// Write the machine-readable report here ("-" for stdout).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Exit with code 3 if the analyzed scenario violates |S| ≤ 2.
    #[arg(long, global = true)]
    pub expect_no_violation: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral analysis of a scenario file.
    Analyze { scenario: PathBuf },
    /// Randomized check of both sign conventions of the C² identity.
    CheckIdentity {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Force a₂ = a₁ in every trial.
        #[arg(long)]
        degenerate: bool,
    },
    /// Monte Carlo Bell test on a scenario file with a state.
    Simulate {
        scenario: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
    },
    /// Incompatibility sweep of the A-side angle over [0, π/2].
    Sweep {
        #[arg(long, default_value_t = 19)]
        phi_steps: usize,
        #[arg(long, default_value = "singlet")]
        state: String,
    },
    /// Enumerate the 16 local deterministic strategies.
    Lhv,
}

/// What a command produced: a report for `--output`, a human summary, and
/// the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: String,
    pub summary: String,
    pub code: ExitCode,
}

impl Outcome {
    fn ok(report: String, summary: String) -> Self {
        Self {
            report,
            summary,
            code: ExitCode::Success,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Sweep { .. } | Command::Lhv) {
        return Err(Failure::parse(
            "--format csv is only available for sweep and lhv",
        ));
    }
    match &cli.command {
        Command::Analyze { scenario } => cmd_analyze(scenario, cli.expect_no_violation),
        Command::CheckIdentity { trials, degenerate } => {
            cmd_check_identity(*trials, cli.seed, *degenerate)
        }
        Command::Simulate { scenario, shots } => cmd_simulate(scenario, *shots, cli.seed),
        Command::Sweep { phi_steps, state } => cmd_sweep(*phi_steps, state, cli.format),
        Command::Lhv => Ok(cmd_lhv(cli.format)),
    }
}

pub fn cmd_analyze(path: &Path, expect_no_violation: bool) -> Result<Outcome, Failure> {
    let file = ScenarioFile::load(path)?;
    let sc = file.to_scenario()?;
    let report = analyze(&sc)?;

    let mut s = String::new();
    if let Some(v) = report.s_value {
        writeln!(s, "S on state          {v:.10}").unwrap();
    }
    writeln!(s, "max S over states   {:.10}", report.max_s_over_states).unwrap();
    writeln!(s, "‖C‖                 {:.10}", report.chsh_operator_norm).unwrap();
    writeln!(s, "‖i[a1,a2]‖          {:.10}", report.comm_a_norm).unwrap();
    writeln!(s, "‖i[b1,b2]‖          {:.10}", report.comm_b_norm).unwrap();
    writeln!(s, "identity residual   {:.3e}", report.identity_residual).unwrap();
    writeln!(s, "violates            {}", report.violates).unwrap();

    let code = if expect_no_violation && report.violates {
        writeln!(s, "expected no violation, but max S exceeds 2").unwrap();
        ExitCode::Expectation
    } else {
        ExitCode::Success
    };
    let text = AnalyzeReport::new("analyze", AnalyzeInput { scenario: file }, report).to_json();
    Ok(Outcome {
        report: text,
        summary: s,
        code,
    })
}

pub fn cmd_check_identity(trials: usize, seed: u64, degenerate: bool) -> Result<Outcome, Failure> {
    if trials == 0 {
        return Err(Failure::validation("trials must be ≥ 1"));
    }
    let check = if degenerate {
        let mut rng = SplitMix64::new(seed);
        let scenarios: Vec<ChshScenario> = (0..trials)
            .map(|_| {
                let a = BlochVector::random(&mut rng);
                let b1 = BlochVector::random(&mut rng);
                let b2 = BlochVector::random(&mut rng);
                ChshScenario::from_bloch(a, a, b1, b2, None).expect("unit vectors")
            })
            .collect();
        check_identity_on(&scenarios, seed)
    } else {
        verify_identity_sign(trials, seed)
    };
    let result = IdentityResult {
        check,
        passing: check.passing(),
        verified: check.verified(),
    };

    let mut s = String::new();
    for sign in IdentitySign::BOTH {
        writeln!(
            s,
            "C² = I {} ¼[a1,a2]⊗[b1,b2]: max residual {:.3e} over {} trials",
            sign.symbol(),
            check.max_residual(sign),
            check.trials
        )
        .unwrap();
    }
    let code = match (result.verified, result.passing.len()) {
        (Some(sign), _) => {
            writeln!(s, "verified sign: {}", sign.symbol()).unwrap();
            if sign != IdentitySign::Plus {
                writeln!(
                    s,
                    "note: the verified sign is \"{}\", not the \"+\" of the commonly printed form",
                    sign.symbol()
                )
                .unwrap();
            }
            ExitCode::Success
        }
        (None, 0) => {
            writeln!(
                s,
                "neither sign verifies; expected {}",
                COMMUTATOR_TERM_SIGN.symbol()
            )
            .unwrap();
            ExitCode::Verification
        }
        (None, _) => {
            writeln!(
                s,
                "both signs pass: the commutator term vanishes on these inputs"
            )
            .unwrap();
            ExitCode::Success
        }
    };
    let input = IdentityInput {
        trials,
        seed,
        degenerate,
    };
    Ok(Outcome {
        report: IdentityReport::new("check-identity", input, result).to_json(),
        summary: s,
        code,
    })
}

pub fn cmd_simulate(path: &Path, shots: u64, seed: u64) -> Result<Outcome, Failure> {
    let file = ScenarioFile::load(path)?;
    let sc = file.to_scenario()?;
    let cfg = RunConfig::new(shots, seed, sc)?;
    let exact = s_value(&cfg.scenario)?;
    let run = run_experiment(&cfg)?;

    let mut s = String::new();
    for (pair, (counts, e)) in SETTING_PAIRS
        .iter()
        .zip(run.counts.iter().zip(run.e_hat.as_array()))
    {
        writeln!(
            s,
            "{pair}  ++ {:>9}  +- {:>9}  -+ {:>9}  -- {:>9}  E {e:+.6}",
            counts.pp, counts.pm, counts.mp, counts.mm
        )
        .unwrap();
    }
    writeln!(
        s,
        "S estimate {:+.6} ± {:.6}   exact {exact:+.10}",
        run.s_hat, run.s_stderr
    )
    .unwrap();

    let input = SimulateInput {
        scenario: file,
        shots_per_pair: shots,
        seed,
    };
    let result = SimulateResult {
        run,
        s_exact: exact,
    };
    Ok(Outcome::ok(
        SimulateReport::new("simulate", input, result).to_json(),
        s,
    ))
}

pub fn cmd_sweep(phi_steps: usize, state: &str, format: Format) -> Result<Outcome, Failure> {
    let rho = named_state(state)?;
    let result = incompatibility_sweep(phi_steps, &rho)?;

    let mut s = String::new();
    writeln!(
        s,
        "{:>12} {:>12} {:>12} {:>12} {:>12}",
        "phi", "comm_a", "comm_b", "max_s", "s_state"
    )
    .unwrap();
    for r in &result.rows {
        writeln!(
            s,
            "{:>12.8} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
            r.phi, r.comm_a_norm, r.comm_b_norm, r.max_s, r.s_singlet
        )
        .unwrap();
    }
    writeln!(
        s,
        "best max_s {:.10} at phi {:.10}",
        result.best.max_s, result.best.phi
    )
    .unwrap();

    let report = match format {
        Format::Csv => sweep_csv(&result),
        Format::Json => {
            let input = SweepInput {
                phi_steps,
                state: state.to_string(),
            };
            SweepReport::new("sweep", input, result).to_json()
        }
    };
    Ok(Outcome::ok(report, s))
}

pub fn cmd_lhv(format: Format) -> Outcome {
    let result = LhvResult {
        strategies: enumerate_strategies().iter().map(LhvRow::from).collect(),
        classical_max: classical_max(),
        classical_min: classical_min(),
    };

    let mut s = String::new();
    writeln!(s, "  # a1 a2 b1 b2   S").unwrap();
    for (k, r) in result.strategies.iter().enumerate() {
        writeln!(
            s,
            "{k:>3} {:>2} {:>2} {:>2} {:>2} {:>3}",
            r.a1, r.a2, r.b1, r.b2, r.s
        )
        .unwrap();
    }
    writeln!(s, "classical max {}", result.classical_max).unwrap();
    writeln!(s, "classical min {}", result.classical_min).unwrap();

    let report = match format {
        Format::Csv => lhv_csv(&result),
        Format::Json => LhvReport::new("lhv", LhvInput {}, result).to_json(),
    };
    Outcome::ok(report, s)
}
