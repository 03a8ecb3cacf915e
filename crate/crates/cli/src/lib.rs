//! Command implementations behind the `hyperspectra` binary.
//!
//! Each command returns an [`Output`] instead of printing, so the binary is a
//! thin shell around this crate.

pub mod args;
pub mod config;
pub mod error;
pub mod render;
pub mod suite;

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use hyperspectra::bounds::{full_report, BoundReport};
use hyperspectra::hypergraph::write_uhg;
use hyperspectra::spectral::spectral_radius;
use hyperspectra::{SolverOptions, SpectralEstimate, TensorKind};
use serde::{Deserialize, Serialize};

pub use config::{GenSpec, OutputFormat, RunConfig, Source, WeightSpec};
pub use error::CliError;
pub use suite::{Family, SuiteConfig, SuiteSummary};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Violation = 1,
    Input = 2,
    Numeric = 3,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

impl From<&CliError> for Status {
    fn from(_: &CliError) -> Self {
        Status::Input
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub status: Status,
}

/// JSON wrapper shared by every reporting command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub command: String,
    pub source: Source,
    pub seed: Option<u64>,
    pub options: SolverOptions,
    pub weights: Vec<String>,
    /// Seconds since the Unix epoch; omitted with `--no-timestamp`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub result: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub estimate: Option<SpectralEstimate>,
    pub error: Option<String>,
}

impl SolveOutcome {
    fn ok(&self) -> bool {
        self.estimate.as_ref().is_some_and(|e| e.converged)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralOutput {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub connected: bool,
    pub adjacency: SolveOutcome,
    pub signless_laplacian: SolveOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub passed: bool,
    pub failures: Vec<String>,
    pub report: BoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenOutput {
    pub generator: String,
    pub seed: Option<u64>,
    pub k: usize,
    pub n: usize,
    pub m: usize,
}

fn now() -> Option<u64> {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .ok()
        .map(|d| d.as_secs())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn envelope<T>(cfg: &RunConfig, command: &str, options: SolverOptions, result: T) -> Envelope<T> {
    Envelope {
        command: command.into(),
        source: cfg.source.clone(),
        seed: cfg.seed,
        options,
        weights: cfg.weights.iter().map(WeightSpec::label).collect(),
        timestamp: if cfg.timestamp { now() } else { None },
        result,
    }
}

pub fn cmd_gen(
    spec: &str,
    seed: Option<u64>,
    out: Option<&Path>,
    json: bool,
) -> Result<Output, CliError> {
    let spec: GenSpec = spec.parse()?;
    let h = spec.generate(seed)?;
    let text = write_uhg(&h);
    let summary = GenOutput {
        generator: spec.to_string(),
        seed: if spec.needs_seed() { seed } else { None },
        k: h.k(),
        n: h.n(),
        m: h.m(),
    };
    let line = if json {
        to_json(&summary)?
    } else {
        format!("{spec}: n={} m={} k={}\n", h.n(), h.m(), h.k())
    };
    let (stdout, stderr) = match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            (line, String::new())
        }
        // The file goes to stdout, so the summary moves out of its way.
        None => (text, line),
    };
    Ok(Output {
        stdout,
        stderr,
        status: Status::Success,
    })
}

pub fn cmd_spectral(cfg: &RunConfig) -> Result<Output, CliError> {
    let options = cfg.solver_options()?;
    let h = cfg.load()?;
    let solve = |kind| match spectral_radius(&h, kind, &options) {
        Ok(est) => SolveOutcome {
            estimate: Some(est),
            error: None,
        },
        Err(e) => SolveOutcome {
            estimate: None,
            error: Some(e.to_string()),
        },
    };
    let result = SpectralOutput {
        k: h.k(),
        n: h.n(),
        m: h.m(),
        connected: h.is_connected(),
        adjacency: solve(TensorKind::Adjacency),
        signless_laplacian: solve(TensorKind::SignlessLaplacian),
    };
    let mut stderr = String::new();
    for (kind, s) in [
        (TensorKind::Adjacency, &result.adjacency),
        (TensorKind::SignlessLaplacian, &result.signless_laplacian),
    ] {
        if let Some(e) = &s.error {
            stderr.push_str(&format!("{kind}: {e}\n"));
        } else if !s.ok() {
            stderr.push_str(&format!("{kind}: did not converge\n"));
        }
    }
    let status = if result.adjacency.ok() && result.signless_laplacian.ok() {
        Status::Success
    } else {
        Status::Numeric
    };
    let stdout = match cfg.format {
        OutputFormat::Json => to_json(&envelope(cfg, "spectral", options, result))?,
        OutputFormat::Table => render::spectral(&result),
    };
    Ok(Output {
        stdout,
        stderr,
        status,
    })
}

fn report(cfg: &RunConfig) -> Result<(SolverOptions, BoundReport), CliError> {
    let options = cfg.solver_options()?;
    let h = cfg.load()?;
    let choices = cfg.weight_choices(h.n())?;
    Ok((options, full_report(&h, &options, &choices)))
}

fn numeric_failures(r: &BoundReport) -> Vec<String> {
    let mut out: Vec<String> = r
        .spectral_failures
        .iter()
        .map(|f| format!("solver: {f}"))
        .collect();
    for (kind, est) in [
        (TensorKind::Adjacency, &r.spectral_adj),
        (TensorKind::SignlessLaplacian, &r.spectral_q),
    ] {
        if let Some(est) = est.as_ref().filter(|e| !e.converged) {
            out.push(format!(
                "solver: {kind}: no convergence after {} iterations, bracket [{}, {}]",
                est.iterations, est.lo, est.hi
            ));
        }
    }
    out
}

/// Reports every bound. Fails only on input errors and numeric failure.
pub fn cmd_bounds(cfg: &RunConfig) -> Result<Output, CliError> {
    let (options, r) = report(cfg)?;
    let failures = numeric_failures(&r);
    let status = if failures.is_empty() {
        Status::Success
    } else {
        Status::Numeric
    };
    let stderr = failures.iter().map(|f| format!("{f}\n")).collect();
    let stdout = match cfg.format {
        OutputFormat::Json => to_json(&envelope(cfg, "bounds", options, r))?,
        OutputFormat::Table => render::bounds(&r),
    };
    Ok(Output {
        stdout,
        stderr,
        status,
    })
}

/// Like [`cmd_bounds`], but every gating check must hold. A violated bound
/// takes precedence over a numeric failure in the exit status.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Output, CliError> {
    let (options, r) = report(cfg)?;
    let violations: Vec<String> = r
        .violations()
        .map(|c| format!("violated {}", c.detail))
        .collect();
    let numeric = numeric_failures(&r);
    let status = if !violations.is_empty() {
        Status::Violation
    } else if !numeric.is_empty() {
        Status::Numeric
    } else {
        Status::Success
    };
    let failures: Vec<String> = violations.into_iter().chain(numeric).collect();
    let stderr = failures.iter().map(|f| format!("{f}\n")).collect();
    let stdout = match cfg.format {
        OutputFormat::Json => {
            let result = VerifyOutput {
                passed: status == Status::Success,
                failures,
                report: r,
            };
            to_json(&envelope(cfg, "verify", options, result))?
        }
        OutputFormat::Table => {
            let mut s = render::bounds(&r);
            s.push_str(&render::checks(&r));
            s.push_str(if status == Status::Success {
                "PASS\n"
            } else {
                "FAIL\n"
            });
            s
        }
    };
    Ok(Output {
        stdout,
        stderr,
        status,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteEnvelope {
    pub command: String,
    pub options: SolverOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub result: SuiteSummary,
}

pub fn cmd_suite(
    cfg: &SuiteConfig,
    format: OutputFormat,
    timestamp: bool,
) -> Result<Output, CliError> {
    let summary = suite::run_suite(cfg)?;
    let status = if summary.passed == summary.cases {
        Status::Success
    } else if summary
        .violations
        .iter()
        .any(|v| !v.detail.starts_with("solver: "))
    {
        Status::Violation
    } else {
        Status::Numeric
    };
    let mut stderr = String::new();
    for v in &summary.violations {
        stderr.push_str(&format!(
            "instance {} ({}): {}\n",
            v.instance, summary.instances[v.instance].generator, v.detail
        ));
    }
    for i in summary.instances.iter().filter(|i| i.numeric_failure) {
        stderr.push_str(&format!(
            "instance {} ({}): numeric failure\n",
            i.index, i.generator
        ));
    }
    let stdout = match format {
        OutputFormat::Json => to_json(&SuiteEnvelope {
            command: "suite".into(),
            options: cfg.options,
            timestamp: if timestamp { now() } else { None },
            result: summary,
        })?,
        OutputFormat::Table => render::suite(&summary),
    };
    Ok(Output {
        stdout,
        stderr,
        status,
    })
}
