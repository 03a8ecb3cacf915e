use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hyperspectra::SolverOptions;

use crate::config::{OutputFormat, RunConfig, Source, WeightSpec};
use crate::error::CliError;
use crate::suite::{Family, SuiteConfig};

#[derive(Debug, Parser)]
#[command(
    name = "hyperspectra",
    version,
    about = "Spectral radii and degree bounds for uniform hypergraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated hypergraph in .uhg format.
    Gen {
        /// hyperstar:t,k | complete:n,k | blocks:t,r | random:n,m,k | regular:n,d,k
        spec: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Spectral radii of the adjacency and signless Laplacian tensors.
    Spectral(RunArgs),
    /// Every degree bound next to the computed spectral radii.
    Bounds(RunArgs),
    /// Like `bounds`, exiting nonzero when a claim fails.
    Verify(RunArgs),
    /// Verify a seeded batch of generated hypergraphs.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long = "max-iters", default_value_t = 200_000)]
    pub max_iters: usize,
    /// Solve each connected component separately (the default).
    #[arg(long, overrides_with = "no_per_component")]
    pub per_component: bool,
    /// Treat disconnected input as a numeric failure.
    #[arg(long, overrides_with = "per_component")]
    pub no_per_component: bool,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub no_timestamp: bool,
}

impl SolveArgs {
    fn format(&self) -> OutputFormat {
        if self.json {
            OutputFormat::Json
        } else {
            OutputFormat::Table
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Hypergraph in .uhg format.
    #[arg(long, required_unless_present = "gen", conflicts_with = "gen")]
    pub input: Option<PathBuf>,
    /// Generate the input instead of reading it.
    #[arg(long)]
    pub gen: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// uniform | degree | file:PATH; repeatable. Defaults to uniform and degree.
    #[arg(long)]
    pub weights: Vec<String>,
    #[command(flatten)]
    pub solve: SolveArgs,
}

impl RunArgs {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let source = match (self.input, self.gen) {
            (Some(path), None) => Source::Input(path),
            (None, Some(spec)) => Source::Generator(spec),
            _ => {
                return Err(CliError::Usage(
                    "give exactly one of --input and --gen".into(),
                ))
            }
        };
        let weights = if self.weights.is_empty() {
            vec![WeightSpec::Uniform, WeightSpec::Degree]
        } else {
            self.weights
                .iter()
                .map(|w| w.parse())
                .collect::<Result<_, _>>()?
        };
        Ok(RunConfig {
            source,
            tolerance: self.solve.tol,
            max_iterations: self.solve.max_iters,
            seed: self.seed,
            weights,
            per_component: !self.solve.no_per_component,
            format: self.solve.format(),
            timestamp: !self.solve.no_timestamp,
        })
    }
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Number of instances.
    #[arg(default_value_t = 100)]
    pub cases: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 12)]
    pub max_n: usize,
    #[arg(long, default_value_t = 40)]
    pub max_m: usize,
    /// Comma-separated uniformities.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4])]
    pub k: Vec<usize>,
    /// mixed | random | regular | hyperstar | blowup | blocks
    #[arg(long, default_value = "mixed")]
    pub family: String,
    #[command(flatten)]
    pub solve: SolveArgs,
}

impl SuiteArgs {
    pub fn into_config(self) -> Result<(SuiteConfig, OutputFormat, bool), CliError> {
        let cfg = SuiteConfig {
            cases: self.cases,
            seed: self.seed,
            max_n: self.max_n,
            max_m: self.max_m,
            ks: self.k,
            family: self.family.parse::<Family>()?,
            options: SolverOptions {
                tolerance: self.solve.tol,
                max_iterations: self.solve.max_iters,
                per_component: !self.solve.no_per_component,
                ..SolverOptions::default()
            },
        };
        Ok((cfg, self.solve.format(), !self.solve.no_timestamp))
    }
}
