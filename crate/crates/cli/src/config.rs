use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hyperspectra::bounds::WeightChoice;
use hyperspectra::hypergraph::{
    gen_complete, gen_disjoint_blocks, gen_hyperstar, gen_random, gen_random_regular, read_uhg,
};
use hyperspectra::{Hypergraph, SolverOptions, WeightVector};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A generator family with its parameters, as written on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenSpec {
    Hyperstar { t: usize, k: usize },
    Complete { n: usize, k: usize },
    Blocks { t: usize, r: usize },
    Random { n: usize, m: usize, k: usize },
    Regular { n: usize, d: usize, k: usize },
}

impl GenSpec {
    pub fn needs_seed(&self) -> bool {
        matches!(self, GenSpec::Random { .. } | GenSpec::Regular { .. })
    }

    pub fn generate(&self, seed: Option<u64>) -> Result<Hypergraph, CliError> {
        let seeded = |seed: Option<u64>| {
            seed.ok_or_else(|| CliError::Usage(format!("generator `{self}` needs --seed")))
        };
        let h = match *self {
            GenSpec::Hyperstar { t, k } => gen_hyperstar(t, k),
            GenSpec::Complete { n, k } => gen_complete(n, k),
            GenSpec::Blocks { t, r } => gen_disjoint_blocks(t, r),
            GenSpec::Random { n, m, k } => gen_random(n, m, k, seeded(seed)?),
            GenSpec::Regular { n, d, k } => gen_random_regular(n, d, k, seeded(seed)?),
        };
        h.map_err(|source| CliError::Generate {
            spec: self.to_string(),
            source,
        })
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GenSpec::Hyperstar { t, k } => write!(f, "hyperstar:{t},{k}"),
            GenSpec::Complete { n, k } => write!(f, "complete:{n},{k}"),
            GenSpec::Blocks { t, r } => write!(f, "blocks:{t},{r}"),
            GenSpec::Random { n, m, k } => write!(f, "random:{n},{m},{k}"),
            GenSpec::Regular { n, d, k } => write!(f, "regular:{n},{d},{k}"),
        }
    }
}

impl FromStr for GenSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| CliError::Usage(format!("bad generator spec `{s}`: {why}"));
        let (family, params) = s
            .split_once(':')
            .ok_or_else(|| bad("expected FAMILY:ARGS"))?;
        let params = params
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(&e.to_string()))?;
        let arity = |want: usize| {
            if params.len() == want {
                Ok(())
            } else {
                Err(bad(&format!(
                    "expected {want} parameters, got {}",
                    params.len()
                )))
            }
        };
        match family.trim() {
            "hyperstar" => arity(2).map(|_| GenSpec::Hyperstar {
                t: params[0],
                k: params[1],
            }),
            "complete" => arity(2).map(|_| GenSpec::Complete {
                n: params[0],
                k: params[1],
            }),
            "blocks" => arity(2).map(|_| GenSpec::Blocks {
                t: params[0],
                r: params[1],
            }),
            "random" => arity(3).map(|_| GenSpec::Random {
                n: params[0],
                m: params[1],
                k: params[2],
            }),
            "regular" => arity(3).map(|_| GenSpec::Regular {
                n: params[0],
                d: params[1],
                k: params[2],
            }),
            other => Err(bad(&format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSpec {
    Uniform,
    Degree,
    File(PathBuf),
}

impl WeightSpec {
    pub fn label(&self) -> String {
        match self {
            WeightSpec::Uniform => "uniform".into(),
            WeightSpec::Degree => "degree".into(),
            WeightSpec::File(p) => format!("file:{}", p.display()),
        }
    }

    /// Loads file weights and checks they cover all `n` vertices.
    pub fn resolve(&self, n: usize) -> Result<WeightChoice, CliError> {
        match self {
            WeightSpec::Uniform => Ok(WeightChoice::Uniform),
            WeightSpec::Degree => Ok(WeightChoice::Degree),
            WeightSpec::File(path) => {
                let weights = read_weights(path)?;
                if weights.len() != n {
                    return Err(CliError::Weights {
                        path: path.clone(),
                        message: format!("expected {n} weights, found {}", weights.len()),
                    });
                }
                Ok(WeightChoice::Explicit {
                    label: self.label(),
                    weights,
                })
            }
        }
    }
}

impl FromStr for WeightSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(WeightSpec::Uniform),
            "degree" => Ok(WeightSpec::Degree),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(WeightSpec::File(PathBuf::from(path))),
                _ => Err(CliError::Usage(format!(
                    "bad weight spec `{s}`: expected uniform, degree or file:PATH"
                ))),
            },
        }
    }
}

/// One positive decimal per line, vertex 1 first. Blank lines are skipped.
pub fn read_weights(path: &Path) -> Result<WeightVector, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let bad = |message: String| CliError::Weights {
        path: path.to_path_buf(),
        message,
    };
    let values = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<f64>()
                .map_err(|e| bad(format!("line {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    WeightVector::new(values).map_err(|e| bad(e.to_string()))
}

/// Where the hypergraph comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Input(PathBuf),
    Generator(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: Option<u64>,
    pub weights: Vec<WeightSpec>,
    pub per_component: bool,
    pub format: OutputFormat,
    pub timestamp: bool,
}

impl RunConfig {
    pub fn solver_options(&self) -> Result<SolverOptions, CliError> {
        let opts = SolverOptions {
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            per_component: self.per_component,
            ..SolverOptions::default()
        };
        opts.validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(opts)
    }

    pub fn load(&self) -> Result<Hypergraph, CliError> {
        match &self.source {
            Source::Input(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                read_uhg(&text).map_err(|source| CliError::Parse {
                    path: path.clone(),
                    source,
                })
            }
            Source::Generator(spec) => spec.parse::<GenSpec>()?.generate(self.seed),
        }
    }

    pub fn weight_choices(&self, n: usize) -> Result<Vec<WeightChoice>, CliError> {
        self.weights.iter().map(|w| w.resolve(n)).collect()
    }
}
