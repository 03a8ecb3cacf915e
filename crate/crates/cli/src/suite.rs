//! Seeded batches of generated instances, verified in parallel.

use std::fmt;
use std::str::FromStr;

use hyperspectra::bounds::{full_report, BoundReport, WeightChoice};
use hyperspectra::hypergraph::{
    gen_disjoint_blocks, gen_hyperstar, gen_random, gen_random_regular,
};
use hyperspectra::{Hypergraph, SolverOptions};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Draws per instance before giving up on a family's constraints.
const DRAW_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Random, random-regular, hyperstar and blow-up, picked per instance.
    Mixed,
    Random,
    Regular,
    Hyperstar,
    Blowup,
    /// Disjoint edges; always disconnected when more than one fits.
    Blocks,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Mixed => "mixed",
            Family::Random => "random",
            Family::Regular => "regular",
            Family::Hyperstar => "hyperstar",
            Family::Blowup => "blowup",
            Family::Blocks => "blocks",
        })
    }
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "mixed" => Family::Mixed,
            "random" => Family::Random,
            "regular" => Family::Regular,
            "hyperstar" => Family::Hyperstar,
            "blowup" => Family::Blowup,
            "blocks" => Family::Blocks,
            _ => return Err(CliError::Usage(format!("unknown suite family `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub cases: usize,
    pub seed: u64,
    pub max_n: usize,
    pub max_m: usize,
    pub ks: Vec<usize>,
    pub family: Family,
    pub options: SolverOptions,
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.cases == 0 {
            return Err(CliError::Usage("suite needs at least one case".into()));
        }
        if self.ks.is_empty() {
            return Err(CliError::Usage("suite needs at least one k".into()));
        }
        if self.max_m == 0 {
            return Err(CliError::Usage("--max-m must be at least 1".into()));
        }
        for &k in &self.ks {
            if k < 2 {
                return Err(CliError::Usage(format!("k must be at least 2, got {k}")));
            }
            if self.max_n < k + 1 {
                return Err(CliError::Usage(format!(
                    "--max-n {} leaves no room for k = {k}",
                    self.max_n
                )));
            }
        }
        self.options
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// What was generated for one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub index: usize,
    /// Generator call that reproduces the instance.
    pub generator: String,
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub connected: bool,
    pub passed: bool,
    pub numeric_failure: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub name: String,
    pub reported: usize,
    pub applicable: usize,
    pub held: usize,
    /// Smallest slack over instances where the bound applies.
    pub worst_slack: Option<f64>,
    pub worst_instance: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub instance: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub cases: usize,
    pub seed: u64,
    pub family: Family,
    pub ks: Vec<usize>,
    pub max_n: usize,
    pub max_m: usize,
    pub passed: usize,
    pub numeric_failures: usize,
    pub equality_checked: usize,
    pub equality_held: usize,
    pub violations: Vec<Violation>,
    /// Failed non-gating checks; logged, never fatal.
    pub monitors: Vec<Violation>,
    pub bounds: Vec<BoundSummary>,
    pub instances: Vec<InstanceSummary>,
}

fn choose(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

struct Drawn {
    graph: Hypergraph,
    generator: String,
}

fn draw_random(rng: &mut ChaCha8Rng, cfg: &SuiteConfig, k: usize) -> Result<Drawn, String> {
    let n = rng.gen_range(k..=cfg.max_n);
    let m = rng.gen_range(1..=choose(n, k).min(cfg.max_m));
    let seed = rng.gen::<u64>();
    let graph = gen_random(n, m, k, seed).map_err(|e| e.to_string())?;
    Ok(Drawn {
        graph,
        generator: format!("random:{n},{m},{k} seed {seed}"),
    })
}

/// Every `(n, d)` with a d-regular k-uniform hypergraph on n vertices that
/// respects the size limits.
fn regular_shapes(k: usize, max_n: usize, max_m: usize) -> Vec<(usize, usize)> {
    let mut shapes = Vec::new();
    for n in k..=max_n {
        for d in 1..=choose(n - 1, k - 1) {
            if (n * d) % k == 0 && n * d / k <= max_m {
                shapes.push((n, d));
            }
        }
    }
    shapes
}

fn draw_regular(
    rng: &mut ChaCha8Rng,
    k: usize,
    max_n: usize,
    max_m: usize,
) -> Result<Drawn, String> {
    let shapes = regular_shapes(k, max_n, max_m);
    let &(n, d) = shapes
        .choose(rng)
        .ok_or("no regular shape fits the limits")?;
    let seed = rng.gen::<u64>();
    let graph = gen_random_regular(n, d, k, seed).map_err(|e| e.to_string())?;
    Ok(Drawn {
        graph,
        generator: format!("regular:{n},{d},{k} seed {seed}"),
    })
}

fn draw_hyperstar(rng: &mut ChaCha8Rng, cfg: &SuiteConfig, k: usize) -> Result<Drawn, String> {
    let t_max = ((cfg.max_n - 1) / (k - 1)).min(cfg.max_m);
    let t = rng.gen_range(1..=t_max);
    Ok(Drawn {
        graph: gen_hyperstar(t, k).map_err(|e| e.to_string())?,
        generator: format!("hyperstar:{t},{k}"),
    })
}

fn draw_blowup(rng: &mut ChaCha8Rng, cfg: &SuiteConfig, k: usize) -> Result<Drawn, String> {
    let base = if k == 2 {
        let t = rng.gen_range(1..=(cfg.max_n - 1).min(cfg.max_m));
        Drawn {
            graph: gen_disjoint_blocks(t, 1).map_err(|e| e.to_string())?,
            generator: format!("blocks:{t},1"),
        }
    } else {
        draw_regular(rng, k - 1, cfg.max_n - 1, cfg.max_m)?
    };
    Ok(Drawn {
        graph: base.graph.blow_up().map_err(|e| e.to_string())?,
        generator: format!("blow-up of {}", base.generator),
    })
}

fn draw_blocks(rng: &mut ChaCha8Rng, cfg: &SuiteConfig, k: usize) -> Result<Drawn, String> {
    let t_max = (cfg.max_n / k).min(cfg.max_m).max(1);
    let t = rng.gen_range(t_max.min(2)..=t_max);
    Ok(Drawn {
        graph: gen_disjoint_blocks(t, k).map_err(|e| e.to_string())?,
        generator: format!("blocks:{t},{k}"),
    })
}

fn draw(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Drawn, String> {
    let mut last = String::new();
    for _ in 0..DRAW_ATTEMPTS {
        let k = *cfg.ks.choose(rng).expect("validated non-empty");
        let family = match cfg.family {
            Family::Mixed => *[
                Family::Random,
                Family::Regular,
                Family::Hyperstar,
                Family::Blowup,
            ]
            .choose(rng)
            .expect("non-empty"),
            f => f,
        };
        let drawn = match family {
            Family::Random => draw_random(rng, cfg, k),
            Family::Regular => draw_regular(rng, k, cfg.max_n, cfg.max_m),
            Family::Hyperstar => draw_hyperstar(rng, cfg, k),
            Family::Blowup => draw_blowup(rng, cfg, k),
            Family::Blocks => draw_blocks(rng, cfg, k),
            Family::Mixed => unreachable!(),
        };
        match drawn {
            Ok(d) if d.graph.n() <= cfg.max_n && d.graph.m() <= cfg.max_m => return Ok(d),
            Ok(d) => last = format!("{} exceeds the size limits", d.generator),
            Err(e) => last = e,
        }
    }
    Err(last)
}

struct Outcome {
    summary: InstanceSummary,
    report: BoundReport,
}

fn run_instance(cfg: &SuiteConfig, index: usize) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let drawn = draw(&mut rng, cfg)
        .map_err(|e| CliError::Usage(format!("instance {index}: cannot generate: {e}")))?;
    let report = full_report(
        &drawn.graph,
        &cfg.options,
        &[WeightChoice::Uniform, WeightChoice::Degree],
    );
    Ok(Outcome {
        summary: InstanceSummary {
            index,
            generator: drawn.generator,
            k: report.k,
            n: report.n,
            m: report.m,
            connected: report.connected,
            passed: report.passed(),
            numeric_failure: report.numeric_failure(),
        },
        report,
    })
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteSummary, CliError> {
    cfg.validate()?;
    let outcomes = (0..cfg.cases)
        .into_par_iter()
        .map(|i| run_instance(cfg, i))
        .collect::<Result<Vec<_>, _>>()?;

    let mut bounds: Vec<BoundSummary> = Vec::new();
    let mut violations = Vec::new();
    let mut monitors = Vec::new();
    let (mut equality_checked, mut equality_held) = (0, 0);
    for Outcome { summary, report } in &outcomes {
        for e in &report.entries {
            let slot = match bounds.iter().position(|b| b.name == e.name) {
                Some(i) => i,
                None => {
                    bounds.push(BoundSummary {
                        name: e.name.clone(),
                        reported: 0,
                        applicable: 0,
                        held: 0,
                        worst_slack: None,
                        worst_instance: None,
                    });
                    bounds.len() - 1
                }
            };
            let b = &mut bounds[slot];
            b.reported += 1;
            if !e.applicable {
                continue;
            }
            b.applicable += 1;
            if report.checks.iter().any(|c| c.name == e.name && c.holds) {
                b.held += 1;
            }
            if let Some(s) = e.slack {
                if b.worst_slack.is_none_or(|w| s < w) {
                    b.worst_slack = Some(s);
                    b.worst_instance = Some(summary.index);
                }
            }
        }
        for c in report.checks.iter().filter(|c| c.gating) {
            if c.name.starts_with("equality:") {
                equality_checked += 1;
                equality_held += usize::from(c.holds);
            }
            if !c.holds {
                violations.push(Violation {
                    instance: summary.index,
                    detail: c.detail.clone(),
                });
            }
        }
        for c in report.checks.iter().filter(|c| !c.gating && !c.holds) {
            monitors.push(Violation {
                instance: summary.index,
                detail: c.detail.clone(),
            });
        }
        for f in &report.spectral_failures {
            violations.push(Violation {
                instance: summary.index,
                detail: format!("solver: {f}"),
            });
        }
    }

    let instances: Vec<InstanceSummary> = outcomes.into_iter().map(|o| o.summary).collect();
    Ok(SuiteSummary {
        cases: cfg.cases,
        seed: cfg.seed,
        family: cfg.family,
        ks: cfg.ks.clone(),
        max_n: cfg.max_n,
        max_m: cfg.max_m,
        passed: instances.iter().filter(|i| i.passed).count(),
        numeric_failures: instances.iter().filter(|i| i.numeric_failure).count(),
        equality_checked,
        equality_held,
        violations,
        monitors,
        bounds,
        instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(family: Family, cases: usize) -> SuiteConfig {
        SuiteConfig {
            cases,
            seed: 3,
            max_n: 12,
            max_m: 40,
            ks: vec![2, 3, 4],
            family,
            options: SolverOptions::default(),
        }
    }

    #[test]
    fn regular_shapes_are_feasible() {
        for (n, d) in regular_shapes(3, 9, 40) {
            assert_eq!((n * d) % 3, 0);
            assert!(d <= choose(n - 1, 2));
        }
        assert!(regular_shapes(4, 12, 40).contains(&(4, 1)));
    }

    #[test]
    fn every_family_draws_within_limits() {
        for family in [
            Family::Mixed,
            Family::Random,
            Family::Regular,
            Family::Hyperstar,
            Family::Blowup,
            Family::Blocks,
        ] {
            let cfg = config(family, 1);
            for i in 0..40 {
                let mut rng = ChaCha8Rng::seed_from_u64(i);
                let d = draw(&mut rng, &cfg).unwrap();
                assert!(d.graph.n() <= 12 && d.graph.m() <= 40, "{}", d.generator);
                match family {
                    Family::Blocks => assert!(!d.graph.is_connected(), "{}", d.generator),
                    Family::Hyperstar | Family::Blowup => {
                        assert!(d.graph.detect_blowup().is_some() || d.graph.k() == 2)
                    }
                    Family::Regular => assert!(d.graph.is_regular().is_some()),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn results_are_in_input_order_and_reproducible() {
        let cfg = config(Family::Mixed, 24);
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.instances.iter().enumerate().all(|(i, s)| s.index == i));
        assert_eq!(a.passed, 24);
    }

    #[test]
    fn rejects_bad_limits() {
        let mut cfg = config(Family::Random, 1);
        cfg.max_n = 4;
        assert!(run_suite(&cfg).is_err());
        let mut cfg = config(Family::Random, 0);
        cfg.max_n = 12;
        assert!(run_suite(&cfg).is_err());
    }
}
