//! Human-readable tables.

use std::cmp::Ordering;
use std::fmt::Write as _;

use hyperspectra::bounds::{BoundEntry, BoundReport, Classification, Direction};
use hyperspectra::SpectralEstimate;

use crate::{SolveOutcome, SpectralOutput, SuiteSummary};

fn real(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |x| format!("{x:.12}"))
}

fn signed(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |x| format!("{x:+.3e}"))
}

pub fn classification(c: &Classification) -> String {
    match c {
        Classification::Regular { degree } => format!("{degree}-regular"),
        Classification::BlowupOfRegular { apex, base_degree } => {
            format!("blow-up of a {base_degree}-regular base (apex {apex})")
        }
        Classification::General => "general".into(),
    }
}

fn summary_line(out: &mut String, k: usize, n: usize, m: usize, connected: bool) {
    let _ = writeln!(
        out,
        "k={k} n={n} m={m} {}",
        if connected {
            "connected"
        } else {
            "disconnected"
        }
    );
}

fn estimate_line(out: &mut String, name: &str, est: &SpectralEstimate) {
    let _ = writeln!(
        out,
        "{name:<8} {:.12}  bracket [{:.12}, {:.12}]  iters {}  residual {:.1e}{}{}",
        est.estimate,
        est.lo,
        est.hi,
        est.iterations,
        est.residual,
        if est.converged { "" } else { "  NOT CONVERGED" },
        if est.restarted { "  (restarted)" } else { "" },
    );
}

pub fn spectral(s: &SpectralOutput) -> String {
    let mut out = String::new();
    summary_line(&mut out, s.k, s.n, s.m, s.connected);
    for (name, solve) in [("rho(A)", &s.adjacency), ("rho(Q)", &s.signless_laplacian)] {
        match solve {
            SolveOutcome {
                estimate: Some(est),
                ..
            } => estimate_line(&mut out, name, est),
            SolveOutcome { error, .. } => {
                let _ = writeln!(
                    out,
                    "{name:<8} failed: {}",
                    error.as_deref().unwrap_or("unknown")
                );
            }
        }
    }
    out
}

fn by_slack(a: &&BoundEntry, b: &&BoundEntry) -> Ordering {
    match (a.slack, b.slack) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

fn location(e: &BoundEntry) -> String {
    match (e.pair, e.vertex) {
        (Some((i, j)), _) => format!("{{{i},{j}}}"),
        (None, Some(v)) => format!("v{v}"),
        (None, None) => "-".into(),
    }
}

fn note(e: &BoundEntry) -> String {
    let mut notes = Vec::new();
    if let Some(f) = &e.failure {
        notes.push(f.clone());
    } else if !e.applicable {
        notes.push("not applicable".into());
    }
    if e.predicted_equality {
        notes.push("equality predicted".into());
    }
    if let Some(c) = e.component_max {
        notes.push(format!("component max {c:.12}"));
    }
    notes.join("; ")
}

/// Bounds sorted by slack, tightest first.
pub fn bounds(r: &BoundReport) -> String {
    let mut out = String::new();
    summary_line(&mut out, r.k, r.n, r.m, r.connected);
    let _ = writeln!(
        out,
        "degrees d1={} d2={}  {}",
        r.d1,
        r.d2.map_or_else(|| "-".into(), |d| d.to_string()),
        classification(&r.classification)
    );
    for (name, est) in [("rho(A)", &r.spectral_adj), ("rho(Q)", &r.spectral_q)] {
        if let Some(est) = est {
            estimate_line(&mut out, name, est);
        }
    }
    for f in &r.spectral_failures {
        let _ = writeln!(out, "solver failed: {f}");
    }
    let _ = writeln!(
        out,
        "\n{:<26} {:<6} {:>16} {:>11}  {:<8} note",
        "bound", "rho", "value", "slack", "at"
    );
    let mut entries: Vec<&BoundEntry> = r.entries.iter().collect();
    entries.sort_by(by_slack);
    for e in entries {
        let rho = match (e.tensor, e.direction) {
            (hyperspectra::TensorKind::Adjacency, _) => "A",
            (_, Direction::Upper) => "Q",
            (_, Direction::Lower) => "Q (lo)",
        };
        let _ = writeln!(
            out,
            "{:<26} {:<6} {:>16} {:>11}  {:<8} {}",
            e.name,
            rho,
            real(e.value),
            signed(e.slack),
            location(e),
            note(e)
        );
    }
    out
}

pub fn checks(r: &BoundReport) -> String {
    let mut out = String::new();
    let gating: Vec<_> = r.checks.iter().filter(|c| c.gating).collect();
    let held = gating.iter().filter(|c| c.holds).count();
    let _ = writeln!(out, "\nchecks: {held}/{} hold", gating.len());
    for c in r.checks.iter().filter(|c| !c.gating && !c.holds) {
        let _ = writeln!(out, "monitor {}: {}", c.name, c.detail);
    }
    out
}

pub fn suite(s: &SuiteSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} instances (seed {}, family {}, k in {:?}, n <= {}, m <= {})",
        s.cases, s.seed, s.family, s.ks, s.max_n, s.max_m
    );
    let _ = writeln!(
        out,
        "passed {}/{}  numeric failures {}  violations {}",
        s.passed,
        s.cases,
        s.numeric_failures,
        s.violations.len()
    );
    let _ = writeln!(
        out,
        "equality checks held {}/{}  monitor failures {}",
        s.equality_held,
        s.equality_checked,
        s.monitors.len()
    );
    for m in &s.monitors {
        let _ = writeln!(out, "  monitor #{}: {}", m.instance, m.detail);
    }
    out.push('\n');
    let _ = writeln!(
        out,
        "{:<26} {:>8} {:>10} {:>6} {:>12}  worst at",
        "bound", "reported", "applicable", "held", "worst slack"
    );
    for b in &s.bounds {
        let _ = writeln!(
            out,
            "{:<26} {:>8} {:>10} {:>6} {:>12}  {}",
            b.name,
            b.reported,
            b.applicable,
            b.held,
            signed(b.worst_slack),
            b.worst_instance
                .map_or_else(|| "-".into(), |i| format!("#{i}")),
        );
    }
    out
}
