//! Degree-based bounds on `rho(A(H))` and `rho(Q(H))`, the equality-case
//! classifier, and the combined report that measures every bound against the
//! solver's certified bracket.
//!
//! Pair bounds take their maximum over "coedge pairs": unordered vertex
//! pairs that lie together in at least one edge.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::spectral::{spectral_radius, SolverOptions, SpectralEstimate};
use crate::tensor::{TensorKind, WeightVector};

/// Absolute slack allowed when comparing a bound against a bracket.
pub const CHECK_EPSILON: f64 = 1e-9;

/// Partial products outside this range switch `b'` to log-domain sums.
const PRODUCT_RANGE: (f64, f64) = (1e-300, 1e300);

/// `rho(A) <= Δ`.
pub fn adj_upper_maxdeg(h: &Hypergraph) -> f64 {
    h.max_degree() as f64
}

fn d1_d2(h: &Hypergraph) -> Result<(usize, usize)> {
    let profile = h.degrees();
    let d2 = profile.d2().ok_or(Error::TooFewVertices)?;
    Ok((profile.d1(), d2))
}

/// `d1^(1/k) d2^(1-1/k)` from the two largest degrees.
pub fn adj_upper_d1d2(h: &Hypergraph) -> Result<f64> {
    let (d1, d2) = d1_d2(h)?;
    if d1 == d2 {
        return Ok(d1 as f64);
    }
    let inv_k = 1.0 / h.k() as f64;
    Ok((d1 as f64).powf(inv_k) * (d2 as f64).powf(1.0 - inv_k))
}

/// `rho(Q) >= d1`.
pub fn q_lower_d1(h: &Hypergraph) -> f64 {
    h.max_degree() as f64
}

/// `rho(Q) <= d1 + d1^(1/k) d2^(1-1/k)`.
pub fn q_upper_d1d2(h: &Hypergraph) -> Result<f64> {
    Ok(q_lower_d1(h) + adj_upper_d1d2(h)?)
}

/// Unordered pairs `(i, j)`, `i < j`, sharing at least one edge.
pub fn coedge_pairs(h: &Hypergraph) -> BTreeSet<(Vertex, Vertex)> {
    let mut pairs = BTreeSet::new();
    for e in h.edges() {
        for (a, &i) in e.iter().enumerate() {
            for &j in &e[a + 1..] {
                pairs.insert((Vertex::from_index(i), Vertex::from_index(j)));
            }
        }
    }
    pairs
}

/// How [`b_prime_with`] evaluates the products of weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductPath {
    /// Double precision, falling back to log-domain per vertex when a
    /// partial product leaves `[1e-300, 1e300]`.
    Auto,
    /// Log-domain for every vertex.
    LogDomain,
}

/// `b'_p = b_p^{-(k-1)} * sum over edges {p, p2..pk} of b_p2 ... b_pk`.
pub fn b_prime(h: &Hypergraph, b: &WeightVector) -> Result<Vec<f64>> {
    b_prime_with(h, b, ProductPath::Auto)
}

pub fn b_prime_with(h: &Hypergraph, b: &WeightVector, path: ProductPath) -> Result<Vec<f64>> {
    b.check_len(h.n())?;
    let w = b.as_slice();
    let k = h.k();
    let power = k as i32 - 1;
    let in_range = |v: f64| (PRODUCT_RANGE.0..=PRODUCT_RANGE.1).contains(&v);

    let mut sums = vec![0.0; h.n()];
    let mut needs_log = vec![path == ProductPath::LogDomain; h.n()];
    if path == ProductPath::Auto {
        let mut suffix = vec![1.0; k + 1];
        for e in h.edges() {
            for t in (0..k).rev() {
                suffix[t] = suffix[t + 1] * w[e[t]];
            }
            let mut prefix = 1.0;
            for t in 0..k {
                let p = e[t];
                let term = prefix * suffix[t + 1];
                if !(in_range(prefix) && in_range(suffix[t + 1]) && in_range(term)) {
                    needs_log[p] = true;
                }
                sums[p] += term;
                prefix *= w[p];
            }
        }
    }

    let mut out = vec![0.0; h.n()];
    for p in 0..h.n() {
        if h.degree_vector()[p] == 0 {
            continue;
        }
        let scale = w[p].powi(power);
        let direct = sums[p] / scale;
        if !needs_log[p] && in_range(scale) && direct.is_finite() {
            out[p] = direct;
            continue;
        }
        let logs: Vec<f64> = h
            .edges()
            .filter(|e| e.binary_search(&p).is_ok())
            .map(|e| e.iter().filter(|&&u| u != p).map(|&u| w[u].ln()).sum())
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_sum = max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
        out[p] = (log_sum - (k as f64 - 1.0) * w[p].ln()).exp();
    }
    Ok(out)
}

/// A maximum over coedge pairs together with the pair attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairBound {
    pub value: f64,
    pub pair: (Vertex, Vertex),
    /// The bound's connectivity hypothesis holds.
    pub applicable: bool,
}

fn pair_max(h: &Hypergraph, f: impl Fn(usize, usize) -> f64) -> Result<PairBound> {
    let mut best: Option<(f64, (Vertex, Vertex))> = None;
    for (i, j) in coedge_pairs(h) {
        let value = f(i.index(), j.index());
        if best.is_none_or(|(b, _)| value > b) {
            best = Some((value, (i, j)));
        }
    }
    let (value, pair) = best.ok_or(Error::NoEdges)?;
    Ok(PairBound {
        value,
        pair,
        applicable: h.is_connected(),
    })
}

/// `(d_i + d_j + sqrt((d_i - d_j)^2 + 4 c_i c_j)) / 2`.
fn quadratic_root(d_i: f64, d_j: f64, c_i: f64, c_j: f64) -> f64 {
    (d_i + d_j + ((d_i - d_j).powi(2) + 4.0 * c_i * c_j).sqrt()) / 2.0
}

fn degrees_f64(h: &Hypergraph) -> Vec<f64> {
    h.degree_vector().iter().map(|&d| d as f64).collect()
}

fn m_values(h: &Hypergraph) -> Vec<f64> {
    (0..h.n())
        .map(|i| h.m_value(Vertex::from_index(i)).unwrap_or(0.0))
        .collect()
}

/// Weighted `rho(Q)` bound for arbitrary positive weights `b`.
pub fn q_upper_weighted(h: &Hypergraph, b: &WeightVector) -> Result<PairBound> {
    let bp = b_prime(h, b)?;
    let d = degrees_f64(h);
    pair_max(h, |i, j| quadratic_root(d[i], d[j], bp[i], bp[j]))
}

/// `max (d_i + d_j)` over coedge pairs.
pub fn q_upper_pairdeg(h: &Hypergraph) -> Result<PairBound> {
    let d = degrees_f64(h);
    pair_max(h, |i, j| d[i] + d[j])
}

/// The weighted bound specialized to `b'_i = m_i`.
pub fn q_upper_m(h: &Hypergraph) -> Result<PairBound> {
    let d = degrees_f64(h);
    let m = m_values(h);
    pair_max(h, |i, j| quadratic_root(d[i], d[j], m[i], m[j]))
}

/// `max sqrt(d_i d_j)` over coedge pairs.
pub fn adj_upper_sqrt_dd(h: &Hypergraph) -> Result<PairBound> {
    let d = degrees_f64(h);
    pair_max(h, |i, j| (d[i] * d[j]).sqrt())
}

/// `max sqrt(m_i m_j)` over coedge pairs.
pub fn adj_upper_sqrt_mm(h: &Hypergraph) -> Result<PairBound> {
    let m = m_values(h);
    pair_max(h, |i, j| (m[i] * m[j]).sqrt())
}

/// Which structural equality case a hypergraph falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    Regular { degree: usize },
    BlowupOfRegular { apex: Vertex, base_degree: usize },
    General,
}

/// Classification plus the exact spectral radii it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualityCase {
    pub classification: Classification,
    pub predicted_adj: Option<f64>,
    pub predicted_q: Option<f64>,
}

pub fn classify_equality(h: &Hypergraph) -> EqualityCase {
    if let Some(d) = h.is_regular() {
        return EqualityCase {
            classification: Classification::Regular { degree: d },
            predicted_adj: Some(d as f64),
            predicted_q: Some(2.0 * d as f64),
        };
    }
    if let Some(blowup) = h.detect_blowup() {
        return EqualityCase {
            classification: Classification::BlowupOfRegular {
                apex: blowup.apex,
                base_degree: blowup.base_degree,
            },
            predicted_adj: adj_upper_d1d2(h).ok(),
            predicted_q: None,
        };
    }
    EqualityCase {
        classification: Classification::General,
        predicted_adj: None,
        predicted_q: None,
    }
}

/// Weights to plug into the weighted `rho(Q)` bound.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightChoice {
    Uniform,
    Degree,
    Explicit {
        label: String,
        weights: WeightVector,
    },
}

impl WeightChoice {
    pub fn label(&self) -> &str {
        match self {
            WeightChoice::Uniform => "uniform",
            WeightChoice::Degree => "degree",
            WeightChoice::Explicit { label, .. } => label,
        }
    }

    pub fn resolve(&self, h: &Hypergraph) -> Result<WeightVector> {
        match self {
            WeightChoice::Uniform => Ok(WeightVector::uniform(h.n())),
            WeightChoice::Degree => WeightVector::degrees(h),
            WeightChoice::Explicit { weights, .. } => {
                weights.check_len(h.n())?;
                Ok(weights.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub tensor: TensorKind,
    pub direction: Direction,
    pub value: Option<f64>,
    /// The hypotheses under which the bound is claimed are met.
    pub applicable: bool,
    pub predicted_equality: bool,
    /// `bound - estimate` for upper bounds, `estimate - bound` for lower.
    pub slack: Option<f64>,
    /// Coedge pair attaining a pair maximum.
    pub pair: Option<(Vertex, Vertex)>,
    /// Vertex of largest degree, for the degree-sequence bounds.
    pub vertex: Option<Vertex>,
    /// Largest per-component value, reported for disconnected inputs.
    pub component_max: Option<f64>,
    pub failure: Option<String>,
}

/// One claimed inequality or equality, checked against the certified bracket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Gating checks decide pass/fail; the rest are monitored only.
    pub gating: bool,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub connected: bool,
    pub d1: usize,
    pub d2: Option<usize>,
    pub classification: Classification,
    pub predicted_adj: Option<f64>,
    pub predicted_q: Option<f64>,
    pub spectral_adj: Option<SpectralEstimate>,
    pub spectral_q: Option<SpectralEstimate>,
    pub spectral_failures: Vec<String>,
    pub entries: Vec<BoundEntry>,
    pub checks: Vec<Check>,
}

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn spectral(&self, kind: TensorKind) -> Option<&SpectralEstimate> {
        match kind {
            TensorKind::Adjacency => self.spectral_adj.as_ref(),
            TensorKind::SignlessLaplacian => self.spectral_q.as_ref(),
        }
    }

    /// Failed gating checks.
    pub fn violations(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.gating && !c.holds)
    }

    /// Solver errors or unconverged solves.
    pub fn numeric_failure(&self) -> bool {
        !self.spectral_failures.is_empty()
            || [&self.spectral_adj, &self.spectral_q]
                .iter()
                .any(|s| s.as_ref().is_some_and(|s| !s.converged))
    }

    pub fn passed(&self) -> bool {
        !self.numeric_failure() && self.violations().next().is_none()
    }
}

enum PairKind<'a> {
    SqrtDd,
    SqrtMm,
    PairDeg,
    QM,
    Weighted(&'a WeightChoice),
}

impl PairKind<'_> {
    fn evaluate(&self, h: &Hypergraph) -> Result<PairBound> {
        match self {
            PairKind::SqrtDd => adj_upper_sqrt_dd(h),
            PairKind::SqrtMm => adj_upper_sqrt_mm(h),
            PairKind::PairDeg => q_upper_pairdeg(h),
            PairKind::QM => q_upper_m(h),
            PairKind::Weighted(choice) => q_upper_weighted(h, &choice.resolve(h)?),
        }
    }

    /// Evaluates on each component with edges, restricting explicit weights.
    fn component_max(&self, h: &Hypergraph) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        for c in h.components().into_iter().filter(|c| c.graph.m() > 0) {
            let value = match self {
                PairKind::Weighted(WeightChoice::Explicit { weights, .. }) => {
                    weights.check_len(h.n())?;
                    let local = WeightVector::new(
                        c.vertices
                            .iter()
                            .map(|v| weights.as_slice()[v.index()])
                            .collect(),
                    )?;
                    q_upper_weighted(&c.graph, &local)?.value
                }
                other => other.evaluate(&c.graph)?.value,
            };
            best = best.max(value);
        }
        Ok(best)
    }
}

fn scalar_entry(
    name: &str,
    tensor: TensorKind,
    direction: Direction,
    value: Result<f64>,
    applicable: bool,
    predicted_equality: bool,
) -> BoundEntry {
    let (value, failure) = match value {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    BoundEntry {
        name: name.to_string(),
        tensor,
        direction,
        applicable: applicable && value.is_some(),
        value,
        predicted_equality,
        slack: None,
        pair: None,
        vertex: None,
        component_max: None,
        failure,
    }
}

fn pair_entry(name: String, tensor: TensorKind, kind: PairKind<'_>, h: &Hypergraph) -> BoundEntry {
    match kind.evaluate(h) {
        Ok(bound) => BoundEntry {
            name,
            tensor,
            direction: Direction::Upper,
            value: Some(bound.value),
            applicable: bound.applicable,
            predicted_equality: false,
            slack: None,
            pair: Some(bound.pair),
            vertex: None,
            component_max: if h.is_connected() {
                None
            } else {
                kind.component_max(h).ok()
            },
            failure: None,
        },
        Err(e) => BoundEntry {
            name,
            tensor,
            direction: Direction::Upper,
            value: None,
            applicable: false,
            predicted_equality: false,
            slack: None,
            pair: None,
            vertex: None,
            component_max: None,
            failure: Some(e.to_string()),
        },
    }
}

/// Solves both tensors, evaluates every bound and checks each claim that
/// applies. Solver errors are recorded, never propagated.
pub fn full_report(
    h: &Hypergraph,
    opts: &SolverOptions,
    weight_choices: &[WeightChoice],
) -> BoundReport {
    use Direction::{Lower, Upper};
    use TensorKind::{Adjacency, SignlessLaplacian};

    let connected = h.is_connected();
    let profile = h.degrees();
    let equality = classify_equality(h);
    let regular = matches!(equality.classification, Classification::Regular { .. });
    let blowup = matches!(
        equality.classification,
        Classification::BlowupOfRegular { .. }
    );

    let mut spectral_failures = Vec::new();
    let mut solve = |kind| match spectral_radius(h, kind, opts) {
        Ok(est) => Some(est),
        Err(e) => {
            spectral_failures.push(format!("{kind}: {e}"));
            None
        }
    };
    let spectral_adj = solve(Adjacency);
    let spectral_q = solve(SignlessLaplacian);

    let mut entries = vec![
        scalar_entry(
            "adj_maxdeg",
            Adjacency,
            Upper,
            Ok(adj_upper_maxdeg(h)),
            true,
            regular,
        ),
        scalar_entry(
            "adj_d1d2",
            Adjacency,
            Upper,
            adj_upper_d1d2(h),
            true,
            regular || blowup,
        ),
        pair_entry("adj_sqrt_dd".into(), Adjacency, PairKind::SqrtDd, h),
        pair_entry("adj_sqrt_mm".into(), Adjacency, PairKind::SqrtMm, h),
        scalar_entry(
            "q_lower_d1",
            SignlessLaplacian,
            Lower,
            Ok(q_lower_d1(h)),
            connected,
            false,
        ),
        scalar_entry(
            "q_upper_d1d2",
            SignlessLaplacian,
            Upper,
            q_upper_d1d2(h),
            connected,
            regular,
        ),
    ];
    for choice in weight_choices {
        entries.push(pair_entry(
            format!("q_upper_weighted[{}]", choice.label()),
            SignlessLaplacian,
            PairKind::Weighted(choice),
            h,
        ));
    }
    entries.push(pair_entry(
        "q_upper_pairdeg".into(),
        SignlessLaplacian,
        PairKind::PairDeg,
        h,
    ));
    entries.push(pair_entry(
        "q_upper_m".into(),
        SignlessLaplacian,
        PairKind::QM,
        h,
    ));

    let top_vertex = h
        .degree_vector()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| Vertex::from_index(i));
    for i in [0, 1, 4, 5] {
        entries[i].vertex = top_vertex;
    }

    let spectral_for = |kind| match kind {
        Adjacency => spectral_adj.as_ref(),
        SignlessLaplacian => spectral_q.as_ref(),
    };

    let mut checks = Vec::new();
    for entry in &mut entries {
        let (Some(value), Some(est)) = (entry.value, spectral_for(entry.tensor)) else {
            continue;
        };
        entry.slack = Some(match entry.direction {
            Upper => value - est.estimate,
            Lower => est.estimate - value,
        });
        if !entry.applicable {
            continue;
        }
        let at = match (entry.pair, entry.vertex) {
            (Some((i, j)), _) => format!(" at pair {{{i}, {j}}}"),
            (None, Some(v)) => format!(" at vertex {v}"),
            (None, None) => String::new(),
        };
        let (holds, relation) = match entry.direction {
            Upper => (est.lo <= value + CHECK_EPSILON, "rho >="),
            Lower => (est.hi >= value - CHECK_EPSILON, "rho <="),
        };
        checks.push(Check {
            name: entry.name.clone(),
            gating: true,
            holds,
            detail: format!(
                "{}: bound {value}{at}, certified {relation} {} ({})",
                entry.name,
                match entry.direction {
                    Upper => est.lo,
                    Lower => est.hi,
                },
                entry.tensor
            ),
        });
        if entry.predicted_equality {
            checks.push(equality_check(
                &format!("equality:{}", entry.name),
                value,
                est,
            ));
        }
    }

    if let (Some(p), Some(est)) = (equality.predicted_q, spectral_q.as_ref()) {
        checks.push(equality_check("equality:rho_q", p, est));
    }

    // The strict side of each "equality iff" is monitored, not gated.
    if connected && equality.classification == Classification::General {
        if let (Some(value), Some(est)) = (entries[1].value, spectral_adj.as_ref()) {
            checks.push(strict_check("strict:adj_d1d2", value, est));
        }
    }
    if connected && !regular {
        if let (Some(value), Some(est)) = (entries[5].value, spectral_q.as_ref()) {
            checks.push(strict_check("strict:q_upper_d1d2", value, est));
        }
    }

    BoundReport {
        k: h.k(),
        n: h.n(),
        m: h.m(),
        connected,
        d1: profile.d1(),
        d2: profile.d2(),
        classification: equality.classification,
        predicted_adj: equality.predicted_adj,
        predicted_q: equality.predicted_q,
        spectral_adj,
        spectral_q,
        spectral_failures,
        entries,
        checks,
    }
}

fn equality_check(name: &str, predicted: f64, est: &SpectralEstimate) -> Check {
    let holds =
        est.converged && est.lo - CHECK_EPSILON <= predicted && predicted <= est.hi + CHECK_EPSILON;
    Check {
        name: name.to_string(),
        gating: true,
        holds,
        detail: format!(
            "{name}: predicted {predicted}, certified bracket [{}, {}]{}",
            est.lo,
            est.hi,
            if est.converged {
                ""
            } else {
                " (not converged)"
            }
        ),
    }
}

fn strict_check(name: &str, value: f64, est: &SpectralEstimate) -> Check {
    Check {
        name: name.to_string(),
        gating: false,
        holds: value - est.hi > CHECK_EPSILON,
        detail: format!("{name}: bound {value}, certified rho <= {}", est.hi),
    }
}
