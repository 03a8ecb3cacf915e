use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{binomial, Hypergraph};
use crate::error::{Error, Result};

/// The hyperstar with `t` edges: vertex 1 is the center, every other vertex
/// is a leaf of exactly one edge. It has `t(k-1) + 1` vertices.
pub fn gen_hyperstar(t: usize, k: usize) -> Result<Hypergraph> {
    if t == 0 {
        return Err(Error::Infeasible(
            "hyperstar needs at least one edge".into(),
        ));
    }
    if k < 2 {
        return Err(Error::InvalidUniformity { k, min: 2 });
    }
    let n = t * (k - 1) + 1;
    let edges = (0..t).map(|j| {
        let first = 2 + j * (k - 1);
        std::iter::once(1)
            .chain(first..first + k - 1)
            .collect::<Vec<_>>()
    });
    Hypergraph::build(k, n, edges)
}

/// Every k-subset of `1..=n`.
pub fn gen_complete(n: usize, k: usize) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::InvalidUniformity { k, min: 2 });
    }
    if n < k {
        return Err(Error::Infeasible(format!(
            "complete {k}-uniform hypergraph needs n >= {k}, got {n}"
        )));
    }
    Hypergraph::build(k, n, (1..=n).combinations(k))
}

/// `t` disjoint edges of size `r` on `t * r` vertices. `r = 1` is allowed so
/// the result can serve as a blow-up base for graph stars.
pub fn gen_disjoint_blocks(t: usize, r: usize) -> Result<Hypergraph> {
    if t == 0 {
        return Err(Error::Infeasible("need at least one block".into()));
    }
    let edges = (0..t).map(|j| (j * r + 1..=(j + 1) * r).collect::<Vec<_>>());
    Hypergraph::build_base(r, t * r, edges)
}

/// `m` distinct k-sets drawn uniformly without replacement.
pub fn gen_random(n: usize, m: usize, k: usize, seed: u64) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::InvalidUniformity { k, min: 2 });
    }
    if n == 0 {
        return Err(Error::NoVertices);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match binomial(n, k) {
        Some(total) => {
            if m > total {
                return Err(Error::Infeasible(format!(
                    "{m} edges requested but only {total} {k}-subsets of {n} vertices exist"
                )));
            }
            let edges = index::sample(&mut rng, total, m)
                .into_iter()
                .map(|rank| unrank_combination(rank, n, k));
            Hypergraph::build(k, n, edges)
        }
        None => {
            // C(n, k) overflows, so collisions are negligible; rejection is fine.
            let mut seen = HashSet::with_capacity(m);
            while seen.len() < m {
                let mut e: Vec<usize> = index::sample(&mut rng, n, k)
                    .into_iter()
                    .map(|v| v + 1)
                    .collect();
                e.sort_unstable();
                seen.insert(e);
            }
            let mut edges: Vec<_> = seen.into_iter().collect();
            edges.sort_unstable();
            Hypergraph::build(k, n, edges)
        }
    }
}

/// The `rank`-th k-subset of `1..=n` in lexicographic order.
fn unrank_combination(mut rank: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = k - slot - 1;
        let mut c = next;
        loop {
            let count = binomial(n - c - 1, remaining).expect("bounded by total");
            if rank < count {
                break;
            }
            rank -= count;
            c += 1;
        }
        out.push(c + 1);
        next = c + 1;
    }
    out
}

/// Work limits for [`gen_random_regular_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegularSamplerBudget {
    pub restarts: usize,
    /// Repair swaps per attempt, as a multiple of `n * d`.
    pub swaps_per_stub: usize,
}

impl Default for RegularSamplerBudget {
    fn default() -> Self {
        RegularSamplerBudget {
            restarts: 100,
            swaps_per_stub: 10,
        }
    }
}

/// A `d`-regular k-uniform hypergraph on `n` vertices, best effort.
pub fn gen_random_regular(n: usize, d: usize, k: usize, seed: u64) -> Result<Hypergraph> {
    gen_random_regular_with(n, d, k, seed, RegularSamplerBudget::default())
}

/// Deals `d` stubs per vertex into k-sized groups, then repairs groups with
/// a repeated vertex or a duplicate edge by swapping stubs between groups.
/// Restarts from a fresh shuffle when the swap budget runs out.
pub fn gen_random_regular_with(
    n: usize,
    d: usize,
    k: usize,
    seed: u64,
    budget: RegularSamplerBudget,
) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::InvalidUniformity { k, min: 2 });
    }
    if n == 0 {
        return Err(Error::NoVertices);
    }
    if !(n * d).is_multiple_of(k) {
        return Err(Error::Infeasible(format!(
            "k = {k} does not divide n * d = {}",
            n * d
        )));
    }
    if d == 0 {
        return Hypergraph::build(k, n, Vec::<Vec<usize>>::new());
    }
    let max_degree = if n < k {
        0
    } else {
        binomial(n - 1, k - 1).unwrap_or(usize::MAX)
    };
    if d > max_degree {
        return Err(Error::Infeasible(format!(
            "degree {d} exceeds C(n-1, k-1) = {max_degree}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let groups = stubs.len() / k;
    let swap_budget = budget.swaps_per_stub * n * d;

    for _ in 0..budget.restarts {
        stubs.shuffle(&mut rng);
        let mut bad = bad_groups(&stubs, k);
        let mut swaps = 0;
        while !bad.is_empty() && swaps < swap_budget && groups > 1 {
            swaps += 1;
            let a = bad[rng.gen_range(0..bad.len())];
            let mut b = rng.gen_range(0..groups - 1);
            if b >= a {
                b += 1;
            }
            let pa = a * k + rng.gen_range(0..k);
            let pb = b * k + rng.gen_range(0..k);
            stubs.swap(pa, pb);
            let candidate = bad_groups(&stubs, k);
            if candidate.len() <= bad.len() {
                bad = candidate;
            } else {
                stubs.swap(pa, pb);
            }
        }
        if bad.is_empty() {
            let edges = stubs
                .chunks_exact(k)
                .map(|g| g.iter().map(|v| v + 1).collect::<Vec<_>>());
            return Hypergraph::build(k, n, edges);
        }
    }
    Err(Error::RetryBudgetExhausted {
        attempts: budget.restarts,
    })
}

/// Indices of groups that repeat a vertex or coincide with another group.
fn bad_groups(stubs: &[usize], k: usize) -> Vec<usize> {
    let sorted: Vec<Vec<usize>> = stubs
        .chunks_exact(k)
        .map(|g| {
            let mut g = g.to_vec();
            g.sort_unstable();
            g
        })
        .collect();
    let mut counts: HashMap<&[usize], usize> = HashMap::with_capacity(sorted.len());
    for g in &sorted {
        *counts.entry(g.as_slice()).or_default() += 1;
    }
    sorted
        .iter()
        .enumerate()
        .filter(|(_, g)| g.windows(2).any(|w| w[0] == w[1]) || counts[g.as_slice()] > 1)
        .map(|(i, _)| i)
        .collect()
}
