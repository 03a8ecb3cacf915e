#![allow(dead_code)]

use hyperspectra::hypergraph::{gen_random, gen_random_regular};
use hyperspectra::Hypergraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Binomial coefficient for small arguments.
pub fn choose(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Seeded connected instances with k in {2, 3, 4}, n <= 12, m <= 40.
///
/// Mostly uniform random edge sets; every fifth instance is a blow-up of a
/// random regular base so equality cases are represented.
pub fn connected_instances(count: usize, seed: u64) -> Vec<Hypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.gen_range(2..=4);
        let candidate = if out.len() % 5 == 4 && k >= 3 {
            let n0 = rng.gen_range(k..=11);
            let d = rng.gen_range(1..=3);
            match gen_random_regular(n0, d, k - 1, rng.gen()) {
                Ok(base) if base.m() <= 40 => base.blow_up().ok(),
                _ => None,
            }
        } else {
            let n = rng.gen_range(k + 1..=12);
            let min_m = (n - 1).div_ceil(k - 1);
            let max_m = choose(n, k).min(40);
            if min_m > max_m {
                None
            } else {
                let m = rng.gen_range(min_m..=max_m);
                gen_random(n, m, k, rng.gen()).ok()
            }
        };
        if let Some(h) = candidate {
            if h.is_connected() && h.m() <= 40 && h.n() <= 12 {
                out.push(h);
            }
        }
    }
    out
}
