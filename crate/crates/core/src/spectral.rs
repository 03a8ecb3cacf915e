//! Certified spectral radii via shifted power iteration.
//!
//! For a weakly irreducible nonnegative tensor `T` and any positive `x`,
//!
//! ```text
//! min_i (Tx)_i / x_i^(k-1)  <=  rho(T)  <=  max_i (Tx)_i / x_i^(k-1)
//! ```
//!
//! The solver iterates `x <- (T'x)^[1/(k-1)]` with `T'x = Tx + c x^[k-1]`,
//! normalizing to max-entry 1, and stops once that bracket is narrower than
//! the tolerance. Adding `c x^[k-1]` shifts every eigenvalue by exactly `c`
//! and makes the iteration primitive, so it cannot cycle on bipartite-like
//! structure the way the unshifted map can.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::tensor::{envelope, HomogeneousMap, SimilarMap, TensorKind, TensorMap, WeightVector};

/// Iterations between stall checks.
const STALL_WINDOW: usize = 1000;
/// Relative bracket shrinkage below which a window counts as stalled.
const STALL_SHRINKAGE: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Stop once the Collatz-Wielandt bracket is at most this wide.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Diagonal shift `c` added during iteration and subtracted on report.
    pub shift: f64,
    /// Solve disconnected inputs component by component.
    pub per_component: bool,
    /// Seed for the single random restart after a stall.
    pub restart_seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: 1e-10,
            max_iterations: 200_000,
            shift: 1.0,
            per_component: true,
            restart_seed: 0x5eed,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidOptions(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !(self.shift >= 0.0 && self.shift.is_finite()) {
            return Err(Error::InvalidOptions(format!(
                "shift must be nonnegative, got {}",
                self.shift
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidOptions(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A certified bracket `[lo, hi]` around the spectral radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub lo: f64,
    pub hi: f64,
    /// Midpoint of `[lo, hi]`.
    pub estimate: f64,
    /// Nonnegative, max-entry 1. Strictly positive on connected inputs; on
    /// disconnected inputs it is supported on the dominant component.
    pub eigenvector: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `max_i |(T x)_i - estimate * x_i^(k-1)|` at the reported eigenvector.
    pub residual: f64,
    /// Number of connected components the input was split into.
    pub components: usize,
    /// Whether the stall restart fired.
    pub restarted: bool,
}

/// One step of the iteration, as seen by an observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Running bracket, unshifted.
    pub lo: f64,
    pub hi: f64,
    /// Width of this step's own bracket.
    pub width: f64,
}

struct RawSolve {
    lo: f64,
    hi: f64,
    eigenvector: Vec<f64>,
    iterations: usize,
    converged: bool,
    restarted: bool,
}

fn normalize_max(x: &mut [f64]) {
    let max = x.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        x.iter_mut().for_each(|v| *v /= max);
    }
}

fn power_iterate<M: HomogeneousMap>(
    map: &M,
    opts: &SolverOptions,
    observer: &mut dyn FnMut(&IterationRecord),
) -> Result<RawSolve> {
    let n = map.dim();
    let k = map.order();
    let power = k as i32 - 1;
    let root = 1.0 / (k as f64 - 1.0);

    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut restarted = false;
    let mut checkpoint_width = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    for iteration in 1..=opts.max_iterations {
        iterations = iteration;
        map.apply_into(&x, &mut y);
        if opts.shift != 0.0 {
            for (yi, xi) in y.iter_mut().zip(&x) {
                *yi += opts.shift * xi.powi(power);
            }
        }
        if y.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::NumericFailure { iteration });
        }
        let (step_lo, step_hi) = envelope(k, &x, &y);
        let width = step_hi - step_lo;
        lo = lo.max(step_lo - opts.shift);
        hi = hi.min(step_hi - opts.shift);
        observer(&IterationRecord {
            iteration,
            lo,
            hi,
            width,
        });
        if width <= opts.tolerance {
            converged = true;
            break;
        }
        if iteration == opts.max_iterations {
            break;
        }

        if iteration % STALL_WINDOW == 0 {
            let stalled = checkpoint_width - width < STALL_SHRINKAGE * checkpoint_width;
            checkpoint_width = width;
            if stalled {
                if restarted {
                    break;
                }
                restarted = true;
                let mut rng = ChaCha8Rng::seed_from_u64(opts.restart_seed);
                x.iter_mut().for_each(|v| *v = rng.gen_range(0.5..1.5));
                normalize_max(&mut x);
                continue;
            }
        }

        for (xi, &yi) in x.iter_mut().zip(&y) {
            *xi = match k {
                2 => yi,
                3 => yi.sqrt(),
                _ => yi.powf(root),
            };
        }
        normalize_max(&mut x);
    }

    if lo > hi {
        // only reachable through rounding once the bracket has collapsed
        let mid = 0.5 * (lo + hi);
        lo = mid;
        hi = mid;
    }
    Ok(RawSolve {
        lo,
        hi,
        eigenvector: x,
        iterations,
        converged,
        restarted,
    })
}

fn residual_of<M: HomogeneousMap>(map: &M, lambda: f64, x: &[f64]) -> f64 {
    let mut y = vec![0.0; map.dim()];
    map.apply_into(x, &mut y);
    let power = map.order() as i32 - 1;
    y.iter()
        .zip(x)
        .map(|(yi, xi)| (yi - lambda * xi.powi(power)).abs())
        .fold(0.0, f64::max)
}

fn finish<M: HomogeneousMap>(map: &M, raw: RawSolve) -> SpectralEstimate {
    let estimate = 0.5 * (raw.lo + raw.hi);
    SpectralEstimate {
        lo: raw.lo,
        hi: raw.hi,
        estimate,
        residual: residual_of(map, estimate, &raw.eigenvector),
        eigenvector: raw.eigenvector,
        iterations: raw.iterations,
        converged: raw.converged,
        components: 1,
        restarted: raw.restarted,
    }
}

fn edgeless_estimate(n: usize, components: usize) -> SpectralEstimate {
    let mut eigenvector = vec![0.0; n];
    eigenvector[0] = 1.0;
    SpectralEstimate {
        lo: 0.0,
        hi: 0.0,
        estimate: 0.0,
        eigenvector,
        iterations: 0,
        converged: true,
        residual: 0.0,
        components,
        restarted: false,
    }
}

/// `rho(A(H))` or `rho(Q(H))` with a certified bracket.
pub fn spectral_radius(
    h: &Hypergraph,
    kind: TensorKind,
    opts: &SolverOptions,
) -> Result<SpectralEstimate> {
    spectral_radius_traced(h, kind, opts, &mut |_| {})
}

/// [`spectral_radius`] reporting every iteration to `observer`. On
/// disconnected inputs the records of each component solve arrive in turn.
pub fn spectral_radius_traced(
    h: &Hypergraph,
    kind: TensorKind,
    opts: &SolverOptions,
    observer: &mut dyn FnMut(&IterationRecord),
) -> Result<SpectralEstimate> {
    opts.validate()?;
    if h.is_connected() {
        if h.m() == 0 {
            return Ok(edgeless_estimate(h.n(), 1));
        }
        let map = TensorMap::new(h, kind);
        return Ok(finish(&map, power_iterate(&map, opts, observer)?));
    }
    if !opts.per_component {
        return Err(Error::Disconnected);
    }

    // rho of a direct sum is the largest rho over its blocks.
    let components = h.components();
    let count = components.len();
    let mut best: Option<(SpectralEstimate, &[crate::hypergraph::Vertex])> = None;
    let mut lo = 0.0_f64;
    let mut hi = 0.0_f64;
    let mut iterations = 0;
    let mut converged = true;
    let mut restarted = false;
    for c in &components {
        let est = if c.graph.m() == 0 {
            edgeless_estimate(1, 1)
        } else {
            let map = TensorMap::new(&c.graph, kind);
            finish(&map, power_iterate(&map, opts, observer)?)
        };
        lo = lo.max(est.lo);
        hi = hi.max(est.hi);
        iterations += est.iterations;
        converged &= est.converged;
        restarted |= est.restarted;
        if best.as_ref().is_none_or(|(b, _)| est.estimate > b.estimate) {
            best = Some((est, &c.vertices));
        }
    }
    let (dominant, vertices) = best.expect("at least one component");
    let mut eigenvector = vec![0.0; h.n()];
    for (v, &value) in vertices.iter().zip(&dominant.eigenvector) {
        eigenvector[v.index()] = value;
    }
    let estimate = dominant.estimate;
    Ok(SpectralEstimate {
        lo,
        hi,
        estimate,
        residual: residual_of(&TensorMap::new(h, kind), estimate, &eigenvector),
        eigenvector,
        iterations,
        converged,
        components: count,
        restarted,
    })
}

/// `max_i |T(H)x_i - lambda x_i^(k-1)|`.
pub fn residual(h: &Hypergraph, kind: TensorKind, lambda: f64, x: &[f64]) -> Result<f64> {
    if x.len() != h.n() {
        return Err(Error::LengthMismatch {
            expected: h.n(),
            found: x.len(),
        });
    }
    if let Some(index) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(residual_of(&TensorMap::new(h, kind), lambda, x))
}

/// Spectral radii of `T` and of the diagonally similar `B^{-(k-1)} T B`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityCheck {
    pub plain: SpectralEstimate,
    pub similar: SpectralEstimate,
}

impl SimilarityCheck {
    pub fn difference(&self) -> f64 {
        (self.plain.estimate - self.similar.estimate).abs()
    }
}

/// Solves `T` and `B^{-(k-1)} T B` independently; the two should agree since
/// diagonal similarity preserves the spectrum.
pub fn similarity_invariance_check(
    h: &Hypergraph,
    kind: TensorKind,
    b: &WeightVector,
    opts: &SolverOptions,
) -> Result<SimilarityCheck> {
    opts.validate()?;
    b.check_len(h.n())?;
    if h.m() == 0 {
        return Err(Error::NoEdges);
    }
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    let plain_map = TensorMap::new(h, kind);
    let plain = finish(&plain_map, power_iterate(&plain_map, opts, &mut |_| {})?);
    let similar_map = SimilarMap {
        inner: plain_map,
        weights: b,
    };
    let similar = finish(
        &similar_map,
        power_iterate(&similar_map, opts, &mut |_| {})?,
    );
    Ok(SimilarityCheck { plain, similar })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{
        gen_complete, gen_disjoint_blocks, gen_hyperstar, gen_random, gen_random_regular,
    };
    use crate::tensor::rayleigh_interval;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    fn assert_bracketed(est: &SpectralEstimate, truth: f64) {
        assert!(
            est.lo <= truth + 1e-12 && truth <= est.hi + 1e-12,
            "{truth} not in [{}, {}]",
            est.lo,
            est.hi
        );
    }

    #[test]
    fn complete_adjacency_is_degree() {
        let h = gen_complete(6, 3).unwrap();
        let est = spectral_radius(&h, TensorKind::Adjacency, &opts()).unwrap();
        assert!((est.estimate - 10.0).abs() <= 1e-9);
        assert!(est.converged);
        assert_bracketed(&est, 10.0);
    }

    #[test]
    fn complete_signless_is_twice_degree() {
        let h = gen_complete(6, 3).unwrap();
        let est = spectral_radius(&h, TensorKind::SignlessLaplacian, &opts()).unwrap();
        assert!((est.estimate - 20.0).abs() <= 1e-8);
        assert_bracketed(&est, 20.0);
    }

    #[test]
    fn hyperstar_adjacency() {
        let h = gen_hyperstar(4, 3).unwrap();
        let est = spectral_radius(&h, TensorKind::Adjacency, &opts()).unwrap();
        let truth = 4.0_f64.powf(1.0 / 3.0);
        assert!((est.estimate - truth).abs() <= 1e-8);
        assert!((est.estimate - 1.587401052).abs() <= 1e-9);
        assert_bracketed(&est, truth);
        assert!(est.residual <= 1e-8);
        assert!(est.residual <= 10.0 * opts().tolerance);
    }

    #[test]
    fn eigenvector_is_positive_and_max_normalized() {
        let h = gen_random(10, 15, 3, 2).unwrap();
        assert!(h.is_connected());
        let est = spectral_radius(&h, TensorKind::SignlessLaplacian, &opts()).unwrap();
        assert!(est.eigenvector.iter().all(|&v| v > 0.0));
        assert_eq!(est.eigenvector.iter().copied().fold(0.0, f64::max), 1.0);
        assert!(est.lo <= est.estimate && est.estimate <= est.hi);
        assert!(est.hi - est.lo <= opts().tolerance);
    }

    #[test]
    fn graph_star_needs_the_shift() {
        // bipartite, so the unshifted iteration oscillates
        let star = gen_disjoint_blocks(3, 1).unwrap().blow_up().unwrap();
        let est = spectral_radius(&star, TensorKind::Adjacency, &opts()).unwrap();
        assert!((est.estimate - 3.0_f64.sqrt()).abs() <= 1e-9);
        let unshifted = SolverOptions {
            shift: 0.0,
            max_iterations: 500,
            ..opts()
        };
        let est = spectral_radius(&star, TensorKind::Adjacency, &unshifted).unwrap();
        assert!(!est.converged);
        assert_bracketed(&est, 3.0_f64.sqrt());
    }

    #[test]
    fn bracket_is_monotone() {
        let h = gen_random(11, 18, 4, 6).unwrap();
        assert!(h.is_connected());
        let mut records = Vec::new();
        spectral_radius_traced(&h, TensorKind::Adjacency, &opts(), &mut |r| {
            records.push(*r)
        })
        .unwrap();
        assert!(records.len() > 1);
        for w in records.windows(2) {
            assert!(w[1].lo >= w[0].lo);
            assert!(w[1].hi <= w[0].hi);
        }
        assert!(records.iter().all(|r| r.lo <= r.hi));
    }

    #[test]
    fn shift_does_not_move_the_answer() {
        let h = gen_random(9, 12, 3, 8).unwrap();
        assert!(h.is_connected());
        let tol = opts().tolerance;
        let base = spectral_radius(&h, TensorKind::Adjacency, &opts()).unwrap();
        for shift in [0.25, 3.0, 10.0] {
            let other = spectral_radius(
                &h,
                TensorKind::Adjacency,
                &SolverOptions { shift, ..opts() },
            )
            .unwrap();
            assert!(
                (other.estimate - base.estimate).abs() <= 2.0 * tol,
                "shift {shift}"
            );
        }
    }

    #[test]
    fn budget_exhaustion_keeps_best_bracket() {
        let h = gen_random(10, 14, 3, 3).unwrap();
        let short = SolverOptions {
            max_iterations: 3,
            ..opts()
        };
        let est = spectral_radius(&h, TensorKind::Adjacency, &short).unwrap();
        assert!(!est.converged);
        assert_eq!(est.iterations, 3);
        let full = spectral_radius(&h, TensorKind::Adjacency, &opts()).unwrap();
        assert_bracketed(&est, full.estimate);
    }

    #[test]
    fn impossible_tolerance_stalls_and_restarts_once() {
        let h = gen_random(8, 10, 3, 1).unwrap();
        assert!(h.is_connected());
        let tight = SolverOptions {
            tolerance: 1e-300,
            max_iterations: 50_000,
            ..opts()
        };
        let est = spectral_radius(&h, TensorKind::Adjacency, &tight).unwrap();
        assert!(!est.converged);
        assert!(est.restarted);
        assert!(est.iterations < 50_000);
        assert!(est.hi - est.lo <= 1e-12);
    }

    #[test]
    fn disconnected_per_component() {
        let star = gen_hyperstar(4, 3).unwrap();
        let mut edges = star.edge_labels();
        edges.extend([
            vec![10, 11, 12],
            vec![10, 11, 13],
            vec![10, 12, 13],
            vec![11, 12, 13],
        ]);
        let h = Hypergraph::build(3, 14, edges).unwrap();
        assert_eq!(h.components().len(), 3);
        let est = spectral_radius(&h, TensorKind::Adjacency, &opts()).unwrap();
        // the complete 3-graph on 4 vertices is 3-regular and dominates
        assert!((est.estimate - 3.0).abs() <= 1e-9);
        assert_eq!(est.components, 3);
        assert!(est.eigenvector[..9].iter().all(|&v| v == 0.0));
        assert!(est.residual <= 10.0 * opts().tolerance);

        let strict = SolverOptions {
            per_component: false,
            ..opts()
        };
        assert_eq!(
            spectral_radius(&h, TensorKind::Adjacency, &strict),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn edgeless_inputs() {
        let lone = Hypergraph::build(3, 1, Vec::<Vec<usize>>::new()).unwrap();
        let est = spectral_radius(&lone, TensorKind::SignlessLaplacian, &opts()).unwrap();
        assert_eq!((est.lo, est.hi, est.estimate), (0.0, 0.0, 0.0));
        let empty = Hypergraph::build(3, 4, Vec::<Vec<usize>>::new()).unwrap();
        assert_eq!(
            spectral_radius(&empty, TensorKind::Adjacency, &opts())
                .unwrap()
                .estimate,
            0.0
        );
        let strict = SolverOptions {
            per_component: false,
            ..opts()
        };
        assert_eq!(
            spectral_radius(&empty, TensorKind::Adjacency, &strict),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn invalid_options() {
        let h = gen_hyperstar(2, 3).unwrap();
        for bad in [
            SolverOptions {
                tolerance: 0.0,
                ..opts()
            },
            SolverOptions {
                shift: -1.0,
                ..opts()
            },
            SolverOptions {
                max_iterations: 0,
                ..opts()
            },
        ] {
            assert!(matches!(
                spectral_radius(&h, TensorKind::Adjacency, &bad),
                Err(Error::InvalidOptions(_))
            ));
        }
    }

    #[test]
    fn residual_examples() {
        let h = gen_complete(6, 3).unwrap();
        assert_eq!(
            residual(&h, TensorKind::Adjacency, 10.0, &[1.0; 6]).unwrap(),
            0.0
        );
        let r = gen_random(9, 11, 3, 4).unwrap();
        assert_eq!(
            residual(&r, TensorKind::Adjacency, 0.0, &[1.0; 9]).unwrap(),
            r.max_degree() as f64
        );
        assert_eq!(
            residual(&h, TensorKind::Adjacency, 1.0, &[0.0; 6]),
            Err(Error::ZeroVector)
        );

        let star = gen_hyperstar(4, 3).unwrap();
        let est = spectral_radius(&star, TensorKind::Adjacency, &opts()).unwrap();
        let r = residual(
            &star,
            TensorKind::Adjacency,
            4.0_f64.powf(1.0 / 3.0),
            &est.eigenvector,
        )
        .unwrap();
        assert!(r <= 1e-8);
    }

    #[test]
    fn interval_brackets_solver_output() {
        let h = gen_random(12, 20, 3, 17).unwrap();
        assert!(h.is_connected());
        for kind in [TensorKind::Adjacency, TensorKind::SignlessLaplacian] {
            let est = spectral_radius(&h, kind, &opts()).unwrap();
            let (lo, hi) = rayleigh_interval(&h, kind, &[1.0; 12]).unwrap();
            assert!(lo <= est.estimate && est.estimate <= hi);
        }
    }

    #[test]
    fn similarity_with_unit_weights_is_identical() {
        let h = gen_random_regular(9, 2, 3, 5).unwrap();
        let h = if h.is_connected() {
            h
        } else {
            gen_hyperstar(3, 3).unwrap()
        };
        let check = similarity_invariance_check(
            &h,
            TensorKind::Adjacency,
            &WeightVector::uniform(h.n()),
            &opts(),
        )
        .unwrap();
        assert_eq!(check.plain, check.similar);
    }

    #[test]
    fn similarity_with_degree_weights() {
        let h = gen_complete(6, 3).unwrap();
        let b = WeightVector::degrees(&h).unwrap();
        let check = similarity_invariance_check(&h, TensorKind::Adjacency, &b, &opts()).unwrap();
        assert!((check.plain.estimate - 10.0).abs() <= 1e-9);
        assert!((check.similar.estimate - 10.0).abs() <= 1e-9);
    }

    #[test]
    fn similarity_hyperstar_random_weights() {
        let h = gen_hyperstar(4, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let b = WeightVector::new((0..9).map(|_| rng.gen_range(0.5..2.0)).collect()).unwrap();
        let check = similarity_invariance_check(&h, TensorKind::Adjacency, &b, &opts()).unwrap();
        let truth = 4.0_f64.powf(1.0 / 3.0);
        assert!((check.plain.estimate - truth).abs() <= 1e-8);
        assert!((check.similar.estimate - truth).abs() <= 1e-8);
        assert!(check.difference() <= 2e-8);
    }

    #[test]
    fn similarity_rejects_disconnected() {
        let h = gen_disjoint_blocks(2, 3).unwrap();
        assert_eq!(
            similarity_invariance_check(
                &h,
                TensorKind::Adjacency,
                &WeightVector::uniform(6),
                &opts()
            ),
            Err(Error::Disconnected)
        );
    }
}
