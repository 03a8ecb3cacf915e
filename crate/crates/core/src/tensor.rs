//! Implicit tensor-times-vector maps for the adjacency tensor `A(H)` and the
//! signless Laplacian `Q(H) = D(H) + A(H)`.
//!
//! `A(H)` has entry `1/(k-1)!` on every index tuple that permutes an edge.
//! For `(Ax)_i = sum_{i2..ik} A[i,i2,..,ik] x_i2 ... x_ik`, fix an edge `e`
//! containing `i`. The tuples `(i, i2, .., ik)` with `{i2..ik} = e \ {i}` are
//! the `(k-1)!` orderings of the remaining vertices, each contributing the
//! same product, so the weights cancel and
//!
//! ```text
//! (Ax)_i = sum over edges e containing i of prod_{u in e, u != i} x_u
//! ```
//!
//! Nothing of size `n^k` is ever stored.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorKind {
    Adjacency,
    SignlessLaplacian,
}

impl fmt::Display for TensorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TensorKind::Adjacency => "adjacency",
            TensorKind::SignlessLaplacian => "signless_laplacian",
        })
    }
}

/// Strictly positive, finite per-vertex weights (the diagonal of `B`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if w <= 0.0 {
                return Err(Error::NonPositive { index, value: w });
            }
        }
        Ok(WeightVector(weights))
    }

    pub fn uniform(n: usize) -> Self {
        WeightVector(vec![1.0; n])
    }

    /// `b_i = d_i`; fails when some vertex is isolated.
    pub fn degrees(h: &Hypergraph) -> Result<Self> {
        let degree = h.degree_vector();
        if let Some(i) = degree.iter().position(|&d| d == 0) {
            return Err(Error::IsolatedVertex(Vertex::from_index(i)));
        }
        Ok(WeightVector(degree.iter().map(|&d| d as f64).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

/// A nonnegative map homogeneous of degree `order - 1`, evaluated in place.
///
/// Implementors must write every entry of `y`.
pub trait HomogeneousMap {
    fn dim(&self) -> usize;
    /// Tensor order `k`.
    fn order(&self) -> usize;
    fn apply_into(&self, x: &[f64], y: &mut [f64]);
}

/// `T(H) x` for `T` = `A(H)` or `Q(H)`.
#[derive(Debug, Clone, Copy)]
pub struct TensorMap<'a> {
    pub graph: &'a Hypergraph,
    pub kind: TensorKind,
}

impl<'a> TensorMap<'a> {
    pub fn new(graph: &'a Hypergraph, kind: TensorKind) -> Self {
        TensorMap { graph, kind }
    }
}

impl HomogeneousMap for TensorMap<'_> {
    fn dim(&self) -> usize {
        self.graph.n()
    }

    fn order(&self) -> usize {
        self.graph.k()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        adjacency_into(self.graph, x, y);
        if self.kind == TensorKind::SignlessLaplacian {
            let power = self.graph.k() as i32 - 1;
            for ((yi, &xi), &d) in y.iter_mut().zip(x).zip(self.graph.degree_vector()) {
                *yi += d as f64 * xi.powi(power);
            }
        }
    }
}

/// `(B^{-(k-1)} T B) x` without forming the similar tensor.
#[derive(Debug, Clone, Copy)]
pub struct SimilarMap<'a> {
    pub inner: TensorMap<'a>,
    pub weights: &'a WeightVector,
}

impl HomogeneousMap for SimilarMap<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn order(&self) -> usize {
        self.inner.order()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let b = self.weights.as_slice();
        let scaled: Vec<f64> = x.iter().zip(b).map(|(xi, bi)| xi * bi).collect();
        self.inner.apply_into(&scaled, y);
        let power = self.order() as i32 - 1;
        for (yi, bi) in y.iter_mut().zip(b) {
            *yi /= bi.powi(power);
        }
    }
}

/// Edge-list accumulation of `A(H) x` with prefix/suffix products, so zero
/// entries need no special casing. Edges are visited in canonical order,
/// which fixes the summation order.
fn adjacency_into(h: &Hypergraph, x: &[f64], y: &mut [f64]) {
    y.iter_mut().for_each(|v| *v = 0.0);
    let k = h.k();
    let mut suffix = vec![1.0; k + 1];
    for e in h.edges() {
        for t in (0..k).rev() {
            suffix[t] = suffix[t + 1] * x[e[t]];
        }
        let mut prefix = 1.0;
        for t in 0..k {
            y[e[t]] += prefix * suffix[t + 1];
            prefix *= x[e[t]];
        }
    }
}

fn check_vector(n: usize, x: &[f64]) -> Result<()> {
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: x.len(),
        });
    }
    if let Some(index) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

/// `T(H) x`.
pub fn apply(h: &Hypergraph, kind: TensorKind, x: &[f64]) -> Result<Vec<f64>> {
    check_vector(h.n(), x)?;
    let mut y = vec![0.0; h.n()];
    TensorMap::new(h, kind).apply_into(x, &mut y);
    Ok(y)
}

/// Row sums `r_i(T)`: `d_i` for the adjacency tensor, `2 d_i` for `Q`.
pub fn row_sums(h: &Hypergraph, kind: TensorKind) -> Vec<f64> {
    let factor = match kind {
        TensorKind::Adjacency => 1.0,
        TensorKind::SignlessLaplacian => 2.0,
    };
    h.degree_vector()
        .iter()
        .map(|&d| factor * d as f64)
        .collect()
}

/// `(B^{-(k-1)} T(H) B) x` with `B = diag(b)`.
pub fn apply_similar(
    h: &Hypergraph,
    kind: TensorKind,
    b: &WeightVector,
    x: &[f64],
) -> Result<Vec<f64>> {
    b.check_len(h.n())?;
    check_vector(h.n(), x)?;
    let mut y = vec![0.0; h.n()];
    SimilarMap {
        inner: TensorMap::new(h, kind),
        weights: b,
    }
    .apply_into(x, &mut y);
    Ok(y)
}

/// Collatz-Wielandt envelope `(min_i y_i / x_i^(k-1), max_i y_i / x_i^(k-1))`
/// where `y = map(x)`, for a strictly positive `x` whose image is already in
/// `y`. Callers guarantee positivity.
pub(crate) fn envelope(order: usize, x: &[f64], y: &[f64]) -> (f64, f64) {
    let power = order as i32 - 1;
    x.iter()
        .zip(y)
        .map(|(&xi, &yi)| yi / xi.powi(power))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        })
}

/// Bracket `lo <= rho(T) <= hi` from a strictly positive test vector.
pub fn rayleigh_interval(h: &Hypergraph, kind: TensorKind, x: &[f64]) -> Result<(f64, f64)> {
    check_vector(h.n(), x)?;
    if let Some(index) = x.iter().position(|&v| v <= 0.0) {
        return Err(Error::NonPositive {
            index,
            value: x[index],
        });
    }
    let y = apply(h, kind, x)?;
    Ok(envelope(h.k(), x, &y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{gen_complete, gen_disjoint_blocks, gen_hyperstar, gen_random};
    use itertools::Itertools;
    use proptest::prelude::*;

    /// Literal `sum_{i2..ik} A[i,i2..ik] x_i2..x_ik` over all `n^(k-1)` index
    /// tuples with the `1/(k-1)!` entry weight. Only for tiny `n`.
    fn dense_apply(h: &Hypergraph, x: &[f64]) -> Vec<f64> {
        let k = h.k();
        let n = h.n();
        let edges: std::collections::HashSet<Vec<usize>> = h.edges().map(|e| e.to_vec()).collect();
        let fact: f64 = (1..k).map(|i| i as f64).product();
        (0..n)
            .map(|i| {
                std::iter::repeat(0..n)
                    .take(k - 1)
                    .multi_cartesian_product()
                    .map(|tail| {
                        let mut idx = tail.clone();
                        idx.push(i);
                        idx.sort_unstable();
                        if edges.contains(&idx) {
                            tail.iter().map(|&u| x[u]).product::<f64>() / fact
                        } else {
                            0.0
                        }
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn single_edge_products() {
        let h = Hypergraph::build(3, 3, [[1, 2, 3]]).unwrap();
        let y = apply(&h, TensorKind::Adjacency, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![6.0, 3.0, 2.0]);
    }

    #[test]
    fn q_single_edge_graph() {
        let h = Hypergraph::build(2, 2, [[1, 2]]).unwrap();
        assert_eq!(
            apply(&h, TensorKind::SignlessLaplacian, &[1.0, 1.0]).unwrap(),
            vec![2.0, 2.0]
        );
    }

    #[test]
    fn matches_dense_oracle() {
        let cases = [
            gen_random(6, 7, 3, 1).unwrap(),
            gen_random(5, 4, 4, 2).unwrap(),
            gen_random(6, 8, 2, 3).unwrap(),
            gen_hyperstar(2, 4).unwrap(),
        ];
        for h in &cases {
            let x: Vec<f64> = (0..h.n()).map(|i| 0.3 + 0.17 * i as f64).collect();
            let fast = apply(h, TensorKind::Adjacency, &x).unwrap();
            let slow = dense_apply(h, &x);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn ones_give_degrees() {
        let h = gen_random(9, 10, 3, 5).unwrap();
        let ones = vec![1.0; h.n()];
        let y = apply(&h, TensorKind::Adjacency, &ones).unwrap();
        let d: Vec<f64> = h.degree_vector().iter().map(|&d| d as f64).collect();
        assert_eq!(y, d);
        assert_eq!(row_sums(&h, TensorKind::Adjacency), y);
        assert_eq!(
            row_sums(&h, TensorKind::SignlessLaplacian),
            apply(&h, TensorKind::SignlessLaplacian, &ones).unwrap()
        );
    }

    #[test]
    fn row_sums_examples() {
        let h = gen_hyperstar(4, 3).unwrap();
        assert_eq!(
            row_sums(&h, TensorKind::Adjacency),
            vec![4.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]
        );
        assert_eq!(
            row_sums(&h, TensorKind::SignlessLaplacian),
            vec![8.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0]
        );
        let empty = Hypergraph::build(3, 4, Vec::<Vec<usize>>::new()).unwrap();
        assert_eq!(row_sums(&empty, TensorKind::Adjacency), vec![0.0; 4]);
    }

    #[test]
    fn apply_errors() {
        let h = gen_hyperstar(2, 3).unwrap();
        assert_eq!(
            apply(&h, TensorKind::Adjacency, &[1.0; 3]),
            Err(Error::LengthMismatch {
                expected: 5,
                found: 3
            })
        );
        let mut x = vec![1.0; 5];
        x[2] = f64::NAN;
        assert_eq!(
            apply(&h, TensorKind::Adjacency, &x),
            Err(Error::NonFinite { index: 2 })
        );
        assert!(apply_similar(
            &h,
            TensorKind::Adjacency,
            &WeightVector::uniform(4),
            &[1.0; 5]
        )
        .is_err());
    }

    #[test]
    fn zero_entries_allowed() {
        let h = gen_hyperstar(2, 3).unwrap();
        let mut probe = vec![0.0; 5];
        probe[1] = 1.0;
        let y = apply(&h, TensorKind::Adjacency, &probe).unwrap();
        assert_eq!(y, vec![0.0, 0.0, 0.0, 0.0, 0.0]);
        probe[0] = 1.0;
        let y = apply(&h, TensorKind::Adjacency, &probe).unwrap();
        assert_eq!(y, vec![0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![1.0, 0.5]).is_ok());
        assert_eq!(
            WeightVector::new(vec![1.0, 0.0]),
            Err(Error::NonPositive {
                index: 1,
                value: 0.0
            })
        );
        assert_eq!(
            WeightVector::new(vec![f64::INFINITY]),
            Err(Error::NonFinite { index: 0 })
        );
        let h = Hypergraph::build(2, 3, [[1, 2]]).unwrap();
        assert_eq!(
            WeightVector::degrees(&h),
            Err(Error::IsolatedVertex(Vertex::from_index(2)))
        );
    }

    #[test]
    fn similar_with_unit_weights_is_bitwise_identical() {
        let h = gen_random(10, 14, 3, 9).unwrap();
        let x: Vec<f64> = (0..10).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let b = WeightVector::uniform(10);
        for kind in [TensorKind::Adjacency, TensorKind::SignlessLaplacian] {
            assert_eq!(
                apply_similar(&h, kind, &b, &x).unwrap(),
                apply(&h, kind, &x).unwrap()
            );
        }
    }

    #[test]
    fn similar_single_scaled_vertex() {
        let h = gen_random(8, 9, 3, 4).unwrap();
        let d1 = h.degree_vector()[0] as f64;
        let scale = 1.7_f64;
        let mut b = vec![1.0; 8];
        b[0] = scale;
        let y = apply_similar(
            &h,
            TensorKind::Adjacency,
            &WeightVector::new(b).unwrap(),
            &[1.0; 8],
        )
        .unwrap();
        assert!((y[0] - d1 / scale.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn similar_balances_hyperstar() {
        let h = gen_hyperstar(4, 3).unwrap();
        let mut b = vec![1.0; 9];
        b[0] = 4.0_f64.powf(1.0 / 3.0);
        let b = WeightVector::new(b).unwrap();
        let y = apply_similar(&h, TensorKind::Adjacency, &b, &[1.0; 9]).unwrap();
        for v in y {
            assert!((v - 4.0_f64.powf(1.0 / 3.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_from_ones_is_degree_range() {
        let h = gen_random(10, 9, 3, 21).unwrap();
        let p = h.degrees();
        let (lo, hi) = rayleigh_interval(&h, TensorKind::Adjacency, &[1.0; 10]).unwrap();
        assert_eq!((lo, hi), (p.min() as f64, p.d1() as f64));

        let k6 = gen_complete(6, 3).unwrap();
        assert_eq!(
            rayleigh_interval(&k6, TensorKind::Adjacency, &[1.0; 6]).unwrap(),
            (10.0, 10.0)
        );
    }

    #[test]
    fn interval_pins_hyperstar_with_balancing_vector() {
        // x = B * ones is an eigenvector of A exactly when B balances the rows.
        let h = gen_hyperstar(4, 3).unwrap();
        let mut x = vec![1.0; 9];
        x[0] = 4.0_f64.powf(1.0 / 3.0);
        let (lo, hi) = rayleigh_interval(&h, TensorKind::Adjacency, &x).unwrap();
        let target = 4.0_f64.powf(1.0 / 3.0);
        assert!((lo - target).abs() <= 1e-12);
        assert!((hi - target).abs() <= 1e-12);
    }

    #[test]
    fn interval_rejects_nonpositive() {
        let h = gen_hyperstar(2, 3).unwrap();
        let mut x = vec![1.0; 5];
        x[4] = 0.0;
        assert!(matches!(
            rayleigh_interval(&h, TensorKind::Adjacency, &x),
            Err(Error::NonPositive { index: 4, .. })
        ));
    }

    #[test]
    fn disjoint_union_acts_blockwise() {
        let h = Hypergraph::build(3, 8, [[1, 2, 3], [1, 2, 4], [5, 6, 7], [6, 7, 8]]).unwrap();
        let x: Vec<f64> = (0..8).map(|i| 0.5 + 0.25 * i as f64).collect();
        for kind in [TensorKind::Adjacency, TensorKind::SignlessLaplacian] {
            let whole = apply(&h, kind, &x).unwrap();
            for c in h.components() {
                let local_x: Vec<f64> = c.vertices.iter().map(|v| x[v.index()]).collect();
                let local = apply(&c.graph, kind, &local_x).unwrap();
                for (v, y) in c.vertices.iter().zip(local) {
                    assert_eq!(whole[v.index()], y);
                }
            }
        }
        let blocks = gen_disjoint_blocks(2, 2).unwrap();
        assert_eq!(
            apply(&blocks, TensorKind::Adjacency, &[1.0, 2.0, 3.0, 4.0]).unwrap(),
            vec![2.0, 1.0, 4.0, 3.0]
        );
    }

    fn graph_and_vector() -> impl Strategy<Value = (Hypergraph, Vec<f64>, f64)> {
        (2usize..=4, 0u64..1000).prop_flat_map(|(k, seed)| {
            let n = k + 4;
            let h = gen_random(n, 6, k, seed).unwrap();
            (
                Just(h),
                proptest::collection::vec(0.01f64..3.0, n),
                0.05f64..20.0,
            )
        })
    }

    proptest! {
        #[test]
        fn homogeneous_of_degree_k_minus_one((h, x, c) in graph_and_vector()) {
            for kind in [TensorKind::Adjacency, TensorKind::SignlessLaplacian] {
                let base = apply(&h, kind, &x).unwrap();
                let scaled_x: Vec<f64> = x.iter().map(|v| c * v).collect();
                let scaled = apply(&h, kind, &scaled_x).unwrap();
                let factor = c.powi(h.k() as i32 - 1);
                for (s, b) in scaled.iter().zip(&base) {
                    let expected = factor * b;
                    prop_assert!((s - expected).abs() <= 1e-12 * expected.abs().max(f64::MIN_POSITIVE));
                }
            }
        }

        #[test]
        fn q_is_degree_term_plus_adjacency((h, x, _c) in graph_and_vector()) {
            let a = apply(&h, TensorKind::Adjacency, &x).unwrap();
            let q = apply(&h, TensorKind::SignlessLaplacian, &x).unwrap();
            let power = h.k() as i32 - 1;
            for i in 0..h.n() {
                let d_term = h.degree_vector()[i] as f64 * x[i].powi(power);
                prop_assert_eq!(q[i], d_term + a[i]);
            }
        }
    }
}
