//! The k-uniform hypergraph model.
//!
//! Vertices are labelled `1..=n` at every public boundary ([`Vertex`]).
//! Per-vertex vectors (degrees, weights, tensor inputs) are positional, so
//! entry `i` belongs to the vertex with label `i + 1`.
//!
//! Edges are stored canonically: each edge ascending, the edge list sorted
//! lexicographically. Two hypergraphs built from the same edge set compare
//! equal regardless of input order.

mod generate;
mod uhg;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{
    gen_complete, gen_disjoint_blocks, gen_hyperstar, gen_random, gen_random_regular,
    gen_random_regular_with, RegularSamplerBudget,
};
pub use uhg::{read_uhg, write_uhg};

/// A vertex label in `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(usize);

impl Vertex {
    /// Returns `None` for label 0.
    pub fn new(label: usize) -> Option<Self> {
        (label >= 1).then_some(Vertex(label))
    }

    pub fn from_index(index: usize) -> Self {
        Vertex(index + 1)
    }

    pub fn label(self) -> usize {
        self.0
    }

    /// Zero-based position in per-vertex vectors.
    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An immutable simple k-uniform hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    /// Flattened canonical edge list, zero-based, `k` entries per edge.
    edges: Vec<usize>,
    degree: Vec<usize>,
}

/// Per-vertex degrees together with the nonincreasing degree sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub degree: Vec<usize>,
    pub sorted: Vec<usize>,
}

impl DegreeProfile {
    /// Largest degree (Δ), 0 for an edgeless hypergraph.
    pub fn d1(&self) -> usize {
        self.sorted.first().copied().unwrap_or(0)
    }

    /// Second largest degree, if there are at least two vertices.
    pub fn d2(&self) -> Option<usize> {
        self.sorted.get(1).copied()
    }

    pub fn min(&self) -> usize {
        self.sorted.last().copied().unwrap_or(0)
    }
}

/// A connected component with the map back to the parent's labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub graph: Hypergraph,
    /// `vertices[i]` is the parent label of local vertex `i + 1`.
    pub vertices: Vec<Vertex>,
}

/// Witness that a hypergraph is a blow-up of a regular one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blowup {
    pub apex: Vertex,
    pub base_degree: usize,
}

impl Hypergraph {
    /// Builds a validated hypergraph from 1-based edge lists.
    pub fn build<E: AsRef<[usize]>>(
        k: usize,
        n: usize,
        edge_list: impl IntoIterator<Item = E>,
    ) -> Result<Self> {
        Self::build_with_min(k, n, edge_list, 2)
    }

    /// Like [`Hypergraph::build`] but also accepts `k = 1`, which only makes
    /// sense as the base of a [`Hypergraph::blow_up`] producing a graph star.
    pub fn build_base<E: AsRef<[usize]>>(
        k: usize,
        n: usize,
        edge_list: impl IntoIterator<Item = E>,
    ) -> Result<Self> {
        Self::build_with_min(k, n, edge_list, 1)
    }

    fn build_with_min<E: AsRef<[usize]>>(
        k: usize,
        n: usize,
        edge_list: impl IntoIterator<Item = E>,
        min_k: usize,
    ) -> Result<Self> {
        if k < min_k {
            return Err(Error::InvalidUniformity { k, min: min_k });
        }
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut sorted_edges: Vec<Vec<usize>> = Vec::new();
        for (index, edge) in edge_list.into_iter().enumerate() {
            let edge = edge.as_ref();
            if edge.len() != k {
                return Err(Error::EdgeSize {
                    index,
                    found: edge.len(),
                    expected: k,
                });
            }
            let mut e = Vec::with_capacity(k);
            for &vertex in edge {
                if vertex == 0 || vertex > n {
                    return Err(Error::VertexOutOfRange { index, vertex, n });
                }
                e.push(vertex - 1);
            }
            e.sort_unstable();
            if let Some(w) = e.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex {
                    index,
                    vertex: w[0] + 1,
                });
            }
            sorted_edges.push(e);
        }
        sorted_edges.sort_unstable();
        if let Some(w) = sorted_edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge {
                edge: w[0].iter().map(|v| v + 1).collect(),
            });
        }
        let mut degree = vec![0; n];
        for &v in sorted_edges.iter().flatten() {
            degree[v] += 1;
        }
        Ok(Hypergraph {
            k,
            n,
            edges: sorted_edges.into_iter().flatten().collect(),
            degree,
        })
    }

    /// Uniformity.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count.
    pub fn m(&self) -> usize {
        self.edges.len() / self.k
    }

    /// Edges as zero-based index slices, in canonical order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.edges.chunks_exact(self.k)
    }

    /// Edges as 1-based label lists, in canonical order.
    pub fn edge_labels(&self) -> Vec<Vec<usize>> {
        self.edges()
            .map(|e| e.iter().map(|v| v + 1).collect())
            .collect()
    }

    /// Degree of every vertex, positional.
    pub fn degree_vector(&self) -> &[usize] {
        &self.degree
    }

    pub fn degree(&self, v: Vertex) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.degree[v.index()])
    }

    pub fn degrees(&self) -> DegreeProfile {
        let mut sorted = self.degree.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        DegreeProfile {
            degree: self.degree.clone(),
            sorted,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v.label() > self.n {
            return Err(Error::UnknownVertex {
                vertex: v,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Number of edges containing both `i` and `j`.
    pub fn codegree(&self, i: Vertex, j: Vertex) -> Result<usize> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::SameVertex(i));
        }
        let (a, b) = (i.index(), j.index());
        Ok(self
            .edges()
            .filter(|e| e.binary_search(&a).is_ok() && e.binary_search(&b).is_ok())
            .count())
    }

    /// Component id of every vertex, numbered by smallest member.
    fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut dsu = DisjointSets::new(self.n);
        for e in self.edges() {
            for w in e.windows(2) {
                dsu.union(w[0], w[1]);
            }
        }
        let mut label = vec![usize::MAX; self.n];
        let mut root_label = vec![usize::MAX; self.n];
        let mut count = 0;
        for v in 0..self.n {
            let r = dsu.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = count;
                count += 1;
            }
            label[v] = root_label[r];
        }
        (label, count)
    }

    /// True iff the vertex-edge incidence structure forms a single component
    /// spanning all vertices. Isolated vertices make this false unless the
    /// hypergraph is a single vertex.
    pub fn is_connected(&self) -> bool {
        self.component_labels().1 == 1
    }

    /// Splits into connected components ordered by their smallest vertex.
    pub fn components(&self) -> Vec<Component> {
        let (label, count) = self.component_labels();
        if count == 1 {
            return vec![Component {
                graph: self.clone(),
                vertices: (0..self.n).map(Vertex::from_index).collect(),
            }];
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        let mut local = vec![0; self.n];
        for v in 0..self.n {
            local[v] = members[label[v]].len();
            members[label[v]].push(v);
        }
        let mut edge_sets: Vec<Vec<Vec<usize>>> = vec![Vec::new(); count];
        for e in self.edges() {
            edge_sets[label[e[0]]].push(e.iter().map(|&v| local[v] + 1).collect());
        }
        members
            .into_iter()
            .zip(edge_sets)
            .map(|(verts, edges)| Component {
                graph: Hypergraph::build_with_min(self.k, verts.len(), edges, 1)
                    .expect("component of a valid hypergraph is valid"),
                vertices: verts.into_iter().map(Vertex::from_index).collect(),
            })
            .collect()
    }

    /// Returns `Some(d)` iff every vertex has degree `d`.
    pub fn is_regular(&self) -> Option<usize> {
        let first = self.degree[0];
        self.degree.iter().all(|&d| d == first).then_some(first)
    }

    /// Finds an apex lying in every edge whose removal leaves a `d`-regular
    /// `(k-1)`-uniform hypergraph covering the other `n - 1` vertices with
    /// `d >= 1`. The smallest qualifying apex wins.
    pub fn detect_blowup(&self) -> Option<Blowup> {
        let m = self.m();
        if m == 0 || self.n < 2 {
            return None;
        }
        // Every edge contains the apex, so the base degree of any other
        // vertex equals its degree here.
        (0..self.n)
            .filter(|&v| self.degree[v] == m)
            .find_map(|apex| {
                let mut others = (0..self.n).filter(|&u| u != apex).map(|u| self.degree[u]);
                let d = others.next()?;
                (d >= 1 && others.all(|x| x == d)).then_some(Blowup {
                    apex: Vertex::from_index(apex),
                    base_degree: d,
                })
            })
    }

    /// Adds a new vertex `n + 1` to every edge, raising the uniformity by one.
    pub fn blow_up(&self) -> Result<Hypergraph> {
        if self.m() == 0 {
            return Err(Error::NoEdges);
        }
        let apex = self.n + 1;
        let edges = self.edges().map(|e| {
            let mut lifted: Vec<usize> = e.iter().map(|v| v + 1).collect();
            lifted.push(apex);
            lifted
        });
        Hypergraph::build(self.k + 1, self.n + 1, edges)
    }

    /// `m_i`: the sum over edges at `i` of the product of the other `k - 1`
    /// degrees, divided by `d_i^(k-1)`.
    pub fn m_value(&self, i: Vertex) -> Result<f64> {
        self.check_vertex(i)?;
        let idx = i.index();
        let d_i = self.degree[idx];
        if d_i == 0 {
            return Err(Error::IsolatedVertex(i));
        }
        let total: f64 = self
            .edges()
            .filter(|e| e.binary_search(&idx).is_ok())
            .map(|e| {
                e.iter()
                    .filter(|&&u| u != idx)
                    .map(|&u| self.degree[u] as f64)
                    .product::<f64>()
            })
            .sum();
        Ok(total / (d_i as f64).powi(self.k as i32 - 1))
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Binomial coefficient, `None` on overflow.
pub(crate) fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    Some(acc as usize)
}
