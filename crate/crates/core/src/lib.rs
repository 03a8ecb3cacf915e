//! Spectral radii of the adjacency and signless Laplacian tensors of
//! k-uniform hypergraphs, together with the degree-based bounds on them.

pub mod bounds;
pub mod error;
pub mod hypergraph;
pub mod spectral;
pub mod tensor;

pub use bounds::{BoundReport, Classification, WeightChoice};
pub use error::{Error, Result};
pub use hypergraph::{Blowup, Component, DegreeProfile, Hypergraph, Vertex};
pub use spectral::{SolverOptions, SpectralEstimate};
pub use tensor::{TensorKind, WeightVector};
