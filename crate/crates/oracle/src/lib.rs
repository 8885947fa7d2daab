//! Genus-zero invariants of toric targets by torus localization over decorated trees.

pub mod edge;
pub mod error;
pub mod graph_sum;
pub mod invariant;
pub mod psi;
pub mod small_j;
pub mod state;
pub mod trees;

pub use edge::{edge_factor, pairing_weight, recursion_coefficient, section_weights};
pub use error::OracleError;
pub use graph_sum::{Insertion, Localizer};
pub use invariant::{GraphSumOracle, DEFAULT_DEGREE_BOUND};
pub use psi::{psi_integral, vertex_integral, Psi};
pub use small_j::{equivariant_small_j, oracle_small_j};
pub use state::StateSpace;
pub use trees::{enumerate_trees, DecoratedTree};
