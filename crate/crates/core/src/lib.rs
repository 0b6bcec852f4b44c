//! Exact spanning-tree counting and the odd-prime-partition construction of
//! connected graphs with pairwise distinct spanning-tree counts.
//!
//! - [`graph`]: multigraphs, cycles, paths, one-point unions, edge-list text
//! - [`spanning`]: Laplacians, fraction-free determinants, `tau`
//! - [`partitions`]: partition counts and enumeration by part class, `P_n`
//! - [`witness`]: flowers and the `P_n` witness family
//! - [`atlas`]: exhaustive `A_n`, `alpha(m)` and the cited bounds on it
//! - [`asymptotics`]: log-space evaluation of the asymptotic formulas

pub mod asymptotics;
pub mod atlas;
pub mod count;
pub mod graph;
pub mod partitions;
pub mod spanning;
pub mod witness;

pub use count::Count;
pub use graph::{cycle, path, Graph, GraphError, VertexId};
pub use partitions::{PartClass, Partition};
pub use spanning::tau;
