//! Max-min dispersion solvers for weighted trees.

pub mod cli;
pub mod decomposition;
pub mod dist;
pub mod error;
pub mod feasibility;
pub mod gen;
pub mod matrix;
pub mod optimizer;
pub mod oracle;
pub mod polyline;
pub mod tree;
pub mod weighted;

pub use error::{Error, Result};
pub use tree::{NodeId, Tree};
