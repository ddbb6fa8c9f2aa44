//! Exact and two-term asymptotic laws for the extreme eigenvalues of Jacobi
//! β-ensembles, with the hypergeometric and sampling machinery behind them.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod edge_laws;
pub mod error;
pub mod hypergeom;
pub mod jack;
pub mod montecarlo;
pub mod numeric;
pub mod partitions;
pub mod quad;
pub mod sampling;
pub mod selberg;
pub mod special;
pub mod validate;

pub use error::{Error, Result};
pub use numeric::ExtFloat;
pub use partitions::Partition;
pub use selberg::EnsembleParams;

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
