//! Galois groups of Schubert problems on Grassmannians.

pub mod classifier;
pub mod deficiency;
pub mod error;
pub mod ffalg;
pub mod groups;
pub mod instances;
pub mod sampler;

pub use error::{Error, Result};
pub mod schubert;

pub use schubert::{BoxShape, Partition, SchubertProblem};
