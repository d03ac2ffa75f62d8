//! Noncrossing partitions, Hurwitz actions and the critical value geometry
//! of monic complex polynomials.

#[cfg(feature = "cli")]
pub mod cli;
pub mod complexes;
pub mod error;
pub mod fiber;
pub mod hurwitz;
pub mod lifting;
pub mod monodromy;
pub mod noncrossing;
pub mod partition;
pub mod perm;
pub mod poly;
pub mod render;
pub mod report;

pub use error::{Error, Result};
