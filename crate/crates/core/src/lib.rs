//! Toric mirror symmetry workbench: fan combinatorics, I-functions,
//! Gamma-integral structures, Birkhoff factorization and mirror periods.

pub mod error;
pub mod linalg;
pub mod rational;
pub mod toric;

pub use error::{Error, Result};
pub mod field;
pub mod ring;
pub mod series;

#[cfg(test)]
pub(crate) mod testutil;
pub mod birkhoff;
pub mod gamma;
pub mod bside;
pub mod report;
pub mod scenario;
pub mod app;
