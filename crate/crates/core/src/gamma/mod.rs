//! Gamma-integral structure, central charges and monodromy checks.

mod classes;
mod env;
mod galois;
mod kclass;
mod period;
mod special;

pub use classes::*;
pub use env::*;
pub use galois::*;
pub use kclass::*;
pub use period::*;
pub use special::*;
