//! Landau–Ginzburg mirrors: residue series, oscillatory integrals and the multi-GKZ system.

mod critical;
mod gkz;
mod laurent;
mod osc;
mod residue;

pub use critical::*;
pub use gkz::*;
pub use laurent::*;
pub use osc::*;
pub use residue::*;
