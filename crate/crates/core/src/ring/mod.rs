//! Graded rings modelling `H*_orb(X)`.

mod local;
mod orb;
mod sr;

pub use local::LocalRing;
pub use orb::{OrbRing, Sector, SectorPresentation};
pub use sr::stanley_reisner_ring;
