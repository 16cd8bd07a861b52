//! Truncated q-series, I-functions, mirror maps and logarithmic vector fields.

mod ifunc;
mod logfield;
mod mirror;
mod qseries;
mod zpoly;

pub use ifunc::{build_i, build_i_twisted, check_homogeneity, NefPartition};
pub use logfield::{derive_iv, find_delta, LogVectorField};
pub use mirror::{coordinates, extract_mirror_map, pbar, MirrorMap};
pub use qseries::{grading, Exponent, QSeries, ScalarSeries};
pub use zpoly::ZPoly;
