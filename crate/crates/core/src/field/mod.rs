//! Periodic-grid fields, spectral calculus and norms.

pub mod dyadic;
pub(crate) mod fft;
#[allow(clippy::module_inception)]
mod field;
pub mod grid;
pub mod local;
pub mod norms;
pub mod spectral;

pub use dyadic::{DyadicLadder, MotherBump, LOW_BLOCK};
pub use field::{Field, Spectrum, TrigInterpolant, REAL_TOLERANCE};
pub use grid::Grid;
pub use norms::{norm, NormSpec, SpaceTimeNorm};
