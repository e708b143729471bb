//! Numerical laboratory for the two-dimensional Klein-Gordon and Schrödinger
//! equations with the exponential nonlinearity
//! `f(u) = (exp(4π|u|^2) - 1 - 4π|u|^2) u`.
//!
//! Everything is generic over the scalar type through [`Real`]; the aliases
//! at the crate root fix it to `f64`, which is what the tolerances in the
//! documentation assume.

pub mod error;
pub mod constructions;
pub mod diagnostics;
pub mod field;
pub mod nonlinearity;
pub mod propagators;
pub mod quadrature;
pub mod scalar;
pub mod scattering;

pub use error::{LabError, Result};
pub use scalar::Real;

pub type Grid2D = field::Grid<f64>;
pub type Field2D = field::Field<f64>;
pub type SpectralField2D = field::Spectrum<f64>;
