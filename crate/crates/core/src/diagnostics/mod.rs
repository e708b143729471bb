//! Energies, densities, concentration and the cubic decomposition.

pub mod concentration;
pub mod cubic;
pub mod densities;
pub mod energy;

pub use concentration::{
    concentration_radius, lipschitz_probe, ConcentrationProbe, ConcentrationRecord, LipschitzReport, Radius,
};
pub use cubic::{
    chi, chi_laplacian, chi_prime, cubic_chi, cubic_l2_ratio, covering_min_max, h1_cutoff_identity_check,
    CubicDecomposition,
};
pub use densities::{morawetz_density, q_density};
pub use energy::{boundary_leakage, energy_densities, energy_report, EnergyDensities, EnergyReport};
