//! Initial-data families: the logarithmic counterexample, Moser bumps and
//! traveling packets.

pub mod counterexample;
pub mod moser;
pub mod packet;

pub use counterexample::{
    build_vn, counterexample_growth, growth_sweep, micro_window, CounterexampleParams, CounterexampleState,
    LatticeNorms, RadialProfile,
};
pub use moser::{moser_bump, moser_l2_sq_exact};
pub use packet::traveling_packet;
