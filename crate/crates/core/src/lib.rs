//! Shannon dimensionality of orbital-angular-momentum state analyzers built
//! from azimuthal sector phase plates.
//!
//! The crate covers the whole chain from a plate geometry to measurable
//! quantities: the plate's OAM mode spectrum, the effective dimensionality
//! `D = 1 / sum gamma_l^2` it gives an analyzer, the two-photon coincidence
//! fringe a pair of analyzers records, and a random search over multi-sector
//! plates for the largest `D`.

pub mod angle;
pub mod cli;
pub mod dimension;
pub mod error;
pub mod fringe;
mod lattice;
pub mod optimize;
pub mod plate;
pub mod spectrum;
#[cfg(test)]
mod testutil;

pub use angle::{Angle, ANGLE_TOLERANCE};
pub use dimension::{fringe_dimension, schmidt_number, shannon_dimension, single_sector_dimension, SourceSpectrum};
pub use error::{Error, Result};
pub use fringe::{analyzer_overlap, coincidence_fringe, overlap_fringe_oracle, visibility, Fringe, Source};
pub use optimize::{dimension_vs_sectors, evaluate_candidate, optimize_plate, OptimizationReport, OptimizerConfig};
pub use plate::{Jump, SectorPlate};
pub use spectrum::{
    captured_power, mode_spectrum, mode_spectrum_quadrature, mode_spectrum_with_rule, truncate_spectrum, LMaxRule,
    ModeSpectrum, QuadratureSpectrum,
};
