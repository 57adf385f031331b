//! Exact output statistics for N-photon interference at a lossless two-mode
//! coupler when the photons entering the two input ports are partially
//! distinguishable.
//!
//! The delayed input port is split into orthogonal components according to
//! how many of its photons overlap the reference wave packet
//! ([`decomposition`]). Each component scatters as a set of mutually
//! non-interfering species ([`scattering`]), and the event probabilities
//! are the weighted sum over components ([`assembly`]). An independent
//! brute-force Fock-space evolution ([`oracle`]) validates the chain end to
//! end.

pub mod assembly;
pub mod cli;
mod combinatorics;
pub mod decomposition;
pub mod error;
pub mod oracle;
pub mod output;
pub mod scattering;
pub mod spectral;

pub use assembly::{
    event_probability, find_extrema, scan, Assembler, Event, ExtremumReport, ScanResult,
};
pub use decomposition::{decompose, weight_curves, ComponentLabel, ComponentTerm, InputSpec};
pub use error::{Error, Result};
pub use scattering::{
    convolve, detection_table, species_distribution, CouplerSpec, DetectionTable,
    EventDistribution, Species,
};
pub use spectral::OverlapModel;
