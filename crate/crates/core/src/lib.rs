//! Direct measurement of the spatial Wigner function with a rotated-replica
//! Sagnac interferometer and an area-integrating detector.
//!
//! * [`field`] builds 1-D transverse fields, partially coherent ensembles and
//!   free-space propagation.
//! * [`wigner`] is the direct-summation oracle plus marginals, moments and the
//!   diffraction shear.
//! * [`sagnac`] simulates the interferometer: steering, parity, two-port
//!   detection, scans and reconstruction.
//! * [`photon`] covers the single-photon regime.
//! * [`analysis`] fits the two-beam coherence model and measures fringes.
//! * [`entangle`] evaluates two-photon parity correlations and CHSH sums.
//! * [`cli`] drives the pipeline from a TOML run configuration.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod io;
pub mod photon;
pub mod rng;
pub mod sagnac;
pub mod wigner;
pub mod analysis;
pub mod entangle;
pub mod cli;

pub use error::{Error, Result};
