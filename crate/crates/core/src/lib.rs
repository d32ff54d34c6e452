//! Wave-optics toolkit for orbital-angular-momentum (OAM) beam experiments.
//!
//! The crate models the optical chain of a two-photon OAM correlation
//! experiment on a desk-scale grid:
//!
//! - [`fieldgrid`] — complex scalar fields on centered square grids, inner
//!   products and phase-singularity detection,
//! - [`lgmodes`] — Laguerre-Gaussian modes and OAM/LG decompositions,
//! - [`hologram`] — blazed fork phase gratings and their first-order action,
//! - [`optics`] — angular-spectrum propagation, far-field transform and
//!   diffraction-order extraction,
//! - [`modefilter`] — hologram + mono-mode fiber as a projective mode filter,
//! - [`biphoton`] — two-photon states, mixtures, coincidence probabilities,
//!   visibility, counting noise and the loss budget,
//! - [`scenarios`] — end-to-end presets: conservation matrices, superposition
//!   scans and singularity loci.
//!
//! All lengths are in millimetres; wavelengths as well (702 nm = 7.02e-4 mm).
//! Every value type is immutable after construction and all operations are
//! pure functions, so everything is safe to call concurrently.

pub mod biphoton;
pub mod error;
mod fft;
pub mod fieldgrid;
pub mod hologram;
pub mod lgmodes;
pub mod modefilter;
pub mod optics;
pub mod scenarios;

pub use error::{Error, Result};
