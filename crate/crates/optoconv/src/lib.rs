//! Simulator and analysis toolkit for a mechanically mediated
//! microwave-optical converter.
//!
//! The converter couples a microwave LC circuit and a Fabry-Perot optical
//! cavity to one vibrational mode of a membrane. This crate computes the
//! linearized frequency-domain scattering matrix of the three-mode system,
//! conversion efficiency and probe scattering parameters, output noise
//! cross-spectral densities, classical and quantum feedforward performance,
//! a Monte-Carlo emulation of the heterodyne measurement network, standalone
//! cavity response models, and a shift-code qubit upconversion simulator.
//!
//! All angular frequencies are stored in rad/s. Configuration files accept
//! ordinary frequencies in Hz and are converted at the loading boundary.

pub mod cavity;
pub mod correlations;
pub mod dsp;
pub mod error;
pub mod feedforward;
pub mod par;
pub mod params;
pub mod qfeedforward;
pub mod scattering;
pub mod scenario;
pub mod shiftcode;

pub use error::{Error, Result};
pub use params::ConverterParams;
