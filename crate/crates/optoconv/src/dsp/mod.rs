//! Time-domain emulation of the heterodyne measurement network and its
//! analysis pipeline: colored-noise synthesis from the analytic output
//! spectra, demodulated-trace bookkeeping, DFT spectral estimation, and
//! the calibration fits.

pub mod fit;
pub mod spectra;
pub mod synth;

pub use fit::{hemt_fit, lorentzian_fit, thermal_sweep_fit, CalibrationFit, HemtFit, LorentzianFit};
pub use spectra::{
    complex_equivalent, cross_spectra, narrowband_variance, welch_auto, welch_cross, CrossSpectra,
    Window,
};
pub use synth::{synthesize_outputs, ChainSpec, QuadratureTrace, SynthConfig, Synthesizer, ToneSpec};
