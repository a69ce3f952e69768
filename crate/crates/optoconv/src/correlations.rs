//! Output-field cross-spectral densities.
//!
//! The symmetrized correlation matrix of the six scattering outputs at one
//! frequency is
//!
//! ```text
//! C(omega) = Xi* (1/2 I + Sigma) Xi^T
//! ```
//!
//! where `Sigma = diag(n_p)` holds the thermal occupancy of each input port
//! (the vacuum half-photon enters through the identity). `C` is Hermitian;
//! its diagonal gives symmetrized output spectra in photon units and its
//! off-diagonal entries the cross-correlations that feedforward exploits.

use nalgebra::SMatrix;

use crate::error::Result;
use crate::params::{ConverterParams, DampingRates};
use crate::scattering::{input, out, Model, ScatteringMatrix, C64};

type Mat6 = SMatrix<C64, 6, 6>;
type Mat2 = SMatrix<C64, 2, 2>;

/// Hermitian correlation matrix of the six outputs at one frequency, split
/// into its vacuum and thermally driven parts.
#[derive(Debug, Clone)]
pub struct SpectralMatrix {
    pub omega: f64,
    /// Vacuum contribution `1/2 Xi* Xi^T`.
    pub quantum_part: Mat6,
    /// Thermal contribution `Xi* Sigma Xi^T`.
    pub thermal_part: Mat6,
}

impl SpectralMatrix {
    /// Total correlation matrix, vacuum plus thermal.
    pub fn total(&self) -> Mat6 {
        self.quantum_part + self.thermal_part
    }
}

/// Reduced electro-optic block of the correlation matrix: index 0 is the
/// optical front output, index 1 the microwave output.
#[derive(Debug, Clone, Copy)]
pub struct EoCorrelation {
    /// Optical front auto-spectrum above vacuum, photons.
    pub c_oo: f64,
    /// Microwave auto-spectrum above vacuum, photons.
    pub c_ee: f64,
    /// Complex cross-spectrum (optical, microwave).
    pub c_eo: C64,
    /// Smaller eigenvalue of the full 2x2 block including vacuum.
    pub eigen_min: f64,
}

impl EoCorrelation {
    /// Phase of the cross-spectrum; a matched demodulator phase rotates the
    /// cross term onto the real axis.
    pub fn cross_phase(&self) -> f64 {
        self.c_eo.arg()
    }

    /// Magnitude of the correlation coefficient between the excess
    /// (above-vacuum) fluctuations, in [0, 1] up to numerical noise.
    pub fn correlation_coefficient(&self) -> f64 {
        if self.c_oo <= 0.0 || self.c_ee <= 0.0 {
            return 0.0;
        }
        self.c_eo.norm() / (self.c_oo * self.c_ee).sqrt()
    }
}

fn thermal_diag(params: &ConverterParams) -> [f64; 6] {
    let mut n = [0.0; 6];
    n[input::A_BACK] = params.n_th_o;
    n[input::A_FRONT] = params.n_th_o;
    n[input::A_INT] = params.n_th_o;
    n[input::B_EX] = params.n_th_e;
    n[input::B_INT] = params.n_th_e;
    n[input::C] = params.n_th_m;
    n
}

/// Correlation matrix of the outputs of a prebuilt model at one frequency.
pub fn spectral_matrix_from(model: &Model, omega: f64) -> SpectralMatrix {
    let ScatteringMatrix { xi, .. } = model.xi(omega);
    let conj = xi.conjugate();
    let quantum = conj * xi.transpose() * C64::from(0.5);

    let n = thermal_diag(model.params());
    let mut sigma = SMatrix::<C64, 12, 12>::zeros();
    for (port, &occ) in n.iter().enumerate() {
        sigma[(port, port)] = C64::from(occ);
        sigma[(port + 6, port + 6)] = C64::from(occ);
    }
    let thermal = conj * sigma * xi.transpose();

    SpectralMatrix {
        omega,
        quantum_part: quantum,
        thermal_part: thermal,
    }
}

/// Correlation matrix at one frequency, building the model first.
pub fn spectral_matrix(params: &ConverterParams, omega: f64) -> Result<SpectralMatrix> {
    Ok(spectral_matrix_from(&Model::new(params)?, omega))
}

/// Extracts the electro-optic block (optical front output, microwave
/// output) from a full correlation matrix.
pub fn eo_block(spectrum: &SpectralMatrix) -> EoCorrelation {
    let c = spectrum.total();
    let block = Mat2::new(
        c[(out::A_FRONT, out::A_FRONT)],
        c[(out::A_FRONT, out::B_EX)],
        c[(out::B_EX, out::A_FRONT)],
        c[(out::B_EX, out::B_EX)],
    );
    let a = block[(0, 0)].re;
    let b = block[(1, 1)].re;
    let z = block[(0, 1)];
    let mean = 0.5 * (a + b);
    let radius = (0.25 * (a - b).powi(2) + z.norm_sqr()).sqrt();
    EoCorrelation {
        c_oo: a - 0.5,
        c_ee: b - 0.5,
        c_eo: z,
        eigen_min: mean - radius,
    }
}

/// Mechanically mediated part of the electro-optic block in the
/// weak-coupling limit, evaluated on resonance:
///
/// ```text
/// C_th = 4 n_m gamma_m / Gamma_T^2 * [[Gamma_o, sqrt(Gamma_o Gamma_e)],
///                                     [sqrt(Gamma_o Gamma_e), Gamma_e]]
/// ```
///
/// Index 0 is optical, index 1 microwave, matching [`eo_block`]. The matrix
/// is rank one: both outputs view the same mechanical fluctuations.
pub fn ctherm_closed_form(rates: &DampingRates, n_th_m: f64) -> [[f64; 2]; 2] {
    let gamma_m = rates.gamma_t - rates.gamma_e - rates.gamma_o;
    let pref = 4.0 * n_th_m * gamma_m / rates.gamma_t.powi(2);
    let cross = (rates.gamma_o * rates.gamma_e).sqrt();
    [
        [pref * rates.gamma_o, pref * cross],
        [pref * cross, pref * rates.gamma_e],
    ]
}
