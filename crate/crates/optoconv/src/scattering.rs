//! Linearized frequency-domain scattering of the three-mode converter.
//!
//! The internal modes are the optical cavity field `a`, the microwave
//! cavity field `b` and the mechanical mode `c`, each written in the frame
//! rotating at its pump (the mechanical mode in the lab frame):
//!
//! ```text
//! da/dt = (i Delta_o - kappa_o/2) a + i g_o (c + c+) + sum_p sqrt(kappa_p) a_in,p
//! db/dt = (i Delta_e - kappa_e/2) b + i g_e (c + c+) + sum_q sqrt(kappa_q) b_in,q
//! dc/dt = (-i omega_m - gamma_m/2) c + i g_o (a + a+) + i g_e (b + b+)
//!         + sqrt(gamma_m) c_in
//! ```
//!
//! Solving these algebraically in the Fourier domain, together with their
//! conjugates, gives a 12-dimensional linear system per frequency and the
//! 6x12 map `Xi(omega)` from input to output fields,
//! `a_out = a_in - sqrt(kappa) * (internal mode)` per port. The conjugate
//! (counter-rotating) blocks are kept, so imperfect sideband resolution
//! shows up as conversion gain.

use nalgebra::{DMatrix, SMatrix};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::par;
use crate::params::{
    coupling_for_damping, damping_rates, ConverterParams, DampingRates, Port,
};

pub type C64 = Complex<f64>;
type Mat6 = SMatrix<C64, 6, 6>;
type Mat6x12 = SMatrix<C64, 6, 12>;

/// Output row order of `Xi`.
pub mod out {
    /// Optical back-mirror output.
    pub const A_BACK: usize = 0;
    /// Optical front (measured) output.
    pub const A_FRONT: usize = 1;
    /// Microwave external output.
    pub const B_EX: usize = 2;
    /// Conjugate rows follow in the same order.
    pub const CONJ: usize = 3;
}

/// Input column order of `Xi`.
pub mod input {
    pub const A_BACK: usize = 0;
    pub const A_FRONT: usize = 1;
    pub const A_INT: usize = 2;
    pub const B_EX: usize = 3;
    pub const B_INT: usize = 4;
    pub const C: usize = 5;
    /// Conjugate columns follow in the same order.
    pub const CONJ: usize = 6;
}

/// The scattering matrix at one frequency: rows ordered
/// (a_out,B, a_out,F, b_out, conjugates), columns ordered
/// (a_in,B, a_in,F, a_in,int, b_in,ex, b_in,int, c_in, conjugates).
#[derive(Debug, Clone)]
pub struct ScatteringMatrix {
    pub omega: f64,
    pub xi: Mat6x12,
}

/// Probe scattering amplitudes at detuning `delta` from the pumps.
#[derive(Debug, Clone, Copy)]
pub struct SParams {
    pub s_ee: C64,
    pub s_oo: C64,
    pub s_oe: C64,
    pub s_eo: C64,
}

/// Efficiency figures of one converter configuration.
#[derive(Debug, Clone, Copy)]
pub struct EfficiencyReport {
    /// Conversion efficiency `eta = |t|^2 / A`.
    pub eta: f64,
    /// Matched efficiency from port couplings and mode matching.
    pub eta_m: f64,
    /// Converter gain from imperfect sideband resolution.
    pub gain_a: f64,
    /// Raw model peak transmission `|t|^2`.
    pub t_sq: f64,
    /// FWHM of `|s_oe|^2`, rad/s.
    pub bandwidth: f64,
}

/// One point of an efficiency-versus-damping sweep.
#[derive(Debug, Clone, Copy)]
pub struct EfficiencyPoint {
    pub gamma_e: f64,
    pub gamma_t: f64,
    /// Peak `|s_oe|^2 / A` from the full model.
    pub eta_model: f64,
    /// Closed-form `4 Gamma_e Gamma_o / Gamma_T^2 * eta_M`.
    pub eta_closed: f64,
}

/// Frequency-domain solver for one stability-checked parameter set.
#[derive(Debug, Clone)]
pub struct Model {
    params: ConverterParams,
    drift: Mat6,
    in_map: Mat6x12,
    out_map: Mat6,
    direct: Mat6x12,
}

/// Largest allowed drift-eigenvalue real part, as a fraction of omega_m.
const STABILITY_TOL: f64 = 1e-9;

impl Model {
    /// Builds the full model, including counter-rotating terms. Fails with
    /// [`Error::Unstable`] if any closed-loop pole sits in the right
    /// half-plane.
    pub fn new(params: &ConverterParams) -> Result<Self> {
        Self::build(params, false)
    }

    /// Builds the rotating-wave reference model (conjugate coupling blocks
    /// dropped). Used to normalize out sideband-resolution gain.
    pub fn new_rwa(params: &ConverterParams) -> Result<Self> {
        Self::build(params, true)
    }

    fn build(params: &ConverterParams, rwa: bool) -> Result<Self> {
        params.validate()?;
        check_stability(params)?;

        let i = C64::i();
        let go = C64::from(params.g_o);
        let ge = C64::from(params.g_e);
        let zero = C64::from(0.0);
        let cr = if rwa { zero } else { C64::from(1.0) };

        let pole_a = i * params.delta_o - 0.5 * params.kappa_o();
        let pole_b = i * params.delta_e - 0.5 * params.kappa_e();
        let pole_c = -i * params.omega_m - 0.5 * params.gamma_m;

        #[rustfmt::skip]
        let drift = Mat6::from_row_slice(&[
            pole_a, zero,   i * go,           zero,          zero,          cr * i * go,
            zero,   pole_b, i * ge,           zero,          zero,          cr * i * ge,
            i * go, i * ge, pole_c,           cr * i * go,   cr * i * ge,   zero,
            zero,   zero,   -cr * i * go,     pole_a.conj(), zero,          -i * go,
            zero,   zero,   -cr * i * ge,     zero,          pole_b.conj(), -i * ge,
            -i * go, -i * ge, zero,           -cr * i * go,  -cr * i * ge,  pole_c.conj(),
        ]);

        let ports = [
            params.kappa_b_o.sqrt(),
            params.kappa_ex_o.sqrt(),
            params.kappa_int_o.sqrt(),
            params.kappa_ex_e.sqrt(),
            params.kappa_int_e.sqrt(),
            params.gamma_m.sqrt(),
        ];
        // Mode driven by each input port: a for the three optical ports,
        // b for the two microwave ports, c for the mechanical bath.
        let port_mode = [0usize, 0, 0, 1, 1, 2];

        let mut in_map = Mat6x12::zeros();
        for (port, (&root, &mode)) in ports.iter().zip(port_mode.iter()).enumerate() {
            in_map[(mode, port)] = C64::from(root);
            in_map[(mode + 3, port + 6)] = C64::from(root);
        }

        let mut out_map = Mat6::zeros();
        let mut direct = Mat6x12::zeros();
        // (output row, driving mode, input column, coupling)
        let outputs = [
            (out::A_BACK, 0usize, input::A_BACK, params.kappa_b_o),
            (out::A_FRONT, 0, input::A_FRONT, params.kappa_ex_o),
            (out::B_EX, 1, input::B_EX, params.kappa_ex_e),
        ];
        for &(row, mode, col, kappa) in &outputs {
            out_map[(row, mode)] = C64::from(kappa.sqrt());
            out_map[(row + 3, mode + 3)] = C64::from(kappa.sqrt());
            direct[(row, col)] = C64::from(1.0);
            direct[(row + 3, col + 6)] = C64::from(1.0);
        }

        Ok(Self {
            params: params.clone(),
            drift,
            in_map,
            out_map,
            direct,
        })
    }

    pub fn params(&self) -> &ConverterParams {
        &self.params
    }

    /// The scattering matrix at angular frequency `omega` (detuning from
    /// the pumps).
    pub fn xi(&self, omega: f64) -> ScatteringMatrix {
        let m = Mat6::identity() * (-C64::i() * omega) - self.drift;
        let modes = m
            .lu()
            .solve(&self.in_map)
            .expect("stability check guarantees an invertible response matrix");
        ScatteringMatrix {
            omega,
            xi: self.direct - self.out_map * modes,
        }
    }

    /// Probe scattering parameters at detuning `delta`, with the optical
    /// mode-matching beamsplitter applied outside the cavity on the front
    /// port (equal factors on the up- and down-conversion paths).
    pub fn s_params(&self, delta: f64) -> SParams {
        let xi = self.xi(delta).xi;
        let eps = self.params.epsilon;
        SParams {
            s_ee: xi[(out::B_EX, input::B_EX)],
            s_oo: eps * xi[(out::A_FRONT, input::A_FRONT)],
            s_oe: eps.sqrt() * xi[(out::A_FRONT, input::B_EX)],
            s_eo: eps.sqrt() * xi[(out::A_FRONT + 1, input::A_FRONT)],
        }
    }

    /// Peak of `|s_oe|^2` over probe detuning near the mechanical
    /// resonance; returns `(delta_peak, |s_oe|^2)`.
    pub fn peak_transmission(&self) -> (f64, f64) {
        let rates = damping_rates(&self.params);
        let halfwidth = 5.0 * rates.gamma_t.max(1e-3 * self.params.omega_m * 1e-3);
        let f = |delta: f64| self.s_params(delta).s_oe.norm_sqr();
        maximize(f, self.params.omega_m - halfwidth, self.params.omega_m + halfwidth)
    }

    /// FWHM of `|s_oe|^2` around its peak, rad/s.
    pub fn transmission_fwhm(&self) -> f64 {
        let (delta_pk, t2_pk) = self.peak_transmission();
        let rates = damping_rates(&self.params);
        let span = 50.0 * rates.gamma_t;
        let f = |delta: f64| self.s_params(delta).s_oe.norm_sqr();
        let half = 0.5 * t2_pk;
        let left = bisect_crossing(&f, half, delta_pk - span, delta_pk);
        let right = bisect_crossing(&f, half, delta_pk + span, delta_pk);
        right - left
    }
}

fn check_stability(params: &ConverterParams) -> Result<()> {
    // Quadrature-basis drift is real and shares its spectrum with the
    // complex mode-basis drift.
    let (ko, ke, gm) = (params.kappa_o(), params.kappa_e(), params.gamma_m);
    let (d_o, d_e, wm) = (params.delta_o, params.delta_e, params.omega_m);
    let (go, ge) = (params.g_o, params.g_e);
    #[rustfmt::skip]
    let drift = DMatrix::from_row_slice(6, 6, &[
        -0.5 * ko, -d_o,      0.0,       0.0,       0.0,      0.0,
        d_o,       -0.5 * ko, 0.0,       0.0,       2.0 * go, 0.0,
        0.0,       0.0,       -0.5 * ke, -d_e,      0.0,      0.0,
        0.0,       0.0,       d_e,       -0.5 * ke, 2.0 * ge, 0.0,
        0.0,       0.0,       0.0,       0.0,       -0.5 * gm, wm,
        2.0 * go,  0.0,       2.0 * ge,  0.0,       -wm,      -0.5 * gm,
    ]);
    let max_re = drift
        .complex_eigenvalues()
        .iter()
        .map(|ev| ev.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_re >= -STABILITY_TOL * params.omega_m {
        return Err(Error::Unstable { max_re });
    }
    Ok(())
}

/// Convenience wrapper: full-model scattering matrix at one frequency.
pub fn build_xi(params: &ConverterParams, omega: f64) -> Result<ScatteringMatrix> {
    Ok(Model::new(params)?.xi(omega))
}

/// Probe scattering parameters at detuning `delta`.
pub fn s_params(params: &ConverterParams, delta: f64) -> Result<SParams> {
    Ok(Model::new(params)?.s_params(delta))
}

/// Matched efficiency `eta_M = epsilon (kappa_ex,o/kappa_o)(kappa_ex,e/kappa_e)`.
pub fn eta_matched(params: &ConverterParams) -> f64 {
    params.epsilon * (params.kappa_ex_o / params.kappa_o())
        * (params.kappa_ex_e / params.kappa_e())
}

/// Converter gain from imperfect sideband resolution: ratio of the full
/// model's peak transmission to the rotating-wave reference model's peak
/// transmission. Tends to 1 in the resolved-sideband limit.
pub fn gain_a(params: &ConverterParams) -> Result<f64> {
    let full = Model::new(params)?;
    let rwa = Model::new_rwa(params)?;
    let (_, t2_full) = full.peak_transmission();
    let (_, t2_rwa) = rwa.peak_transmission();
    if t2_rwa <= 0.0 {
        return Err(Error::Domain("zero reference transmission".into()));
    }
    Ok(t2_full / t2_rwa)
}

/// Closed-form efficiency `4 Gamma_e Gamma_o / Gamma_T^2 * eta_M`.
pub fn eta_closed_form(rates: &DampingRates, eta_m: f64) -> f64 {
    4.0 * rates.gamma_e * rates.gamma_o / rates.gamma_t.powi(2) * eta_m
}

/// Full efficiency report for one configuration.
pub fn conversion_report(params: &ConverterParams) -> Result<EfficiencyReport> {
    let model = Model::new(params)?;
    let (_, t_sq) = model.peak_transmission();
    let a = gain_a(params)?;
    Ok(EfficiencyReport {
        eta: t_sq / a,
        eta_m: eta_matched(params),
        gain_a: a,
        t_sq,
        bandwidth: model.transmission_fwhm(),
    })
}

/// Sweeps the electromechanical damping rate at fixed optical damping,
/// reporting the full-model peak efficiency and the closed form at each
/// grid point. Grid points are evaluated in parallel.
pub fn efficiency_curve(
    params: &ConverterParams,
    gamma_e_grid: &[f64],
) -> Result<Vec<EfficiencyPoint>> {
    let results = par::map(gamma_e_grid, |&gamma_e| -> Result<EfficiencyPoint> {
        let mut p = params.clone();
        p.g_e = coupling_for_damping(&p, Port::Microwave, gamma_e)?;
        let rates = damping_rates(&p);
        let report = conversion_report(&p)?;
        Ok(EfficiencyPoint {
            gamma_e: rates.gamma_e,
            gamma_t: rates.gamma_t,
            eta_model: report.eta,
            eta_closed: eta_closed_form(&rates, report.eta_m),
        })
    });
    results.into_iter().collect()
}

fn maximize<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    // Coarse scan to bracket the global peak, then golden-section refine.
    let n = 256;
    let mut best = (lo, f(lo));
    for k in 1..=n {
        let x = lo + (hi - lo) * k as f64 / n as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let step = (hi - lo) / n as f64;
    let (mut a, mut b) = (best.0 - step, best.0 + step);
    let phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (b - phi * (b - a), a + phi * (b - a));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

fn bisect_crossing<F: Fn(f64) -> f64>(f: &F, level: f64, mut outside: f64, mut inside: f64) -> f64 {
    // Walk outward until below level, then bisect.
    let mut probe = outside;
    while f(probe) > level {
        probe += 2.0 * (probe - inside);
        if !probe.is_finite() {
            break;
        }
    }
    outside = probe;
    for _ in 0..200 {
        let mid = 0.5 * (outside + inside);
        if f(mid) > level {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (outside + inside)
}
