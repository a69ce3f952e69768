//! Standalone cavity response models.
//!
//! Two pieces: the one-port microwave reflection transfer function, and a
//! 1D plane-wave transfer-matrix model of the membrane-in-the-middle
//! optical cavity. The membrane and the near mirror form a low-finesse
//! etalon, so the mirror decay rates redistribute as the membrane moves:
//! each mirror's external coupling is its transmission times the incident
//! traveling-wave intensity at that mirror over the total stored energy.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::par;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

type C64 = Complex<f64>;

/// One-port cavity: a single external coupling plus internal loss.
#[derive(Debug, Clone, Copy)]
pub struct OnePortCavity {
    /// Internal loss rate, rad/s.
    pub kappa_int: f64,
    /// External coupling rate, rad/s.
    pub kappa_ex: f64,
}

/// Reflection coefficient at detuning `delta` (rad/s):
/// `S(delta) = -(2 i delta + kappa_int - kappa_ex) / (2 i delta + kappa_int + kappa_ex)`.
pub fn reflection(cav: &OnePortCavity, delta: f64) -> C64 {
    let two_i_delta = C64::new(0.0, 2.0 * delta);
    -(two_i_delta + cav.kappa_int - cav.kappa_ex) / (two_i_delta + cav.kappa_int + cav.kappa_ex)
}

/// Two partially transmitting mirrors with a thin dielectric slab
/// (the membrane) between them.
#[derive(Debug, Clone, Copy)]
pub struct EtalonStack {
    /// Front (input) mirror power transmission.
    pub t_front: f64,
    /// Back mirror power transmission.
    pub t_back: f64,
    /// Mirror-to-mirror length, m.
    pub length: f64,
    /// Membrane thickness, m.
    pub membrane_thickness: f64,
    /// Membrane refractive index.
    pub membrane_index: f64,
    /// Nominal distance from the front mirror to the membrane, m; scans
    /// offset this by x.
    pub membrane_position: f64,
    /// Vacuum wavelength of the nominal resonance, m.
    pub wavelength: f64,
    /// Position-independent internal loss added to the mirror couplings,
    /// rad/s.
    pub kappa_int: f64,
}

impl EtalonStack {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_front > 0.0 && self.t_front < 1.0 && self.t_back > 0.0 && self.t_back < 1.0) {
            return Err(Error::InvalidParams(
                "mirror transmissions must lie in (0, 1)".into(),
            ));
        }
        if self.membrane_index < 1.0 {
            return Err(Error::InvalidParams(
                "membrane index must be >= 1".into(),
            ));
        }
        if self.length <= 0.0 || self.wavelength <= 0.0 || self.membrane_thickness < 0.0 {
            return Err(Error::InvalidParams(
                "lengths and wavelength must be positive".into(),
            ));
        }
        Ok(())
    }

    fn check_membrane_inside(&self, x: f64) -> Result<f64> {
        let front_gap = self.membrane_position + x;
        let back_gap = self.length - front_gap - self.membrane_thickness;
        if front_gap <= 0.0 || back_gap <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "membrane outside cavity at offset {x:.3e} m"
            )));
        }
        Ok(front_gap)
    }

    /// Optical path length, m.
    fn optical_length(&self) -> f64 {
        self.length + (self.membrane_index - 1.0) * self.membrane_thickness
    }
}

/// Cavity rates at one membrane offset.
#[derive(Debug, Clone, Copy)]
pub struct EtalonPoint {
    /// Membrane offset from nominal, m.
    pub x: f64,
    /// Total optical linewidth, rad/s.
    pub kappa_o: f64,
    /// Front-mirror external coupling, rad/s.
    pub kappa_ex_o: f64,
    /// Back-mirror coupling, rad/s.
    pub kappa_b_o: f64,
    /// Resonance angular frequency, rad/s.
    pub omega_res: f64,
    /// Frequency pull |d omega / dx|, rad/s per m (not yet normalized).
    pub freq_pull: f64,
}

/// Field state (E, E'/k) propagated through one homogeneous region.
fn propagate(u: f64, v: f64, n: f64, k: f64, len: f64) -> (f64, f64) {
    let phase = n * k * len;
    let (s, c) = phase.sin_cos();
    (u * c + v / n * s, -u * n * s + v * c)
}

/// Shooting function for the resonance condition: field at the back
/// mirror for a mode pinned to zero at the front mirror.
fn shoot(stack: &EtalonStack, x: f64, k: f64) -> f64 {
    let front_gap = stack.membrane_position + x;
    let back_gap = stack.length - front_gap - stack.membrane_thickness;
    let (u, v) = propagate(0.0, 1.0, 1.0, k, front_gap);
    let (u, v) = propagate(u, v, stack.membrane_index, k, stack.membrane_thickness);
    let (u, _) = propagate(u, v, 1.0, k, back_gap);
    u
}

/// Resonant wavenumber nearest the stack's nominal wavelength.
fn resonant_k(stack: &EtalonStack, x: f64) -> Result<f64> {
    let k0 = 2.0 * std::f64::consts::PI / stack.wavelength;
    // Modes are spaced by ~pi/L_opt in k; scan one full spacing around
    // k0 and bisect the sign change nearest k0.
    let spacing = std::f64::consts::PI / stack.optical_length();
    let n_steps = 64;
    let lo = k0 - 0.75 * spacing;
    let step = 1.5 * spacing / n_steps as f64;
    let mut roots = Vec::new();
    let mut prev = shoot(stack, x, lo);
    for i in 1..=n_steps {
        let k = lo + i as f64 * step;
        let val = shoot(stack, x, k);
        if prev == 0.0 {
            roots.push(lo + (i - 1) as f64 * step);
        } else if prev.signum() != val.signum() {
            let (mut a, mut b) = (k - step, k);
            let mut fa = prev;
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                let fm = shoot(stack, x, mid);
                if fa.signum() == fm.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev = val;
    }
    roots
        .into_iter()
        .min_by(|a, b| (a - k0).abs().total_cmp(&(b - k0).abs()))
        .ok_or_else(|| Error::Domain("no cavity resonance found in scan window".into()))
}

/// Mirror couplings from the mode shape: kappa_i = T_i c I_i / U with
/// I_i the incident traveling-wave intensity at mirror i and U the
/// stored energy of the mode.
fn couplings_at(stack: &EtalonStack, x: f64, k: f64) -> (f64, f64) {
    let front_gap = stack.membrane_position + x;
    let back_gap = stack.length - front_gap - stack.membrane_thickness;
    // Start at the front mirror with unit slope; the invariant
    // (n^2 u^2 + v^2)/2 is the energy density of each region.
    let (mut u, mut v) = (0.0, 1.0);
    let i_front = 0.25 * (u * u + v * v);
    let mut energy = 0.0;
    for (n, len) in [
        (1.0, front_gap),
        (stack.membrane_index, stack.membrane_thickness),
        (1.0, back_gap),
    ] {
        energy += 0.5 * (n * n * u * u + v * v) * len;
        (u, v) = propagate(u, v, n, k, len);
    }
    let i_back = 0.25 * (u * u + v * v);
    (
        stack.t_front * SPEED_OF_LIGHT * i_front / energy,
        stack.t_back * SPEED_OF_LIGHT * i_back / energy,
    )
}

/// Rates and frequency pull at a single membrane offset. The pull is
/// computed from the implicit resonance condition (partial derivatives of
/// the shooting function); [`freq_pull_fd`] provides the independent
/// finite-difference route.
pub fn etalon_point(stack: &EtalonStack, x: f64) -> Result<EtalonPoint> {
    stack.validate()?;
    stack.check_membrane_inside(x)?;
    let k = resonant_k(stack, x)?;
    let (kappa_ex_o, kappa_b_o) = couplings_at(stack, x, k);

    // dk/dx = -f_x / f_k on the resonance manifold f(k, x) = 0; steps are
    // small relative to the mode spacing and the etalon period.
    let dk = 1e-6 * std::f64::consts::PI / stack.optical_length();
    let dx = 1e-12;
    let f_k = (shoot(stack, x, k + dk) - shoot(stack, x, k - dk)) / (2.0 * dk);
    let f_x = (shoot(stack, x + dx, k) - shoot(stack, x - dx, k)) / (2.0 * dx);
    // Finite-difference noise on f_x is ~eps/dx ~ 1e-4 per meter while a
    // real membrane contributes ~k per meter; clamp below the floor so an
    // index-matched (invisible) membrane reports exactly zero pull.
    let pull = if f_k.abs() > 0.0 && f_x.abs() > 1.0 {
        (f_x / f_k).abs() * SPEED_OF_LIGHT
    } else {
        0.0
    };

    Ok(EtalonPoint {
        x,
        kappa_o: kappa_ex_o + kappa_b_o + stack.kappa_int,
        kappa_ex_o,
        kappa_b_o,
        omega_res: k * SPEED_OF_LIGHT,
        freq_pull: pull,
    })
}

/// Frequency pull by re-solving the resonance at displaced membrane
/// positions (independent cross-check of [`etalon_point`]'s implicit
/// derivative).
pub fn freq_pull_fd(stack: &EtalonStack, x: f64, dx: f64) -> Result<f64> {
    let plus = resonant_k(stack, x + dx)?;
    let minus = resonant_k(stack, x - dx)?;
    Ok(((plus - minus) * SPEED_OF_LIGHT / (2.0 * dx)).abs())
}

/// Sweeps the membrane offset, evaluating rates in parallel. The returned
/// `g_o_norm` values are |d omega/dx| normalized to the scan maximum.
pub fn etalon_scan(stack: &EtalonStack, x_grid: &[f64]) -> Result<Vec<(EtalonPoint, f64)>> {
    stack.validate()?;
    let points: Result<Vec<EtalonPoint>> = par::map(x_grid, |&x| etalon_point(stack, x))
        .into_iter()
        .collect();
    let points = points?;
    let max_pull = points
        .iter()
        .map(|p| p.freq_pull)
        .fold(0.0_f64, f64::max);
    Ok(points
        .into_iter()
        .map(|p| {
            let norm = if max_pull > 0.0 { p.freq_pull / max_pull } else { 0.0 };
            (p, norm)
        })
        .collect())
}

/// The converter's mirror set: 98 ppm input mirror with the membrane
/// 750 um away, 29 ppm far mirror, 2.6 mm cavity, 100 nm slab at index 2,
/// resonance at 281.8 THz.
pub fn default_stack() -> EtalonStack {
    EtalonStack {
        t_front: 98e-6,
        t_back: 29e-6,
        length: 2.6e-3,
        membrane_thickness: 100e-9,
        membrane_index: 2.0,
        membrane_position: 750e-6,
        wavelength: SPEED_OF_LIGHT / 281.8e12,
        // Internal loss is not published; it is set so the scanned total
        // linewidth covers the reported 2.1-3 MHz span on top of the
        // mirror-coupling modulation.
        kappa_int: crate::params::TWO_PI * 1.05e6,
    }
}
