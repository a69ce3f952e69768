//! Averaged-periodogram spectral estimation for demodulated records.
//!
//! Power spectral densities are reported in the photon-normalized units
//! of the synthesis module: a white single-quadrature background of `n`
//! photons estimates to a flat level `n`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::dsp::synth::QuadratureTrace;

type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Rect,
    Hann,
}

impl Window {
    fn coefficients(&self, n: usize) -> Vec<f64> {
        match self {
            Window::Rect => vec![1.0; n],
            Window::Hann => (0..n)
                .map(|k| {
                    let phase = std::f64::consts::PI * k as f64 / n as f64;
                    phase.sin().powi(2)
                })
                .collect(),
        }
    }
}

/// Averaged auto-spectrum in natural DFT bin order.
#[derive(Debug, Clone)]
pub struct AutoSpectrum {
    /// Bin frequencies, Hz (negative above nfft/2).
    pub freq_hz: Vec<f64>,
    /// PSD estimate per bin, photons.
    pub power: Vec<f64>,
    pub segments: usize,
}

fn dft_freqs(nfft: usize, fs: f64) -> Vec<f64> {
    (0..nfft)
        .map(|k| {
            if 2 * k <= nfft {
                k as f64 * fs / nfft as f64
            } else {
                (k as f64 - nfft as f64) * fs / nfft as f64
            }
        })
        .collect()
}

fn segment_ffts(x: &[f64], nfft: usize, window: &[f64]) -> Vec<Vec<C64>> {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(nfft);
    let n_seg = x.len() / nfft;
    let mut out = Vec::with_capacity(n_seg);
    for s in 0..n_seg {
        let mut buf: Vec<C64> = x[s * nfft..(s + 1) * nfft]
            .iter()
            .zip(window)
            .map(|(&v, &w)| C64::from(v * w))
            .collect();
        fft.process(&mut buf);
        out.push(buf);
    }
    out
}

fn check_nfft(len: usize, nfft: usize) -> Result<()> {
    if nfft == 0 || nfft > len {
        return Err(Error::InvalidParams(format!(
            "nfft = {nfft} must be in 1..=len ({len})"
        )));
    }
    if !nfft.is_power_of_two() {
        log::warn!("nfft = {nfft} is not a power of two; FFTs will be slower");
    }
    Ok(())
}

/// Averaged periodogram of a real record.
pub fn welch_auto(x: &[f64], fs: f64, nfft: usize, window: Window) -> AutoSpectrum {
    let w = window.coefficients(nfft);
    let u: f64 = w.iter().map(|v| v * v).sum::<f64>() / nfft as f64;
    let ffts = segment_ffts(x, nfft, &w);
    let n_seg = ffts.len().max(1);
    let mut power = vec![0.0; nfft];
    for seg in &ffts {
        for (k, v) in seg.iter().enumerate() {
            power[k] += v.norm_sqr();
        }
    }
    let norm = 1.0 / (n_seg as f64 * nfft as f64 * fs * u);
    for v in power.iter_mut() {
        *v *= norm;
    }
    AutoSpectrum {
        freq_hz: dft_freqs(nfft, fs),
        power,
        segments: ffts.len(),
    }
}

/// Averaged cross-periodogram of two equally long real records.
pub fn welch_cross(x: &[f64], y: &[f64], fs: f64, nfft: usize, window: Window) -> Result<Vec<C64>> {
    if x.len() != y.len() {
        return Err(Error::InvalidParams(format!(
            "record length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    check_nfft(x.len(), nfft)?;
    let w = window.coefficients(nfft);
    let u: f64 = w.iter().map(|v| v * v).sum::<f64>() / nfft as f64;
    let fx = segment_ffts(x, nfft, &w);
    let fy = segment_ffts(y, nfft, &w);
    let n_seg = fx.len().max(1);
    let mut cross = vec![C64::from(0.0); nfft];
    for (sx, sy) in fx.iter().zip(&fy) {
        for k in 0..nfft {
            cross[k] += sx[k] * sy[k].conj();
        }
    }
    let norm = 1.0 / (n_seg as f64 * nfft as f64 * fs * u);
    for v in cross.iter_mut() {
        *v *= norm;
    }
    Ok(cross)
}

/// Full pairwise spectral set of a microwave/optical trace pair, on an
/// ascending baseband frequency axis (offset from the demodulation
/// frequency, Hz).
#[derive(Debug, Clone)]
pub struct CrossSpectra {
    pub freq_hz: Vec<f64>,
    pub x_ee: Vec<f64>,
    pub x_oo: Vec<f64>,
    /// Magnitude of the complex q-quadrature cross-spectrum.
    pub x_eo: Vec<f64>,
    pub y_ee: Vec<f64>,
    pub y_oo: Vec<f64>,
    pub y_eo: Vec<f64>,
    /// Phase of the q cross-spectrum at its peak magnitude, rad.
    pub cross_phase: f64,
}

fn fftshift<T: Copy>(v: &[T]) -> Vec<T> {
    let n = v.len();
    let split = n.div_ceil(2);
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&v[split..]);
    out.extend_from_slice(&v[..split]);
    out
}

/// Cross-spectral estimation of a trace pair.
pub fn cross_spectra(
    micro: &QuadratureTrace,
    opt: &QuadratureTrace,
    nfft: usize,
    window: Window,
) -> Result<CrossSpectra> {
    micro.validate()?;
    opt.validate()?;
    if (micro.dt - opt.dt).abs() > 1e-15 {
        return Err(Error::InvalidParams("sample-rate mismatch".into()));
    }
    check_nfft(micro.q.len().min(opt.q.len()), nfft)?;
    let fs = 1.0 / micro.dt;
    let auto = |v: &[f64]| fftshift(&welch_auto(v, fs, nfft, window).power);
    let x_ee = auto(&micro.q);
    let x_oo = auto(&opt.q);
    let y_ee = auto(&micro.p);
    let y_oo = auto(&opt.p);
    let cx = fftshift(&welch_cross(&micro.q, &opt.q, fs, nfft, window)?);
    let cy = fftshift(&welch_cross(&micro.p, &opt.p, fs, nfft, window)?);
    let peak = cx
        .iter()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .copied()
        .unwrap_or_default();
    Ok(CrossSpectra {
        freq_hz: fftshift(&dft_freqs(nfft, fs)),
        x_ee,
        x_oo,
        x_eo: cx.iter().map(|v| v.norm()).collect(),
        y_ee,
        y_oo,
        y_eo: cy.iter().map(|v| v.norm()).collect(),
        cross_phase: peak.arg(),
    })
}

/// Analytic (complex-equivalent) signal `a(t) = (q + i p) e^{i 2 pi f_d t}`.
pub fn complex_equivalent(trace: &QuadratureTrace) -> Vec<C64> {
    trace
        .q
        .iter()
        .zip(&trace.p)
        .enumerate()
        .map(|(k, (&q, &p))| {
            let t = k as f64 * trace.dt;
            C64::new(q, p) * C64::from_polar(1.0, 2.0 * std::f64::consts::PI * trace.f_d * t)
        })
        .collect()
}

/// Bandwidth-normalized variance of the q quadrature after an ideal
/// brick-wall baseband filter of half-width `bandwidth` (rad/s): in
/// photon-PSD units this estimates the single-quadrature spectrum at the
/// demodulation frequency.
pub fn narrowband_variance(trace: &QuadratureTrace, bandwidth: f64) -> Result<f64> {
    trace.validate()?;
    if !(bandwidth > 0.0) {
        return Err(Error::Domain("bandwidth must be positive".into()));
    }
    let n = trace.q.len();
    let fs = 1.0 / trace.dt;
    let b_hz = bandwidth / (2.0 * std::f64::consts::PI);
    if 2.0 * b_hz >= fs {
        return Err(Error::Domain(format!(
            "bandwidth {b_hz} Hz exceeds the sampled band ({} Hz)",
            fs / 2.0
        )));
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut buf: Vec<C64> = trace.q.iter().map(|&v| C64::from(v)).collect();
    fft.process(&mut buf);
    let freqs = dft_freqs(n, fs);
    for (k, f) in freqs.iter().enumerate() {
        if f.abs() > b_hz {
            buf[k] = C64::from(0.0);
        }
    }
    let ifft = planner.plan_fft_inverse(n);
    ifft.process(&mut buf);
    let var: f64 = buf
        .iter()
        .map(|v| (v.re / n as f64).powi(2))
        .sum::<f64>()
        / n as f64;
    Ok(var / (2.0 * b_hz))
}
