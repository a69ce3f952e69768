//! Colored Gaussian noise synthesis for the demodulated converter
//! outputs.
//!
//! Per frequency bin, independent complex Gaussian draws for each of the
//! twelve scattering input ports are propagated through `Xi(omega)` and
//! shared between the two output channels, so the microwave-optical
//! cross-correlations are physical (one mechanical realization).
//! Measurement-chain noise is added as an independent white complex
//! process per channel, plus an optional Lorentzian-shaped microwave
//! excess. An inverse DFT yields the demodulated quadrature records.
//!
//! Conventions: frequencies are referenced to each pump (`f_c = 0` in the
//! rotating frame) and the demodulation frequency is the mechanical
//! frequency, `f_d = f_c + f_m`. The complex baseband `z = q + i p` has
//! two-sided PSD equal to the two-quadrature measured photon spectrum at
//! `omega_m + 2 pi nu`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use crate::correlations::spectral_matrix_from;
use crate::error::{Error, Result};
use crate::par;
use crate::params::{damping_rates, ConverterParams, TWO_PI};
use crate::scattering::{input, out, Model};

type C64 = Complex<f64>;

/// Demodulated quadrature records with their acquisition metadata.
#[derive(Debug, Clone)]
pub struct QuadratureTrace {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    /// Sample interval, s.
    pub dt: f64,
    /// Carrier frequency, Hz (0 in the pump-rotating frame).
    pub f_c: f64,
    /// Demodulation frequency, Hz (`f_c + f_m`).
    pub f_d: f64,
    pub seed: u64,
}

impl QuadratureTrace {
    pub fn validate(&self) -> Result<()> {
        if self.q.len() != self.p.len() {
            return Err(Error::InvalidParams(format!(
                "quadrature length mismatch: {} vs {}",
                self.q.len(),
                self.p.len()
            )));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidParams("dt must be positive".into()));
        }
        Ok(())
    }

    /// Complex baseband signal `z = q + i p`.
    pub fn baseband(&self) -> Vec<C64> {
        self.q
            .iter()
            .zip(&self.p)
            .map(|(&q, &p)| C64::new(q, p))
            .collect()
    }
}

/// Measurement-chain model: white single-quadrature backgrounds per
/// channel (including the vacuum half-photon) and a Lorentzian microwave
/// excess.
#[derive(Debug, Clone, Copy)]
pub struct ChainSpec {
    /// Microwave background, single-quadrature photons (>= 1/2).
    pub n_e: f64,
    /// Optical background, single-quadrature photons (>= 1/2).
    pub n_o: f64,
    /// Peak microwave excess noise, single-quadrature photons.
    pub excess_photons: f64,
    /// FWHM of the excess line, rad/s.
    pub excess_fwhm: f64,
}

impl ChainSpec {
    pub fn ideal() -> Self {
        Self {
            n_e: 0.5,
            n_o: 0.5,
            excess_photons: 0.0,
            excess_fwhm: TWO_PI * 1.0e3,
        }
    }
}

/// Deterministic probe tone injected at the microwave external input.
#[derive(Debug, Clone, Copy)]
pub struct ToneSpec {
    /// Offset from the mechanical frequency, Hz.
    pub offset_hz: f64,
    /// Input amplitude in sqrt(photons) units.
    pub amplitude: f64,
}

#[derive(Debug, Clone)]
pub struct SynthConfig {
    /// Record length, s.
    pub duration: f64,
    /// Sample rate of the demodulated records, Hz.
    pub sample_rate: f64,
    pub chain: ChainSpec,
    pub tone: Option<ToneSpec>,
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0) || !(self.sample_rate > 0.0) {
            return Err(Error::InvalidParams(
                "duration and sample rate must be positive".into(),
            ));
        }
        if self.chain.n_e < 0.5 || self.chain.n_o < 0.5 {
            return Err(Error::InvalidParams(format!(
                "chain backgrounds below the vacuum floor: n_e = {}, n_o = {}",
                self.chain.n_e, self.chain.n_o
            )));
        }
        if self.chain.excess_photons < 0.0 {
            return Err(Error::InvalidParams("excess noise must be >= 0".into()));
        }
        Ok(())
    }
}

/// Precomputed per-bin port amplitudes for one (params, config) pair;
/// realizations for different seeds reuse the scattering solves.
pub struct Synthesizer {
    n: usize,
    sample_rate: f64,
    f_m_hz: f64,
    /// Per bin: 12 microwave-row amplitudes, 12 optical-row amplitudes
    /// (already scaled by sqrt(n_p + 1/2)), chain std-devs, tone drive.
    micro_rows: Vec<[C64; 12]>,
    opt_rows: Vec<[C64; 12]>,
    chain_std_e: Vec<f64>,
    chain_std_o: f64,
    tone_bin: Option<(usize, C64, C64)>,
}

fn bin_freq(k: usize, n: usize, fs: f64) -> f64 {
    // Two-sided DFT bin frequency in Hz.
    if k <= n / 2 {
        k as f64 * fs / n as f64
    } else {
        (k as f64 - n as f64) * fs / n as f64
    }
}

impl Synthesizer {
    pub fn new(params: &ConverterParams, cfg: &SynthConfig) -> Result<Self> {
        cfg.validate()?;
        let model = Model::new(params)?;
        let rates = damping_rates(params);
        if cfg.duration < 10.0 / rates.gamma_t * TWO_PI {
            log::warn!(
                "record of {:.2} s is short relative to the converter linewidth ({:.0} Hz); \
                 spectral estimates will be noisy",
                cfg.duration,
                rates.gamma_t / TWO_PI
            );
        }
        let n = (cfg.duration * cfg.sample_rate).round() as usize;
        if n < 16 {
            return Err(Error::InvalidParams(format!(
                "record too short: {n} samples"
            )));
        }

        let occupancies = {
            let mut occ = [0.0; 12];
            occ[input::A_BACK] = params.n_th_o;
            occ[input::A_FRONT] = params.n_th_o;
            occ[input::A_INT] = params.n_th_o;
            occ[input::B_EX] = params.n_th_e;
            occ[input::B_INT] = params.n_th_e;
            occ[input::C] = params.n_th_m;
            for p in 0..6 {
                occ[p + 6] = occ[p];
            }
            occ
        };

        // The optical detector sees the converter output through the
        // spatial mode match: field amplitudes scale by sqrt(epsilon) and
        // the mismatched fraction admits plain vacuum, made up below in
        // the optical chain term so a decoupled ideal chain still totals
        // one photon two-quadrature.
        let root_eps = C64::from(params.epsilon.sqrt());
        let rows: Vec<([C64; 12], [C64; 12])> = par::map_indices(n, |k| {
            let omega = params.omega_m + TWO_PI * bin_freq(k, n, cfg.sample_rate);
            let xi = model.xi(omega).xi;
            let mut micro = [C64::from(0.0); 12];
            let mut opt = [C64::from(0.0); 12];
            for p in 0..12 {
                let w = (occupancies[p] + 0.5).sqrt();
                micro[p] = xi[(out::B_EX, p)] * w;
                opt[p] = xi[(out::A_FRONT, p)] * w * root_eps;
            }
            (micro, opt)
        });
        let (micro_rows, mut opt_rows): (Vec<_>, Vec<_>) = rows.into_iter().unzip();

        // Align the optical demodulation phase so the on-resonance
        // cross-correlation sits in the matching quadratures (q with q,
        // p with p), as a matched demodulator phase does in hardware.
        // Bin 0 is the mechanical resonance.
        let cross_at_peak: C64 = (0..12)
            .map(|p| micro_rows[0][p].conj() * opt_rows[0][p])
            .sum();
        let align = C64::from_polar(1.0, -cross_at_peak.arg());
        for row in opt_rows.iter_mut() {
            for v in row.iter_mut() {
                *v *= align;
            }
        }

        // Chain noise adds 2 n_i - 1/2 two-quadrature photons on top of
        // the vacuum already carried through Xi, so ideal chains total
        // exactly one photon two-quadrature on a decoupled output.
        let chain_std_e: Vec<f64> = (0..n)
            .map(|k| {
                let omega = TWO_PI * bin_freq(k, n, cfg.sample_rate);
                let half = 0.5 * cfg.chain.excess_fwhm;
                let exc = 2.0 * cfg.chain.excess_photons * half * half
                    / (half * half + omega * omega);
                (2.0 * cfg.chain.n_e - 0.5 + exc).sqrt()
            })
            .collect();
        let chain_std_o =
            (2.0 * cfg.chain.n_o - 0.5 + 0.5 * (1.0 - params.epsilon)).sqrt();

        let tone_bin = cfg.tone.map(|tone| {
            let k = ((tone.offset_hz / cfg.sample_rate * n as f64).round() as isize)
                .rem_euclid(n as isize) as usize;
            let omega = params.omega_m + TWO_PI * bin_freq(k, n, cfg.sample_rate);
            let xi = model.xi(omega).xi;
            // Deterministic line: the DFT of amplitude a at an exact bin
            // is N a.
            let drive = C64::from(tone.amplitude * n as f64);
            (
                k,
                xi[(out::B_EX, input::B_EX)] * drive,
                xi[(out::A_FRONT, input::B_EX)] * drive * root_eps * align,
            )
        });

        let f_m_hz = params.omega_m / TWO_PI;
        Ok(Self {
            n,
            sample_rate: cfg.sample_rate,
            f_m_hz,
            micro_rows,
            opt_rows,
            chain_std_e,
            chain_std_o,
            tone_bin,
        })
    }

    /// Draws one realization. Deterministic per seed, independent of
    /// thread count (the RNG runs sequentially over bins).
    pub fn realize(&self, seed: u64) -> (QuadratureTrace, QuadratureTrace) {
        let n = self.n;
        let scale = (n as f64 * self.sample_rate).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut z_e = vec![C64::from(0.0); n];
        let mut z_o = vec![C64::from(0.0); n];
        for k in 0..n {
            let mut acc_e = C64::from(0.0);
            let mut acc_o = C64::from(0.0);
            for p in 0..12 {
                let w = complex_standard_normal(&mut rng);
                acc_e += self.micro_rows[k][p] * w;
                acc_o += self.opt_rows[k][p] * w;
            }
            acc_e += complex_standard_normal(&mut rng) * self.chain_std_e[k];
            acc_o += complex_standard_normal(&mut rng) * self.chain_std_o;
            z_e[k] = acc_e * scale;
            z_o[k] = acc_o * scale;
        }
        if let Some((k, drive_e, drive_o)) = self.tone_bin {
            z_e[k] += drive_e;
            z_o[k] += drive_o;
        }

        let mut planner = FftPlanner::new();
        let ifft = planner.plan_fft_inverse(n);
        ifft.process(&mut z_e);
        ifft.process(&mut z_o);
        let norm = 1.0 / n as f64;

        let build = |z: Vec<C64>| QuadratureTrace {
            q: z.iter().map(|v| v.re * norm).collect(),
            p: z.iter().map(|v| v.im * norm).collect(),
            dt: 1.0 / self.sample_rate,
            f_c: 0.0,
            f_d: self.f_m_hz,
            seed,
        };
        (build(z_e), build(z_o))
    }
}

fn complex_standard_normal(rng: &mut ChaCha8Rng) -> C64 {
    // Box-Muller; E|w|^2 = 1.
    let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let phi: f64 = rng.random::<f64>() * TWO_PI;
    let r = (-u.ln()).sqrt();
    C64::new(r * phi.cos(), r * phi.sin())
}

/// One-shot synthesis: `(microwave, optical)` demodulated records.
pub fn synthesize_outputs(
    params: &ConverterParams,
    cfg: &SynthConfig,
    seed: u64,
) -> Result<(QuadratureTrace, QuadratureTrace)> {
    Ok(Synthesizer::new(params, cfg)?.realize(seed))
}

/// Expected measured single-quadrature spectra at baseband offset `nu`
/// (Hz): `(x_ee, x_oo, x_eo)`, photons. The analytic counterpart of the
/// synthesized records, used as the Monte-Carlo oracle.
///
/// A real demodulated quadrature folds the baseband offsets `+nu` and
/// `-nu` together: the autos average the two sideband spectra, and the
/// cross adds them coherently after the matched demodulator rotation, so
/// any even-in-`nu` phase of the cross-spectrum partially cancels in the
/// wings. The detected optical spectra carry the spatial mode-match
/// factor; see [`Synthesizer::new`].
pub fn expected_spectra(
    params: &ConverterParams,
    chain: &ChainSpec,
    nu_hz: f64,
) -> Result<(f64, f64, f64)> {
    let model = Model::new(params)?;
    let block = |nu: f64| {
        crate::correlations::eo_block(&spectral_matrix_from(
            &model,
            params.omega_m + TWO_PI * nu,
        ))
    };
    let plus = block(nu_hz);
    let minus = block(-nu_hz);
    let rot = C64::from_polar(1.0, -block(0.0).c_eo.arg());
    let half = 0.5 * chain.excess_fwhm;
    let exc = chain.excess_photons * half * half / (half * half + (TWO_PI * nu_hz).powi(2));
    Ok((
        0.25 * (plus.c_ee + minus.c_ee) + chain.n_e + exc,
        0.25 * params.epsilon * (plus.c_oo + minus.c_oo) + chain.n_o,
        0.25 * params.epsilon.sqrt() * (plus.c_eo * rot + (minus.c_eo * rot).conj()).norm(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::spectra::{cross_spectra, CrossSpectra, Window};
    use crate::feedforward::balanced_operating_point;
    use crate::scenario::table_s1_params;
    use approx::assert_relative_eq;

    fn fig3_params() -> ConverterParams {
        let mut p = balanced_operating_point(&table_s1_params(), TWO_PI * 200.0).unwrap();
        p.n_th_m = crate::params::bose_occupancy(p.omega_m, 0.087);
        p
    }

    fn quiet_params() -> ConverterParams {
        let mut p = table_s1_params();
        p.g_e = 0.0;
        p.g_o = 0.0;
        p.n_th_m = 0.0;
        p.n_th_e = 0.0;
        p.n_th_o = 0.0;
        p
    }

    #[test]
    fn ideal_decoupled_output_is_one_photon() {
        let cfg = SynthConfig {
            duration: 40.0,
            sample_rate: 1000.0,
            chain: ChainSpec::ideal(),
            tone: None,
        };
        let (micro, opt) = synthesize_outputs(&quiet_params(), &cfg, 1).unwrap();
        for tr in [&micro, &opt] {
            // Flat single-quadrature periodogram at the vacuum half-photon
            // (one photon two-quadrature).
            let s = crate::dsp::spectra::welch_auto(&tr.q, 1.0 / tr.dt, 256, Window::Rect);
            let mean: f64 = s.power.iter().sum::<f64>() / s.power.len() as f64;
            assert!((mean - 0.5).abs() < 0.05, "single-quad level {mean}");
            // And the baseband total variance integrates the flat
            // one-photon PSD over the sampled band.
            let z = tr.baseband();
            let var: f64 = z.iter().map(|v| v.norm_sqr()).sum::<f64>() / z.len() as f64;
            assert_relative_eq!(var, cfg.sample_rate, max_relative = 0.05);
        }
    }

    #[test]
    fn reproducible_per_seed() {
        let cfg = SynthConfig {
            duration: 2.0,
            sample_rate: 2000.0,
            chain: ChainSpec::ideal(),
            tone: None,
        };
        let p = fig3_params();
        let synth = Synthesizer::new(&p, &cfg).unwrap();
        let (a_e, a_o) = synth.realize(7);
        let (b_e, b_o) = synth.realize(7);
        assert_eq!(a_e.q, b_e.q);
        assert_eq!(a_o.p, b_o.p);
        let (c_e, _) = synth.realize(8);
        assert_ne!(a_e.q, c_e.q);
    }

    #[test]
    fn fig3_peak_and_linewidth() {
        let p = fig3_params();
        let chain = ChainSpec {
            n_e: 29.6,
            n_o: 2.7,
            excess_photons: 2.2,
            excess_fwhm: p.kappa_e(),
        };
        let cfg = SynthConfig {
            duration: 60.0,
            sample_rate: 2000.0,
            chain,
            tone: None,
        };
        let synth = Synthesizer::new(&p, &cfg).unwrap();
        // Average spectra over several realizations.
        let n_seeds = 12;
        let nfft = 4096;
        let mut avg: Option<CrossSpectra> = None;
        for seed in 0..n_seeds {
            let (micro, opt) = synth.realize(seed);
            let s = cross_spectra(&micro, &opt, nfft, Window::Hann).unwrap();
            avg = Some(match avg {
                None => s,
                Some(mut a) => {
                    for k in 0..a.x_ee.len() {
                        a.x_ee[k] += s.x_ee[k];
                        a.x_oo[k] += s.x_oo[k];
                        a.x_eo[k] += s.x_eo[k];
                    }
                    a
                }
            });
        }
        let mut a = avg.unwrap();
        for v in a.x_ee.iter_mut().chain(a.x_oo.iter_mut()) {
            *v /= n_seeds as f64;
        }
        for v in a.x_eo.iter_mut() {
            *v /= n_seeds as f64;
        }

        let fit = crate::dsp::fit::lorentzian_fit(&a.freq_hz, &a.x_ee).unwrap();
        assert!((fit.fwhm - 200.0).abs() < 25.0, "fwhm = {}", fit.fwhm);
        let (ee, oo, eo) = expected_spectra(&p, &chain, 0.0).unwrap();
        assert!(
            (fit.height - (ee - 29.6)).abs() < 0.15 * (ee - 29.6),
            "peak {} vs expected {}",
            fit.height,
            ee - 29.6
        );
        let fit_o = crate::dsp::fit::lorentzian_fit(&a.freq_hz, &a.x_oo).unwrap();
        assert!(
            (fit_o.height - (oo - 2.7)).abs() < 0.15 * (oo - 2.7),
            "optical peak {} vs {}",
            fit_o.height,
            oo - 2.7
        );
        let fit_x = crate::dsp::fit::lorentzian_fit(&a.freq_hz, &a.x_eo).unwrap();
        assert!(
            (fit_x.height - eo).abs() < 0.15 * eo,
            "cross peak {} vs {}",
            fit_x.height,
            eo
        );
    }

    #[test]
    fn ensemble_converges_to_analytic_as_inverse_sqrt() {
        // Measured convergence exponent of the spectral estimator error
        // vs averaging count should be 0.5 +- 0.15. Decoupled params give
        // a flat half-photon spectrum, so the error is purely statistical
        // (a colored spectrum would add a leakage/resolution bias floor
        // that does not average away).
        let p = quiet_params();
        let chain = ChainSpec::ideal();
        let cfg = SynthConfig {
            duration: 16.0,
            sample_rate: 1000.0,
            chain,
            tone: None,
        };
        let synth = Synthesizer::new(&p, &cfg).unwrap();
        let nfft = 1024;
        let mut errs = Vec::new();
        let counts = [4usize, 16, 64];
        for &count in &counts {
            let mut spectra = Vec::new();
            for seed in 0..count as u64 {
                let (micro, _) = synth.realize(seed);
                let s = welch_for_test(&micro, nfft);
                spectra.push(s);
            }
            let n_bins = spectra[0].len();
            let mut avg = vec![0.0; n_bins];
            for s in &spectra {
                for k in 0..n_bins {
                    avg[k] += s[k] / count as f64;
                }
            }
            // Compare the averaged white background to its analytic level
            // (1/2 photon single-quadrature away from the peak).
            let mut err = 0.0;
            let mut used = 0;
            for k in 0..n_bins {
                let freq = k as f64 * cfg.sample_rate / nfft as f64
                    - if k * 2 >= n_bins { cfg.sample_rate } else { 0.0 };
                if freq.abs() > 150.0 && freq.abs() < 400.0 {
                    err += (avg[k] - 0.5_f64).powi(2);
                    used += 1;
                }
            }
            errs.push((err / used as f64).sqrt());
        }
        let slope = (errs[2] / errs[0]).ln() / ((counts[2] as f64 / counts[0] as f64).ln());
        let exponent = -slope;
        assert!(
            (exponent - 0.5).abs() < 0.15,
            "convergence exponent {exponent}, errors {errs:?}"
        );
    }

    fn welch_for_test(tr: &QuadratureTrace, nfft: usize) -> Vec<f64> {
        crate::dsp::spectra::welch_auto(&tr.q, 1.0 / tr.dt, nfft, Window::Rect).power
    }

    #[test]
    fn tone_appears_in_both_channels() {
        let p = fig3_params();
        let cfg = SynthConfig {
            duration: 8.0,
            sample_rate: 1000.0,
            chain: ChainSpec::ideal(),
            tone: Some(ToneSpec {
                offset_hz: 125.0,
                amplitude: 100.0,
            }),
        };
        let (micro, opt) = synthesize_outputs(&p, &cfg, 3).unwrap();
        for tr in [&micro, &opt] {
            let s = crate::dsp::spectra::welch_auto(&tr.q, 1.0 / tr.dt, 1024, Window::Rect);
            let peak_bin = (125.0_f64 / 1000.0 * 1024.0).round() as usize;
            let peak = s.power[peak_bin];
            let background: f64 = s.power[300..400].iter().sum::<f64>() / 100.0;
            assert!(peak > 20.0 * background, "tone peak {peak} background {background}");
        }
    }

    #[test]
    fn invalid_chain_rejected() {
        let cfg = SynthConfig {
            duration: 1.0,
            sample_rate: 1000.0,
            chain: ChainSpec {
                n_e: 0.2,
                n_o: 0.5,
                excess_photons: 0.0,
                excess_fwhm: 1.0,
            },
            tone: None,
        };
        assert!(synthesize_outputs(&quiet_params(), &cfg, 0).is_err());
    }
}
