//! Scenario runner: binds the physics modules to reproducible sweep
//! experiments and figure-style data products. Each scenario writes CSV
//! tables with unit-annotated headers plus a JSON manifest recording the
//! resolved config hash, the seed, and a digest of every artifact, so
//! reruns with identical inputs are byte-identical and verifiable.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cavity;
use crate::correlations::{eo_block, spectral_matrix_from};
use crate::dsp::fit::lorentzian_fit;
use crate::dsp::spectra::{cross_spectra, Window};
use crate::dsp::synth::{ChainSpec, SynthConfig, Synthesizer};
use crate::error::{Error, Result};
use crate::feedforward::{
    balanced_operating_point, budget_from_model, ff_spectrum, ideal_chain_floor,
    n_add_input_referred, optimal_weight, ExcessNoise, FeedforwardConfig,
};
use crate::params::{
    bose_occupancy, coupling_for_damping, damping_rates, load_config, ConverterParams, Port,
    TWO_PI,
};
use crate::qfeedforward::{self, AncillaSpec, Direction};
use crate::scattering::{conversion_report, efficiency_curve, Model};
use crate::shiftcode::{simulate_fidelity, Decoder, ShiftCodeParams};

/// Device parameters of the published converter: linewidths, detunings and
/// mode matching from the device table, couplings set for balanced
/// parametric damping at 2pi x 725 Hz per port, mechanical bath at 87 mK.
pub fn table_s1_params() -> ConverterParams {
    let omega_m = TWO_PI * 1.4732e6;
    let mut p = ConverterParams {
        omega_m,
        gamma_m: TWO_PI * 11.0,
        kappa_ex_e: TWO_PI * 2.3e6,
        kappa_int_e: TWO_PI * 0.2e6,
        kappa_ex_o: TWO_PI * 1.1e6,
        kappa_b_o: TWO_PI * 0.5e6,
        kappa_int_o: TWO_PI * 0.5e6,
        delta_e: -TWO_PI * 1.47e6,
        delta_o: -TWO_PI * 1.11e6,
        g_e: 0.0,
        g_o: 0.0,
        epsilon: 0.87,
        epsilon_lo: 0.83,
        n_th_m: bose_occupancy(omega_m, 0.087),
        n_th_e: 0.0,
        n_th_o: 0.0,
    };
    p.g_o = coupling_for_damping(&p, Port::Optical, TWO_PI * 725.0)
        .expect("red-detuned table configuration");
    p.g_e = coupling_for_damping(&p, Port::Microwave, TWO_PI * 725.0)
        .expect("red-detuned table configuration");
    p
}

/// Measured chain backgrounds and microwave excess of the correlation
/// measurement: single-quadrature photons.
pub const CHAIN_N_E: f64 = 29.6;
pub const CHAIN_N_O: f64 = 2.7;
pub const CHAIN_EXCESS: f64 = 2.2;

/// Registered scenario names, in documentation order.
pub const SCENARIOS: &[&str] = &[
    "fig2a-sparams",
    "fig2b-efficiency-sweep",
    "fig2c-linewidth-sweep",
    "fig3-correlations",
    "fig4d-ff-weight-sweep",
    "fig4e-cooling-sweep",
    "figS5-etalon",
    "appendix-shiftcode",
    "qff-threshold",
];

/// One scenario invocation: name, config file, output directory, dotted
/// `key=value` config overrides, and the random seed.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub config: PathBuf,
    pub out_dir: PathBuf,
    pub overrides: Vec<(String, String)>,
    pub seed: u64,
}

#[derive(Serialize)]
struct ArtifactRecord {
    file: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest {
    scenario: String,
    seed: u64,
    config_sha256: String,
    outputs: Vec<ArtifactRecord>,
}

/// Collects artifacts under one output directory and digests each file as
/// it is written.
struct ArtifactWriter {
    out_dir: PathBuf,
    outputs: Vec<ArtifactRecord>,
}

fn sha256_hex(data: &[u8]) -> String {
    let digest = Sha256::digest(data);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        write!(hex, "{byte:02x}").expect("infallible");
    }
    hex
}

impl ArtifactWriter {
    fn new(out_dir: &Path) -> Result<Self> {
        fs::create_dir_all(out_dir)?;
        Ok(Self {
            out_dir: out_dir.to_path_buf(),
            outputs: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        fs::write(self.out_dir.join(name), contents)?;
        self.outputs.push(ArtifactRecord {
            file: name.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }

    fn finish(mut self, scenario: &str, seed: u64, config_sha256: String) -> Result<()> {
        self.outputs.sort_by(|a, b| a.file.cmp(&b.file));
        let manifest = Manifest {
            scenario: scenario.to_string(),
            seed,
            config_sha256,
            outputs: self.outputs,
        };
        let json = serde_json::to_string_pretty(&manifest).expect("static schema");
        fs::write(self.out_dir.join("manifest.json"), json)?;
        Ok(())
    }
}

/// Renders rows of floats as CSV under a unit-annotated header.
fn csv(header: &str, rows: &[Vec<f64>]) -> String {
    let mut out = String::with_capacity(32 * rows.len());
    out.push_str(header);
    out.push('\n');
    for row in rows {
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write!(out, "{v:.10e}").expect("infallible");
        }
        out.push('\n');
    }
    out
}

/// Runs one registered scenario end to end. Unknown names fail with
/// [`Error::UnknownScenario`]; config problems surface as config errors.
pub fn run_scenario(s: &Scenario) -> Result<()> {
    if !SCENARIOS.contains(&s.name.as_str()) {
        return Err(Error::UnknownScenario(s.name.clone()));
    }
    let source = fs::read_to_string(&s.config)?;
    let params = crate::params::params_from_toml(&source, &s.overrides)?;
    let mut hasher_input = source.into_bytes();
    for (k, v) in &s.overrides {
        hasher_input.extend_from_slice(k.as_bytes());
        hasher_input.push(b'=');
        hasher_input.extend_from_slice(v.as_bytes());
        hasher_input.push(b'\n');
    }
    let config_hash = sha256_hex(&hasher_input);

    let mut w = ArtifactWriter::new(&s.out_dir)?;
    match s.name.as_str() {
        "fig2a-sparams" => sparams_scenario(&params, &mut w)?,
        "fig2b-efficiency-sweep" => efficiency_scenario(&params, &mut w)?,
        "fig2c-linewidth-sweep" => linewidth_scenario(&params, &mut w)?,
        "fig3-correlations" => correlations_scenario(&params, &mut w, s.seed)?,
        "fig4d-ff-weight-sweep" => ff_weight_scenario(&params, &mut w)?,
        "fig4e-cooling-sweep" => cooling_scenario(&params, &mut w)?,
        "figS5-etalon" => etalon_scenario(&mut w)?,
        "appendix-shiftcode" => shiftcode_scenario(&mut w, s.seed)?,
        "qff-threshold" => qff_scenario(&mut w)?,
        other => return Err(Error::UnknownScenario(other.to_string())),
    }
    w.finish(&s.name, s.seed, config_hash)
}

// ---------------------------------------------------------------------------
// Individual scenarios
// ---------------------------------------------------------------------------

/// Probe scattering parameters versus probe detuning, narrow (mechanical
/// feature) and wide (cavity envelope) spans.
fn sparams_scenario(params: &ConverterParams, w: &mut ArtifactWriter) -> Result<()> {
    let model = Model::new(params)?;
    let f_m = params.omega_m / TWO_PI;
    let header =
        "delta_hz,s_ee_sq_dimensionless,s_oo_sq_dimensionless,s_oe_sq_dimensionless,s_eo_sq_dimensionless";
    let narrow: Vec<f64> = (0..=2000).map(|k| f_m - 5e3 + 5.0 * k as f64).collect();
    let wide: Vec<f64> = (0..=1200).map(|k| f_m - 3e6 + 5e3 * k as f64).collect();
    for (file, grid) in [("sparams_narrow.csv", narrow), ("sparams_wide.csv", wide)] {
        let rows = crate::par::map(&grid, |&f| {
            let sp = model.s_params(TWO_PI * f);
            vec![
                f,
                sp.s_ee.norm_sqr(),
                sp.s_oo.norm_sqr(),
                sp.s_oe.norm_sqr(),
                sp.s_eo.norm_sqr(),
            ]
        });
        w.write(file, &csv(header, &rows))?;
    }
    Ok(())
}

/// Conversion efficiency versus electromechanical damping at fixed optical
/// damping: full-model peak efficiency and the closed-form curve.
fn efficiency_scenario(params: &ConverterParams, w: &mut ArtifactWriter) -> Result<()> {
    let grid: Vec<f64> = (1..=100).map(|k| TWO_PI * 25.0 * k as f64).collect();
    let points = efficiency_curve(params, &grid)?;
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            vec![
                p.gamma_e / TWO_PI,
                p.gamma_t / TWO_PI,
                p.eta_model,
                p.eta_closed,
            ]
        })
        .collect();
    w.write(
        "efficiency_sweep.csv",
        &csv(
            "gamma_e_hz,gamma_t_hz,eta_model_dimensionless,eta_closed_dimensionless",
            &rows,
        ),
    )
}

/// Conversion bandwidth versus total damping for balanced operating
/// points.
fn linewidth_scenario(params: &ConverterParams, w: &mut ArtifactWriter) -> Result<()> {
    let targets: Vec<f64> = (1..=30).map(|k| TWO_PI * 40.0 * k as f64).collect();
    let rows = crate::par::map(&targets, |&per_port| -> Result<Vec<f64>> {
        let mut p = params.clone();
        p.g_e = coupling_for_damping(&p, Port::Microwave, per_port)?;
        p.g_o = coupling_for_damping(&p, Port::Optical, per_port)?;
        let rates = damping_rates(&p);
        let report = conversion_report(&p)?;
        Ok(vec![
            rates.gamma_e / TWO_PI,
            rates.gamma_o / TWO_PI,
            rates.gamma_t / TWO_PI,
            report.bandwidth / TWO_PI,
            report.eta,
        ])
    });
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<Result<_>>()?;
    w.write(
        "linewidth_sweep.csv",
        &csv(
            "gamma_e_hz,gamma_o_hz,gamma_t_hz,bandwidth_hz,eta_dimensionless",
            &rows,
        ),
    )
}

#[derive(Serialize)]
struct PeakFitReport {
    center_hz: f64,
    fwhm_hz: f64,
    peak_photons: f64,
    background_photons: f64,
}

#[derive(Serialize)]
struct CorrelationFits {
    microwave: PeakFitReport,
    optical: PeakFitReport,
    cross: PeakFitReport,
    seeds_averaged: usize,
}

fn fit_report(freq: &[f64], psd: &[f64]) -> Result<PeakFitReport> {
    let fit = lorentzian_fit(freq, psd)?;
    Ok(PeakFitReport {
        center_hz: fit.center,
        fwhm_hz: fit.fwhm,
        peak_photons: fit.height,
        background_photons: fit.background,
    })
}

/// Measured electro-optic correlation spectra at the balanced 2pi x 200 Hz
/// operating point: analytic budget plus a seeded Monte-Carlo emulation of
/// the demodulated records, with Lorentzian fits of the three peaks.
fn correlations_scenario(
    params: &ConverterParams,
    w: &mut ArtifactWriter,
    seed: u64,
) -> Result<()> {
    let p = balanced_operating_point(params, TWO_PI * 200.0)?;
    let report = conversion_report(&p)?;
    let cfg = FeedforwardConfig {
        w: 1.6,
        n_e: CHAIN_N_E,
        n_o: CHAIN_N_O,
        gain_a: report.gain_a,
        eta: report.eta,
    };
    let excess = ExcessNoise {
        photons: CHAIN_EXCESS,
        fwhm: TWO_PI * 1.0e3,
        center: p.omega_m,
    };

    // Analytic measured spectra and correlation diagnostics.
    let nu: Vec<f64> = (0..=800).map(|k| -1000.0 + 2.5 * k as f64).collect();
    let omega_grid: Vec<f64> = nu.iter().map(|&f| p.omega_m + TWO_PI * f).collect();
    let budget = budget_from_model(&p, &cfg, Some(excess), &omega_grid)?;
    let model = Model::new(&p)?;
    let eigen = crate::par::map(&omega_grid, |&omega| {
        eo_block(&spectral_matrix_from(&model, omega)).eigen_min
    });
    let rows: Vec<Vec<f64>> = (0..nu.len())
        .map(|k| {
            vec![
                nu[k],
                budget.x_ee[k],
                budget.x_oo[k],
                budget.x_eo[k],
                budget.y_eo[k],
                eigen[k],
            ]
        })
        .collect();
    w.write(
        "correlations.csv",
        &csv(
            "nu_hz,x_ee_photons,x_oo_photons,x_eo_photons,y_eo_photons,eigen_min_photons",
            &rows,
        ),
    )?;

    // Monte-Carlo emulation of the demodulated records.
    let synth_cfg = SynthConfig {
        duration: 16.0,
        sample_rate: 2048.0,
        chain: ChainSpec {
            n_e: CHAIN_N_E,
            n_o: CHAIN_N_O,
            excess_photons: CHAIN_EXCESS,
            excess_fwhm: excess.fwhm,
        },
        tone: None,
    };
    let synth = Synthesizer::new(&p, &synth_cfg)?;
    let n_seeds = 6;
    let nfft = 2048;
    let mut acc: Option<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> = None;
    for k in 0..n_seeds {
        let (micro, opt) = synth.realize(seed.wrapping_add(k));
        let spec = cross_spectra(&micro, &opt, nfft, Window::Hann)?;
        match &mut acc {
            None => acc = Some((spec.freq_hz, spec.x_ee, spec.x_oo, spec.x_eo)),
            Some((_, ee, oo, eo)) => {
                for i in 0..ee.len() {
                    ee[i] += spec.x_ee[i];
                    oo[i] += spec.x_oo[i];
                    eo[i] += spec.x_eo[i];
                }
            }
        }
    }
    let (freq, mut ee, mut oo, mut eo) = acc.expect("at least one seed");
    let scale = 1.0 / n_seeds as f64;
    for v in ee.iter_mut().chain(oo.iter_mut()).chain(eo.iter_mut()) {
        *v *= scale;
    }
    let mc_rows: Vec<Vec<f64>> = (0..freq.len())
        .map(|k| vec![freq[k], ee[k], oo[k], eo[k]])
        .collect();
    w.write(
        "mc_spectra.csv",
        &csv("nu_hz,x_ee_photons,x_oo_photons,x_eo_photons", &mc_rows),
    )?;

    let fits = CorrelationFits {
        microwave: fit_report(&freq, &ee)?,
        optical: fit_report(&freq, &oo)?,
        cross: fit_report(&freq, &eo)?,
        seeds_averaged: n_seeds as usize,
    };
    w.write(
        "fits.json",
        &serde_json::to_string_pretty(&fits).expect("static schema"),
    )
}

/// Fed-forward noise versus feedforward weight at the correlation
/// operating point, plus the optimum and the input-referred floor.
fn ff_weight_scenario(params: &ConverterParams, w: &mut ArtifactWriter) -> Result<()> {
    let p = balanced_operating_point(params, TWO_PI * 200.0)?;
    let report = conversion_report(&p)?;
    let base = FeedforwardConfig {
        w: 1.6,
        n_e: CHAIN_N_E,
        n_o: CHAIN_N_O,
        gain_a: report.gain_a,
        eta: report.eta,
    };
    let excess = ExcessNoise {
        photons: CHAIN_EXCESS,
        fwhm: TWO_PI * 1.0e3,
        center: p.omega_m,
    };
    let omega_grid: Vec<f64> = (0..=400)
        .map(|k| p.omega_m + TWO_PI * (-1000.0 + 5.0 * k as f64))
        .collect();
    let budget = budget_from_model(&p, &base, Some(excess), &omega_grid)?;

    let weights: Vec<f64> = (0..=60).map(|k| 0.05 * k as f64).collect();
    let mut rows = Vec::with_capacity(weights.len());
    for &weight in &weights {
        let cfg = FeedforwardConfig { w: weight, ..base };
        let (x, y) = ff_spectrum(&budget, &cfg, p.omega_m)?;
        let n_add = n_add_input_referred(x + y, ideal_chain_floor(weight), &cfg)?;
        rows.push(vec![weight, x, y, x + y, n_add]);
    }
    w.write(
        "weight_sweep.csv",
        &csv(
            "w_dimensionless,x_check_photons,y_check_photons,total_photons,n_add_photons",
            &rows,
        ),
    )?;

    // Fed-forward spectrum versus frequency at the optimal weight.
    let w_opt = optimal_weight(&budget, &base, p.omega_m)?;
    let cfg_opt = FeedforwardConfig { w: w_opt, ..base };
    let mut spec_rows = Vec::with_capacity(omega_grid.len());
    for &omega in &omega_grid {
        let (x, y) = ff_spectrum(&budget, &cfg_opt, omega)?;
        spec_rows.push(vec![(omega - p.omega_m) / TWO_PI, x, y]);
    }
    w.write(
        "ff_spectrum.csv",
        &csv("nu_hz,x_check_photons,y_check_photons", &spec_rows),
    )?;

    #[derive(Serialize)]
    struct Summary {
        w_opt: f64,
        n_add_at_w_1_6: f64,
        gain_a: f64,
        eta: f64,
    }
    let (x16, y16) = ff_spectrum(&budget, &base, p.omega_m)?;
    let summary = Summary {
        w_opt,
        n_add_at_w_1_6: n_add_input_referred(x16 + y16, ideal_chain_floor(base.w), &base)?,
        gain_a: report.gain_a,
        eta: report.eta,
    };
    w.write(
        "summary.json",
        &serde_json::to_string_pretty(&summary).expect("static schema"),
    )
}

/// Added noise versus converter bandwidth: stronger pumps damp (cool) the
/// membrane, trading thermal occupancy against efficiency mismatch.
fn cooling_scenario(params: &ConverterParams, w: &mut ArtifactWriter) -> Result<()> {
    let targets: Vec<f64> = (2..=30).map(|k| TWO_PI * 100.0 * k as f64).collect();
    let rows = crate::par::map(&targets, |&gamma_t| -> Result<Vec<f64>> {
        let p = balanced_operating_point(params, gamma_t)?;
        let report = conversion_report(&p)?;
        let cfg = FeedforwardConfig {
            w: 1.0,
            n_e: CHAIN_N_E,
            n_o: CHAIN_N_O,
            gain_a: report.gain_a,
            eta: report.eta,
        };
        let excess = ExcessNoise {
            photons: CHAIN_EXCESS,
            fwhm: TWO_PI * 1.0e3,
            center: p.omega_m,
        };
        let rates = damping_rates(&p);
        let half_widths = 5.0 * rates.gamma_t;
        let omega_grid: Vec<f64> = (0..=200)
            .map(|k| p.omega_m - half_widths + half_widths * k as f64 / 100.0)
            .collect();
        let budget = budget_from_model(&p, &cfg, Some(excess), &omega_grid)?;
        let w_opt = optimal_weight(&budget, &cfg, p.omega_m)?;
        let cfg_opt = FeedforwardConfig { w: w_opt, ..cfg };
        let (x, y) = ff_spectrum(&budget, &cfg_opt, p.omega_m)?;
        let n_add = n_add_input_referred(x + y, ideal_chain_floor(w_opt), &cfg_opt)?;
        // Residual thermal occupancy of the damped membrane.
        let n_m = p.n_th_m * p.gamma_m / rates.gamma_t;
        Ok(vec![
            rates.gamma_t / TWO_PI,
            n_m,
            report.eta,
            w_opt,
            x + y,
            n_add,
        ])
    });
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<Result<_>>()?;
    w.write(
        "cooling_sweep.csv",
        &csv(
            "gamma_t_hz,n_m_photons,eta_dimensionless,w_opt_dimensionless,total_check_photons,n_add_photons",
            &rows,
        ),
    )
}

/// Optical linewidth and coupling versus membrane position for the
/// mirror/membrane stack.
fn etalon_scenario(w: &mut ArtifactWriter) -> Result<()> {
    let stack = cavity::default_stack();
    let x_grid: Vec<f64> = (0..=400)
        .map(|k| stack.wavelength * k as f64 / 400.0)
        .collect();
    let points = cavity::etalon_scan(&stack, &x_grid)?;
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|(pt, g_norm)| {
            vec![
                pt.x * 1e9,
                pt.kappa_o / TWO_PI,
                pt.kappa_ex_o / TWO_PI,
                pt.kappa_b_o / TWO_PI,
                *g_norm,
            ]
        })
        .collect();
    w.write(
        "etalon_scan.csv",
        &csv(
            "x_nm,kappa_o_hz,kappa_ex_o_hz,kappa_b_o_hz,g_o_norm_dimensionless",
            &rows,
        ),
    )
}

#[derive(Serialize)]
struct ShiftCodePoint {
    b_over_sigma: f64,
    decoder: String,
    f_ent_estimate: f64,
    f_ent_bound: f64,
    failure_rate: f64,
}

/// Monte-Carlo shift-code fidelity for both decoders across codeword
/// separations.
fn shiftcode_scenario(w: &mut ArtifactWriter, seed: u64) -> Result<()> {
    let ratios = [0.5, 1.0, 2.0, 3.0, 5.0, 8.0];
    let mut points = Vec::new();
    for &ratio in &ratios {
        for (label, decoder) in [
            ("ideal", Decoder::IdealFb),
            ("cubic", Decoder::cubic_default()),
        ] {
            let params = ShiftCodeParams {
                b: ratio,
                sigma_x: 1.0,
                decoder,
                n_samples: 1 << 20,
            };
            let result = simulate_fidelity(&params, seed)?;
            points.push(ShiftCodePoint {
                b_over_sigma: ratio,
                decoder: label.to_string(),
                f_ent_estimate: result.f_ent_estimate,
                f_ent_bound: result.f_ent_bound,
                failure_rate: result.failure_rate,
            });
        }
    }
    let mut out = String::from(
        "b_over_sigma_dimensionless,decoder,f_ent_estimate_dimensionless,f_ent_bound_dimensionless,failure_rate_dimensionless\n",
    );
    for p in &points {
        writeln!(
            out,
            "{:.10e},{},{:.10e},{:.10e},{:.10e}",
            p.b_over_sigma, p.decoder, p.f_ent_estimate, p.f_ent_bound, p.failure_rate
        )
        .expect("infallible");
    }
    w.write("shiftcode.csv", &out)?;
    w.write(
        "shiftcode.json",
        &serde_json::to_string_pretty(&points).expect("static schema"),
    )
}

/// Added noise versus efficiency per ancilla, and threshold efficiency
/// versus thermal-noise asymmetry.
fn qff_scenario(w: &mut ArtifactWriter) -> Result<()> {
    let ancillas = [
        AncillaSpec::Vacuum,
        AncillaSpec::Squeezed { r: 1.0 },
        AncillaSpec::Squeezed { r: 20.0 },
    ];
    let mut rows = Vec::new();
    for k in 0..=100 {
        let eta = k as f64 / 100.0;
        let mut row = vec![eta];
        for ancilla in &ancillas {
            row.push(qfeedforward::added_noise(eta, ancilla)?);
        }
        rows.push(row);
    }
    w.write(
        "added_noise.csv",
        &csv(
            "eta_dimensionless,n_add_vacuum_photons,n_add_r1_photons,n_add_r20_photons",
            &rows,
        ),
    )?;

    let ancilla = AncillaSpec::Squeezed { r: 20.0 };
    let mut th_rows = Vec::new();
    for k in 0..=80 {
        // Log-spaced asymmetry from 0.01 to 100.
        let asym = 10f64.powf(-2.0 + 4.0 * k as f64 / 80.0);
        th_rows.push(vec![
            asym,
            qfeedforward::threshold_map(asym, Direction::EToO, &ancilla)?,
            qfeedforward::threshold_map(asym, Direction::OToE, &ancilla)?,
            qfeedforward::bidirectional_threshold(asym, &ancilla)?,
        ]);
    }
    w.write(
        "threshold_map.csv",
        &csv(
            "asymmetry_dimensionless,eta_th_e_to_o,eta_th_o_to_e,eta_th_bidirectional",
            &th_rows,
        ),
    )
}

/// Convenience loader shared by the CLI: resolves the config and runs.
pub fn load_scenario_params(s: &Scenario) -> Result<ConverterParams> {
    load_config(&s.config, &s.overrides)
}
