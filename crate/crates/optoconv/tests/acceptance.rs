//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them);
//! the test fails if any criterion fails.

use optoconv::cavity::{default_stack, etalon_point, etalon_scan};
use optoconv::correlations::{eo_block, spectral_matrix_from};
use optoconv::dsp::fit::lorentzian_fit;
use optoconv::dsp::spectra::{cross_spectra, narrowband_variance, welch_auto, welch_cross, Window};
use optoconv::dsp::synth::{expected_spectra, ChainSpec, SynthConfig, Synthesizer};
use optoconv::feedforward::{
    balanced_operating_point, ff_spectrum, ideal_chain_floor, n_add_input_referred,
    optimal_weight, FeedforwardConfig, NoiseBudget,
};
use optoconv::params::{
    bose_occupancy, coupling_for_damping, damping_rates, ConverterParams, Port, TWO_PI,
};
use optoconv::qfeedforward::{added_noise, AncillaSpec, MAX_SQUEEZING};
use optoconv::scattering::{
    conversion_report, efficiency_curve, eta_matched, input, out, Model,
};
use optoconv::scenario::table_s1_params;
use optoconv::shiftcode::{simulate_fidelity, Decoder, ShiftCodeParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = (&'static str, fn() -> Result<String, String>);

fn fig3_operating_point() -> ConverterParams {
    let mut p = balanced_operating_point(&table_s1_params(), TWO_PI * 200.0).unwrap();
    p.n_th_m = bose_occupancy(p.omega_m, 0.087);
    p
}

fn fig3_chain() -> ChainSpec {
    ChainSpec {
        n_e: 29.6,
        n_o: 2.7,
        excess_photons: 2.2,
        excess_fwhm: table_s1_params().kappa_e(),
    }
}

/// 1. The full-model efficiency sweep follows the closed-form damping
/// dependence with a single fitted matched efficiency.
fn efficiency_closure() -> Result<String, String> {
    let p = table_s1_params();
    let grid: Vec<f64> = (0..40)
        .map(|k| TWO_PI * 25.0 * (2500.0_f64 / 25.0).powf(k as f64 / 39.0))
        .collect();
    let curve = efficiency_curve(&p, &grid).map_err(|e| e.to_string())?;
    // Closed form: eta = eta_M * 4 Gamma_e Gamma_o / Gamma_T^2. Fit eta_M
    // by least squares against the known shape.
    let eta_m0 = eta_matched(&p);
    let (mut num, mut den) = (0.0, 0.0);
    for pt in &curve {
        let shape = pt.eta_closed / eta_m0;
        num += pt.eta_model * shape;
        den += shape * shape;
    }
    let eta_m_fit = num / den;
    let mut sq = 0.0;
    for pt in &curve {
        let shape = pt.eta_closed / eta_m0;
        sq += (pt.eta_model - eta_m_fit * shape).powi(2);
    }
    let rms = (sq / curve.len() as f64).sqrt() / eta_m_fit;
    if rms > 0.02 {
        return Err(format!("sweep RMS vs fitted closed form = {:.3}%", 100.0 * rms));
    }
    // Matched point: model efficiency against the fitted closed form
    // evaluated at Gamma_e = Gamma_o (the closed form itself sits a
    // factor (1 - gamma_m/Gamma_T)^2-like below eta_M there).
    let report = conversion_report(&p).map_err(|e| e.to_string())?;
    let rates = damping_rates(&p);
    let matched_pred =
        eta_m_fit * 4.0 * rates.gamma_e * rates.gamma_o / rates.gamma_t.powi(2);
    let dev = (report.eta - matched_pred).abs() / matched_pred;
    if dev > 0.01 {
        return Err(format!(
            "matched point eta = {:.4} vs predicted {:.4} ({:.2}% off)",
            report.eta,
            matched_pred,
            100.0 * dev
        ));
    }
    Ok(format!(
        "eta_M fit = {:.4}, sweep RMS = {:.2}%, matched-point deviation = {:.2}%",
        eta_m_fit,
        100.0 * rms,
        100.0 * dev
    ))
}

/// 2. Matched-efficiency decomposition from the published rates.
fn eta_m_decomposition() -> Result<String, String> {
    let v = eta_matched(&table_s1_params());
    if !(0.399..=0.45).contains(&v) || (v - 0.43).abs() > 0.02 {
        return Err(format!("eta_M = {v:.4}"));
    }
    Ok(format!("eta_M = {v:.4}"))
}

/// 3. Optomechanically induced absorption: the intrinsic optical-port
/// reflection peak above unity at weak microwave damping is suppressed
/// below unity at matched damping. (The homodyne mode-match factor is a
/// detection property and is excluded here.)
fn induced_absorption() -> Result<String, String> {
    let mut p = table_s1_params();
    p.g_o = coupling_for_damping(&p, Port::Optical, TWO_PI * 725.0).map_err(|e| e.to_string())?;
    let peak = |p: &ConverterParams| -> Result<f64, String> {
        let m = Model::new(p).map_err(|e| e.to_string())?;
        Ok((0..2001)
            .map(|k| {
                let omega = p.omega_m + TWO_PI * (k as f64 - 1000.0);
                m.xi(omega).xi[(out::A_FRONT, input::A_FRONT)].norm_sqr()
            })
            .fold(f64::NEG_INFINITY, f64::max))
    };
    p.g_e = coupling_for_damping(&p, Port::Microwave, TWO_PI * 10.0).map_err(|e| e.to_string())?;
    let weak = peak(&p)?;
    p.g_e = coupling_for_damping(&p, Port::Microwave, TWO_PI * 725.0).map_err(|e| e.to_string())?;
    let m = Model::new(&p).map_err(|e| e.to_string())?;
    let matched = m.xi(p.omega_m).xi[(out::A_FRONT, input::A_FRONT)].norm_sqr();
    if !(weak > 1.0 && matched < 1.0 && weak > matched) {
        return Err(format!("weak peak = {weak:.4}, matched = {matched:.4}"));
    }
    Ok(format!("weak peak = {weak:.4} > 1 > matched = {matched:.4}"))
}

/// 4. Single-source thermal correlations are classically maximal for
/// randomized red-detuned parameter sets, and the full spectra never dip
/// below the vacuum floor.
fn maximal_classical_correlations() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20240817);
    let mut span = |lo: f64, hi: f64| lo + (hi - lo) * rng.random::<f64>();
    for trial in 0..100 {
        let omega_m = TWO_PI * span(1.0e6, 2.0e6);
        let mut p = ConverterParams {
            omega_m,
            gamma_m: TWO_PI * span(5.0, 50.0),
            kappa_ex_e: TWO_PI * span(0.5e6, 3.0e6),
            kappa_int_e: TWO_PI * span(0.0, 0.5e6),
            kappa_ex_o: TWO_PI * span(0.5e6, 3.0e6),
            kappa_b_o: TWO_PI * span(0.0, 1.0e6),
            kappa_int_o: TWO_PI * span(0.0, 1.0e6),
            delta_e: -span(0.9, 1.1) * omega_m,
            delta_o: -span(0.9, 1.1) * omega_m,
            g_e: 0.0,
            g_o: 0.0,
            epsilon: span(0.5, 1.0),
            epsilon_lo: span(0.5, 1.0),
            n_th_m: span(1.0, 2000.0),
            n_th_e: 0.0,
            n_th_o: 0.0,
        };
        p.g_e = coupling_for_damping(&p, Port::Microwave, TWO_PI * span(10.0, 1000.0))
            .map_err(|e| e.to_string())?;
        p.g_o = coupling_for_damping(&p, Port::Optical, TWO_PI * span(10.0, 1000.0))
            .map_err(|e| e.to_string())?;
        let model = Model::new(&p).map_err(|e| format!("trial {trial}: {e}"))?;
        let s = spectral_matrix_from(&model, p.omega_m);
        let c = s.thermal_part;
        let c_oo = c[(out::A_FRONT, out::A_FRONT)].re;
        let c_ee = c[(out::B_EX, out::B_EX)].re;
        let cross = c[(out::A_FRONT, out::B_EX)].norm();
        let bound = (c_oo * c_ee).sqrt();
        if (cross - bound).abs() > 1e-6 * bound.max(1e-12) {
            return Err(format!(
                "trial {trial}: cross = {cross:.6e}, bound = {bound:.6e}"
            ));
        }
        let eo = eo_block(&s);
        if eo.eigen_min < 0.5 - 1e-9 {
            return Err(format!("trial {trial}: eigen_min = {}", eo.eigen_min));
        }
    }
    Ok("100/100 random sets saturate Cauchy-Schwarz; eigen_min >= 1/2".into())
}

/// 5. Monte-Carlo reproduction of the measured noise spectra: fitted peak
/// heights and the perfect-correlation residual.
fn measured_spectra_reproduction() -> Result<String, String> {
    let p = fig3_operating_point();
    let chain = fig3_chain();
    let cfg = SynthConfig {
        duration: 16.0,
        sample_rate: 2048.0,
        chain,
        tone: None,
    };
    let synth = Synthesizer::new(&p, &cfg).map_err(|e| e.to_string())?;
    let nfft = 2048;
    let seeds = 8u64;
    // The magnitude of an averaged cross-periodogram has a noise floor of
    // sqrt(S_ee S_oo / n_avg), which would swamp the small true cross
    // level in the wings; averaging the complex cross over all seeds
    // before taking the magnitude keeps that floor well below the signal
    // over the fitted band.
    let mut avg: Option<optoconv::dsp::spectra::CrossSpectra> = None;
    let mut cx_sum = vec![num_complex::Complex64::default(); nfft];
    for seed in 0..seeds {
        let (micro, opt) = synth.realize(seed);
        let s = cross_spectra(&micro, &opt, nfft, Window::Hann).map_err(|e| e.to_string())?;
        let cx = welch_cross(&micro.q, &opt.q, cfg.sample_rate, nfft, Window::Hann)
            .map_err(|e| e.to_string())?;
        for (acc, v) in cx_sum.iter_mut().zip(&cx) {
            *acc += v;
        }
        avg = Some(match avg {
            None => s,
            Some(mut a) => {
                for k in 0..a.x_ee.len() {
                    a.x_ee[k] += s.x_ee[k];
                    a.x_oo[k] += s.x_oo[k];
                }
                a
            }
        });
    }
    let mut a = avg.unwrap();
    for v in a.x_ee.iter_mut().chain(a.x_oo.iter_mut()) {
        *v /= seeds as f64;
    }
    // welch_cross reports natural DFT bin order; rotate to the ascending
    // frequency axis used by cross_spectra.
    let split = nfft.div_ceil(2);
    a.x_eo = cx_sum[split..]
        .iter()
        .chain(&cx_sum[..split])
        .map(|v| v.norm() / seeds as f64)
        .collect();
    // Fit over the high-signal band; in the far wings the residual
    // cross-magnitude floor still dominates the tiny true cross level.
    let band: Vec<usize> = (0..nfft)
        .filter(|&k| a.freq_hz[k].abs() <= 400.0)
        .collect();
    let take = |v: &[f64]| -> Vec<f64> { band.iter().map(|&k| v[k]).collect() };
    let f_band = take(&a.freq_hz);
    let fit_ee = lorentzian_fit(&f_band, &take(&a.x_ee)).map_err(|e| e.to_string())?;
    let fit_oo = lorentzian_fit(&f_band, &take(&a.x_oo)).map_err(|e| e.to_string())?;
    let fit_eo = lorentzian_fit(&f_band, &take(&a.x_eo)).map_err(|e| e.to_string())?;
    let targets = [
        ("microwave", fit_ee.height, 69.2),
        ("optical", fit_oo.height, 33.1),
        ("cross", fit_eo.height, 47.7),
    ];
    for (name, got, want) in targets {
        if (got - want).abs() > 0.10 * want {
            return Err(format!("{name} fitted peak = {got:.2}, published {want}"));
        }
    }
    // Perfect-correlation residual: cross peak vs geometric mean of the
    // above-background auto peaks. The full-model spectra are not exact
    // Lorentzians, so the fit procedure itself carries a small
    // shape-mismatch offset; the honest oracle is the same fit applied to
    // the analytic spectra on the same grid. The Monte-Carlo residual
    // must agree with that analytic residual to 3 sigma of the propagated
    // fit errors, and the analytic residual must stay inside the
    // precision of the published peak values (~2%).
    let bound = (fit_ee.height * fit_oo.height).sqrt();
    let resid = fit_eo.height - bound;
    let mut ee_a = Vec::with_capacity(f_band.len());
    let mut oo_a = Vec::with_capacity(f_band.len());
    let mut eo_a = Vec::with_capacity(f_band.len());
    for &nu in &f_band {
        let (ee, oo, eo) = expected_spectra(&p, &chain, nu).map_err(|e| e.to_string())?;
        ee_a.push(ee);
        oo_a.push(oo);
        eo_a.push(eo);
    }
    let fit_ee_a = lorentzian_fit(&f_band, &ee_a).map_err(|e| e.to_string())?;
    let fit_oo_a = lorentzian_fit(&f_band, &oo_a).map_err(|e| e.to_string())?;
    let fit_eo_a = lorentzian_fit(&f_band, &eo_a).map_err(|e| e.to_string())?;
    let resid_analytic =
        fit_eo_a.height - (fit_ee_a.height * fit_oo_a.height).sqrt();
    let var = fit_eo.covariance[2][2]
        + 0.25 * fit_oo.height / fit_ee.height * fit_ee.covariance[2][2]
        + 0.25 * fit_ee.height / fit_oo.height * fit_oo.covariance[2][2];
    let sigma = var.sqrt().max(1e-3 * bound);
    if (resid - resid_analytic).abs() > 3.0 * sigma {
        return Err(format!(
            "correlation residual {resid:.3} vs analytic {resid_analytic:.3} \
             differs by more than 3 sigma ({:.3})",
            3.0 * sigma
        ));
    }
    if resid_analytic.abs() > 0.02 * bound {
        return Err(format!(
            "analytic sub-maximality {resid_analytic:.3} exceeds the published precision"
        ));
    }
    Ok(format!(
        "fitted peaks {:.1}/{:.1}/{:.1} photons (published 69.2/33.1/47.7); \
         correlation residual {resid:.2} consistent with the analytic {resid_analytic:.2} \
         (3 sigma = {:.2})",
        fit_ee.height, fit_oo.height, fit_eo.height, 3.0 * sigma
    ))
}

/// 6. Classical feedforward arithmetic on the published operating point.
fn feedforward_arithmetic() -> Result<String, String> {
    let budget = NoiseBudget {
        omega: vec![0.0],
        x_oo: vec![33.1 + 2.7],
        y_oo: vec![33.1 + 2.7],
        x_ee: vec![69.2 + 29.6 + 2.2],
        y_ee: vec![69.2 + 29.6 + 2.2],
        x_eo: vec![47.7],
        y_eo: vec![47.7],
    };
    let report = conversion_report(&fig3_operating_point()).map_err(|e| e.to_string())?;
    let cfg = FeedforwardConfig {
        w: 1.6,
        n_e: 29.6,
        n_o: 2.7,
        gain_a: report.gain_a,
        eta: report.eta,
    };
    let (x0, _) = ff_spectrum(&budget, &FeedforwardConfig { w: 0.0, ..cfg }, 0.0)
        .map_err(|e| e.to_string())?;
    let (x, y) = ff_spectrum(&budget, &cfg, 0.0).map_err(|e| e.to_string())?;
    let reduction = 1.0 - x / x0;
    if (reduction - 0.59).abs() > 0.05 {
        return Err(format!("reduction at w = 1.6 is {:.1}%", 100.0 * reduction));
    }
    let w_star = optimal_weight(&budget, &cfg, 0.0).map_err(|e| e.to_string())?;
    if (w_star - 1.57).abs() > 0.05 {
        return Err(format!("optimal weight = {w_star:.4}"));
    }
    let n_add = n_add_input_referred(x + y, ideal_chain_floor(cfg.w), &cfg)
        .map_err(|e| e.to_string())?;
    if (n_add - 38.0).abs() > 0.20 * 38.0 {
        return Err(format!(
            "N_add at w = 1.6 is {n_add:.1} photons (published 38, A = {:.3}, eta = {:.3})",
            report.gain_a, report.eta
        ));
    }
    Ok(format!(
        "reduction = {:.1}%, w* = {w_star:.3}, N_add = {n_add:.1} photons",
        100.0 * reduction
    ))
}

/// 7. Quantum feedforward threshold with a perfectly squeezed ancilla.
fn quantum_threshold() -> Result<String, String> {
    let anc = AncillaSpec::Squeezed { r: MAX_SQUEEZING };
    let at_half = added_noise(0.5, &anc).map_err(|e| e.to_string())?;
    if (at_half - 0.5).abs() > 1e-15 {
        return Err(format!("added noise at eta = 1/2 is {at_half:.17}"));
    }
    let at_047 = added_noise(0.47, &anc).map_err(|e| e.to_string())?;
    if (at_047 - 0.53).abs() > 1e-9 {
        return Err(format!("added noise at eta = 0.47 is {at_047:.12}"));
    }
    Ok(format!(
        "added noise = {at_half:.3} at eta = 0.5, {at_047:.3} at eta = 0.47"
    ))
}

/// 8. On-resonance microwave reflection from the published rates.
fn microwave_reflection() -> Result<String, String> {
    let p = table_s1_params();
    let r = (1.0 - p.kappa_ex_e / (0.5 * p.kappa_e())).powi(2);
    if (r - 0.706).abs() > 0.001 {
        return Err(format!("|S(0)|^2 = {r:.4}"));
    }
    if (r - 0.69).abs() > 0.02 {
        return Err(format!(
            "|S(0)|^2 = {r:.4} is outside the 0.69 +- 0.02 rounding band"
        ));
    }
    Ok(format!("|S(0)|^2 = {r:.4} (measured 0.69 within rounding band)"))
}

/// 9. Etalon linewidth scan: half-wavelength periodicity and the
/// published tuning span.
fn etalon_scan_properties() -> Result<String, String> {
    let stack = default_stack();
    let lambda = stack.wavelength;
    for frac in [0.05, 0.21, 0.37, 0.44] {
        let a = etalon_point(&stack, frac * lambda).map_err(|e| e.to_string())?;
        let b = etalon_point(&stack, frac * lambda + 0.5 * lambda).map_err(|e| e.to_string())?;
        if (a.kappa_o - b.kappa_o).abs() > 1e-3 * a.kappa_o {
            return Err(format!(
                "kappa_o not lambda/2 periodic at x = {frac} lambda: {} vs {}",
                a.kappa_o, b.kappa_o
            ));
        }
    }
    let grid: Vec<f64> = (0..128).map(|k| k as f64 * 0.5 * lambda / 128.0).collect();
    let scan = etalon_scan(&stack, &grid).map_err(|e| e.to_string())?;
    let min = scan.iter().map(|(p, _)| p.kappa_o).fold(f64::INFINITY, f64::min) / TWO_PI / 1e6;
    let max = scan.iter().map(|(p, _)| p.kappa_o).fold(0.0_f64, f64::max) / TWO_PI / 1e6;
    if !(min < 2.1 && max > 3.0) {
        return Err(format!("kappa_o/2pi span = [{min:.2}, {max:.2}] MHz"));
    }
    Ok(format!(
        "lambda/2 periodic; kappa_o/2pi spans [{min:.2}, {max:.2}] MHz (covers 2.1-3)"
    ))
}

/// 10. Shift-code Monte Carlo against the quadrature oracle.
fn shift_code_fidelity() -> Result<String, String> {
    let n = 1_000_000u64;
    let mut last = -1.0;
    for ratio in [0.5, 1.0, 2.0, 3.0, 5.0] {
        let p = ShiftCodeParams {
            b: ratio,
            sigma_x: 1.0,
            decoder: Decoder::IdealFb,
            n_samples: n,
        };
        let r = simulate_fidelity(&p, 2024).map_err(|e| e.to_string())?;
        let sigma = (r.f_ent_bound * (1.0 - r.f_ent_bound) / n as f64).sqrt();
        if (r.f_ent_estimate - r.f_ent_bound).abs() > 3.0 * sigma + 1e-9 {
            return Err(format!(
                "b/sigma = {ratio}: estimate {} vs bound {} (3 sigma = {})",
                r.f_ent_estimate,
                r.f_ent_bound,
                3.0 * sigma
            ));
        }
        if r.f_ent_estimate < last - 3.0 * sigma {
            return Err(format!("estimate not monotone at b/sigma = {ratio}"));
        }
        last = r.f_ent_estimate;
    }
    // Cubic decoder judged on residual correctability (tolerance = the
    // half-cell size b); under the fixed sigma/10 residual window it is
    // far from ideal at small separations by design.
    let b = 8.0;
    let ideal = simulate_fidelity(
        &ShiftCodeParams { b, sigma_x: 1.0, decoder: Decoder::IdealFb, n_samples: n },
        2025,
    )
    .map_err(|e| e.to_string())?;
    let cubic = simulate_fidelity(
        &ShiftCodeParams {
            b,
            sigma_x: 1.0,
            decoder: Decoder::Cubic { tolerance: b },
            n_samples: n,
        },
        2025,
    )
    .map_err(|e| e.to_string())?;
    let gap = (ideal.f_ent_estimate - cubic.f_ent_estimate).abs();
    if gap > 1e-3 {
        return Err(format!("cubic-ideal gap at b = 8 sigma is {gap:.2e}"));
    }
    Ok(format!(
        "ideal estimate within 3 sigma of the oracle for all separations; \
         cubic-ideal gap = {gap:.1e} at b = 8 sigma"
    ))
}

/// 11. DSP identities: Parseval, narrowband variance vs the analytic
/// spectrum, and byte-exact seeded reproducibility.
fn dsp_identities() -> Result<String, String> {
    let p = fig3_operating_point();
    let chain = fig3_chain();
    let cfg = SynthConfig {
        duration: 16.0,
        sample_rate: 2048.0,
        chain,
        tone: None,
    };
    let synth = Synthesizer::new(&p, &cfg).map_err(|e| e.to_string())?;

    // Parseval: rectangular-window Welch power integrates to the sample
    // variance when the segments tile the record exactly.
    let (micro, _) = synth.realize(11);
    let fs = 1.0 / micro.dt;
    let s = welch_auto(&micro.q, fs, 2048, Window::Rect);
    let df = fs / 2048.0;
    let integral: f64 = s.power.iter().sum::<f64>() * df;
    let var: f64 = micro.q.iter().map(|v| v * v).sum::<f64>() / micro.q.len() as f64;
    let parseval_dev = (integral - var).abs() / var;
    if parseval_dev > 0.01 {
        return Err(format!("Parseval deviation = {:.3}%", 100.0 * parseval_dev));
    }

    // Narrowband variance against the band-averaged analytic spectrum.
    let bandwidth = TWO_PI * 50.0;
    let mut meas = 0.0;
    let seeds = 6u64;
    for seed in 0..seeds {
        let (micro, _) = synth.realize(100 + seed);
        meas += narrowband_variance(&micro, bandwidth).map_err(|e| e.to_string())? / seeds as f64;
    }
    let mut analytic = 0.0;
    let pts = 201;
    for k in 0..pts {
        let nu = -50.0 + 100.0 * k as f64 / (pts - 1) as f64;
        let (ee, _, _) = expected_spectra(&p, &chain, nu).map_err(|e| e.to_string())?;
        analytic += ee / pts as f64;
    }
    let nb_dev = (meas - analytic).abs() / analytic;
    if nb_dev > 0.05 {
        return Err(format!(
            "narrowband variance {meas:.2} vs analytic {analytic:.2} ({:.1}% off)",
            100.0 * nb_dev
        ));
    }

    // Byte-exact reproducibility per seed.
    let (a_e, a_o) = synth.realize(42);
    let (b_e, b_o) = synth.realize(42);
    let same = a_e.q == b_e.q && a_e.p == b_e.p && a_o.q == b_o.q && a_o.p == b_o.p;
    if !same {
        return Err("same-seed realizations differ".into());
    }
    Ok(format!(
        "Parseval dev = {:.2e}; narrowband variance {meas:.1} vs analytic {analytic:.1} \
         ({:.1}% off); seeded reruns byte-exact",
        parseval_dev,
        100.0 * nb_dev
    ))
}

#[test]
fn acceptance_criteria() {
    let checks: [Check; 11] = [
        ("efficiency formula closure", efficiency_closure),
        ("eta_M decomposition", eta_m_decomposition),
        ("induced absorption", induced_absorption),
        ("maximal classical correlations", maximal_classical_correlations),
        ("measured-spectra reproduction", measured_spectra_reproduction),
        ("feedforward arithmetic", feedforward_arithmetic),
        ("quantum feedforward threshold", quantum_threshold),
        ("microwave reflection", microwave_reflection),
        ("etalon linewidth scan", etalon_scan_properties),
        ("shift-code fidelity", shift_code_fidelity),
        ("dsp identities", dsp_identities),
    ];
    let mut failures = 0;
    for (k, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:2}: PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:2}: FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
