//! Least-squares fits used by the calibration pipeline: Lorentzian peak
//! extraction, the single-parameter thermal-sweep calibration, and the
//! two-parameter amplifier-noise fit.
//!
//! The engine is a damped (Levenberg-style) Gauss-Newton iteration with
//! analytic Jacobians, converging on relative cost change below 1e-10.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Planck constant over Boltzmann constant, K/Hz.
const H_OVER_KB: f64 = 6.626_070_15e-34 / 1.380_649e-23;

const COST_TOL: f64 = 1e-10;
const MAX_ITER: usize = 300;

/// Minimizes `|r(p)|^2`. `jac[(i, j)] = d r_i / d p_j`.
fn levmar<R, J>(mut p: DVector<f64>, residual: R, jacobian: J) -> Result<(DVector<f64>, f64)>
where
    R: Fn(&DVector<f64>) -> DVector<f64>,
    J: Fn(&DVector<f64>) -> DMatrix<f64>,
{
    let mut lambda = 1e-3;
    let mut cost = residual(&p).norm_squared();
    for _ in 0..MAX_ITER {
        let r = residual(&p);
        let j = jacobian(&p);
        let jtj = j.transpose() * &j;
        let g = j.transpose() * r;
        let mut improved = false;
        for _ in 0..30 {
            let mut damped = jtj.clone();
            for k in 0..damped.nrows() {
                damped[(k, k)] += lambda * (1.0 + jtj[(k, k)].abs());
            }
            let Some(step) = damped.lu().solve(&g) else {
                lambda *= 10.0;
                continue;
            };
            let candidate = &p - &step;
            let new_cost = residual(&candidate).norm_squared();
            if new_cost < cost {
                let rel = (cost - new_cost) / cost.max(f64::MIN_POSITIVE);
                p = candidate;
                cost = new_cost;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if rel < COST_TOL {
                    return Ok((p, cost));
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // Damping saturated: accept the current point as converged.
            return Ok((p, cost));
        }
    }
    Ok((p, cost))
}

/// Lorentzian-plus-constant fit result.
#[derive(Debug, Clone)]
pub struct LorentzianFit {
    /// Peak center, same units as the frequency axis.
    pub center: f64,
    /// Full width at half maximum.
    pub fwhm: f64,
    /// Peak height above the background.
    pub height: f64,
    pub background: f64,
    pub residual_rms: f64,
    /// Parameter covariance, order (center, fwhm, height, background).
    pub covariance: [[f64; 4]; 4],
}

fn lorentzian_model(f: f64, c: f64, w: f64, h: f64, bg: f64) -> f64 {
    let a = 0.25 * w * w;
    let d = f - c;
    bg + h * a / (a + d * d)
}

/// Fits `psd(freq)` to a Lorentzian plus constant background. Fails when
/// no peak stands out of the residual noise (height SNR < 3).
pub fn lorentzian_fit(freq: &[f64], psd: &[f64]) -> Result<LorentzianFit> {
    if freq.len() != psd.len() || freq.len() < 8 {
        return Err(Error::FitFailed(format!(
            "need >= 8 matched samples, got {} / {}",
            freq.len(),
            psd.len()
        )));
    }
    let n = freq.len();
    // Initial guesses from the data.
    let mut sorted = psd.to_vec();
    sorted.sort_by(f64::total_cmp);
    let bg0 = sorted[n / 4];
    let (peak_k, &peak) = psd
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    let h0 = (peak - bg0).max(sorted[n - 1] * 1e-3);
    let half = bg0 + 0.5 * h0;
    let above = psd.iter().filter(|&&v| v > half).count().max(2);
    let df = ((freq[n - 1] - freq[0]) / (n - 1) as f64).abs();
    let w0 = above as f64 * df;
    let p0 = DVector::from_vec(vec![freq[peak_k], w0, h0, bg0]);

    let residual = |p: &DVector<f64>| {
        DVector::from_iterator(
            n,
            freq.iter()
                .zip(psd)
                .map(|(&f, &y)| lorentzian_model(f, p[0], p[1], p[2], p[3]) - y),
        )
    };
    let jacobian = |p: &DVector<f64>| {
        let (c, w, h) = (p[0], p[1], p[2]);
        let a = 0.25 * w * w;
        DMatrix::from_fn(n, 4, |i, j| {
            let d = freq[i] - c;
            let denom = (a + d * d).powi(2);
            match j {
                0 => h * 2.0 * a * d / denom,
                1 => h * (0.5 * w) * d * d / denom,
                2 => a / (a + d * d),
                _ => 1.0,
            }
        })
    };

    let (p, cost) = levmar(p0, residual, jacobian)?;
    let residual_rms = (cost / n as f64).sqrt();
    let height = p[2];
    if height < 3.0 * residual_rms {
        return Err(Error::FitFailed(format!(
            "no significant peak: height {height:.3e} vs residual {residual_rms:.3e}"
        )));
    }
    // A "peak" narrower than a few grid bins is noise the optimizer latched
    // onto between samples, not a resolved line.
    if p[1].abs() < 3.0 * df {
        return Err(Error::FitFailed(format!(
            "peak not resolved: fwhm {:.3e} vs grid spacing {df:.3e}",
            p[1].abs()
        )));
    }

    let j = jacobian(&p);
    let sigma2 = cost / (n.saturating_sub(4).max(1)) as f64;
    let cov_m = (j.transpose() * &j)
        .try_inverse()
        .map(|m| m * sigma2)
        .unwrap_or_else(|| DMatrix::zeros(4, 4));
    let mut covariance = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            covariance[i][k] = cov_m[(i, k)];
        }
    }

    Ok(LorentzianFit {
        center: p[0],
        fwhm: p[1].abs(),
        height,
        background: p[3],
        residual_rms,
        covariance,
    })
}

/// Thermal-sweep calibration result.
#[derive(Debug, Clone)]
pub struct CalibrationFit {
    /// Photons per raw spectral unit.
    pub calib_factor: f64,
    /// Single-quadrature background, photons. With raw spectra normalized
    /// to the pump-off noise level this equals the calibration factor.
    pub n_background: f64,
    /// Indices of points excluded as unequilibrated (residual > 3 sigma).
    pub excluded: Vec<usize>,
    pub residual_rms: f64,
}

/// Single-parameter fit of measured raw peak heights against a model
/// prediction in photons: `raw_i = a * model(T_i)`. Points whose residual
/// exceeds three standard deviations are excluded iteratively (the
/// lowest-temperature points fall out of equilibrium first). Returns
/// photons-per-raw-unit `1/a`.
pub fn thermal_sweep_fit<M>(peaks: &[(f64, f64)], model: M) -> Result<CalibrationFit>
where
    M: Fn(f64) -> f64,
{
    if peaks.len() < 3 {
        return Err(Error::FitFailed(format!(
            "need >= 3 temperature points, got {}",
            peaks.len()
        )));
    }
    let predictions: Vec<f64> = peaks.iter().map(|&(t, _)| model(t)).collect();
    let mut included: Vec<usize> = (0..peaks.len()).collect();
    loop {
        if included.len() < 3 {
            return Err(Error::FitFailed(
                "fewer than 3 equilibrated points remain".into(),
            ));
        }
        // Least squares through the origin.
        let (mut num, mut den) = (0.0, 0.0);
        for &i in &included {
            num += predictions[i] * peaks[i].1;
            den += predictions[i] * predictions[i];
        }
        if den <= 0.0 {
            return Err(Error::FitFailed("degenerate model predictions".into()));
        }
        let a = num / den;
        let residuals: Vec<f64> = included
            .iter()
            .map(|&i| peaks[i].1 - a * predictions[i])
            .collect();
        let rms =
            (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();
        let worst = included
            .iter()
            .zip(&residuals)
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .map(|(&i, &r)| (i, r));
        if let Some((i, r)) = worst {
            // Judge the worst point against the spread of the others, so a
            // single large outlier cannot mask itself, with an absolute
            // floor to avoid chasing rounding noise.
            let rest: Vec<f64> = included
                .iter()
                .zip(&residuals)
                .filter(|(&k, _)| k != i)
                .map(|(_, &r)| r)
                .collect();
            let rms_rest =
                (rest.iter().map(|r| r * r).sum::<f64>() / rest.len().max(1) as f64).sqrt();
            let scale: f64 = included.iter().map(|&k| peaks[k].1.abs()).sum::<f64>()
                / included.len() as f64;
            if r.abs() > 3.0 * rms_rest.max(1e-9 * scale) && included.len() > 3 {
                included.retain(|&k| k != i);
                continue;
            }
        }
        let excluded: Vec<usize> = (0..peaks.len()).filter(|i| !included.contains(i)).collect();
        if a <= 0.0 {
            return Err(Error::FitFailed("non-positive calibration slope".into()));
        }
        return Ok(CalibrationFit {
            calib_factor: 1.0 / a,
            n_background: 1.0 / a,
            excluded,
            residual_rms: rms,
        });
    }
}

/// Amplifier calibration result.
#[derive(Debug, Clone, Copy)]
pub struct HemtFit {
    /// Raw-units-per-photon gain.
    pub gain: f64,
    /// Amplifier-added noise, photons.
    pub n_hemt: f64,
    pub residual_rms: f64,
}

/// Fits output noise versus stage temperature to
/// `S_out = G (1/2 coth(h f / 2 k_B T) + N)`.
pub fn hemt_fit(noise_vs_t: &[(f64, f64)], f_hz: f64) -> Result<HemtFit> {
    if noise_vs_t.len() < 3 {
        return Err(Error::FitFailed(format!(
            "need >= 3 temperature points, got {}",
            noise_vs_t.len()
        )));
    }
    if !(f_hz > 0.0) {
        return Err(Error::Domain("frequency must be positive".into()));
    }
    let n = noise_vs_t.len();
    let occ = |t: f64| {
        let x = H_OVER_KB * f_hz / (2.0 * t);
        0.5 / x.tanh()
    };
    // Initial guesses: high-T slope gives G k_B/(h f); the coldest point
    // then gives N.
    let mut pts = noise_vs_t.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (t_lo, s_lo) = pts[0];
    let (t1, s1) = pts[n - 2];
    let (t2, s2) = pts[n - 1];
    let slope = (s2 - s1) / (t2 - t1).max(f64::MIN_POSITIVE);
    let g0 = (slope * H_OVER_KB * f_hz).max(s2 / (occ(t2) + 1.0));
    let n0 = (s_lo / g0 - occ(t_lo)).max(0.1);
    let p0 = DVector::from_vec(vec![g0, n0]);

    let residual = |p: &DVector<f64>| {
        DVector::from_iterator(
            n,
            noise_vs_t
                .iter()
                .map(|&(t, s)| p[0] * (occ(t) + p[1]) - s),
        )
    };
    let jacobian = |p: &DVector<f64>| {
        DMatrix::from_fn(n, 2, |i, j| {
            let t = noise_vs_t[i].0;
            match j {
                0 => occ(t) + p[1],
                _ => p[0],
            }
        })
    };
    let (p, cost) = levmar(p0, residual, jacobian)?;
    let rms = (cost / n as f64).sqrt();
    let scale: f64 =
        noise_vs_t.iter().map(|&(_, s)| s.abs()).sum::<f64>() / n as f64;
    if rms > 0.05 * scale {
        return Err(Error::FitFailed(format!(
            "amplifier fit did not converge: residual rms {rms:.3e} vs scale {scale:.3e}"
        )));
    }
    Ok(HemtFit {
        gain: p[0],
        n_hemt: p[1],
        residual_rms: rms,
    })
}
