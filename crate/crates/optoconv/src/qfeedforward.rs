//! Quantum feedforward with a squeezed ancilla: variance bookkeeping for
//! the single-quadrature transfer and the efficiency thresholds it
//! implies.
//!
//! For an impedance-matched, sideband-resolved converter the fed-forward
//! signal quadrature has variance
//!
//! ```text
//! <q_check^2> = eta <q_s,in^2> + eta <q_a,in^2> + 2 (1 - eta) <V^2>
//! ```
//!
//! with `<V^2> = 1/2` the vacuum variance. With a perfectly squeezed
//! ancilla, less than half a photon of noise is added only for
//! `eta > 1/2`. Asymmetric thermal noise on the two output ports relaxes
//! the threshold in the low-noise direction; the bidirectional threshold
//! stays at `eta = 1/2`.

use crate::error::{Error, Result};

/// Vacuum quadrature variance, photons.
const VACUUM: f64 = 0.5;
/// Squeezing cap standing in for "infinitely squeezed"; e^(-2r) at r = 20
/// is below the double-precision resolution of any sum against 1/2.
pub const MAX_SQUEEZING: f64 = 20.0;

/// Input ancilla state for the feedforward protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AncillaSpec {
    Vacuum,
    /// Single-mode squeezed vacuum with parameter `r` (capped at
    /// [`MAX_SQUEEZING`]): `var_q = e^(-2r)/2`, `var_p = e^(2r)/2`.
    Squeezed { r: f64 },
}

impl AncillaSpec {
    pub fn var_q(&self) -> f64 {
        match *self {
            AncillaSpec::Vacuum => VACUUM,
            AncillaSpec::Squeezed { r } => {
                VACUUM * (-2.0 * r.min(MAX_SQUEEZING)).exp()
            }
        }
    }

    pub fn var_p(&self) -> f64 {
        match *self {
            AncillaSpec::Vacuum => VACUUM,
            AncillaSpec::Squeezed { r } => {
                VACUUM * (2.0 * r.min(MAX_SQUEEZING)).exp()
            }
        }
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain(format!(
            "efficiency must lie in [0, 1], got {eta}"
        )));
    }
    Ok(())
}

/// Variance of the fed-forward quadrature at weight 1 for conversion
/// efficiency `eta`, input signal variance `signal_var` and the given
/// ancilla, photons.
pub fn ff_output_variance(eta: f64, signal_var: f64, ancilla: &AncillaSpec) -> Result<f64> {
    check_eta(eta)?;
    if signal_var < 0.0 {
        return Err(Error::Domain(format!(
            "signal variance must be >= 0, got {signal_var}"
        )));
    }
    Ok(eta * signal_var + eta * ancilla.var_q() + 2.0 * (1.0 - eta) * VACUUM)
}

/// Noise added to the transferred signal quadrature, photons: the output
/// variance minus the transmitted part of the signal itself.
pub fn added_noise(eta: f64, ancilla: &AncillaSpec) -> Result<f64> {
    Ok(ff_output_variance(eta, 0.0, ancilla)?)
}

/// Which converter direction carries the signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Microwave in, optical out.
    EToO,
    /// Optical in, microwave out.
    OToE,
}

/// Added noise for asymmetric thermal output noise, evaluated at the
/// thermal-cancelling weight.
///
/// The signal port carries thermal output noise `n_s` photons and the
/// ancilla port `n_a`, with maximal cross-correlation (one mechanical
/// source). The weight `w = sqrt(n_s/n_a)` removes the thermal noise
/// completely, and what remains is the fed-forward copy of the ancilla
/// port's quantum noise:
///
/// ```text
/// N = (1 - eta)/2 + rho [ eta var_q,a + (1 - eta)/2 ],  rho = n_s/n_a
/// ```
///
/// With symmetric noise (`rho = 1`) and perfect squeezing this is
/// `1 - eta`, reproducing the matched-converter bookkeeping.
pub fn added_noise_asymmetric(
    eta: f64,
    noise_ratio: f64,
    ancilla: &AncillaSpec,
) -> Result<f64> {
    check_eta(eta)?;
    if !(noise_ratio >= 0.0) || !noise_ratio.is_finite() {
        return Err(Error::Domain(format!(
            "signal/ancilla noise ratio must be >= 0 and finite, got {noise_ratio}"
        )));
    }
    let per_pass = eta * ancilla.var_q() + (1.0 - eta) * VACUUM;
    Ok((1.0 - eta) * VACUUM + noise_ratio * per_pass)
}

/// Efficiency at which the fed-forward added noise crosses 1/2 photon for
/// a given thermal-noise split, found by bisection.
///
/// `noise_asymmetry` is the ratio of thermal photons on the microwave
/// output to thermal photons on the optical output (the Gamma_e/Gamma_o
/// split of the mechanically mediated noise). Returns 1.0 when even a
/// perfect converter cannot reach half a photon (weakly squeezed
/// ancilla).
pub fn threshold_map(
    noise_asymmetry: f64,
    direction: Direction,
    ancilla: &AncillaSpec,
) -> Result<f64> {
    if !(noise_asymmetry > 0.0) || !noise_asymmetry.is_finite() {
        return Err(Error::Domain(format!(
            "noise asymmetry must be positive and finite, got {noise_asymmetry}"
        )));
    }
    // Signal rides on the output port of its direction; the asymmetry is
    // microwave-to-optical, so e->o conversion has signal-to-ancilla
    // noise ratio 1/asymmetry.
    let rho = match direction {
        Direction::EToO => 1.0 / noise_asymmetry,
        Direction::OToE => noise_asymmetry,
    };
    let excess = |eta: f64| added_noise_asymmetric(eta, rho, ancilla).unwrap() - VACUUM;
    // Added noise decreases monotonically in eta for var_q < 1/2.
    if excess(1.0) >= 0.0 {
        return Ok(1.0);
    }
    if excess(0.0) <= 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Threshold for bidirectional conversion: the worse of the two
/// directions. Never below 1/2.
pub fn bidirectional_threshold(noise_asymmetry: f64, ancilla: &AncillaSpec) -> Result<f64> {
    let a = threshold_map(noise_asymmetry, Direction::EToO, ancilla)?;
    let b = threshold_map(noise_asymmetry, Direction::OToE, ancilla)?;
    Ok(a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn perfect() -> AncillaSpec {
        AncillaSpec::Squeezed { r: MAX_SQUEEZING }
    }

    #[test]
    fn ancilla_variances() {
        assert_eq!(AncillaSpec::Vacuum.var_q(), 0.5);
        assert_eq!(AncillaSpec::Vacuum.var_p(), 0.5);
        let s = AncillaSpec::Squeezed { r: 1.0 };
        assert_relative_eq!(s.var_q() * s.var_p(), 0.25, max_relative = 1e-12);
        assert!(s.var_q() < 0.5 && s.var_p() > 0.5);
        // Cap: absurd r values clamp instead of underflowing to odd states.
        let deep = AncillaSpec::Squeezed { r: 100.0 };
        assert_eq!(deep.var_q(), AncillaSpec::Squeezed { r: MAX_SQUEEZING }.var_q());
    }

    #[test]
    fn perfect_transfer_is_noiseless() {
        // eta = 1, perfectly squeezed ancilla, vacuum signal: the output
        // is the vacuum signal itself, 1/2 photon.
        let v = ff_output_variance(1.0, 0.5, &perfect()).unwrap();
        assert_relative_eq!(v, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn threshold_exact_at_half() {
        let added = added_noise(0.5, &perfect()).unwrap();
        assert_eq!(added, 0.5);
    }

    #[test]
    fn best_measured_efficiency_point() {
        let added = added_noise(0.47, &perfect()).unwrap();
        assert_relative_eq!(added, 0.53, epsilon = 1e-12);
    }

    #[test]
    fn variance_affine_and_monotone() {
        let anc = AncillaSpec::Vacuum;
        for eta in [0.1, 0.35, 0.8] {
            let v0 = ff_output_variance(eta, 0.0, &anc).unwrap();
            let v1 = ff_output_variance(eta, 1.0, &anc).unwrap();
            let v2 = ff_output_variance(eta, 2.0, &anc).unwrap();
            assert_relative_eq!(v2 - v1, v1 - v0, max_relative = 1e-12);
        }
        // With a squeezed ancilla the added noise decreases with eta.
        let mut last = f64::INFINITY;
        for k in 0..=10 {
            let eta = k as f64 / 10.0;
            let v = added_noise(eta, &perfect()).unwrap();
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn vacuum_ancilla_matches_classical_ideal_chain() {
        // eta = 1, vacuum signal and ancilla: one photon two-quadrature
        // equivalent, i.e. the classical ideal-chain result at w = 1.
        let v = ff_output_variance(1.0, 0.5, &AncillaSpec::Vacuum).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn eta_out_of_range_rejected() {
        assert!(ff_output_variance(1.2, 0.5, &AncillaSpec::Vacuum).is_err());
        assert!(ff_output_variance(-0.1, 0.5, &AncillaSpec::Vacuum).is_err());
    }

    #[test]
    fn symmetric_threshold_is_half() {
        let t = threshold_map(1.0, Direction::EToO, &perfect()).unwrap();
        assert_relative_eq!(t, 0.5, epsilon = 1e-9);
        let t = threshold_map(1.0, Direction::OToE, &perfect()).unwrap();
        assert_relative_eq!(t, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn symmetric_added_noise_matches_matched_formula() {
        // rho = 1 with perfect squeezing reproduces added_noise.
        for eta in [0.1, 0.47, 0.5, 0.9] {
            let asym = added_noise_asymmetric(eta, 1.0, &perfect()).unwrap();
            let matched = added_noise(eta, &perfect()).unwrap();
            assert_relative_eq!(asym, matched, epsilon = 1e-12);
        }
    }

    #[test]
    fn asymmetric_noise_relaxes_one_direction() {
        // Nearly all thermal noise on the microwave output: converting
        // microwave -> optical (clean signal port) tolerates eta < 1/2.
        let asym = 100.0;
        let low = threshold_map(asym, Direction::EToO, &perfect()).unwrap();
        let high = threshold_map(asym, Direction::OToE, &perfect()).unwrap();
        assert!(low < 0.5, "relaxed threshold = {low}");
        assert!(high > 0.5, "tightened threshold = {high}");
    }

    #[test]
    fn bidirectional_minimum_is_half() {
        let anc = perfect();
        for asym in [0.1, 1.0, 10.0, 1000.0] {
            let t = bidirectional_threshold(asym, &anc).unwrap();
            assert!(t >= 0.5 - 1e-9, "asym {asym}: threshold {t}");
        }
        assert_relative_eq!(bidirectional_threshold(1.0, &anc).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn weak_squeezing_can_have_no_threshold() {
        // A vacuum ancilla always feeds at least half a photon forward:
        // the added noise never drops below 1/2 and the solver reports 1.
        let t = threshold_map(1.0, Direction::EToO, &AncillaSpec::Vacuum).unwrap();
        assert_eq!(t, 1.0);
    }

    #[test]
    fn threshold_closed_form() {
        // With a perfectly squeezed ancilla the added noise is
        // (1 - eta)(1 + rho)/2, giving eta_th = rho/(1 + rho); the numeric
        // solve must agree.
        let anc = perfect();
        for asym in [0.2, 0.5, 2.0, 5.0] {
            let t = threshold_map(asym, Direction::EToO, &anc).unwrap();
            let rho = 1.0 / asym;
            assert_relative_eq!(t, rho / (1.0 + rho), epsilon = 1e-9);
        }
    }
}
