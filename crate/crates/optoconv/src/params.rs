//! Physical parameters of the three-mode converter, derived damping rates
//! and thermal occupancies.
//!
//! Internally everything is an angular frequency in rad/s. Config files
//! quote ordinary frequencies in Hz (the convention all tabulated device
//! values use) and are converted once at the loading boundary.

use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

pub const TWO_PI: f64 = 2.0 * PI;
/// Reduced Planck constant over Boltzmann constant, K*s.
const HBAR_OVER_KB: f64 = 1.054_571_817e-34 / 1.380_649e-23;

/// Selects one of the two electromagnetic ports of the converter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    Microwave,
    Optical,
}

/// Full parameter set of the linearized microwave-mechanics-optics system.
///
/// Total linewidths are derived, not stored, so the decompositions
/// `kappa_e = kappa_ex_e + kappa_int_e` and
/// `kappa_o = kappa_ex_o + kappa_b_o + kappa_int_o` hold exactly by
/// construction. The couplings `g_e`, `g_o` are the pump-enhanced values
/// `G x_zp alpha`; see [`coupling_from_triple`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConverterParams {
    /// Mechanical resonance frequency, rad/s.
    pub omega_m: f64,
    /// Intrinsic mechanical damping, rad/s.
    pub gamma_m: f64,
    /// Microwave external coupling, rad/s.
    pub kappa_ex_e: f64,
    /// Microwave internal loss, rad/s.
    pub kappa_int_e: f64,
    /// Optical front (measurement) external coupling, rad/s.
    pub kappa_ex_o: f64,
    /// Optical back-mirror coupling, rad/s.
    pub kappa_b_o: f64,
    /// Optical internal loss, rad/s.
    pub kappa_int_o: f64,
    /// Microwave pump detuning, rad/s (negative for red).
    pub delta_e: f64,
    /// Optical pump detuning, rad/s (negative for red).
    pub delta_o: f64,
    /// Pump-enhanced electromechanical coupling, rad/s.
    pub g_e: f64,
    /// Pump-enhanced optomechanical coupling, rad/s.
    pub g_o: f64,
    /// Optical cavity mode matching, dimensionless in [0, 1].
    pub epsilon: f64,
    /// Local-oscillator mode matching, dimensionless in [0, 1].
    pub epsilon_lo: f64,
    /// Thermal occupancy of the mechanical bath.
    pub n_th_m: f64,
    /// Thermal occupancy of the microwave bath.
    pub n_th_e: f64,
    /// Thermal occupancy of the optical bath.
    pub n_th_o: f64,
}

impl ConverterParams {
    /// Total microwave linewidth.
    pub fn kappa_e(&self) -> f64 {
        self.kappa_ex_e + self.kappa_int_e
    }

    /// Total optical linewidth.
    pub fn kappa_o(&self) -> f64 {
        self.kappa_ex_o + self.kappa_b_o + self.kappa_int_o
    }

    pub fn kappa(&self, port: Port) -> f64 {
        match port {
            Port::Microwave => self.kappa_e(),
            Port::Optical => self.kappa_o(),
        }
    }

    pub fn delta(&self, port: Port) -> f64 {
        match port {
            Port::Microwave => self.delta_e,
            Port::Optical => self.delta_o,
        }
    }

    pub fn coupling(&self, port: Port) -> f64 {
        match port {
            Port::Microwave => self.g_e,
            Port::Optical => self.g_o,
        }
    }

    /// Checks the physical constraints on all fields.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega_m", self.omega_m),
            ("gamma_m", self.gamma_m),
            ("kappa_ex_e", self.kappa_ex_e),
            ("kappa_ex_o", self.kappa_ex_o),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")));
            }
        }
        let non_negative = [
            ("kappa_int_e", self.kappa_int_e),
            ("kappa_b_o", self.kappa_b_o),
            ("kappa_int_o", self.kappa_int_o),
            ("g_e", self.g_e),
            ("g_o", self.g_o),
            ("n_th_m", self.n_th_m),
            ("n_th_e", self.n_th_e),
            ("n_th_o", self.n_th_o),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be >= 0, got {v}")));
            }
        }
        for (name, v) in [("epsilon", self.epsilon), ("epsilon_lo", self.epsilon_lo)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParams(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        if !self.delta_e.is_finite() || !self.delta_o.is_finite() {
            return Err(Error::InvalidParams("detunings must be finite".into()));
        }
        Ok(())
    }
}

/// Parametric damping rates of the membrane mode and the resulting total
/// converter bandwidth `gamma_t = gamma_e + gamma_o + gamma_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingRates {
    pub gamma_e: f64,
    pub gamma_o: f64,
    pub gamma_t: f64,
}

impl DampingRates {
    pub fn new(gamma_e: f64, gamma_o: f64, gamma_m: f64) -> Self {
        Self {
            gamma_e,
            gamma_o,
            gamma_t: gamma_e + gamma_o + gamma_m,
        }
    }
}

/// Resolved-sideband damping rate `4 g^2 / kappa` at optimal detuning.
pub fn damping_rate_rwa(g: f64, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("kappa must be > 0, got {kappa}")));
    }
    if g < 0.0 {
        return Err(Error::Domain(format!("g must be >= 0, got {g}")));
    }
    Ok(4.0 * g * g / kappa)
}

/// Parametric damping rate of the mechanical mode without a rotating-wave
/// approximation: minus twice the imaginary part of the cavity-induced
/// mechanical self-energy at the mechanical frequency,
///
/// `Gamma = g^2 kappa [ S(omega_m) - S(-omega_m) ]`,
/// `S(w) = 1 / ((kappa/2)^2 + (Delta + w)^2)`.
///
/// Reduces to `4 g^2 / kappa` at `Delta = -omega_m` in the resolved-sideband
/// limit.
pub fn damping_rate_full(params: &ConverterParams, port: Port) -> f64 {
    let g = params.coupling(port);
    let kappa = params.kappa(port);
    let delta = params.delta(port);
    let s = |w: f64| 1.0 / ((0.5 * kappa).powi(2) + (delta + w).powi(2));
    g * g * kappa * (s(params.omega_m) - s(-params.omega_m))
}

/// Both parametric damping rates and the total converter bandwidth.
pub fn damping_rates(params: &ConverterParams) -> DampingRates {
    DampingRates::new(
        damping_rate_full(params, Port::Microwave),
        damping_rate_full(params, Port::Optical),
        params.gamma_m,
    )
}

/// Inverts [`damping_rate_full`]: the pump-enhanced coupling that produces
/// the requested damping rate at the configured detuning and linewidth.
pub fn coupling_for_damping(params: &ConverterParams, port: Port, target: f64) -> Result<f64> {
    if !(target >= 0.0) {
        return Err(Error::Domain(format!("target damping must be >= 0, got {target}")));
    }
    let kappa = params.kappa(port);
    let delta = params.delta(port);
    let s = |w: f64| 1.0 / ((0.5 * kappa).powi(2) + (delta + w).powi(2));
    let weight = kappa * (s(params.omega_m) - s(-params.omega_m));
    if weight <= 0.0 {
        return Err(Error::Domain(
            "requested damping is not reachable at this detuning (anti-damping)".into(),
        ));
    }
    Ok((target / weight).sqrt())
}

/// Pump-enhanced coupling from the (G, x_zp, alpha) triple.
pub fn coupling_from_triple(g_per_meter: f64, x_zp: f64, alpha: f64) -> f64 {
    g_per_meter * x_zp * alpha
}

/// Bose occupancy of a mode at `omega` rad/s for bath temperature `temp_k`.
pub fn bose_occupancy(omega: f64, temp_k: f64) -> f64 {
    if temp_k <= 0.0 {
        return 0.0;
    }
    let x = HBAR_OVER_KB * omega / temp_k;
    1.0 / (x.exp() - 1.0)
}

// ---------------------------------------------------------------------------
// Config file loading
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mechanics: RawMechanics,
    microwave: RawMicrowave,
    optical: RawOptical,
    #[serde(default)]
    bath: RawBath,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMechanics {
    f_m_hz: f64,
    gamma_m_hz: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMicrowave {
    kappa_ex_hz: f64,
    kappa_int_hz: f64,
    delta_hz: f64,
    g_hz: f64,
    #[serde(default)]
    n_th: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptical {
    kappa_ex_hz: f64,
    kappa_back_hz: f64,
    kappa_int_hz: f64,
    delta_hz: f64,
    g_hz: f64,
    epsilon: f64,
    #[serde(default = "default_epsilon_lo")]
    epsilon_lo: f64,
    #[serde(default)]
    n_th: f64,
}

fn default_epsilon_lo() -> f64 {
    0.83
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawBath {
    /// Mechanical bath temperature in kelvin; sets n_th_m via the Bose
    /// factor at omega_m unless `n_th_m` is given explicitly.
    temperature_k: Option<f64>,
    n_th_m: Option<f64>,
}

fn line_of_key(source: &str, key: &str) -> usize {
    for (i, line) in source.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.starts_with(key)
            && trimmed[key.len()..].trim_start().starts_with('=')
        {
            return i + 1;
        }
    }
    1
}

fn offset_to_line(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

/// Parses a TOML config string into validated parameters.
///
/// Invariant violations are reported with the line number of the offending
/// key. `overrides` are `dotted.path=value` pairs applied before parsing.
pub fn params_from_toml(source: &str, overrides: &[(String, String)]) -> Result<ConverterParams> {
    let table: toml::Table = source.parse().map_err(|e: toml::de::Error| {
        let line = e
            .span()
            .map(|s| offset_to_line(source, s.start))
            .unwrap_or(1);
        Error::Config {
            line,
            msg: e.message().to_string(),
        }
    })?;
    let mut value = toml::Value::Table(table);
    for (path, raw) in overrides {
        apply_override(&mut value, path, raw)?;
    }
    let raw: RawConfig = value.try_into().map_err(|e: toml::de::Error| {
        // Key-level errors after overrides no longer carry spans into the
        // original text; locate the failing key by name when possible.
        let msg = e.message().to_string();
        let line = msg
            .split('`')
            .nth(1)
            .map(|key| line_of_key(source, key))
            .unwrap_or(1);
        Error::Config { line, msg }
    })?;

    let n_th_m = match (raw.bath.n_th_m, raw.bath.temperature_k) {
        (Some(n), _) => n,
        (None, Some(t)) => bose_occupancy(TWO_PI * raw.mechanics.f_m_hz, t),
        (None, None) => 0.0,
    };

    let params = ConverterParams {
        omega_m: TWO_PI * raw.mechanics.f_m_hz,
        gamma_m: TWO_PI * raw.mechanics.gamma_m_hz,
        kappa_ex_e: TWO_PI * raw.microwave.kappa_ex_hz,
        kappa_int_e: TWO_PI * raw.microwave.kappa_int_hz,
        kappa_ex_o: TWO_PI * raw.optical.kappa_ex_hz,
        kappa_b_o: TWO_PI * raw.optical.kappa_back_hz,
        kappa_int_o: TWO_PI * raw.optical.kappa_int_hz,
        delta_e: TWO_PI * raw.microwave.delta_hz,
        delta_o: TWO_PI * raw.optical.delta_hz,
        g_e: TWO_PI * raw.microwave.g_hz,
        g_o: TWO_PI * raw.optical.g_hz,
        epsilon: raw.optical.epsilon,
        epsilon_lo: raw.optical.epsilon_lo,
        n_th_m,
        n_th_e: raw.microwave.n_th,
        n_th_o: raw.optical.n_th,
    };
    params.validate().map_err(|e| {
        let msg = e.to_string();
        let key = msg
            .split_whitespace()
            .nth(2)
            .unwrap_or("")
            .trim_end_matches(':');
        Error::Config {
            line: line_of_key(source, key),
            msg,
        }
    })?;
    Ok(params)
}

/// Loads a config file from disk. See [`params_from_toml`].
pub fn load_config(path: &Path, overrides: &[(String, String)]) -> Result<ConverterParams> {
    let source = std::fs::read_to_string(path)?;
    params_from_toml(&source, overrides)
}

fn apply_override(value: &mut toml::Value, path: &str, raw: &str) -> Result<()> {
    let mut cursor = value;
    let parts: Vec<&str> = path.split('.').collect();
    let (last, parents) = parts.split_last().ok_or_else(|| Error::Config {
        line: 0,
        msg: "empty override path".into(),
    })?;
    for part in parents {
        cursor = cursor
            .as_table_mut()
            .and_then(|t| t.get_mut(*part))
            .ok_or_else(|| Error::Config {
                line: 0,
                msg: format!("override path `{path}`: no section `{part}`"),
            })?;
    }
    let table = cursor.as_table_mut().ok_or_else(|| Error::Config {
        line: 0,
        msg: format!("override path `{path}` does not point into a table"),
    })?;
    let parsed: toml::Value = if let Ok(f) = raw.parse::<f64>() {
        toml::Value::Float(f)
    } else {
        toml::Value::String(raw.to_string())
    };
    table.insert((*last).to_string(), parsed);
    Ok(())
}
