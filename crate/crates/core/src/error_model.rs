//! Conveyor-belt shuttling phase-error model.
//!
//! The dephasing `δC` accumulated by one shuttle of length `L_s` at speed `v`
//! is the sum of four terms:
//!
//! ```text
//! T1 = 2 l_c L_s / (v T2*)²                                 g-factor fluctuations
//! T2 = 1e-4 / v                  (v in m/s)                 spin-valley hotspot bound
//! T3 = 0.01 · ½ (ħ a_x v)² / E_vs0² · exp((a_x L_dot)² / 2) valley relaxation, dense disorder
//! T4 = 0.01 · (L_s / d̄) · exp(−0.03 ln10 · E_vs0 L_dot / (ħ v))  sparse disorder
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::scan_then_golden;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, J per eV.
pub const EV: f64 = 1.602_176_634e-19;

/// Default optimiser bracket, m/s.
pub const DEFAULT_V_MIN: f64 = 0.01;
pub const DEFAULT_V_MAX: f64 = 1000.0;

const SCAN_POINTS: usize = 64;
const LN_V_TOL: f64 = 1e-6;

/// Physical parameters of the phase-error model, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "ErrorModelConfig", try_from = "ErrorModelConfig")]
pub struct ErrorModelParams {
    /// Correlation length of g-factor fluctuations, m.
    pub l_c: f64,
    /// Static dephasing time, s.
    pub t2_star: f64,
    /// Linear quantum-dot size, m.
    pub l_dot: f64,
    /// Valley splitting without gradient, J.
    pub e_vs0: f64,
    /// Mean separation of atomistic irregularities, m.
    pub d_bar: f64,
    /// Valley phase gradient, rad/m.
    pub a_x: f64,
}

impl Default for ErrorModelParams {
    fn default() -> Self {
        ErrorModelParams {
            l_c: 100e-9,
            t2_star: 20e-6,
            l_dot: 20e-9,
            e_vs0: 100e-6 * EV,
            d_bar: 30e-9,
            a_x: 0.05 * std::f64::consts::PI * 1e9,
        }
    }
}

impl ErrorModelParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("l_c", self.l_c),
            ("t2_star", self.t2_star),
            ("l_dot", self.l_dot),
            ("e_vs0", self.e_vs0),
            ("d_bar", self.d_bar),
            ("a_x", self.a_x),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Velocity-independent factor of T3, per (m/s)².
    fn t3_coeff(&self) -> f64 {
        let ratio = HBAR * self.a_x / self.e_vs0;
        0.01 * 0.5 * ratio * ratio * ((self.a_x * self.l_dot).powi(2) / 2.0).exp()
    }

    /// Exponent scale of T4, m/s.
    fn t4_scale(&self) -> f64 {
        0.03 * std::f64::consts::LN_10 * self.e_vs0 * self.l_dot / HBAR
    }
}

/// The four contributions to `δC` for one shuttle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseErrorTerms {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
}

impl PhaseErrorTerms {
    pub fn total(&self) -> f64 {
        self.t1 + self.t2 + self.t3 + self.t4
    }
}

fn check_inputs(v: f64, l_s: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidVelocity(v));
    }
    if !(l_s.is_finite() && l_s >= 0.0) {
        return Err(Error::InvalidParams(format!("shuttle length must be >= 0, got {l_s}")));
    }
    Ok(())
}

pub fn phase_error_terms(v: f64, l_s: f64, p: &ErrorModelParams) -> Result<PhaseErrorTerms> {
    check_inputs(v, l_s)?;
    Ok(terms_unchecked(v, l_s, p))
}

fn terms_unchecked(v: f64, l_s: f64, p: &ErrorModelParams) -> PhaseErrorTerms {
    let vt = v * p.t2_star;
    PhaseErrorTerms {
        t1: 2.0 * p.l_c * l_s / (vt * vt),
        t2: 1e-4 / v,
        t3: p.t3_coeff() * v * v,
        t4: 0.01 * (l_s / p.d_bar) * (-p.t4_scale() / v).exp(),
    }
}

/// Phase error `δC` of one shuttle over `l_s` metres at `v` m/s.
pub fn phase_error(v: f64, l_s: f64, p: &ErrorModelParams) -> Result<f64> {
    Ok(phase_error_terms(v, l_s, p)?.total())
}

/// Analytic `∂δC/∂v`.
pub fn d_phase_error_dv(v: f64, l_s: f64, p: &ErrorModelParams) -> Result<f64> {
    let t = phase_error_terms(v, l_s, p)?;
    Ok((-2.0 * t.t1 - t.t2 + 2.0 * t.t3) / v + t.t4 * p.t4_scale() / (v * v))
}

/// Velocity in `[v_min, v_max]` minimising `δC` for a shuttle of `l_s` metres.
///
/// A 64-point geometric scan selects the sub-bracket holding the global
/// minimum, then golden-section search on `ln v` refines it to 1e-6.
pub fn optimal_velocity(l_s: f64, p: &ErrorModelParams, v_min: f64, v_max: f64) -> Result<f64> {
    if !(v_min.is_finite() && v_max.is_finite() && v_min > 0.0 && v_min < v_max) {
        return Err(Error::InvalidBracket(v_min, v_max));
    }
    check_inputs(v_min, l_s)?;
    let f = |ln_v: f64| terms_unchecked(ln_v.exp(), l_s, p).total();
    let (lo, hi) = (v_min.ln(), v_max.ln());
    let (ln_v, _) = scan_then_golden(f, lo, hi, SCAN_POINTS, LN_V_TOL);
    // Map the exact bracket ends back without a round trip through ln/exp.
    Ok(if ln_v == lo {
        v_min
    } else if ln_v == hi {
        v_max
    } else {
        ln_v.exp().clamp(v_min, v_max)
    })
}

/// JSON form of [`ErrorModelParams`] in the customary units: nm, µs, µeV and
/// π/nm.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorModelConfig {
    pub l_c_nm: f64,
    pub t2_star_us: f64,
    pub l_dot_nm: f64,
    pub e_vs0_uev: f64,
    pub d_bar_nm: f64,
    pub a_x_pi_per_nm: f64,
}

impl From<ErrorModelParams> for ErrorModelConfig {
    fn from(p: ErrorModelParams) -> Self {
        ErrorModelConfig {
            l_c_nm: p.l_c * 1e9,
            t2_star_us: p.t2_star * 1e6,
            l_dot_nm: p.l_dot * 1e9,
            e_vs0_uev: p.e_vs0 / EV * 1e6,
            d_bar_nm: p.d_bar * 1e9,
            a_x_pi_per_nm: p.a_x / std::f64::consts::PI / 1e9,
        }
    }
}

impl TryFrom<ErrorModelConfig> for ErrorModelParams {
    type Error = Error;

    fn try_from(c: ErrorModelConfig) -> Result<Self> {
        let p = ErrorModelParams {
            l_c: c.l_c_nm / 1e9,
            t2_star: c.t2_star_us / 1e6,
            l_dot: c.l_dot_nm / 1e9,
            e_vs0: c.e_vs0_uev / 1e6 * EV,
            d_bar: c.d_bar_nm / 1e9,
            a_x: c.a_x_pi_per_nm * std::f64::consts::PI * 1e9,
        };
        p.validate()?;
        Ok(p)
    }
}
