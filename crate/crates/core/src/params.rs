//! Configuration types and the dimensionless parameters derived from them.
//!
//! Units are natural: c = m = e = ħ = 1, so the gauge amplitude equals the
//! field strength η and all frequencies are in units of the configured
//! laser frequency ω_L.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::elliptic::complete_k;
use crate::error::{Error, Result};

/// Elliptically polarized monochromatic plane wave travelling along +z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveConfig {
    omega_l: f64,
    epsilon_sq: f64,
    eta: f64,
}

impl WaveConfig {
    /// Build from the polarization parameter ε. Values within a few ulps of
    /// 1/√2 are snapped to exact circular polarization.
    pub fn new(omega_l: f64, epsilon: f64, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidInput(format!(
                "epsilon = {epsilon} out of [0,1]"
            )));
        }
        let mut epsilon_sq = epsilon * epsilon;
        if (1.0 - 2.0 * epsilon_sq).abs() <= 4.0 * f64::EPSILON {
            epsilon_sq = 0.5;
        }
        Self::from_epsilon_sq(omega_l, epsilon_sq, eta)
    }

    pub fn from_epsilon_sq(omega_l: f64, epsilon_sq: f64, eta: f64) -> Result<Self> {
        if !(omega_l.is_finite() && omega_l > 0.0) {
            return Err(Error::InvalidInput(format!(
                "omega_L = {omega_l} must be positive"
            )));
        }
        if !(0.0..=1.0).contains(&epsilon_sq) {
            return Err(Error::InvalidInput(format!(
                "epsilon^2 = {epsilon_sq} out of [0,1]"
            )));
        }
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "eta = {eta} must be finite and >= 0"
            )));
        }
        Ok(WaveConfig {
            omega_l,
            epsilon_sq,
            eta,
        })
    }

    /// Circular polarization, ω_L = 1.
    pub fn circular(eta: f64) -> Result<Self> {
        Self::from_epsilon_sq(1.0, 0.5, eta)
    }

    pub fn with_omega_l(self, omega_l: f64) -> Result<Self> {
        Self::from_epsilon_sq(omega_l, self.epsilon_sq, self.eta)
    }

    pub fn omega_l(&self) -> f64 {
        self.omega_l
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon_sq.sqrt()
    }

    pub fn epsilon_sq(&self) -> f64 {
        self.epsilon_sq
    }

    /// √(1 - ε²), the weight of the y component.
    pub fn epsilon_perp(&self) -> f64 {
        (1.0 - self.epsilon_sq).sqrt()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Gauge amplitude a; equal to η in natural units.
    pub fn amplitude(&self) -> f64 {
        self.eta
    }

    /// 1 - 2ε², zero exactly for circular polarization.
    pub fn polarization_factor(&self) -> f64 {
        1.0 - 2.0 * self.epsilon_sq
    }

    pub fn is_circular(&self) -> bool {
        self.polarization_factor() == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ChargeSign {
    #[default]
    Positive,
    Negative,
}

impl ChargeSign {
    pub fn value(self) -> f64 {
        match self {
            ChargeSign::Positive => 1.0,
            ChargeSign::Negative => -1.0,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(ChargeSign::Positive),
            -1 => Some(ChargeSign::Negative),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleConfig {
    pub g: f64,
    pub charge_sign: ChargeSign,
}

impl ParticleConfig {
    pub fn new(g: f64) -> Result<Self> {
        Self::with_charge(g, ChargeSign::Positive)
    }

    pub fn with_charge(g: f64, charge_sign: ChargeSign) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InvalidInput(format!("g = {g} must be finite")));
        }
        Ok(ParticleConfig { g, charge_sign })
    }
}

/// Frame in which the orbit is written, fixed by γ_z = 1 - v_z(0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FrameConfig {
    Explicit { gamma_z: f64 },
    AverageRestFrame,
}

impl FrameConfig {
    pub fn explicit(gamma_z: f64) -> Result<Self> {
        if !(gamma_z.is_finite() && gamma_z > 0.0) {
            return Err(Error::InvalidInput(format!(
                "gamma_z = {gamma_z} must be positive"
            )));
        }
        Ok(FrameConfig::Explicit { gamma_z })
    }

    pub fn is_average_rest_frame(&self) -> bool {
        matches!(self, FrameConfig::AverageRestFrame)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// κ² = 2g²/(1-g)².
    pub kappa_sq: f64,
    /// η*² = 4/(g-1); negative for g < 1.
    pub eta_star_sq: f64,
    /// Cone inclination, tan θ = κ/η.
    pub theta: f64,
    /// Squared elliptic modulus of the orbit, γ_z² μ² = η²(1 - 2ε²).
    pub mu_sq: f64,
    pub gamma_z: f64,
    /// Doppler-shifted frequency γ_z ω_L.
    pub omega_l_prime: f64,
    /// Rabi frequency; only in the circular / average-rest-frame regime.
    pub omega_s: Option<f64>,
    /// Flip amplitude A(η); same regime as `omega_s`.
    pub amplitude: Option<f64>,
    pub resonant: bool,
}

impl DerivedParams {
    pub fn kappa(&self) -> f64 {
        self.kappa_sq.sqrt()
    }

    pub fn analytic_available(&self) -> bool {
        self.omega_s.is_some()
    }
}

fn check_g(g: f64) -> Result<()> {
    if g == 1.0 {
        Err(Error::DegenerateGyromagnetic { g })
    } else if !g.is_finite() {
        Err(Error::InvalidInput(format!("g = {g} must be finite")))
    } else {
        Ok(())
    }
}

pub fn kappa_sq(g: f64) -> Result<f64> {
    check_g(g)?;
    Ok(2.0 * g * g / ((1.0 - g) * (1.0 - g)))
}

pub fn eta_star_sq(g: f64) -> Result<f64> {
    check_g(g)?;
    Ok(4.0 / (g - 1.0))
}

/// A(η) = κ²η² / (κ²η² + (η² - η*²)²).
pub fn flip_amplitude(eta: f64, g: f64) -> Result<f64> {
    let k2 = kappa_sq(g)?;
    let es2 = eta_star_sq(g)?;
    let num = k2 * eta * eta;
    let detune = eta * eta - es2;
    let den = num + detune * detune;
    Ok(if den == 0.0 { 0.0 } else { num / den })
}

/// ω_S = ω_L |1-g|/8 · √(κ²η² + (η² - η*²)²).
pub fn rabi_frequency(eta: f64, g: f64, omega_l: f64) -> Result<f64> {
    let k2 = kappa_sq(g)?;
    let es2 = eta_star_sq(g)?;
    let detune = eta * eta - es2;
    Ok(omega_l * (1.0 - g).abs() / 8.0 * (k2 * eta * eta + detune * detune).sqrt())
}

/// Squared orbit modulus for a given frame.
pub fn modulus_sq(wave: &WaveConfig, gamma_z: f64) -> f64 {
    wave.eta * wave.eta * wave.polarization_factor() / (gamma_z * gamma_z)
}

const FRAME_TOL: f64 = 1e-12;
const FRAME_MAX_ITER: usize = 200;

/// γ_z of the frame where the period-averaged velocity vanishes.
///
/// ⟨v_z⟩ = 0 means γ_z ⟨dn⟩ = 1 with ⟨dn⟩ = π/(2K(μ²)), i.e. the fixed point
/// γ = 2K(p/γ²)/π with p = η²(1 - 2ε²). Damped fixed-point iteration inside
/// a maintained sign bracket; bisection whenever the iterate leaves the
/// bracket or stops contracting.
///
/// For strong, nearly linear polarization the root sits so close to μ² = 1
/// that the residual cannot be resolved to tolerance in double precision;
/// those cases report [`Error::FrameUnreachable`].
pub fn solve_average_rest_frame(wave: &WaveConfig) -> Result<f64> {
    let p = wave.eta * wave.eta * wave.polarization_factor();
    if p == 0.0 {
        return Ok(1.0);
    }
    let residual = |gamma: f64| -> Result<f64> {
        let k =
            complete_k(p / (gamma * gamma)).map_err(|_| Error::FrameUnreachable { last: gamma })?;
        Ok(gamma - 2.0 * k / PI)
    };

    // f < 0 at lo, f > 0 at hi
    let (mut lo, mut hi);
    if p > 0.0 {
        let edge = p.sqrt();
        lo = if edge < 1.0 {
            1.0
        } else {
            edge * (1.0 + 4.0 * f64::EPSILON)
        };
        if residual(lo)? >= 0.0 {
            return Err(Error::FrameUnreachable { last: lo });
        }
        hi = (2.0 * lo).max(2.0);
        let mut n = 0;
        while residual(hi)? <= 0.0 {
            hi *= 2.0;
            n += 1;
            if n > 64 {
                return Err(Error::FrameUnreachable { last: hi });
            }
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        let mut n = 0;
        while residual(lo)? >= 0.0 {
            lo *= 0.5;
            n += 1;
            if n > 64 {
                return Err(Error::FrameUnreachable { last: lo });
            }
        }
    }

    let mut x = 0.5 * (lo + hi);
    let mut prev = f64::INFINITY;
    for _ in 0..FRAME_MAX_ITER {
        let r = residual(x)?;
        if r.abs() < FRAME_TOL {
            return Ok(x);
        }
        if r < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let candidate = x - r;
        let contracting = r.abs() < 0.5 * prev;
        prev = r.abs();
        x = if contracting && candidate > lo && candidate < hi {
            candidate
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            let r = residual(x)?;
            if r.abs() < FRAME_TOL {
                return Ok(x);
            }
            return Err(Error::FrameUnreachable { last: x });
        }
    }
    Err(Error::FrameUnreachable { last: x })
}

pub fn resolve_gamma_z(wave: &WaveConfig, frame: &FrameConfig) -> Result<f64> {
    match *frame {
        FrameConfig::Explicit { gamma_z } => {
            if gamma_z.is_finite() && gamma_z > 0.0 {
                Ok(gamma_z)
            } else {
                Err(Error::InvalidInput(format!(
                    "gamma_z = {gamma_z} must be positive"
                )))
            }
        }
        FrameConfig::AverageRestFrame => solve_average_rest_frame(wave),
    }
}

pub fn derive_params(
    wave: &WaveConfig,
    particle: &ParticleConfig,
    frame: &FrameConfig,
) -> Result<DerivedParams> {
    let g = particle.g;
    let kappa_sq = kappa_sq(g)?;
    let eta_star_sq = eta_star_sq(g)?;
    let gamma_z = resolve_gamma_z(wave, frame)?;
    let eta = wave.eta;
    let closed_form = wave.is_circular() && frame.is_average_rest_frame();
    let (omega_s, amplitude) = if closed_form {
        (
            Some(rabi_frequency(eta, g, wave.omega_l)?),
            Some(flip_amplitude(eta, g)?),
        )
    } else {
        (None, None)
    };
    Ok(DerivedParams {
        kappa_sq,
        eta_star_sq,
        theta: kappa_sq.sqrt().atan2(eta),
        mu_sq: modulus_sq(wave, gamma_z),
        gamma_z,
        omega_l_prime: gamma_z * wave.omega_l,
        omega_s,
        amplitude,
        resonant: g > 1.0,
    })
}
