//! Effective magnetic field seen by the spin along the orbit.
//!
//! B′ = (B - v × E) + v × a / (s g): the rest-frame magnetic field plus the
//! leading Thomas-precession term, with s the charge sign.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{DerivedParams, FrameConfig, ParticleConfig, WaveConfig};
use crate::trajectory::Orbit;
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub t: f64,
    pub b_rest: Vec3,
    pub b_thomas: Vec3,
    pub b_eff: Vec3,
}

/// Constant-magnitude field rotating at `omega` on a cone about `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotatingConeField {
    pub magnitude: f64,
    /// Opening angle from the axis, tan θ = κ/η, in [0, π/2].
    pub theta: f64,
    pub omega: f64,
    /// ±ẑ. Points along -ẑ when s(1 - g)/g < 0, e.g. a positive charge with g > 1.
    pub axis: Vec3,
}

impl RotatingConeField {
    pub fn direction(&self, t: f64) -> Vec3 {
        let (s, c) = (self.omega * t).sin_cos();
        let (st, ct) = self.theta.sin_cos();
        Vec3::new(st * c, st * s, 0.0) + self.axis * ct
    }

    pub fn field_at(&self, t: f64) -> Vec3 {
        self.direction(t) * self.magnitude
    }
}

/// Field model: the orbit plus the particle's g and charge sign.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveField {
    orbit: Orbit,
    g: f64,
}

impl EffectiveField {
    pub fn new(orbit: Orbit, g: f64) -> Result<Self> {
        if !g.is_finite() || g == 0.0 {
            return Err(Error::InvalidInput(format!(
                "g = {g} must be finite and nonzero"
            )));
        }
        Ok(EffectiveField { orbit, g })
    }

    pub fn orbit(&self) -> &Orbit {
        &self.orbit
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn sample(&self, t: f64) -> FieldSample {
        let k = self.orbit.kinematics(t);
        let b_rest = k.fields.b - k.velocity.cross(k.fields.e);
        let b_thomas = k.velocity.cross(k.acceleration) * (1.0 / (self.orbit.charge() * self.g));
        FieldSample {
            t,
            b_rest,
            b_thomas,
            b_eff: b_rest + b_thomas,
        }
    }

    pub fn b_eff(&self, t: f64) -> Vec3 {
        self.sample(t).b_eff
    }

    /// The closed component expression
    ///
    /// ```text
    /// B′ = (a ω_L′/g) ( √(1-ε²) [(g+1)dn - γ_z] cn,
    ///                   ε [(g+1)dn - γ_z(1-μ²)] sn,
    ///                   ε √(1-ε²) [dn - g/γ_z] )
    /// ```
    ///
    /// evaluated verbatim (charge sign ignored). Its x and y components agree
    /// with [`EffectiveField::sample`]; its z component is smaller by exactly
    /// a factor η, so it is kept only as a cross-check.
    pub fn display_field(&self, t: f64) -> Vec3 {
        let o = &self.orbit;
        let w = o.wave();
        let j = o.jacobi(t);
        let g = self.g;
        let gz = o.gamma_z();
        let pre = w.amplitude() * o.omega_prime() / g;
        Vec3::new(
            pre * w.epsilon_perp() * ((g + 1.0) * j.dn - gz) * j.cn,
            pre * w.epsilon() * ((g + 1.0) * j.dn - gz * (1.0 - o.mu_sq())) * j.sn,
            pre * w.epsilon() * w.epsilon_perp() * (j.dn - g / gz),
        )
    }
}

/// Closed-form rotating cone for circular polarization in the average rest frame:
/// |B′| = (η ω_L |1-g| / 2g) √(κ² + η²).
pub fn circular_closed_form(
    wave: &WaveConfig,
    particle: &ParticleConfig,
    frame: &FrameConfig,
    derived: &DerivedParams,
) -> Result<RotatingConeField> {
    let g = particle.g;
    if !wave.is_circular() {
        return Err(Error::Regime(
            "rotating cone requires circular polarization".into(),
        ));
    }
    if !frame.is_average_rest_frame() {
        return Err(Error::Regime(
            "rotating cone requires the average rest frame".into(),
        ));
    }
    if g == 1.0 {
        return Err(Error::DegenerateGyromagnetic { g });
    }
    let eta = wave.eta();
    if !(eta > 0.0) {
        return Err(Error::Regime("rotating cone requires eta > 0".into()));
    }
    let magnitude = wave.amplitude() * wave.omega_l() * (1.0 - g).abs() / (2.0 * g.abs())
        * (derived.kappa_sq + eta * eta).sqrt();
    let orientation = particle.charge_sign.value() * ((1.0 - g) / g).signum();
    Ok(RotatingConeField {
        magnitude,
        theta: derived.kappa().atan2(eta),
        omega: wave.omega_l(),
        axis: Vec3::Z * orientation,
    })
}
