use crate::error::Result;
use crate::field::{circular_closed_form, EffectiveField, RotatingConeField};
use crate::params::{derive_params, DerivedParams, FrameConfig, ParticleConfig, WaveConfig};
use crate::spin::RabiSolution;
use crate::trajectory::Orbit;

/// A fully resolved configuration: wave, particle, frame, derived
/// parameters and the effective-field model built on the orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    wave: WaveConfig,
    particle: ParticleConfig,
    frame: FrameConfig,
    derived: DerivedParams,
    field: EffectiveField,
}

impl Model {
    pub fn new(wave: WaveConfig, particle: ParticleConfig, frame: FrameConfig) -> Result<Self> {
        let derived = derive_params(&wave, &particle, &frame)?;
        let orbit = Orbit::new(wave, particle.charge_sign, derived.gamma_z)?;
        let field = EffectiveField::new(orbit, particle.g)?;
        Ok(Model {
            wave,
            particle,
            frame,
            derived,
            field,
        })
    }

    /// Circular polarization, average rest frame, ω_L = 1, positive charge.
    pub fn circular(eta: f64, g: f64) -> Result<Self> {
        Self::new(
            WaveConfig::circular(eta)?,
            ParticleConfig::new(g)?,
            FrameConfig::AverageRestFrame,
        )
    }

    pub fn wave(&self) -> &WaveConfig {
        &self.wave
    }

    pub fn particle(&self) -> &ParticleConfig {
        &self.particle
    }

    pub fn frame(&self) -> &FrameConfig {
        &self.frame
    }

    pub fn derived(&self) -> &DerivedParams {
        &self.derived
    }

    pub fn field(&self) -> &EffectiveField {
        &self.field
    }

    pub fn orbit(&self) -> &Orbit {
        self.field.orbit()
    }

    /// Laser period 2π/ω_L.
    pub fn laser_period(&self) -> f64 {
        std::f64::consts::TAU / self.wave.omega_l()
    }

    pub fn cone(&self) -> Result<RotatingConeField> {
        circular_closed_form(&self.wave, &self.particle, &self.frame, &self.derived)
    }

    pub fn rabi(&self) -> RabiSolution {
        RabiSolution::from_params(&self.derived)
    }
}
