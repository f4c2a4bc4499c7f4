//! Classical orbit of the charge in the plane wave.
//!
//! With u = ω_L′ t and the Jacobi functions at parameter μ²:
//!
//! ```text
//! v = ( -s η ε cn(u),  -s η √(1-ε²) sn(u),  1 - γ_z dn(u) )
//! z = t - am(u)/ω_L
//! ```
//!
//! where s is the charge sign. The wave phase at the particle is
//! ω_L (t - z) = am(u), so the transverse velocity is exactly -s A⟂ there.

use serde::{Deserialize, Serialize};

use crate::elliptic::{reduce_modulus, JacobiTriple, ReductionPlan};
use crate::error::{Error, Result};
use crate::params::{modulus_sq, resolve_gamma_z, ChargeSign, FrameConfig, WaveConfig};
use crate::quad;
use crate::vec3::Vec3;

/// Absolute tolerance for the transverse position quadrature.
pub const POSITION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
    /// Unwound wave phase ω_L ξ at the particle.
    pub phase: f64,
}

/// Laboratory fields at the particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabFields {
    pub e: Vec3,
    pub b: Vec3,
}

/// Velocity, acceleration and fields from a single Jacobi evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub velocity: Vec3,
    pub acceleration: Vec3,
    pub fields: LabFields,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    wave: WaveConfig,
    charge: f64,
    gamma_z: f64,
    mu_sq: f64,
    omega_prime: f64,
    plan: ReductionPlan,
}

impl Orbit {
    pub fn new(wave: WaveConfig, charge_sign: ChargeSign, gamma_z: f64) -> Result<Self> {
        if !(gamma_z.is_finite() && gamma_z > 0.0) {
            return Err(Error::InvalidInput(format!(
                "gamma_z = {gamma_z} must be positive"
            )));
        }
        let mu_sq = modulus_sq(&wave, gamma_z);
        if mu_sq == 1.0 {
            return Err(Error::DegenerateOrbit);
        }
        Ok(Orbit {
            wave,
            charge: charge_sign.value(),
            gamma_z,
            mu_sq,
            omega_prime: gamma_z * wave.omega_l(),
            plan: reduce_modulus(mu_sq)?,
        })
    }

    pub fn from_frame(
        wave: WaveConfig,
        charge_sign: ChargeSign,
        frame: &FrameConfig,
    ) -> Result<Self> {
        let gamma_z = resolve_gamma_z(&wave, frame)?;
        Self::new(wave, charge_sign, gamma_z)
    }

    pub fn wave(&self) -> &WaveConfig {
        &self.wave
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn gamma_z(&self) -> f64 {
        self.gamma_z
    }

    pub fn mu_sq(&self) -> f64 {
        self.mu_sq
    }

    pub fn omega_prime(&self) -> f64 {
        self.omega_prime
    }

    pub fn plan(&self) -> &ReductionPlan {
        &self.plan
    }

    /// Period of the transverse motion, 4K/ω_L′ (for μ² < 1).
    pub fn period(&self) -> Option<f64> {
        self.plan.real_period().map(|p| p / self.omega_prime)
    }

    pub fn jacobi(&self, t: f64) -> JacobiTriple {
        self.plan.evaluate(self.omega_prime * t)
    }

    pub fn phase(&self, t: f64) -> f64 {
        self.jacobi(t).am
    }

    fn velocity_from(&self, j: &JacobiTriple) -> Vec3 {
        let w = &self.wave;
        let se = self.charge * w.eta();
        Vec3::new(
            -se * w.epsilon() * j.cn,
            -se * w.epsilon_perp() * j.sn,
            1.0 - self.gamma_z * j.dn,
        )
    }

    fn acceleration_from(&self, j: &JacobiTriple) -> Vec3 {
        let w = &self.wave;
        let se = self.charge * w.eta();
        let op = self.omega_prime;
        Vec3::new(
            op * se * w.epsilon() * j.sn * j.dn,
            -op * se * w.epsilon_perp() * j.cn * j.dn,
            op * self.gamma_z * self.mu_sq * j.sn * j.cn,
        )
    }

    fn fields_from(&self, j: &JacobiTriple) -> LabFields {
        let w = &self.wave;
        let amp = w.eta() * w.omega_l();
        // sin and cos of the wave phase are sn and cn
        let (s, c) = (j.sn, j.cn);
        LabFields {
            e: Vec3::new(amp * w.epsilon() * s, -amp * w.epsilon_perp() * c, 0.0),
            b: Vec3::new(amp * w.epsilon_perp() * c, amp * w.epsilon() * s, 0.0),
        }
    }

    pub fn velocity(&self, t: f64) -> Vec3 {
        self.velocity_from(&self.jacobi(t))
    }

    pub fn acceleration(&self, t: f64) -> Vec3 {
        self.acceleration_from(&self.jacobi(t))
    }

    pub fn fields_at_particle(&self, t: f64) -> LabFields {
        self.fields_from(&self.jacobi(t))
    }

    pub fn kinematics(&self, t: f64) -> Kinematics {
        let j = self.jacobi(t);
        Kinematics {
            velocity: self.velocity_from(&j),
            acceleration: self.acceleration_from(&j),
            fields: self.fields_from(&j),
        }
    }

    pub fn z(&self, t: f64) -> f64 {
        t - self.phase(t) / self.wave.omega_l()
    }

    /// Vector potential A⟂ at ξ = t - z(t).
    pub fn vector_potential(&self, t: f64) -> Vec3 {
        let w = &self.wave;
        let xi = t - self.z(t);
        let (s, c) = (w.omega_l() * xi).sin_cos();
        Vec3::new(
            w.eta() * w.epsilon() * c,
            w.eta() * w.epsilon_perp() * s,
            0.0,
        )
    }

    fn transverse_integral(&self, a: f64, b: f64) -> (f64, f64) {
        let x = quad::integrate(|t| self.velocity(t).x, a, b, POSITION_TOL);
        let y = quad::integrate(|t| self.velocity(t).y, a, b, POSITION_TOL);
        (x, y)
    }

    /// Position with x(0) = 0; transverse part by adaptive quadrature.
    pub fn position(&self, t: f64) -> Vec3 {
        let (x, y) = self.transverse_integral(0.0, t);
        Vec3::new(x, y, self.z(t))
    }

    /// Closed-form transverse position for 0 ≤ μ² < 1:
    /// ∫cn = asin(k sn)/k and ∫sn = ln((dn - k cn)/(1 - k))/k.
    pub fn transverse_closed_form(&self, t: f64) -> Option<(f64, f64)> {
        let m = self.mu_sq;
        if !(0.0..1.0).contains(&m) {
            return None;
        }
        let w = &self.wave;
        let se = self.charge * w.eta();
        let j = self.jacobi(t);
        let (int_cn, int_sn) = if m == 0.0 {
            (j.sn, 1.0 - j.cn)
        } else {
            let k = m.sqrt();
            (
                (k * j.sn).asin() / k,
                ((j.dn - k * j.cn) / (1.0 - k)).ln() / k,
            )
        };
        Some((
            -se * w.epsilon() * int_cn / self.omega_prime,
            -se * w.epsilon_perp() * int_sn / self.omega_prime,
        ))
    }

    pub fn sample(&self, t: f64) -> TrajectorySample {
        let j = self.jacobi(t);
        let (x, y) = self.transverse_integral(0.0, t);
        TrajectorySample {
            t,
            position: Vec3::new(x, y, t - j.am / self.wave.omega_l()),
            velocity: self.velocity_from(&j),
            acceleration: self.acceleration_from(&j),
            phase: j.am,
        }
    }

    /// Samples on a nondecreasing time grid, integrating the transverse
    /// position cumulatively from t = 0.
    pub fn sample_series(&self, times: &[f64]) -> Result<Vec<TrajectorySample>> {
        if times.windows(2).any(|w| !(w[1] >= w[0])) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput(
                "time grid must be finite and nondecreasing".into(),
            ));
        }
        let mut out = Vec::with_capacity(times.len());
        let (mut x, mut y, mut last) = (0.0, 0.0, 0.0);
        for &t in times {
            let (dx, dy) = self.transverse_integral(last, t);
            x += dx;
            y += dy;
            last = t;
            let j = self.jacobi(t);
            out.push(TrajectorySample {
                t,
                position: Vec3::new(x, y, t - j.am / self.wave.omega_l()),
                velocity: self.velocity_from(&j),
                acceleration: self.acceleration_from(&j),
                phase: j.am,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn circular_orbit(eta: f64) -> Orbit {
        Orbit::new(
            WaveConfig::circular(eta).unwrap(),
            ChargeSign::Positive,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn circular_initial_velocity() {
        let v = circular_orbit(2.0).velocity(0.0);
        assert!((v.x + SQRT_2).abs() < 1e-15);
        assert_eq!(v.y, 0.0);
        assert_eq!(v.z, 0.0);
    }

    #[test]
    fn free_particle_drift() {
        let w = WaveConfig::new(1.0, 0.3, 0.0).unwrap();
        let o = Orbit::new(w, ChargeSign::Positive, 0.8).unwrap();
        for t in [0.0, 1.0, 17.3] {
            let v = o.velocity(t);
            assert_eq!(v.x, 0.0);
            assert_eq!(v.y, 0.0);
            assert!((v.z - 0.2).abs() < 1e-15);
            assert_eq!(o.acceleration(t), Vec3::ZERO);
            let f = o.fields_at_particle(t);
            assert_eq!(f.e, Vec3::ZERO);
            assert_eq!(f.b, Vec3::ZERO);
        }
    }

    #[test]
    fn circular_initial_acceleration_and_fields() {
        let o = circular_orbit(2.0);
        let a = o.acceleration(0.0);
        assert!(a.x.abs() < 1e-15);
        assert!((a.y + SQRT_2).abs() < 1e-15);
        assert_eq!(a.z, 0.0);
        let f = o.fields_at_particle(0.0);
        assert!(f.e.max_abs_diff(Vec3::new(0.0, -2.0 * FRAC_1_SQRT_2, 0.0)) < 1e-15);
        assert!(f.b.max_abs_diff(Vec3::new(2.0 * FRAC_1_SQRT_2, 0.0, 0.0)) < 1e-15);
    }

    #[test]
    fn circular_z_stays_zero() {
        let o = circular_orbit(1.7);
        for i in 0..20 {
            assert_eq!(o.z(0.9 * i as f64), 0.0);
        }
        assert_eq!(o.position(0.0), Vec3::ZERO);
    }

    #[test]
    fn degenerate_modulus_rejected() {
        // eta^2 (1 - 2 eps^2) / gamma^2 = 1 with eps = 0, eta = 1, gamma = 1
        let w = WaveConfig::new(1.0, 0.0, 1.0).unwrap();
        assert_eq!(
            Orbit::new(w, ChargeSign::Positive, 1.0),
            Err(Error::DegenerateOrbit)
        );
    }

    #[test]
    fn null_field_on_orbit() {
        let w = WaveConfig::new(1.0, 0.8, 1.3).unwrap();
        let o = Orbit::from_frame(w, ChargeSign::Positive, &FrameConfig::AverageRestFrame).unwrap();
        for i in 0..50 {
            let f = o.fields_at_particle(0.173 * i as f64);
            let scale = f.e.norm().max(1e-300);
            assert!(f.e.dot(f.b).abs() < 1e-12 * scale * scale);
            assert!((f.e.norm() - f.b.norm()).abs() < 1e-12 * scale);
            assert!(Vec3::Z.cross(f.e).max_abs_diff(f.b) < 1e-12 * scale);
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let w = WaveConfig::new(1.0, 0.3, 0.9).unwrap();
        let o = Orbit::from_frame(w, ChargeSign::Positive, &FrameConfig::AverageRestFrame).unwrap();
        assert!(o.mu_sq() > 0.0 && o.mu_sq() < 1.0);
        let times: Vec<f64> = (0..40).map(|i| 0.41 * i as f64).collect();
        let series = o.sample_series(&times).unwrap();
        for s in &series {
            let (x, y) = o.transverse_closed_form(s.t).unwrap();
            assert!(
                (s.position.x - x).abs() < 1e-9,
                "t={} {} vs {}",
                s.t,
                s.position.x,
                x
            );
            assert!((s.position.y - y).abs() < 1e-9);
        }
        let direct = o.position(times[25]);
        assert!((direct.x - series[25].position.x).abs() < 1e-9);
    }

    #[test]
    fn negative_charge_mirrors_transverse_motion() {
        let w = WaveConfig::new(1.0, 0.4, 1.1).unwrap();
        let p = Orbit::new(w, ChargeSign::Positive, 1.2).unwrap();
        let n = Orbit::new(w, ChargeSign::Negative, 1.2).unwrap();
        for t in [0.3, 2.0, 9.0] {
            let (vp, vn) = (p.velocity(t), n.velocity(t));
            assert_eq!(vp.x, -vn.x);
            assert_eq!(vp.y, -vn.y);
            assert_eq!(vp.z, vn.z);
        }
    }

    #[test]
    fn unsorted_grid_rejected() {
        let o = circular_orbit(1.0);
        assert!(o.sample_series(&[1.0, 0.5]).is_err());
    }
}
