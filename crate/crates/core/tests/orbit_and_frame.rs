use std::f64::consts::{FRAC_1_SQRT_2, PI};

use proptest::prelude::*;
use spinflip_core::params::{derive_params, flip_amplitude, solve_average_rest_frame};
use spinflip_core::quad::integrate;
use spinflip_core::{
    ChargeSign, EffectiveField, FrameConfig, Orbit, ParticleConfig, Vec3, WaveConfig,
};

const EPSILONS: [f64; 4] = [0.0, 0.6, FRAC_1_SQRT_2, 0.9];
const ETAS: [f64; 3] = [0.3, 1.0, 2.0];

fn rest_frame_orbit(eps: f64, eta: f64, charge: ChargeSign) -> Orbit {
    let wave = WaveConfig::new(1.0, eps, eta).unwrap();
    Orbit::from_frame(wave, charge, &FrameConfig::AverageRestFrame).unwrap()
}

fn quarter_period_by_quadrature(m: f64) -> f64 {
    integrate(
        |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(),
        0.0,
        PI / 2.0,
        1e-15,
    )
}

#[test]
fn frame_solver_average_dn_by_quadrature() {
    for (eps, eta) in [(0.0, 0.3), (0.0, 0.8), (0.3, 1.5), (0.9, 1.2), (0.98, 3.0)] {
        let wave = WaveConfig::new(1.0, eps, eta).unwrap();
        let gamma = solve_average_rest_frame(&wave).unwrap();
        let m = eta * eta * (1.0 - 2.0 * eps * eps) / (gamma * gamma);
        let half = 2.0 * quarter_period_by_quadrature(m);
        let orbit = Orbit::new(wave, ChargeSign::Positive, gamma).unwrap();
        let mean_dn = integrate(|u| orbit.plan().evaluate(u).dn, 0.0, half, 1e-14) / half;
        assert!(
            (gamma * mean_dn - 1.0).abs() < 1e-10,
            "eps={eps} eta={eta}: {}",
            gamma * mean_dn
        );
    }
    assert_eq!(
        solve_average_rest_frame(&WaveConfig::circular(7.5).unwrap()).unwrap(),
        1.0
    );
}

#[test]
fn transverse_momentum_identity() {
    for charge in [ChargeSign::Positive, ChargeSign::Negative] {
        for eps in EPSILONS {
            for eta in ETAS {
                let o = rest_frame_orbit(eps, eta, charge);
                let period = o.period().unwrap();
                for i in 0..1000 {
                    let t = period * i as f64 / 1000.0;
                    let v = o.velocity(t);
                    let a = o.vector_potential(t) * -o.charge();
                    let scale = eta;
                    assert!(
                        (v.x - a.x).abs() <= 1e-10 * scale,
                        "eps={eps} eta={eta} t={t}"
                    );
                    assert!(
                        (v.y - a.y).abs() <= 1e-10 * scale,
                        "eps={eps} eta={eta} t={t}"
                    );
                }
            }
        }
    }
}

#[test]
fn transverse_momentum_identity_in_explicit_frames() {
    for gamma_z in [0.7, 1.3, 2.5] {
        let wave = WaveConfig::new(1.0, 0.4, 1.1).unwrap();
        let o = Orbit::new(wave, ChargeSign::Positive, gamma_z).unwrap();
        for i in 0..500 {
            let t = 0.037 * i as f64;
            let v = o.velocity(t);
            let a = o.vector_potential(t) * -1.0;
            assert!((v.x - a.x).abs() < 1e-10 && (v.y - a.y).abs() < 1e-10);
        }
    }
}

#[test]
fn z_is_consistent_with_vz() {
    for eps in EPSILONS {
        for eta in ETAS {
            let o = rest_frame_orbit(eps, eta, ChargeSign::Positive);
            let h = 1e-5;
            for i in 0..50 {
                let t = 0.173 * i as f64;
                let num = (o.z(t + h) - o.z(t - h)) / (2.0 * h);
                let vz = o.velocity(t).z;
                assert!(
                    (num - vz).abs() < 1e-6 * vz.abs().max(1e-3),
                    "t={t} {num} vs {vz}"
                );
            }
        }
    }
}

#[test]
fn velocity_averages_vanish_in_rest_frame() {
    for eps in EPSILONS {
        for eta in ETAS {
            let o = rest_frame_orbit(eps, eta, ChargeSign::Positive);
            let full = o.period().unwrap();
            let vx = integrate(|t| o.velocity(t).x, 0.0, full, 1e-13) / full;
            let vy = integrate(|t| o.velocity(t).y, 0.0, full, 1e-13) / full;
            let vz = integrate(|t| o.velocity(t).z, 0.0, 0.5 * full, 1e-13) / (0.5 * full);
            assert!(
                vx.abs() < 1e-9 && vy.abs() < 1e-9 && vz.abs() < 1e-9,
                "{vx} {vy} {vz}"
            );
        }
    }
}

#[test]
fn acceleration_matches_velocity_derivative() {
    for (eps, eta) in [(0.0, 1.0), (0.6, 2.0), (0.9, 0.3), (0.95, 2.5)] {
        let o = rest_frame_orbit(eps, eta, ChargeSign::Negative);
        let h = 1e-5;
        for i in 0..40 {
            let t = 0.29 * i as f64;
            let num = (o.velocity(t + h) - o.velocity(t - h)) * (0.5 / h);
            let a = o.acceleration(t);
            assert!(num.max_abs_diff(a) < 1e-6 * a.norm().max(1e-3), "t={t}");
        }
    }
}

/// Circular polarization written with sin and cos only.
#[test]
fn circular_orbit_against_trig_reference() {
    for charge in [ChargeSign::Positive, ChargeSign::Negative] {
        let s = charge.value();
        for eta in [0.3, 1.0, 2.0, 6.0] {
            let o = rest_frame_orbit(FRAC_1_SQRT_2, eta, charge);
            let a = eta * FRAC_1_SQRT_2;
            for i in 0..200 {
                let t = 0.11 * i as f64 - 3.0;
                let (sn, cn) = t.sin_cos();
                let v = Vec3::new(-s * a * cn, -s * a * sn, 0.0);
                let acc = Vec3::new(s * a * sn, -s * a * cn, 0.0);
                let e = Vec3::new(a * sn, -a * cn, 0.0);
                let b = Vec3::new(a * cn, a * sn, 0.0);
                let k = o.kinematics(t);
                assert!(k.velocity.max_abs_diff(v) < 1e-12);
                assert!(k.acceleration.max_abs_diff(acc) < 1e-12);
                assert!(k.fields.e.max_abs_diff(e) < 1e-12);
                assert!(k.fields.b.max_abs_diff(b) < 1e-12);
                assert!(o.z(t).abs() < 1e-12);
                let (x, y) = o.transverse_closed_form(t).unwrap();
                assert!((x + s * a * sn).abs() < 1e-12);
                assert!((y + s * a * (1.0 - cn)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn cumulative_positions_match_closed_form() {
    let o = rest_frame_orbit(0.4, 1.3, ChargeSign::Positive);
    let times: Vec<f64> = (0..300).map(|i| 0.05 * i as f64).collect();
    let series = o.sample_series(&times).unwrap();
    for s in &series {
        let (x, y) = o.transverse_closed_form(s.t).unwrap();
        assert!(
            (s.position.x - x).abs() < 1e-9 && (s.position.y - y).abs() < 1e-9,
            "t={}",
            s.t
        );
        assert_eq!(s.velocity, o.velocity(s.t));
    }
}

#[test]
fn secular_phase_over_many_periods() {
    let o = rest_frame_orbit(0.2, 1.5, ChargeSign::Positive);
    let period = o.period().unwrap();
    let p0 = o.phase(0.3);
    let p1 = o.phase(0.3 + 1000.0 * period);
    assert!((p1 - p0 - 2000.0 * PI).abs() < 1e-8);
    assert!((o.z(0.3 + 1000.0 * period) - o.z(0.3)).abs() < 1e-8);
}

fn b_eff_field(eps: f64, eta: f64, g: f64) -> EffectiveField {
    EffectiveField::new(rest_frame_orbit(eps, eta, ChargeSign::Positive), g).unwrap()
}

/// A jump would show up as a sample far from the quadratic extrapolation of
/// the three before it; for a smooth field that residual is O(dt³).
#[test]
fn effective_field_continuity() {
    for (eps, eta) in [(0.0, 1.0), (0.5, 2.0), (0.95, 0.6), (FRAC_1_SQRT_2, 3.0)] {
        let f = b_eff_field(eps, eta, 2.0);
        let period = f.orbit().period().unwrap();
        let n = 10_000;
        let b: Vec<Vec3> = (0..=n)
            .map(|i| f.b_eff(period * i as f64 / n as f64))
            .collect();
        let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let worst = b
            .windows(4)
            .map(|w| w[3].max_abs_diff(w[2] * 3.0 - w[1] * 3.0 + w[0]))
            .fold(0.0, f64::max);
        assert!(
            worst < 1e-6 * scale,
            "eps={eps} eta={eta}: {worst} vs {scale}"
        );
    }
}

#[test]
fn effective_field_periodicity() {
    for (eps, eta, g) in [
        (0.0, 1.0, 2.0),
        (0.5, 2.0, 2.5),
        (0.95, 0.6, 0.7),
        (0.3, 1.7, -1.2),
    ] {
        let f = b_eff_field(eps, eta, g);
        let period = f.orbit().period().unwrap();
        for i in 0..100 {
            let t = 0.123 * i as f64;
            let a = f.b_eff(t);
            let b = f.b_eff(t + period);
            assert!(
                a.max_abs_diff(b) < 1e-9 * a.norm().max(1.0),
                "eps={eps} t={t}"
            );
        }
    }
}

#[test]
fn cone_magnitude_is_constant() {
    for (eta, g) in [(0.5, 2.0), (2.0, 2.0), (3.0, 1.5), (1.0, 0.3)] {
        let wave = WaveConfig::circular(eta).unwrap();
        let p = ParticleConfig::new(g).unwrap();
        let d = derive_params(&wave, &p, &FrameConfig::AverageRestFrame).unwrap();
        let cone = spinflip_core::field::circular_closed_form(
            &wave,
            &p,
            &FrameConfig::AverageRestFrame,
            &d,
        )
        .unwrap();
        let f = b_eff_field(FRAC_1_SQRT_2, eta, g);
        for i in 0..300 {
            let t = 0.07 * i as f64;
            assert!((f.b_eff(t).norm() - cone.magnitude).abs() < 1e-10 * cone.magnitude);
        }
    }
}

#[test]
fn elliptical_lab_fields_are_null() {
    let o = rest_frame_orbit(0.8, 1.7, ChargeSign::Positive);
    for i in 0..200 {
        let t = 0.0917 * i as f64;
        let f = o.fields_at_particle(t);
        assert!((f.e.norm() - f.b.norm()).abs() < 1e-12);
        assert!(f.e.dot(f.b).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn amplitude_bounded_and_peaked(eta in 0.0f64..20.0, g in prop_oneof![-5.0f64..0.99, 1.01f64..10.0]) {
        let a = flip_amplitude(eta, g).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        if g > 1.0 {
            let star = (4.0 / (g - 1.0)).sqrt();
            prop_assert!((flip_amplitude(star, g).unwrap() - 1.0).abs() < 1e-15);
            if eta < star {
                let b = flip_amplitude(eta + 0.5 * (star - eta), g).unwrap();
                prop_assert!(b >= a);
            }
            if (eta - star).abs() > 1e-6 {
                prop_assert!(a < 1.0);
            }
        } else {
            prop_assert!(a < 1.0);
        }
    }

    #[test]
    fn cone_angle_relation(eta in 1e-3f64..50.0, g in prop_oneof![-5.0f64..0.99, 1.01f64..10.0], eps in 0.0f64..1.0) {
        let wave = WaveConfig::new(1.0, eps, eta).unwrap();
        let p = ParticleConfig::new(g).unwrap();
        let d = derive_params(&wave, &p, &FrameConfig::explicit(1.0).unwrap()).unwrap();
        prop_assert!((d.theta.tan() * eta - d.kappa()).abs() < 1e-12 * d.kappa().max(1.0) * (1.0 + d.theta.tan()));
    }

    #[test]
    fn frequency_scaling(eta in 0.05f64..5.0, g in 1.1f64..4.0, omega in 0.1f64..10.0) {
        let p = ParticleConfig::new(g).unwrap();
        let base = derive_params(&WaveConfig::circular(eta).unwrap(), &p, &FrameConfig::AverageRestFrame).unwrap();
        let scaled = derive_params(
            &WaveConfig::from_epsilon_sq(2.0 * omega, 0.5, eta).unwrap(),
            &p,
            &FrameConfig::AverageRestFrame,
        ).unwrap();
        let unit = derive_params(
            &WaveConfig::from_epsilon_sq(omega, 0.5, eta).unwrap(),
            &p,
            &FrameConfig::AverageRestFrame,
        ).unwrap();
        prop_assert!((scaled.omega_s.unwrap() - 2.0 * unit.omega_s.unwrap()).abs() < 1e-13 * scaled.omega_s.unwrap());
        prop_assert_eq!(scaled.omega_l_prime, 2.0 * unit.omega_l_prime);
        prop_assert_eq!(scaled.amplitude, base.amplitude);
        prop_assert_eq!(scaled.theta, base.theta);
        prop_assert_eq!(scaled.mu_sq, base.mu_sq);
    }

    #[test]
    fn frame_fixed_point(eps in 0.0f64..1.0, eta in 0.0f64..3.0) {
        let wave = WaveConfig::new(1.0, eps, eta).unwrap();
        let gamma = solve_average_rest_frame(&wave).unwrap();
        let m = eta * eta * (1.0 - 2.0 * eps * eps) / (gamma * gamma);
        let k = spinflip_core::elliptic::complete_k(m).unwrap();
        prop_assert!((gamma - 2.0 * k / PI).abs() < 1e-12 * gamma.max(1.0) * 10.0);
        prop_assert!(m < 1.0);
    }
}
