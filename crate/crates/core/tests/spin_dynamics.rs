use num_complex::Complex64;
use spinflip_core::experiments::{convergence_study, ConvergenceCase};
use spinflip_core::spin::{propagate, rotating_frame_check, Propagator};
use spinflip_core::{
    ChargeSign, FrameConfig, Integrator, Model, ParticleConfig, SpinState, WaveConfig,
};

fn circular(eta: f64, g: f64, charge: ChargeSign) -> Model {
    Model::new(
        WaveConfig::circular(eta).unwrap(),
        ParticleConfig::with_charge(g, charge).unwrap(),
        FrameConfig::AverageRestFrame,
    )
    .unwrap()
}

fn oracle_residual(model: &Model, periods: f64, steps: usize, integrator: Integrator) -> f64 {
    let rabi = model.rabi();
    let t_end = periods * rabi.period();
    Propagator::new(model.field(), SpinState::up(), t_end, steps, integrator)
        .unwrap()
        .map(|s| {
            let s = s.unwrap();
            (s.p_flip - rabi.probability(s.t)).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn oracle_agreement_both_charges() {
    for charge in [ChargeSign::Positive, ChargeSign::Negative] {
        for (g, eta) in [(2.0, 2.0), (2.0, 0.5), (1.5, 1.0), (2.5, 4.0)] {
            let m = circular(eta, g, charge);
            let r = oracle_residual(&m, 2.0, 2000, Integrator::Magnus4);
            assert!(r < 1e-6, "g={g} eta={eta} {charge:?}: {r}");
        }
    }
}

#[test]
fn oracle_agreement_below_g_one() {
    for (g, eta) in [(0.5, 1.0), (-1.0, 2.0)] {
        let m = circular(eta, g, ChargeSign::Positive);
        assert!(oracle_residual(&m, 2.0, 2000, Integrator::Magnus4) < 1e-6);
    }
}

#[test]
fn initial_state_symmetry() {
    for (eps, eta, g) in [
        (std::f64::consts::FRAC_1_SQRT_2, 1.3, 2.0),
        (0.3, 0.9, 2.2),
        (0.0, 0.6, 1.7),
    ] {
        let model = Model::new(
            WaveConfig::new(1.0, eps, eta).unwrap(),
            ParticleConfig::new(g).unwrap(),
            FrameConfig::AverageRestFrame,
        )
        .unwrap();
        let t_end = 30.0;
        let up = propagate(
            model.field(),
            SpinState::up(),
            t_end,
            1000,
            Integrator::Magnus4,
        )
        .unwrap();
        let down = propagate(
            model.field(),
            SpinState::down(),
            t_end,
            1000,
            Integrator::Magnus4,
        )
        .unwrap();
        for (a, b) in up.iter().zip(&down) {
            assert_eq!(a.t, b.t);
            let to_up = b.state.up.norm_sqr();
            assert!((a.p_flip - to_up).abs() < 1e-10, "t={}", a.t);
        }
    }
}

#[test]
fn elliptical_evolution_stays_physical() {
    let model = Model::new(
        WaveConfig::new(1.0, 0.4, 1.2).unwrap(),
        ParticleConfig::new(2.0).unwrap(),
        FrameConfig::AverageRestFrame,
    )
    .unwrap();
    assert!(!model.derived().analytic_available());
    let series = propagate(
        model.field(),
        SpinState::up(),
        200.0,
        500,
        Integrator::Magnus4,
    )
    .unwrap();
    for s in &series {
        assert!((0.0..=1.0).contains(&s.p_flip));
        assert!(s.state.norm_error() < 1e-12);
    }
    // In the rest frame the field repeats with the laser period.
    let period = model.orbit().period().unwrap();
    assert!((period - model.laser_period()).abs() < 1e-10);
}

#[test]
fn rotating_frame_reduces_to_constant_hamiltonian() {
    for (eta, g) in [(2.0, 2.0), (0.7, 3.0), (1.5, 0.4)] {
        let m = circular(eta, g, ChargeSign::Positive);
        let series =
            propagate(m.field(), SpinState::up(), 40.0, 2000, Integrator::Magnus4).unwrap();
        assert!(rotating_frame_check(&series, &m).unwrap() < 1e-9);
    }
}

#[test]
fn midpoint_error_quarters_when_dt_halves() {
    let case = ConvergenceCase {
        rabi_periods: 2.0,
        ..ConvergenceCase::resonance()
    };
    let r = convergence_study(&[500, 1000, 2000], &case).unwrap();
    for w in r.points.windows(2) {
        let ratio = w[0].residual / w[1].residual;
        assert!((ratio - 4.0).abs() < 0.4, "{r:?}");
    }
}

#[test]
fn norm_preserved_over_long_run() {
    let m = circular(2.0, 2.0, ChargeSign::Positive);
    let mut state = SpinState {
        up: Complex64::new(0.6, 0.0),
        down: Complex64::new(0.0, 0.8),
    };
    let t_end = 100.0 * m.laser_period();
    for s in Propagator::new(m.field(), state, t_end, 2000, Integrator::Magnus4).unwrap() {
        state = s.unwrap().state;
        assert!(state.norm_error() < 1e-12);
    }
    assert!(state.norm_error() < 1e-12, "{}", state.norm_error());
}
