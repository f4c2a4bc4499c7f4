//! Subcommand bodies. Each returns data tables; writing is left to the caller.

use spinflip_core::elliptic::{complete_k, reduce_modulus};
use spinflip_core::experiments::{find_resonance, linear_grid, scan_eta, ScanSettings};
use spinflip_core::spin::Propagator;
use spinflip_core::{Error, Orbit, Result, SpinState};

use crate::config::{FrameSection, RunConfig};
use crate::output::{Cell, DataTable};

pub const SIMULATE_COLUMNS: [&str; 7] = [
    "t",
    "p_flip",
    "p_flip_analytic",
    "bx",
    "by",
    "bz",
    "norm_err",
];
pub const FIELD_COLUMNS: [&str; 10] = [
    "t",
    "b_rest_x",
    "b_rest_y",
    "b_rest_z",
    "b_thomas_x",
    "b_thomas_y",
    "b_thomas_z",
    "b_eff_x",
    "b_eff_y",
    "b_eff_z",
];
pub const SCAN_COLUMNS: [&str; 8] = [
    "eta",
    "g",
    "amp_num",
    "amp_ana",
    "omega_s_num",
    "omega_s_ana",
    "residual",
    "steps",
];
pub const RESONANCE_COLUMNS: [&str; 7] = [
    "g",
    "eta_peak",
    "eta_star",
    "bracket_lo",
    "bracket_hi",
    "amp_peak",
    "evaluations",
];
pub const TRAJECTORY_COLUMNS: [&str; 17] = [
    "t", "x", "y", "z", "vx", "vy", "vz", "ax", "ay", "az", "phase", "ex", "ey", "ez", "bx", "by",
    "bz",
];
pub const FRAME_COLUMNS: [&str; 8] = [
    "omega_l",
    "epsilon_sq",
    "eta",
    "gamma_z",
    "mu_sq",
    "omega_l_prime",
    "period",
    "fixed_point_residual",
];
pub const ELLIPTIC_COLUMNS: [&str; 5] = ["u", "sn", "cn", "dn", "am"];

/// Whether step `k` of `n` is emitted.
fn emitted(k: usize, n: usize, every: usize) -> bool {
    k.is_multiple_of(every) || k == n
}

#[derive(Debug)]
pub struct Simulation {
    pub spin: DataTable,
    pub field: Option<DataTable>,
}

pub fn simulate(cfg: &RunConfig, with_field: bool) -> Result<Simulation> {
    let model = cfg.model()?;
    let rabi = model.rabi();
    let field_model = model.field();
    let t_end = cfg.sim.t_end * model.laser_period();
    let propagator = Propagator::new(
        field_model,
        SpinState::up(),
        t_end,
        cfg.sim.steps_per_period,
        cfg.sim.integrator,
    )?;
    let n = propagator.n_steps();

    let mut spin = DataTable::new(&SIMULATE_COLUMNS);
    let mut field = with_field.then(|| DataTable::new(&FIELD_COLUMNS));
    for (k, s) in propagator.enumerate() {
        let s = s?;
        if !emitted(k, n, cfg.sim.sample_every) {
            continue;
        }
        let f = field_model.sample(s.t);
        let analytic = if rabi.valid {
            rabi.probability(s.t)
        } else {
            f64::NAN
        };
        spin.push_floats(&[
            s.t,
            s.p_flip,
            analytic,
            f.b_eff.x,
            f.b_eff.y,
            f.b_eff.z,
            s.state.norm_error(),
        ]);
        if let Some(table) = field.as_mut() {
            let mut row = vec![s.t];
            row.extend(f.b_rest.to_array());
            row.extend(f.b_thomas.to_array());
            row.extend(f.b_eff.to_array());
            table.push_floats(&row);
        }
    }
    Ok(Simulation { spin, field })
}

fn scan_settings(cfg: &RunConfig, workers: usize) -> Result<ScanSettings> {
    if cfg.wave.epsilon_sq != 0.5 || cfg.frame != FrameSection::AverageRestFrame {
        return Err(Error::Regime(
            "amplitude scans need circular polarization (epsilon_sq = 0.5) in the average rest frame; \
             use simulate for elliptical time series"
                .into(),
        ));
    }
    Ok(ScanSettings {
        omega_l: cfg.wave.omega_l,
        steps_per_period: cfg.sim.steps_per_period,
        rabi_periods: cfg
            .scan
            .map_or(spinflip_core::experiments::MIN_RABI_PERIODS, |s| {
                s.rabi_periods
            }),
        integrator: cfg.sim.integrator,
        charge_sign: cfg.particle.charge_sign,
        workers,
        bracket_tol: cfg.resonance.bracket_tol,
    })
}

pub fn scan(cfg: &RunConfig, workers: usize) -> Result<DataTable> {
    let section = cfg.scan.ok_or_else(|| {
        Error::InvalidInput("scan needs a [scan] section (eta_min, eta_max, points)".into())
    })?;
    let settings = scan_settings(cfg, workers)?;
    let grid = linear_grid(section.eta_min, section.eta_max, section.points)?;
    let records = scan_eta(&grid, cfg.particle.g, &settings)?;
    let mut table = DataTable::new(&SCAN_COLUMNS);
    for r in records {
        table.push(vec![
            Cell::Float(r.eta),
            Cell::Float(r.g),
            Cell::Float(r.amplitude_numeric),
            Cell::Float(r.amplitude_analytic),
            Cell::Float(r.omega_s_numeric),
            Cell::Float(r.omega_s_analytic),
            Cell::Float(r.residual),
            Cell::Int(r.steps_per_period as i64),
        ]);
    }
    Ok(table)
}

pub fn resonance(cfg: &RunConfig) -> Result<DataTable> {
    let settings = scan_settings(cfg, 1)?;
    let r = find_resonance(cfg.particle.g, &settings)?;
    let mut table = DataTable::new(&RESONANCE_COLUMNS);
    table.push(vec![
        Cell::Float(r.g),
        Cell::Float(r.eta_peak),
        Cell::Float(r.eta_star),
        Cell::Float(r.bracket.0),
        Cell::Float(r.bracket.1),
        Cell::Float(r.amplitude_peak),
        Cell::Int(r.evaluations as i64),
    ]);
    Ok(table)
}

fn orbit(cfg: &RunConfig) -> Result<Orbit> {
    Orbit::from_frame(
        cfg.wave_config()?,
        cfg.particle.charge_sign,
        &cfg.frame_config()?,
    )
}

pub fn trajectory(cfg: &RunConfig) -> Result<DataTable> {
    let orbit = orbit(cfg)?;
    let laser_period = std::f64::consts::TAU / cfg.wave.omega_l;
    let dt = laser_period / cfg.sim.steps_per_period as f64;
    let t_end = cfg.sim.t_end * laser_period;
    let n = (t_end / dt * (1.0 - 1e-12)).ceil() as usize;
    let times: Vec<f64> = (0..=n)
        .filter(|&k| emitted(k, n, cfg.sim.sample_every))
        .map(|k| if k == n { t_end } else { k as f64 * dt })
        .collect();
    let mut table = DataTable::new(&TRAJECTORY_COLUMNS);
    for s in orbit.sample_series(&times)? {
        let f = orbit.fields_at_particle(s.t);
        let mut row = vec![s.t];
        row.extend(s.position.to_array());
        row.extend(s.velocity.to_array());
        row.extend(s.acceleration.to_array());
        row.push(s.phase);
        row.extend(f.e.to_array());
        row.extend(f.b.to_array());
        table.push_floats(&row);
    }
    Ok(table)
}

pub fn frame(cfg: &RunConfig) -> Result<DataTable> {
    let orbit = orbit(cfg)?;
    let (gamma_z, mu_sq) = (orbit.gamma_z(), orbit.mu_sq());
    let residual = match (cfg.frame, complete_k(mu_sq)) {
        (FrameSection::AverageRestFrame, Ok(k)) => gamma_z - 2.0 * k / std::f64::consts::PI,
        _ => f64::NAN,
    };
    let mut table = DataTable::new(&FRAME_COLUMNS);
    table.push_floats(&[
        cfg.wave.omega_l,
        cfg.wave.epsilon_sq,
        cfg.wave.eta,
        gamma_z,
        mu_sq,
        orbit.omega_prime(),
        orbit.period().unwrap_or(f64::INFINITY),
        residual,
    ]);
    Ok(table)
}

pub fn elliptic(m: f64, u_min: f64, u_max: f64, points: usize) -> Result<DataTable> {
    if points < 2 || !(u_min.is_finite() && u_max.is_finite()) || u_max <= u_min {
        return Err(Error::InvalidInput(format!(
            "elliptic grid needs points >= 2 and u_min < u_max, got {points} on [{u_min}, {u_max}]"
        )));
    }
    let plan = reduce_modulus(m)?;
    let mut table = DataTable::new(&ELLIPTIC_COLUMNS);
    for u in linear_grid(u_min, u_max, points)? {
        let j = plan.evaluate(u);
        table.push_floats(&[u, j.sn, j.cn, j.dn, j.am]);
    }
    Ok(table)
}

/// Default upper end of the elliptic grid: one real period, or 10 at m = 1.
pub fn default_u_max(m: f64) -> Result<f64> {
    Ok(reduce_modulus(m)?.real_period().unwrap_or(10.0))
}
