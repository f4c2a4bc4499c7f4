//! Resonance scans over the field strength, peak location and integrator
//! convergence studies. All scans run in the circular / average-rest-frame
//! regime, where the analytic Rabi solution is available for comparison.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Model;
use crate::params::{ChargeSign, FrameConfig, ParticleConfig, WaveConfig};
use crate::spin::{
    Integrator, Propagator, SpinState, DEFAULT_STEPS_PER_PERIOD, MIN_STEPS_PER_PERIOD,
};

/// Shortest simulated window, in Rabi periods.
pub const MIN_RABI_PERIODS: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSettings {
    pub omega_l: f64,
    pub steps_per_period: usize,
    pub rabi_periods: f64,
    pub integrator: Integrator,
    pub charge_sign: ChargeSign,
    pub workers: usize,
    /// Target golden-section bracket width for [`find_resonance`].
    pub bracket_tol: f64,
}

impl Default for ScanSettings {
    fn default() -> Self {
        ScanSettings {
            omega_l: 1.0,
            steps_per_period: DEFAULT_STEPS_PER_PERIOD,
            rabi_periods: MIN_RABI_PERIODS,
            integrator: Integrator::default(),
            charge_sign: ChargeSign::Positive,
            workers: 1,
            bracket_tol: 1e-4,
        }
    }
}

impl ScanSettings {
    fn validate(&self) -> Result<()> {
        if self.steps_per_period < MIN_STEPS_PER_PERIOD {
            return Err(Error::InvalidInput(format!(
                "steps_per_period = {} below the minimum {MIN_STEPS_PER_PERIOD}",
                self.steps_per_period
            )));
        }
        if !(self.rabi_periods >= MIN_RABI_PERIODS && self.rabi_periods.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "rabi_periods = {} must be >= {MIN_RABI_PERIODS}",
                self.rabi_periods
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub eta: f64,
    pub g: f64,
    pub amplitude_analytic: f64,
    pub amplitude_numeric: f64,
    pub omega_s_analytic: f64,
    pub omega_s_numeric: f64,
    pub steps_per_period: usize,
    /// max_t |P_numeric - P_analytic| over the simulated window.
    pub residual: f64,
}

fn circular_model(eta: f64, g: f64, omega_l: f64, charge: ChargeSign) -> Result<Model> {
    Model::new(
        WaveConfig::from_epsilon_sq(omega_l, 0.5, eta)?,
        ParticleConfig::with_charge(g, charge)?,
        FrameConfig::AverageRestFrame,
    )
}

/// Vertex of the parabola through three points.
fn parabola_vertex((t0, p0): (f64, f64), (t1, p1): (f64, f64), (t2, p2): (f64, f64)) -> (f64, f64) {
    let (h0, h2) = (t0 - t1, t2 - t1);
    let (d0, d2) = ((p0 - p1) / h0, (p2 - p1) / h2);
    let a = (d0 - d2) / (h0 - h2);
    let b = d0 - a * h0;
    if a >= 0.0 {
        return (t1, p1);
    }
    (t1 - b / (2.0 * a), p1 - b * b / (4.0 * a))
}

/// Simulate one grid point and extract amplitude and Rabi frequency from
/// the first maximum of P(t).
pub fn measure(eta: f64, g: f64, settings: &ScanSettings) -> Result<ScanRecord> {
    settings.validate()?;
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidInput(format!(
            "scan requires finite eta > 0, got {eta}"
        )));
    }
    let model = circular_model(eta, g, settings.omega_l, settings.charge_sign)?;
    let rabi = model.rabi();
    let t_end = settings.rabi_periods * rabi.period();

    let propagator = Propagator::new(
        model.field(),
        SpinState::up(),
        t_end,
        settings.steps_per_period,
        settings.integrator,
    )?;
    let mut samples = Vec::with_capacity(propagator.n_steps() + 1);
    let mut residual: f64 = 0.0;
    for s in propagator {
        let s = s?;
        residual = residual.max((s.p_flip - rabi.probability(s.t)).abs());
        samples.push((s.t, s.p_flip));
    }

    let peak = samples
        .windows(3)
        .find(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
        .ok_or_else(|| Error::Regime(format!("no flip maximum found for eta = {eta}")))?;
    let (t_peak, p_peak) = parabola_vertex(peak[0], peak[1], peak[2]);

    Ok(ScanRecord {
        eta,
        g,
        amplitude_analytic: rabi.amplitude,
        amplitude_numeric: p_peak.clamp(0.0, 1.0),
        omega_s_analytic: rabi.omega_s,
        omega_s_numeric: PI / (2.0 * t_peak),
        steps_per_period: settings.steps_per_period,
        residual,
    })
}

/// Measure every grid point. Points are split into contiguous blocks, one
/// per worker; output order follows the grid.
pub fn scan_eta(grid: &[f64], g: f64, settings: &ScanSettings) -> Result<Vec<ScanRecord>> {
    settings.validate()?;
    if g == 1.0 {
        return Err(Error::DegenerateGyromagnetic { g });
    }
    if let Some(bad) = grid.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "scan grid entry {bad} must be finite and > 0"
        )));
    }
    let workers = settings.workers.clamp(1, grid.len().max(1));
    if workers == 1 {
        return grid.iter().map(|&eta| measure(eta, g, settings)).collect();
    }
    let chunk = grid.len().div_ceil(workers);
    let blocks: Vec<Result<Vec<ScanRecord>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|block| {
                scope.spawn(move || block.iter().map(|&eta| measure(eta, g, settings)).collect())
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(grid.len());
    for b in blocks {
        out.extend(b?);
    }
    Ok(out)
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(Error::InvalidInput(format!(
            "grid needs points >= 2 and lo < hi, got {points} points on [{lo}, {hi}]"
        )));
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceResult {
    pub g: f64,
    pub eta_peak: f64,
    /// √(4/(g-1)).
    pub eta_star: f64,
    pub bracket: (f64, f64),
    pub amplitude_peak: f64,
    pub evaluations: usize,
}

/// Golden-section maximization of the numeric flip amplitude over
/// η ∈ (0.1, 3η*].
pub fn find_resonance(g: f64, settings: &ScanSettings) -> Result<ResonanceResult> {
    if !(g > 1.0) {
        return Err(Error::NoResonance { g });
    }
    settings.validate()?;
    let eta_star = (4.0 / (g - 1.0)).sqrt();
    let tol = settings.bracket_tol;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bracket_tol = {tol} must be positive"
        )));
    }
    let mut evaluations = 0;
    let mut amp = |eta: f64| -> Result<f64> {
        evaluations += 1;
        Ok(measure(eta, g, settings)?.amplitude_numeric)
    };

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = ((0.1f64).min(eta_star / 10.0), 3.0 * eta_star);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (amp(c)?, amp(d)?);
    while b - a >= tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = amp(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = amp(d)?;
        }
    }
    let (eta_peak, amplitude_peak) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok(ResonanceResult {
        g,
        eta_peak,
        eta_star,
        bracket: (a, b),
        amplitude_peak,
        evaluations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCase {
    pub g: f64,
    pub eta: f64,
    pub omega_l: f64,
    pub rabi_periods: f64,
    pub integrator: Integrator,
}

impl ConvergenceCase {
    /// On-resonance g = 2, η = 2 over five Rabi periods with the midpoint stepper.
    pub fn resonance() -> Self {
        ConvergenceCase {
            g: 2.0,
            eta: 2.0,
            omega_l: 1.0,
            rabi_periods: 5.0,
            integrator: Integrator::Midpoint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub steps_per_period: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub points: Vec<ConvergencePoint>,
    /// Least-squares slope of -log(residual) against log(steps); `None`
    /// when some residual is exactly zero.
    pub order: Option<f64>,
}

pub fn convergence_study(
    steps_list: &[usize],
    case: &ConvergenceCase,
) -> Result<ConvergenceReport> {
    if steps_list.len() < 3 {
        return Err(Error::InvalidInput(
            "convergence study needs at least 3 step counts".into(),
        ));
    }
    if let Some(s) = steps_list.iter().find(|&&s| s < MIN_STEPS_PER_PERIOD) {
        return Err(Error::InvalidInput(format!(
            "step count {s} below {MIN_STEPS_PER_PERIOD}"
        )));
    }
    let model = circular_model(case.eta, case.g, case.omega_l, ChargeSign::Positive)?;
    let rabi = model.rabi();
    let t_end = case.rabi_periods * rabi.period();

    let mut points = Vec::with_capacity(steps_list.len());
    for &steps in steps_list {
        let mut residual: f64 = 0.0;
        for s in Propagator::new(
            model.field(),
            SpinState::up(),
            t_end,
            steps,
            case.integrator,
        )? {
            let s = s?;
            residual = residual.max((s.p_flip - rabi.probability(s.t)).abs());
        }
        points.push(ConvergencePoint {
            steps_per_period: steps,
            residual,
        });
    }

    let order = if points.iter().all(|p| p.residual > 0.0) {
        let xs: Vec<f64> = points
            .iter()
            .map(|p| (p.steps_per_period as f64).ln())
            .collect();
        let ys: Vec<f64> = points.iter().map(|p| p.residual.ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        if sxx > 0.0 {
            Some(-sxy / sxx)
        } else {
            None
        }
    } else {
        None
    };
    Ok(ConvergenceReport { points, order })
}
