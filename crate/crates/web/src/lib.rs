//! Browser bindings for the demo page in `www/`.
//!
//! Three operations: the flip probability P(t) against the Rabi formula,
//! the flip amplitude across field strength, and one period of the orbit.
//! Everything runs single-threaded.

use spinflip_core::experiments::{linear_grid, scan_eta, ScanSettings};
use spinflip_core::params::eta_star_sq;
use spinflip_core::spin::Propagator;
use spinflip_core::{
    ChargeSign, FrameConfig, Integrator, Model, Orbit, ParticleConfig, Result, SpinState,
    WaveConfig,
};
use wasm_bindgen::prelude::*;

/// Points handed to the page per curve, at most.
const MAX_POINTS: usize = 2000;

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct FlipSeries {
    t: Vec<f64>,
    numeric: Vec<f64>,
    analytic: Vec<f64>,
}

#[wasm_bindgen]
impl FlipSeries {
    #[wasm_bindgen(getter)]
    pub fn t(&self) -> Vec<f64> {
        self.t.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn numeric(&self) -> Vec<f64> {
        self.numeric.clone()
    }

    /// NaN outside circular polarization, where no closed form exists.
    #[wasm_bindgen(getter)]
    pub fn analytic(&self) -> Vec<f64> {
        self.analytic.clone()
    }
}

/// P(t) over `laser_periods` periods, decimated to at most `MAX_POINTS` rows.
pub fn flip_series(
    eta: f64,
    g: f64,
    epsilon_sq: f64,
    laser_periods: f64,
    steps_per_period: usize,
) -> Result<FlipSeries> {
    let model = Model::new(
        WaveConfig::from_epsilon_sq(1.0, epsilon_sq, eta)?,
        ParticleConfig::new(g)?,
        FrameConfig::AverageRestFrame,
    )?;
    let rabi = model.rabi();
    let t_end = laser_periods * model.laser_period();
    let prop = Propagator::new(
        model.field(),
        SpinState::up(),
        t_end,
        steps_per_period,
        Integrator::Magnus4,
    )?;
    let n = prop.n_steps();
    let every = n.div_ceil(MAX_POINTS).max(1);
    let mut out = FlipSeries {
        t: Vec::new(),
        numeric: Vec::new(),
        analytic: Vec::new(),
    };
    for (k, s) in prop.enumerate() {
        let s = s?;
        if !k.is_multiple_of(every) && k != n {
            continue;
        }
        out.t.push(s.t);
        out.numeric.push(s.p_flip);
        out.analytic.push(if rabi.valid {
            rabi.probability(s.t)
        } else {
            f64::NAN
        });
    }
    Ok(out)
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct ResonanceCurve {
    eta: Vec<f64>,
    numeric: Vec<f64>,
    analytic: Vec<f64>,
    eta_star: f64,
}

#[wasm_bindgen]
impl ResonanceCurve {
    #[wasm_bindgen(getter)]
    pub fn eta(&self) -> Vec<f64> {
        self.eta.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn numeric(&self) -> Vec<f64> {
        self.numeric.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn analytic(&self) -> Vec<f64> {
        self.analytic.clone()
    }

    /// NaN for g < 1, where there is no resonance.
    #[wasm_bindgen(getter, js_name = etaStar)]
    pub fn eta_star(&self) -> f64 {
        self.eta_star
    }
}

/// Flip amplitude on a grid of η, circular polarization.
pub fn resonance_curve(
    g: f64,
    eta_min: f64,
    eta_max: f64,
    points: usize,
    steps_per_period: usize,
) -> Result<ResonanceCurve> {
    let grid = linear_grid(eta_min, eta_max, points)?;
    let settings = ScanSettings {
        steps_per_period,
        ..ScanSettings::default()
    };
    let records = scan_eta(&grid, g, &settings)?;
    let eta_star = eta_star_sq(g).map_or(f64::NAN, |e| if e > 0.0 { e.sqrt() } else { f64::NAN });
    Ok(ResonanceCurve {
        eta: grid,
        numeric: records.iter().map(|r| r.amplitude_numeric).collect(),
        analytic: records.iter().map(|r| r.amplitude_analytic).collect(),
        eta_star,
    })
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct OrbitPath {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    gamma_z: f64,
}

#[wasm_bindgen]
impl OrbitPath {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn z(&self) -> Vec<f64> {
        self.z.clone()
    }

    #[wasm_bindgen(getter, js_name = gammaZ)]
    pub fn gamma_z(&self) -> f64 {
        self.gamma_z
    }
}

/// One period of the average-rest-frame orbit.
pub fn orbit_path(eta: f64, epsilon_sq: f64, samples: usize) -> Result<OrbitPath> {
    let wave = WaveConfig::from_epsilon_sq(1.0, epsilon_sq, eta)?;
    let orbit = Orbit::from_frame(wave, ChargeSign::Positive, &FrameConfig::AverageRestFrame)?;
    let period = orbit.period().unwrap_or(std::f64::consts::TAU);
    let samples = samples.clamp(2, MAX_POINTS);
    let times: Vec<f64> = (0..samples)
        .map(|i| period * i as f64 / (samples - 1) as f64)
        .collect();
    let series = orbit.sample_series(&times)?;
    Ok(OrbitPath {
        x: series.iter().map(|s| s.position.x).collect(),
        y: series.iter().map(|s| s.position.y).collect(),
        z: series.iter().map(|s| s.position.z).collect(),
        gamma_z: orbit.gamma_z(),
    })
}

#[wasm_bindgen(js_name = flipSeries)]
pub fn flip_series_js(
    eta: f64,
    g: f64,
    epsilon_sq: f64,
    laser_periods: f64,
    steps_per_period: usize,
) -> std::result::Result<FlipSeries, JsError> {
    Ok(flip_series(
        eta,
        g,
        epsilon_sq,
        laser_periods,
        steps_per_period,
    )?)
}

#[wasm_bindgen(js_name = resonanceCurve)]
pub fn resonance_curve_js(
    g: f64,
    eta_min: f64,
    eta_max: f64,
    points: usize,
    steps_per_period: usize,
) -> std::result::Result<ResonanceCurve, JsError> {
    Ok(resonance_curve(
        g,
        eta_min,
        eta_max,
        points,
        steps_per_period,
    )?)
}

#[wasm_bindgen(js_name = orbitPath)]
pub fn orbit_path_js(
    eta: f64,
    epsilon_sq: f64,
    samples: usize,
) -> std::result::Result<OrbitPath, JsError> {
    Ok(orbit_path(eta, epsilon_sq, samples)?)
}
