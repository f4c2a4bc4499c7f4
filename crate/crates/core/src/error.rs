use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// g = 1 makes the |1-g| prefactor vanish and kappa diverge.
    #[error("degenerate gyromagnetic ratio g = {g}")]
    DegenerateGyromagnetic { g: f64 },

    #[error("no spin-flip resonance for g = {g} (requires g > 1)")]
    NoResonance { g: f64 },

    #[error("average rest frame unreachable; last iterate gamma_z = {last}")]
    FrameUnreachable { last: f64 },

    #[error("elliptic domain error: {0}")]
    EllipticDomain(String),

    /// mu^2 = 1: the orbit has no period and K diverges.
    #[error("degenerate orbit: squared elliptic modulus is exactly 1")]
    DegenerateOrbit,

    #[error("outside validity regime: {0}")]
    Regime(String),

    #[error("step too large: dt * |H| = {phase} >= pi")]
    StepSize { phase: f64 },
}

impl Error {
    /// True for errors that come from physics/numerics rather than bad input.
    pub fn is_numeric(&self) -> bool {
        !matches!(self, Error::InvalidInput(_))
    }

    /// Stable snake_case tag for machine-readable reporting.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::DegenerateGyromagnetic { .. } => "degenerate_gyromagnetic",
            Error::NoResonance { .. } => "no_resonance",
            Error::FrameUnreachable { .. } => "frame_unreachable",
            Error::EllipticDomain(_) => "elliptic_domain",
            Error::DegenerateOrbit => "degenerate_orbit",
            Error::Regime(_) => "regime",
            Error::StepSize { .. } => "step_size",
        }
    }
}
