//! Semiclassical spin dynamics of a charged spin-1/2 particle in an intense
//! elliptically polarized plane wave.
//!
//! The classical orbit is exact (Jacobi elliptic functions); the spin sees
//! the rest-frame magnetic field plus the leading Thomas term along that
//! orbit and evolves unitarily. For circular polarization in the average
//! rest frame the effective field is a rotating cone and the flip
//! probability has a closed Rabi form, which the numerics reproduce.

pub mod elliptic;
pub mod error;
pub mod experiments;
pub mod field;
pub mod model;
pub mod params;
pub mod quad;
pub mod spin;
pub mod trajectory;
pub mod vec3;

pub use error::{Error, Result};
pub use field::{EffectiveField, FieldSample, RotatingConeField};
pub use model::Model;
pub use params::{ChargeSign, DerivedParams, FrameConfig, ParticleConfig, WaveConfig};
pub use spin::{Integrator, RabiSolution, SpinSample, SpinState};
pub use trajectory::{LabFields, Orbit, TrajectorySample};
pub use vec3::Vec3;
