//! 2D Gross-Pitaevskii simulator of the photon fluid.
//!
//! Works in healing-length units: lengths in ξ = ħ/(m v_s), times in ħ/μ,
//! speeds in v_s, and the background density is 1. In these units the
//! Bogoliubov spectrum of a contact interaction is ω(k) = √(k² + k⁴/4).

use std::io;

use thiserror::Error;

pub mod dispersion;
pub mod lattice;
pub mod obstacle;
mod phase;
pub mod ripple;
pub mod scales;
pub mod spectral;
pub mod stepper;
pub mod vortex;

pub use dispersion::{measure_dispersion, bogoliubov_frequency, DispersionProbe, DispersionSample};
pub use lattice::LatticeField;
pub use obstacle::{critical_velocity_sweep, run_obstacle_flow, ObstacleFlow, ObstacleRun, SweepResult};
pub use ripple::{run_ripple, RippleMeasurement, RippleSource};
pub use scales::Scales;
pub use stepper::SplitStepper;
pub use vortex::{detect_vortices, VortexRecord};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("time step {dt} exceeds the stability bound {max}")]
    TimeStep { dt: f64, max: f64 },
    #[error("field became non-finite near t = {time}")]
    NonFinite { time: f64 },
    #[error("wavenumber {k} is not commensurate with the box")]
    NotCommensurate { k: f64 },
    #[error("frequency for k = {k} is unresolved: {reason}")]
    UnresolvedFrequency { k: f64, reason: String },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("source amplitude {0} is outside the linear-response regime")]
    NonlinearSource(f64),
    #[error("obstacle too close to the boundary sponge: {0}")]
    ObstacleNearSponge(String),
    #[error("bad snapshot: {0}")]
    BadSnapshot(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}
