//! Photon fluid in a nonlinear Fabry-Perot cavity.
//!
//! The crate goes from cavity geometry and Kerr-medium parameters to the
//! Bogoliubov spectrum of the trapped photons, and ships a 2D
//! Gross-Pitaevskii simulator that checks the same physics numerically.
//!
//! - [`units`]: CGS constants and the few conversions needed at the edges.
//! - [`cavity`]: effective photon mass and free dispersion.
//! - [`medium`]: Kerr coefficient, V(0), N₀, μ, v_s and fluid timescales.
//! - [`bogoliubov`]: quasiparticle spectrum, κ_c, Landau velocity, depletion.
//! - [`fluidsim`]: split-step GPE solver and the numerical experiments.

pub mod bogoliubov;
pub mod cavity;
pub mod fluidsim;
pub mod medium;
pub mod units;

pub use bogoliubov::{DispersionCurve, InteractionKernel, QuasiparticleMode};
pub use cavity::{CavityGeometry, FreeDispersion};
pub use medium::{CondensateParams, DrivenFluid, FluidTimescales, MediumSpec};
