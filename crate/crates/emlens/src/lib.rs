//! Simulation of electron emission from a pointlike isotropic monochromatic
//! source into parallel uniform electric and magnetic fields.
//!
//! The library computes the outgoing-wave Green function of the motion both as
//! an exponentially convergent Landau-channel series ([`green`]) and as a
//! regularized propagator time integral that serves as an independent
//! cross-check. On top of the Green function it provides the probability
//! current density and derived observables ([`observables`]), the full
//! classical-trajectory skeleton with caustics and focusing resonances
//! ([`paths`]), and a stationary-phase approximation built from the classical
//! paths ([`semiclassical`]).
//!
//! All quantities are carried in SI units internally; [`units::FieldConfig`]
//! performs the conversion from the conventional input units (μeV, eV/m, T).

pub mod grid;
pub mod green;
pub mod io;
pub mod observables;
pub mod paths;
pub mod selfcheck;
pub mod semiclassical;
pub mod specfun;
pub mod units;

pub use grid::{FieldMap, GridSpec};
pub use units::{build_config, FieldConfig, PhysicalConstants};

/// Version tag for the physical-constant set in use, echoed in run manifests.
pub const CONSTANTS_VERSION: &str = "CODATA-2018";

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A user-supplied parameter failed validation.
    #[error("invalid {field}: {message}")]
    Validation { field: &'static str, message: String },
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The Landau-channel series could not be brought below tolerance.
    #[error("series failure at channel n={channel}: {message}")]
    SeriesFailure { channel: usize, message: String },
    /// The time-integral oracle failed to converge under extrapolation.
    #[error("oracle failure: {0}")]
    OracleFailure(String),
    /// An adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature failure: {message} (best estimate {estimate:e})")]
    QuadratureFailure { message: String, estimate: f64 },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
