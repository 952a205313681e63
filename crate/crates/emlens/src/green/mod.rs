//! Outgoing-wave Green function of quantum ballistic motion in parallel
//! fields, by two independent routes: an exponentially convergent
//! Landau-channel series (B > 0) and a regularized propagator time integral
//! that also covers B = 0. The two routes cross-validate each other.

mod contour;
mod series;

pub use contour::{
    green_time_integral, green_time_integral_default, green_time_integral_with, ContourParams,
};
pub use series::{green_series, landau_channel_count, GreenRow, GreenTable};

use num_complex::Complex64;

/// A Green-function value together with its spatial gradient in cylindrical
/// coordinates. At ρ = 0 the radial derivative vanishes identically (s-wave
/// axial symmetry).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexField {
    pub g: Complex64,
    pub dg_drho: Complex64,
    pub dg_dz: Complex64,
}

impl ComplexField {
    pub fn is_finite(&self) -> bool {
        self.g.is_finite() && self.dg_drho.is_finite() && self.dg_dz.is_finite()
    }
}

/// Truncation report for one series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesDiagnostics {
    /// Number of open Landau channels (negative Airy argument).
    pub n_open: usize,
    /// Number of terms actually summed.
    pub n_used: usize,
    /// Absolute bound on the discarded tail, in the units of `g`.
    pub tail_bound: f64,
}
