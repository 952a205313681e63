//! Physical constants and the validated field configuration shared by all
//! solvers.

use crate::{Error, Result};

/// Electron mass, elementary charge and reduced Planck constant in SI units.
///
/// Fixed to CODATA 2018. Not user-overridable; tests that need modified
/// constants go through [`FieldConfig::build_with_constants`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Electron mass (kg).
    pub mass: f64,
    /// Elementary charge (C).
    pub charge: f64,
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
}

impl PhysicalConstants {
    pub const fn codata2018() -> Self {
        PhysicalConstants {
            mass: 9.109_383_7015e-31,
            charge: 1.602_176_634e-19,
            hbar: 1.054_571_817e-34,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

/// The physical scenario: emission energy and field strengths in SI units,
/// together with the derived scales every solver needs.
///
/// Sign convention: `force` is the magnitude of the electric force and the
/// force vector points along −z, so the detector half-space is z < 0 and the
/// k-th focusing resonance is centered at z_k = −F T_k²/(2m) with
/// T_k = kπ/ω_L.
///
/// Immutable after construction; safe to share across parallel workers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    /// Emission energy E (J).
    pub energy: f64,
    /// Electric force magnitude F = e·E_field (N).
    pub force: f64,
    /// Magnetic field B (T), aligned with the z axis.
    pub b_field: f64,
    /// Larmor frequency ω_L = eB/(2m) (rad/s). Zero when B = 0.
    pub omega_l: f64,
    /// Initial kinematic momentum p = √(2mE) (kg·m/s).
    pub momentum: f64,
    /// Electric length-scale parameter β = [m/(4ħ²F²)]^(1/3) (1/J).
    pub beta: f64,
    /// Landau-level half-spacing ħω_L (J).
    pub hbar_omega_l: f64,
    /// Constant set used to build this configuration.
    pub constants: PhysicalConstants,
}

/// Builds a [`FieldConfig`] from the conventional input units:
/// energy in μeV, electric force in eV/m and magnetic field in tesla.
///
/// The conversion uses 1 eV = e joules exactly.
pub fn build_config(e_uev: f64, f_ev_per_m: f64, b_t: f64) -> Result<FieldConfig> {
    FieldConfig::build(e_uev, f_ev_per_m, b_t)
}

impl FieldConfig {
    pub fn build(e_uev: f64, f_ev_per_m: f64, b_t: f64) -> Result<Self> {
        Self::build_with_constants(e_uev, f_ev_per_m, b_t, PhysicalConstants::codata2018())
    }

    /// Test hook: identical to [`FieldConfig::build`] but with an explicit
    /// constant set.
    pub fn build_with_constants(
        e_uev: f64,
        f_ev_per_m: f64,
        b_t: f64,
        constants: PhysicalConstants,
    ) -> Result<Self> {
        if !e_uev.is_finite() || e_uev <= 0.0 {
            return Err(Error::Validation {
                field: "E_ueV",
                message: format!("emission energy must be positive, got {e_uev}"),
            });
        }
        if !f_ev_per_m.is_finite() || f_ev_per_m <= 0.0 {
            return Err(Error::Validation {
                field: "F_eV_per_m",
                message: format!("electric force must be positive, got {f_ev_per_m}"),
            });
        }
        if !b_t.is_finite() || b_t < 0.0 {
            return Err(Error::Validation {
                field: "B_T",
                message: format!("magnetic field must be non-negative, got {b_t}"),
            });
        }
        let energy = e_uev * 1e-6 * constants.charge;
        let force = f_ev_per_m * constants.charge;
        Ok(Self::from_si(energy, force, b_t, constants))
    }

    /// Builds directly from SI values. Inputs are assumed validated.
    pub fn from_si(energy: f64, force: f64, b_field: f64, constants: PhysicalConstants) -> Self {
        let omega_l = constants.charge * b_field / (2.0 * constants.mass);
        FieldConfig {
            energy,
            force,
            b_field,
            omega_l,
            momentum: (2.0 * constants.mass * energy).sqrt(),
            beta: (constants.mass / (4.0 * constants.hbar.powi(2) * force.powi(2))).cbrt(),
            hbar_omega_l: constants.hbar * omega_l,
            constants,
        }
    }

    /// Converts back to the input units (μeV, eV/m, T).
    pub fn to_input_units(&self) -> (f64, f64, f64) {
        (
            self.energy / self.constants.charge * 1e6,
            self.force / self.constants.charge,
            self.b_field,
        )
    }

    pub fn is_magnetic(&self) -> bool {
        self.b_field > 0.0
    }

    /// Axis-return time T_k = kπ/ω_L of the k-th focus. Requires B > 0.
    pub fn t_k(&self, k: u32) -> f64 {
        k as f64 * std::f64::consts::PI / self.omega_l
    }

    /// Center z_k = −F T_k²/(2m) of the k-th focusing resonance.
    pub fn z_k(&self, k: u32) -> f64 {
        let t = self.t_k(k);
        -self.force * t * t / (2.0 * self.constants.mass)
    }

    /// Cyclotron radius ρ_max = p/(mω_L), the maximal lateral excursion.
    pub fn rho_max(&self) -> f64 {
        self.momentum / (self.constants.mass * self.omega_l)
    }

    /// Local de Broglie wavelength 2πħ/√(2m(E − Fz)) at height z.
    ///
    /// With the force along −z the kinetic energy grows on the detector side,
    /// so this shrinks with |z| there.
    pub fn de_broglie_wavelength(&self, z: f64) -> f64 {
        let kinetic = (self.energy - self.force * z).max(self.energy * 1e-3);
        2.0 * std::f64::consts::PI * self.constants.hbar
            / (2.0 * self.constants.mass * kinetic).sqrt()
    }
}
