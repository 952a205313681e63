//! Landau-channel series for the Green function.
//!
//! G(ρ, z) = s·(ħω_L/(Fβ))(m²/ħ⁴) e^{−u/2} Σ_n L_n(u)
//!             · Ci(2β[Fz − E + ħω_L(2n+1)]) · Ai(2β[−E + ħω_L(2n+1)])
//!
//! with u = mω_Lρ²/ħ and Ci = Bi + iAi. The overall sign s = −1 makes the
//! sum agree with the retarded propagator integral (Im G(o,o;E) < 0); see the
//! mutual-oracle tests. The Ai factor decays doubly exponentially once the
//! channel closes, which both guarantees convergence on the detector side
//! (z < 0) and provides a rigorous tail bound for truncation.

use super::{ComplexField, SeriesDiagnostics};
use crate::specfun::{airy, weighted_laguerre};
use crate::units::FieldConfig;
use crate::{Error, Result};
use num_complex::Complex64;

/// Sign relating the printed series to the retarded Green function.
const SERIES_SIGN: f64 = -1.0;

/// Per-configuration caches: channel energies and the z-independent Airy
/// factors Ai(a_n). Build once, reuse for every point of a scan.
#[derive(Debug, Clone)]
pub struct GreenTable {
    cfg: FieldConfig,
    tol: f64,
    n_open: usize,
    n_hard: usize,
    /// a_n = a_base + n·a_step = 2β[−E + ħω_L(2n+1)].
    a_base: f64,
    a_step: f64,
    ai: Vec<f64>,
    ai_bound_next: Vec<f64>,
    prefactor: f64,
    two_beta_f: f64,
    /// u = u_coeff·ρ².
    u_coeff: f64,
}

/// Number of open Landau channels: max{n : ħω_L(2n+1) < E} + 1.
pub fn landau_channel_count(cfg: &FieldConfig) -> Result<usize> {
    if !cfg.is_magnetic() {
        return Err(Error::Domain(
            "landau_channel_count requires B > 0".into(),
        ));
    }
    let x = cfg.energy / (2.0 * cfg.hbar_omega_l) - 0.5;
    if x < 0.0 {
        Ok(0)
    } else {
        Ok(x.floor() as usize + 1)
    }
}

impl GreenTable {
    pub fn new(cfg: &FieldConfig, tol: f64) -> Result<Self> {
        if !cfg.is_magnetic() {
            return Err(Error::Domain(
                "green_series requires B > 0; use green_time_integral for B = 0".into(),
            ));
        }
        if !(tol > 0.0 && tol <= 1e-3) {
            return Err(Error::Validation {
                field: "tol",
                message: format!("tolerance must lie in (0, 1e-3], got {tol}"),
            });
        }
        let hbar = cfg.constants.hbar;
        let n_open = landau_channel_count(cfg)?;
        let a_step = 4.0 * cfg.beta * cfg.hbar_omega_l;
        let a_base = 2.0 * cfg.beta * (cfg.hbar_omega_l - cfg.energy);
        // Hard ceiling: continue until the Ai bound alone is ~1e-28, beyond
        // which no admissible tolerance can need more terms.
        let a_req = 21.5_f64;
        let n_hard = (((a_req - a_base) / a_step).ceil() as usize).max(n_open + 16) + 8;
        if n_hard > n_open + 2_000_000 {
            return Err(Error::Domain(format!(
                "series table would need {n_hard} channels; B is too small for the series route"
            )));
        }
        let mut ai_vals = Vec::with_capacity(n_hard + 1);
        for n in 0..=n_hard {
            let a_n = a_base + a_step * n as f64;
            ai_vals.push(airy(a_n)?.ai);
        }
        let mut ai_bound_next = Vec::with_capacity(n_hard + 1);
        for n in 0..=n_hard {
            let a_next = a_base + a_step * (n + 1) as f64;
            ai_bound_next.push(crate::specfun::airy_tail_bound(a_next, a_step));
        }
        let omega_l = cfg.omega_l;
        let m = cfg.constants.mass;
        let prefactor =
            SERIES_SIGN * (cfg.hbar_omega_l / (cfg.force * cfg.beta)) * m * m / hbar.powi(4);
        Ok(GreenTable {
            cfg: *cfg,
            tol,
            n_open,
            n_hard,
            a_base,
            a_step,
            ai: ai_vals,
            ai_bound_next,
            prefactor,
            two_beta_f: 2.0 * cfg.beta * cfg.force,
            u_coeff: m * omega_l / hbar,
        })
    }

    pub fn n_open(&self) -> usize {
        self.n_open
    }

    pub fn config(&self) -> &FieldConfig {
        &self.cfg
    }

    /// Precomputes the z-dependent factors Ci(b_n), Ci′(b_n) for one height.
    pub fn row(&self, z: f64) -> Result<GreenRow<'_>> {
        let mut ci = Vec::with_capacity(self.n_hard + 1);
        let mut ci_prime = Vec::with_capacity(self.n_hard + 1);
        for n in 0..=self.n_hard {
            let b_n = self.a_base + self.a_step * n as f64 + self.two_beta_f * z;
            match airy(b_n) {
                Ok(p) => {
                    ci.push(p.ci());
                    ci_prime.push(p.ci_prime());
                }
                Err(_) => {
                    // Bi overflows before the tail closed: only possible on
                    // the non-detector side far above the turning point.
                    return Err(Error::SeriesFailure {
                        channel: n,
                        message: format!(
                            "Ci factor overflows at z = {z} before convergence"
                        ),
                    });
                }
            }
        }
        Ok(GreenRow { table: self, z, ci, ci_prime })
    }

    /// One-shot evaluation; maps should hold a [`GreenRow`] per height
    /// instead.
    pub fn eval(&self, rho: f64, z: f64) -> Result<(ComplexField, SeriesDiagnostics)> {
        self.row(z)?.eval(rho)
    }
}

/// Row cache for a fixed height z.
pub struct GreenRow<'a> {
    table: &'a GreenTable,
    z: f64,
    ci: Vec<Complex64>,
    ci_prime: Vec<Complex64>,
}

impl GreenRow<'_> {
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn eval(&self, rho: f64) -> Result<(ComplexField, SeriesDiagnostics)> {
        let t = self.table;
        if rho == 0.0 && self.z == 0.0 {
            return Err(Error::Domain(
                "green function is singular at the source point".into(),
            ));
        }
        if rho < 0.0 {
            return Err(Error::Domain(format!("rho must be non-negative, got {rho}")));
        }
        let u = t.u_coeff * rho * rho;
        let lag = weighted_laguerre(t.n_hard, u)?;
        let du_drho = 2.0 * t.u_coeff * rho;

        let mut sum = Kahan::default();
        let mut sum_dr = Kahan::default();
        let mut sum_dz = Kahan::default();
        let mut w_recent = 0.0f64;
        let mut n_used = t.n_hard;
        let mut tail = f64::INFINITY;
        for n in 0..=t.n_hard {
            let w = lag.values[n];
            let term = t.ai[n] * self.ci[n];
            sum.add(w * term);
            sum_dz.add(w * t.ai[n] * self.ci_prime[n]);
            sum_dr.add(lag.derivatives[n] * term);
            // Running maximum of the weighted-Laguerre envelope; past its peak
            // the envelope only decays, so this majorizes the remaining terms.
            w_recent = w_recent.max(w.abs());
            if n >= t.n_open {
                // Remaining terms are bounded by the decaying Ai envelope
                // times the Ci magnitude bound and the recent Laguerre scale.
                let b_next = t.a_base + t.a_step * (n + 1) as f64 + t.two_beta_f * self.z;
                if b_next > -0.5 {
                    return Err(Error::SeriesFailure {
                        channel: n,
                        message: format!(
                            "series does not converge at z = {} (non-detector side)",
                            self.z
                        ),
                    });
                }
                let ci_bound = 0.9;
                tail = w_recent.max(1e-30) * ci_bound * t.ai_bound_next[n];
                if tail <= t.tol * sum.value().norm() && n >= t.n_open + 4 {
                    n_used = n + 1;
                    break;
                }
            }
        }
        let tail_abs = tail * t.prefactor.abs();
        if !tail_abs.is_finite() || (tail > t.tol * sum.value().norm() && n_used == t.n_hard) {
            return Err(Error::SeriesFailure {
                channel: t.n_hard,
                message: format!(
                    "tail bound {tail:e} not below tolerance after {} channels",
                    t.n_hard
                ),
            });
        }

        let g = t.prefactor * sum.value();
        let dg_dz = t.prefactor * t.two_beta_f * sum_dz.value();
        let dg_drho = if rho == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            t.prefactor * du_drho * sum_dr.value()
        };
        Ok((
            ComplexField { g, dg_drho, dg_dz },
            SeriesDiagnostics {
                n_open: t.n_open,
                n_used,
                tail_bound: tail_abs,
            },
        ))
    }
}

/// Evaluates the Landau-channel series at a single point.
///
/// Requires B > 0 and converges for detector-side heights z < 0; `tol` is the
/// relative truncation tolerance in (0, 1e-3].
pub fn green_series(
    cfg: &FieldConfig,
    rho: f64,
    z: f64,
    tol: f64,
) -> Result<(ComplexField, SeriesDiagnostics)> {
    GreenTable::new(cfg, tol)?.eval(rho, z)
}

#[derive(Default)]
struct Kahan {
    sum_re: f64,
    c_re: f64,
    sum_im: f64,
    c_im: f64,
}

impl Kahan {
    fn add(&mut self, v: Complex64) {
        let y = v.re - self.c_re;
        let t = self.sum_re + y;
        self.c_re = (t - self.sum_re) - y;
        self.sum_re = t;
        let y = v.im - self.c_im;
        let t = self.sum_im + y;
        self.c_im = (t - self.sum_im) - y;
        self.sum_im = t;
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.sum_re, self.sum_im)
    }
}
