//! Stationary-phase approximation of the Green function built from the
//! enumerated classical paths.
//!
//! Each trajectory contributes
//!
//!   (1/iħ) · a(t_j) · √(2πħ/|Φ″(t_j)|) · exp{ iΦ(t_j)/ħ + i·sgn(Φ″)π/4 − iπ·μ_j }
//!
//! where a(t) carries |sin ω_L t| and μ_j counts the axis-return crossings;
//! together the last two factors continue the Van Vleck prefactor through the
//! focal points. The π/4 Maslov convention is not printed anywhere in the
//! source theory — it is pinned here by quantitative agreement with the exact
//! Landau-channel sum (see the phase-convention test).

use crate::grid::{FieldMap, GridSpec};
use crate::paths::find_paths;
use crate::units::FieldConfig;
use crate::Result;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Sign convention of the stationary-point phase jumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    /// e^{+i·sgn(Φ″)π/4}, validated against the exact quantum result.
    #[default]
    Physical,
    /// e^{−i·sgn(Φ″)π/4}; kept for the validation test that shows the
    /// physical choice is not arbitrary.
    Flipped,
}

/// Semiclassical Green-function value at one point.
#[derive(Debug, Clone)]
pub struct SemiclassicalValue {
    /// Sum of the per-path amplitudes.
    pub g_sc: Complex64,
    /// Individual path contributions, ordered by arrival time.
    pub contributions: Vec<Complex64>,
    /// Smallest |Φ″| among the contributing paths (∞ when there are none).
    pub min_curvature: f64,
    /// Set when the stationary-phase form is unreliable: a path curvature
    /// vanishes (sheet caustic) or the point hugs the axial focal line.
    pub caustic_flag: bool,
}

/// Stationary-phase Green function at (ρ, z) with the physical convention.
pub fn semiclassical_green(cfg: &FieldConfig, rho: f64, z: f64) -> Result<SemiclassicalValue> {
    semiclassical_green_with(cfg, rho, z, PhaseConvention::Physical)
}

pub fn semiclassical_green_with(
    cfg: &FieldConfig,
    rho: f64,
    z: f64,
    convention: PhaseConvention,
) -> Result<SemiclassicalValue> {
    if rho < 0.0 {
        return Err(crate::Error::Domain(format!(
            "rho must be non-negative, got {rho}"
        )));
    }
    if cfg.is_magnetic() && rho == 0.0 {
        let t_near = (z / cfg.z_k(1)).abs().sqrt() * cfg.t_k(1);
        let k = (t_near * cfg.omega_l / PI).round();
        if k >= 1.0 && (z - cfg.z_k(k as u32)).abs() < 1e-9 * z.abs() {
            return Err(crate::Error::Domain(
                "point coincides with a resonance center on the axis".into(),
            ));
        }
    }
    let hbar = cfg.constants.hbar;
    let m = cfg.constants.mass;
    let found = find_paths(cfg, rho, z);
    let mut contributions = Vec::with_capacity(found.trajectories.len());
    let mut g = Complex64::new(0.0, 0.0);
    let mut min_curv = f64::INFINITY;
    let mut flagged = !found.trajectories.is_empty()
        && found.trajectories.iter().any(|tr| tr.near_caustic);
    for tr in &found.trajectories {
        let curv = tr.d2phi_dt2.abs();
        min_curv = min_curv.min(curv);
        if curv == 0.0 {
            flagged = true;
            continue;
        }
        let amp_mag = if cfg.is_magnetic() {
            let s = (cfg.omega_l * tr.t).sin().abs();
            if s == 0.0 {
                flagged = true;
                continue;
            }
            m * cfg.omega_l / (2.0 * PI * hbar * s) * (m / (2.0 * PI * hbar * tr.t)).sqrt()
        } else {
            (m / (2.0 * PI * hbar * tr.t)).powf(1.5)
        };
        let quarter = match convention {
            PhaseConvention::Physical => tr.d2phi_dt2.signum() * PI / 4.0,
            PhaseConvention::Flipped => -tr.d2phi_dt2.signum() * PI / 4.0,
        };
        let phase = tr.phi / hbar - 3.0 * PI / 4.0 + quarter - PI * tr.maslov as f64;
        let contribution = Complex64::new(0.0, -1.0 / hbar)
            * Complex64::from_polar(amp_mag * (2.0 * PI * hbar / curv).sqrt(), phase);
        g += contribution;
        contributions.push(contribution);
    }
    // Isolated-saddle requirement: contributions whose phases sit closer
    // than half a cycle are coalescing (sheet caustic or the axial focal
    // line) and the plain stationary-phase form is unreliable there.
    for (a, tr_a) in found.trajectories.iter().enumerate() {
        for tr_b in &found.trajectories[a + 1..] {
            if (tr_a.phi - tr_b.phi).abs() / hbar < PI {
                flagged = true;
            }
        }
    }
    // Slowly-varying-prefactor requirement: an arrival within a few saddle
    // widths of an axis return makes the 1/sin(ω_L t) factor sweep across
    // the stationary region (filament tips and the axial focal line).
    if cfg.is_magnetic() {
        let t1 = cfg.t_k(1);
        for tr in &found.trajectories {
            let dist = (tr.t - (tr.t / t1).round() * t1).abs();
            let width = (hbar / tr.d2phi_dt2.abs().max(f64::MIN_POSITIVE)).sqrt();
            if dist < 3.0 * width {
                flagged = true;
            }
        }
    }
    Ok(SemiclassicalValue {
        g_sc: g,
        contributions,
        min_curvature: min_curv,
        caustic_flag: flagged,
    })
}

/// |j| from the semiclassical Green function on a grid, with a mask channel.
///
/// The gradient of g_sc is taken by central finite differences with step
/// 1e-3 of the local de Broglie wavelength (reflecting across the axis);
/// flagged or failed cells are masked. A second masking pass excludes cells
/// whose smallest path curvature falls below 1e-3 of the window median.
pub fn semiclassical_current_map(cfg: &FieldConfig, grid: &GridSpec) -> Result<FieldMap> {
    grid.validate()?;
    struct Cell {
        value: f64,
        min_curv: f64,
        flagged: bool,
    }
    let cells: Vec<Cell> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % grid.n_rho, idx / grid.n_rho);
            let rho = grid.rho_at(i);
            let z = grid.z_at(j);
            let h = 1e-3 * cfg.de_broglie_wavelength(z);
            let mut flagged = false;
            let mut min_curv = f64::INFINITY;
            let mut sample = |r: f64, zz: f64| -> Complex64 {
                match semiclassical_green(cfg, r.abs(), zz) {
                    Ok(v) => {
                        flagged |= v.caustic_flag;
                        min_curv = min_curv.min(v.min_curvature);
                        v.g_sc
                    }
                    Err(_) => {
                        flagged = true;
                        Complex64::new(0.0, 0.0)
                    }
                }
            };
            let g = sample(rho, z);
            let g_rp = sample(rho + h, z);
            let g_rm = sample(rho - h, z);
            let g_zp = sample(rho, z + h);
            let g_zm = sample(rho, z - h);
            let dg_drho = (g_rp - g_rm) / (2.0 * h);
            let dg_dz = (g_zp - g_zm) / (2.0 * h);
            let hbar = cfg.constants.hbar;
            let m = cfg.constants.mass;
            let j_rho = hbar / m * (g.conj() * dg_drho).im;
            let j_z = hbar / m * (g.conj() * dg_dz).im;
            let j_phi = -cfg.omega_l * rho * g.norm_sqr();
            let value = (j_rho * j_rho + j_z * j_z + j_phi * j_phi).sqrt();
            if !value.is_finite() {
                flagged = true;
            }
            Cell { value, min_curv, flagged }
        })
        .collect();

    // Window-median curvature threshold for the sheet-caustic mask.
    let mut curvatures: Vec<f64> = cells
        .iter()
        .map(|c| c.min_curv)
        .filter(|c| c.is_finite())
        .collect();
    curvatures.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = curvatures.get(curvatures.len() / 2).copied().unwrap_or(0.0);

    let mut n_failed = 0;
    let mut mask: Vec<bool> = cells
        .iter()
        .map(|c| {
            let masked = c.flagged || c.min_curv < 1e-3 * median;
            if masked && !c.value.is_finite() {
                n_failed += 1;
            }
            masked
        })
        .collect();
    // A fold's Airy zone reaches about as far outside the caustic as the
    // coalescence flags reach inside it: dilate each flagged run along ρ by
    // its own width (capped) to cover the shadow-side remnant.
    for j in 0..grid.n_z {
        let row = &mut mask[j * grid.n_rho..(j + 1) * grid.n_rho];
        let orig: Vec<bool> = row.to_vec();
        let mut i = 0;
        while i < orig.len() {
            if orig[i] {
                let start = i;
                while i < orig.len() && orig[i] {
                    i += 1;
                }
                let run = (i - start).min(6);
                for k in start.saturating_sub(run)..(i + run).min(orig.len()) {
                    row[k] = true;
                }
            } else {
                i += 1;
            }
        }
    }
    let mut map = FieldMap::new(
        *grid,
        "semiclassical",
        cells.into_iter().map(|c| if c.value.is_finite() { c.value } else { 0.0 }).collect(),
    );
    map.mask = Some(mask);
    map.n_failed = n_failed;
    Ok(map)
}
