//! Physical observables built on the Green function: probability current
//! density, detector profiles, total flux with its unitarity cross-check,
//! transverse uncertainty products, and full current-density maps.

use crate::green::{green_time_integral_default, ComplexField, GreenTable};
use crate::grid::{FieldMap, GridSpec};
use crate::paths::classical_uncertainty;
use crate::units::FieldConfig;
use crate::{Error, Result};
use rayon::prelude::*;

/// Probability-current components in cylindrical coordinates, up to the
/// source normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentVector {
    pub j_rho: f64,
    pub j_phi: f64,
    pub j_z: f64,
}

impl CurrentVector {
    pub fn magnitude(&self) -> f64 {
        (self.j_rho * self.j_rho + self.j_phi * self.j_phi + self.j_z * self.j_z).sqrt()
    }
}

/// Transverse uncertainty moments at a focal plane.
#[derive(Debug, Clone, Copy)]
pub struct UncertaintyReport {
    /// ⟨r⊥²⟩ over the focal-plane wavefunction (m²).
    pub r2_mean: f64,
    /// ⟨p⊥²⟩ with the canonical transverse momentum ((kg·m/s)²).
    pub p2_mean: f64,
    /// √(⟨r⊥²⟩⟨p⊥²⟩) (J·s); bounded below by ħ.
    pub product: f64,
    /// Classical average (E/F)√(32/45·mE) for comparison (J·s).
    pub classical_product: f64,
    /// Emission energy the report was computed at (J).
    pub energy: f64,
}

/// Current density from a Green-function value:
/// j = (ħ/m) Im{ḡ ∇g} − (ω_L × r)|g|², so j_φ = −ω_L·ρ·|g|².
pub fn current_density(cfg: &FieldConfig, field: &ComplexField, rho: f64) -> CurrentVector {
    let hbar = cfg.constants.hbar;
    let m = cfg.constants.mass;
    CurrentVector {
        j_rho: hbar / m * (field.g.conj() * field.dg_drho).im,
        j_phi: -cfg.omega_l * rho * field.g.norm_sqr(),
        j_z: hbar / m * (field.g.conj() * field.dg_dz).im,
    }
}

/// Current profile across a detector plane z < 0: per radius, (ρ, |j|, j_z).
///
/// Uses the Landau-channel series for B > 0 and the propagator integral for
/// B = 0.
pub fn detector_profile(
    cfg: &FieldConfig,
    z_plane: f64,
    rho_grid: &[f64],
) -> Result<Vec<(f64, f64, f64)>> {
    if z_plane >= 0.0 {
        return Err(Error::Domain(format!(
            "detector plane must lie at z < 0, got {z_plane}"
        )));
    }
    if cfg.is_magnetic() {
        let table = GreenTable::new(cfg, 1e-8)?;
        let row = table.row(z_plane)?;
        rho_grid
            .iter()
            .map(|&rho| {
                let (field, _) = row.eval(rho)?;
                let j = current_density(cfg, &field, rho);
                Ok((rho, j.magnitude(), j.j_z))
            })
            .collect()
    } else {
        rho_grid
            .par_iter()
            .map(|&rho| {
                let field = green_time_integral_default(cfg, rho, z_plane)?;
                let j = current_density(cfg, &field, rho);
                Ok((rho, j.magnitude(), j.j_z))
            })
            .collect()
    }
}

/// Outward particle flux through the detector plane z < 0:
/// 2π ∫ j·(−ẑ) ρ dρ, positive for the retarded outgoing solution.
///
/// The radial integral is truncated where |g| falls below 1e-8 of the
/// plane's peak and refined adaptively to 1e-6 relative.
pub fn total_flux(cfg: &FieldConfig, z_plane: f64) -> Result<f64> {
    if z_plane >= 0.0 {
        return Err(Error::Domain(format!(
            "detector plane must lie at z < 0, got {z_plane}"
        )));
    }
    // Coarse scan for the peak and the exponential-tail cutoff.
    let rho_hint = if cfg.is_magnetic() {
        1.3 * cfg.rho_max()
    } else {
        let e_over_f = cfg.energy / cfg.force;
        1.3 * (4.0 * e_over_f * (e_over_f - z_plane)).sqrt()
    };
    let table = if cfg.is_magnetic() {
        Some(GreenTable::new(cfg, 1e-8)?)
    } else {
        None
    };
    let row = match &table {
        Some(t) => Some(t.row(z_plane)?),
        None => None,
    };
    let eval_jz = |rho: f64| -> Result<f64> {
        let field = match &row {
            Some(r) => r.eval(rho)?.0,
            None => green_time_integral_default(cfg, rho, z_plane)?,
        };
        Ok(-current_density(cfg, &field, rho).j_z * rho)
    };
    let eval_gmag = |rho: f64| -> Result<f64> {
        let field = match &row {
            Some(r) => r.eval(rho)?.0,
            None => green_time_integral_default(cfg, rho, z_plane)?,
        };
        Ok(field.g.norm())
    };
    let n_scan = 160;
    let mut peak = 0.0f64;
    let mut cutoff = rho_hint;
    let mut mags = Vec::with_capacity(n_scan + 1);
    for i in 0..=n_scan {
        let rho = rho_hint * i as f64 / n_scan as f64;
        let mag = eval_gmag(rho)?;
        mags.push(mag);
        peak = peak.max(mag);
    }
    for (i, mag) in mags.iter().enumerate().rev() {
        if *mag > 1e-8 * peak {
            cutoff = rho_hint * ((i + 1).min(n_scan)) as f64 / n_scan as f64;
            break;
        }
    }

    // Fringe features live at the half transverse de Broglie wavelength.
    let feature = (std::f64::consts::PI * cfg.constants.hbar / cfg.momentum).min(cutoff / 16.0);
    let value = composite_quadrature(&eval_jz, 0.0, cutoff, feature, 1e-6)?;
    Ok(2.0 * std::f64::consts::PI * value)
}

/// On-axis unitarity value: the outward flux equals
/// (2/ħ)|Im G(o,o;E)| = (2/ħ)·(m²ω_L/(ħ³βF))·Σ_n Ai(a_n)², an exponentially
/// convergent sum over closed channels.
pub fn unitarity_flux(cfg: &FieldConfig) -> Result<f64> {
    if !cfg.is_magnetic() {
        return Err(Error::Domain("unitarity series requires B > 0".into()));
    }
    let hbar = cfg.constants.hbar;
    let m = cfg.constants.mass;
    let a_step = 4.0 * cfg.beta * cfg.hbar_omega_l;
    let a_base = 2.0 * cfg.beta * (cfg.hbar_omega_l - cfg.energy);
    let mut sum = 0.0;
    let mut n = 0usize;
    loop {
        let a_n = a_base + a_step * n as f64;
        let ai = crate::specfun::airy(a_n)?.ai;
        sum += ai * ai;
        if a_n > 0.0 && ai * ai < 1e-18 * sum {
            break;
        }
        n += 1;
        if n > 5_000_000 {
            return Err(Error::QuadratureFailure {
                message: "unitarity series did not converge".into(),
                estimate: sum,
            });
        }
    }
    let prefactor = m * m * cfg.omega_l / (hbar.powi(3) * cfg.beta * cfg.force);
    Ok(2.0 / hbar * prefactor * sum)
}

/// Quantum transverse uncertainty product at the k-th focal plane.
///
/// The transverse wavefunction is ψ(ρ) = g(ρ, z_k); moments are |ψ|²-weighted
/// with the canonical momentum ⟨p⊥²⟩ = ħ²∫|ψ′|²ρdρ / ∫|ψ|²ρdρ.
pub fn uncertainty_product(cfg: &FieldConfig, k: u32) -> Result<UncertaintyReport> {
    let classical = classical_uncertainty(cfg, k)?;
    let z_k = cfg.z_k(k);
    let table = GreenTable::new(cfg, 1e-8)?;
    let row = table.row(z_k)?;

    // Cutoff where the wavefunction has decayed well into the tunneling tail.
    let n_scan = 200;
    let rho_hint = 1.4 * cfg.rho_max();
    let mut peak = 0.0f64;
    let mut cutoff = rho_hint;
    let mut mags = Vec::with_capacity(n_scan + 1);
    for i in 0..=n_scan {
        let (field, _) = row.eval(rho_hint * i as f64 / n_scan as f64)?;
        mags.push(field.g.norm());
        peak = peak.max(field.g.norm());
    }
    for (i, mag) in mags.iter().enumerate().rev() {
        if *mag > 1e-8 * peak {
            cutoff = rho_hint * ((i + 1).min(n_scan)) as f64 / n_scan as f64;
            break;
        }
    }

    let feature = (std::f64::consts::PI * cfg.constants.hbar / cfg.momentum)
        .min(0.5 / (cfg.beta * cfg.force))
        .min(cutoff / 16.0);
    let norm = composite_quadrature(
        &|rho| Ok(row.eval(rho)?.0.g.norm_sqr() * rho),
        0.0,
        cutoff,
        feature,
        1e-6,
    )?;
    let r2 = composite_quadrature(
        &|rho| Ok(row.eval(rho)?.0.g.norm_sqr() * rho * rho * rho),
        0.0,
        cutoff,
        feature,
        1e-6,
    )?;
    let p2 = composite_quadrature(
        &|rho| Ok(row.eval(rho)?.0.dg_drho.norm_sqr() * rho),
        0.0,
        cutoff,
        feature,
        1e-6,
    )?;
    let hbar = cfg.constants.hbar;
    let r2_mean = r2 / norm;
    let p2_mean = hbar * hbar * p2 / norm;
    Ok(UncertaintyReport {
        r2_mean,
        p2_mean,
        product: (r2_mean * p2_mean).sqrt(),
        classical_product: classical.closed_form,
        energy: cfg.energy,
    })
}

/// |j| (or j_z / |g|²) over a grid from the exact Green function, evaluated
/// in parallel with per-row caches. B > 0 routes through the Landau series,
/// B = 0 through the propagator integral.
pub fn quantum_current_map(cfg: &FieldConfig, grid: &GridSpec) -> Result<FieldMap> {
    quantum_map(cfg, grid, "jmag")
}

/// As [`quantum_current_map`] with a selectable channel:
/// "jmag" → |j|, "jz" → j_z, "gsq" → |g|².
pub fn quantum_map(cfg: &FieldConfig, grid: &GridSpec, channel: &str) -> Result<FieldMap> {
    grid.validate()?;
    if !matches!(channel, "jmag" | "jz" | "gsq") {
        return Err(Error::Domain(format!("unknown map channel '{channel}'")));
    }
    let pick = |cfg: &FieldConfig, field: &ComplexField, rho: f64| -> f64 {
        match channel {
            "jz" => current_density(cfg, field, rho).j_z,
            "gsq" => field.g.norm_sqr(),
            _ => current_density(cfg, field, rho).magnitude(),
        }
    };
    let mut n_failed = 0usize;
    let (values, mask): (Vec<f64>, Vec<bool>) = if cfg.is_magnetic() {
        let table = GreenTable::new(cfg, 1e-8)?;
        let rows: Vec<(Vec<f64>, Vec<bool>)> = (0..grid.n_z)
            .into_par_iter()
            .map(|j| {
                let z = grid.z_at(j);
                let mut vals = vec![0.0; grid.n_rho];
                let mut msk = vec![false; grid.n_rho];
                match table.row(z) {
                    Ok(row) => {
                        for i in 0..grid.n_rho {
                            let rho = grid.rho_at(i);
                            match row.eval(rho) {
                                Ok((field, _)) => vals[i] = pick(cfg, &field, rho),
                                Err(_) => msk[i] = true,
                            }
                        }
                    }
                    Err(_) => msk.iter_mut().for_each(|m| *m = true),
                }
                (vals, msk)
            })
            .collect();
        let mut values = Vec::with_capacity(grid.len());
        let mut mask = Vec::with_capacity(grid.len());
        for (v, m) in rows {
            values.extend(v);
            mask.extend(m);
        }
        (values, mask)
    } else {
        let cells: Vec<(f64, bool)> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx % grid.n_rho, idx / grid.n_rho);
                let rho = grid.rho_at(i);
                match green_time_integral_default(cfg, rho, grid.z_at(j)) {
                    Ok(field) => (pick(cfg, &field, rho), false),
                    Err(_) => (0.0, true),
                }
            })
            .collect();
        (
            cells.iter().map(|c| c.0).collect(),
            cells.iter().map(|c| c.1).collect(),
        )
    };
    n_failed += mask.iter().filter(|&&m| m).count();
    let mut map = FieldMap::new(*grid, channel, values);
    if n_failed > 0 {
        map.mask = Some(mask);
    }
    map.n_failed = n_failed;
    Ok(map)
}

/// Composite Gauss–Legendre quadrature with panels sized to the integrand's
/// feature scale, verified by comparing against a 3/2-refined panel count.
fn composite_quadrature<F: Fn(f64) -> Result<f64>>(
    f: &F,
    a: f64,
    b: f64,
    feature: f64,
    tol: f64,
) -> Result<f64> {
    let run = |panels: usize| -> Result<f64> {
        let (nodes, weights) = crate::paths::gauss_legendre_64();
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for i in 0..panels {
            let x0 = a + h * i as f64;
            let mut acc = 0.0;
            for k in 0..64 {
                let x = x0 + 0.5 * h * (1.0 + nodes[k]);
                acc += weights[k] * f(x)?;
            }
            total += acc * 0.5 * h;
        }
        Ok(total)
    };
    // A 64-point panel resolves a handful of feature scales comfortably.
    let base = ((b - a) / (6.0 * feature.max(1e-300))).ceil() as usize;
    let panels = base.clamp(4, 1500);
    let coarse = run(panels)?;
    let fine = run(panels * 3 / 2 + 1)?;
    if (fine - coarse).abs() > tol.max(1e-12) * fine.abs().max(1e-300) * 100.0 {
        return Err(Error::QuadratureFailure {
            message: format!(
                "radial quadrature did not settle ({panels} panels, drift {:e})",
                (fine - coarse).abs() / fine.abs().max(1e-300)
            ),
            estimate: fine,
        });
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::build_config;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn fig2() -> FieldConfig {
        build_config(60.8, 116.0, 1e-3).unwrap()
    }

    #[test]
    fn current_density_special_cases() {
        let cfg = fig2();
        let b0 = build_config(100.5, 423.0, 0.0).unwrap();
        let field = ComplexField {
            g: Complex64::new(1.3e40, -2.0e39),
            dg_drho: Complex64::new(4.0e45, 2.0e45),
            dg_dz: Complex64::new(-1.0e45, 3.0e45),
        };
        // B = 0 kills the azimuthal drift term.
        assert_eq!(current_density(&b0, &field, 1e-5).j_phi, 0.0);
        // On the axis the radial gradient vanishes by symmetry.
        let axial = ComplexField { dg_drho: Complex64::new(0.0, 0.0), ..field };
        assert_eq!(current_density(&cfg, &axial, 0.0).j_rho, 0.0);
        // A real field with real gradient carries no canonical current.
        let real_field = ComplexField {
            g: Complex64::new(2.0e40, 0.0),
            dg_drho: Complex64::new(1.0e45, 0.0),
            dg_dz: Complex64::new(-3.0e45, 0.0),
        };
        let j = current_density(&cfg, &real_field, 1e-5);
        assert_eq!(j.j_rho, 0.0);
        assert_eq!(j.j_z, 0.0);
        assert!(j.j_phi < 0.0);
    }

    #[test]
    fn azimuthal_current_identity() {
        // j_φ/(ρ|g|²) = −ω_L wherever g ≠ 0, to machine precision.
        let cfg = fig2();
        let table = GreenTable::new(&cfg, 1e-8).unwrap();
        let row = table.row(-0.05).unwrap();
        for rho in [1e-6, 5e-6, 2e-5] {
            let (field, _) = row.eval(rho).unwrap();
            let j = current_density(&cfg, &field, rho);
            assert_relative_eq!(
                j.j_phi / (rho * field.g.norm_sqr()),
                -cfg.omega_l,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn flux_is_plane_independent_and_unitary() {
        let cfg = fig2();
        let reference = unitarity_flux(&cfg).unwrap();
        assert!(reference > 0.0);
        for z in [-0.03, -0.11, -0.19] {
            let flux = total_flux(&cfg, z).unwrap();
            assert!(flux > 0.0);
            assert!(
                (flux - reference).abs() <= 0.01 * reference,
                "flux {flux:e} at z={z} vs unitarity {reference:e}"
            );
        }
        let f1 = total_flux(&cfg, -0.05).unwrap();
        let f2 = total_flux(&cfg, -0.20).unwrap();
        assert!((f1 - f2).abs() <= 0.005 * f1.abs());
    }

    #[test]
    fn detector_profile_fig1c_rings() {
        // B = 0 reference image: outermost |j| maximum sits at the
        // Airy-corrected classical edge R·√(1 − (1.3717/ΔΦ)^{2/3}) and the
        // interior holds round(ΔΦ/2π) − 1 ± 1 further rings.
        let cfg = build_config(100.5, 423.0, 0.0).unwrap();
        let z = -0.514;
        let radius = 2.0 * (cfg.energy * (-z) / cfg.force).sqrt();
        assert_relative_eq!(radius, 6.989e-4, max_relative = 1e-3);
        let rho_grid: Vec<f64> = (0..=700).map(|i| radius * 1.1 * i as f64 / 700.0).collect();
        let profile = detector_profile(&cfg, z, &rho_grid).unwrap();
        let maxima: Vec<f64> = profile
            .windows(3)
            .filter(|w| w[1].1 > w[0].1 && w[1].1 > w[2].1)
            .map(|w| w[1].0)
            .collect();
        let dphi = 4.0 / 3.0 * (2.0 * cfg.beta * cfg.energy).powf(1.5);
        let outer_pred = radius * (1.0 - (1.3717 / dphi).powf(2.0 / 3.0)).sqrt();
        let outer = maxima.last().copied().unwrap_or(0.0);
        assert!(
            (outer - outer_pred).abs() <= 0.05 * outer_pred,
            "outermost maximum {outer:e} vs Airy-corrected edge {outer_pred:e}"
        );
        let rings = maxima.len() as i64;
        let expected = (dphi / (2.0 * std::f64::consts::PI)).round() as i64;
        assert!(
            (rings - expected).abs() <= 1,
            "found {rings} bright rings, expected {expected} ± 1"
        );
        // Beyond the classical radius the current decays monotonically.
        let tail: Vec<f64> = profile
            .iter()
            .filter(|(rho, _, _)| *rho > radius * 1.01)
            .map(|(_, jm, _)| *jm)
            .collect();
        assert!(tail.windows(2).all(|w| w[1] <= w[0] * 1.0001));
    }

    #[test]
    fn uncertainty_regimes() {
        let hbar = PhysConst::HBAR;
        // Large emission energy: semiclassics rules, product ≈ Eq.-(8) value.
        let cfg = fig2();
        let report = uncertainty_product(&cfg, 4).unwrap();
        assert!(report.product >= hbar * (1.0 - 1e-3));
        assert!(
            (report.product - report.classical_product).abs()
                <= 0.15 * report.classical_product
        );
        // Near threshold the product saturates the quantum bound.
        let quantum = build_config(1.5, 116.0, 1e-3).unwrap();
        let report_q = uncertainty_product(&quantum, 4).unwrap();
        assert!(report_q.product >= hbar * (1.0 - 1e-3));
        assert!(report_q.product <= 1.2 * hbar, "product {:e}", report_q.product);
    }

    struct PhysConst;
    impl PhysConst {
        const HBAR: f64 = 1.054_571_817e-34;
    }

    #[test]
    fn focal_spot_radius_near_threshold() {
        // For F = 423 eV/m the threshold focal radius saturates near 67 nm
        // as E → 0 (the 1/(βF) ≈ 90 nm scale estimates it from above),
        // within a factor 1.5 of the ~100 nm resolution scale.
        let cfg = build_config(0.5, 423.0, 1e-3).unwrap();
        let report = uncertainty_product(&cfg, 4).unwrap();
        let radius = report.r2_mean.sqrt();
        assert!(
            radius < 1.5e-7 && radius > 1e-7 / 1.5,
            "focal radius {radius:e}"
        );
        // Deep in the quantum regime the product hugs its lower bound.
        let hbar = cfg.constants.hbar;
        assert!(report.product <= 1.05 * hbar && report.product >= hbar * (1.0 - 1e-3));
    }

    #[test]
    fn monotone_crossover() {
        let hbar = PhysConst::HBAR;
        let energies = [2.0, 4.0, 8.0, 16.0, 32.0, 60.8, 100.0];
        let mut products = Vec::new();
        let mut classicals = Vec::new();
        for &e in &energies {
            let cfg = build_config(e, 116.0, 1e-3).unwrap();
            let r = uncertainty_product(&cfg, 4).unwrap();
            products.push(r.product / hbar);
            classicals.push(r.classical_product / hbar);
        }
        for w in products.windows(2) {
            assert!(w[1] >= w[0] * 0.999, "product not monotone: {products:?}");
        }
        // Where the classical curve passes 2ħ the quantum product is near 2ħ.
        let idx = classicals.iter().position(|&c| c > 2.0).unwrap();
        let (c0, c1) = (classicals[idx - 1], classicals[idx]);
        let (p0, p1) = (products[idx - 1], products[idx]);
        let frac = (2.0 - c0) / (c1 - c0);
        let p_cross = p0 + frac * (p1 - p0);
        assert!(
            (p_cross - 2.0).abs() <= 0.6,
            "product at classical=2ħ crossover: {p_cross}"
        );
    }

    #[test]
    fn quantum_map_constrictions() {
        let cfg = fig2();
        // Profile along the filament: |j| on a near-axis line peaks at each
        // resonance center z_k within 1%.
        let grid = GridSpec::new(2e-7, 3e-6, -0.25, -0.01, 2, 480).unwrap();
        let map = quantum_current_map(&cfg, &grid).unwrap();
        assert_eq!(map.n_failed, 0);
        for k in 1..=4u32 {
            let z_k = cfg.z_k(k);
            let mut best = (0.0f64, 0.0f64);
            for j in 0..grid.n_z {
                let z = grid.z_at(j);
                if (z - z_k).abs() < 0.04 * z_k.abs() && map.value(0, j) > best.1 {
                    best = (z, map.value(0, j));
                }
            }
            assert!(
                (best.0 - z_k).abs() <= 0.01 * z_k.abs(),
                "constriction k={k} found at {} vs {z_k}",
                best.0
            );
        }
    }

    #[test]
    fn quantum_map_lateral_extent() {
        // The lateral reach of the whole pattern approaches the cyclotron
        // radius on planes a quarter cyclotron period after an axis return,
        // where |sin ω_L T_f| ≈ 1 (here T_f ≈ 3.5π/ω_L).
        let cfg = fig2();
        let rho_max = cfg.rho_max();
        let m = cfg.constants.mass;
        let t_quarter = 3.5 * std::f64::consts::PI / cfg.omega_l;
        let z_probe = -cfg.force * t_quarter * t_quarter / (2.0 * m);
        let grid =
            GridSpec::new(0.0, 1.4 * rho_max, z_probe - 2e-4, z_probe + 2e-4, 160, 3).unwrap();
        let map = quantum_current_map(&cfg, &grid).unwrap();
        let row = 1;
        let peak = (0..grid.n_rho).map(|i| map.value(i, row)).fold(0.0, f64::max);
        let extent = (0..grid.n_rho)
            .rev()
            .find(|&i| map.value(i, row) > 1e-3 * peak)
            .map(|i| grid.rho_at(i))
            .unwrap();
        // The reach matches the cyclotron radius up to the turning-point
        // Airy tail that spills past the classical envelope.
        assert!(
            extent >= 0.85 * rho_max && extent <= 1.2 * rho_max,
            "lateral extent {extent:e} vs cyclotron radius {rho_max:e}"
        );
    }
}
