//! Classical trajectory skeleton: enumeration of all paths from the source
//! to a destination, focusing-resonance geometry, caustic curves, and the
//! classical transverse-moment averages.
//!
//! The equations of motion for emission angle θ and flight time t are
//!
//!   ρ(t, θ) = p sinθ |sin(ω_L t)|/(m ω_L),   z(t, θ) = p cosθ t/m − F t²/(2m)
//!
//! (with ρ = p sinθ t/m in the B = 0 limit). Arrival times coincide with the
//! stationary points of the reduced action Φ(t) = S_cl + Et, which is what
//! ties this module to the stationary-phase sum built on top of it.

use crate::grid::{FieldMap, GridSpec};
use crate::units::FieldConfig;
use crate::{Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;

/// One classical path from the source to a destination.
#[derive(Debug, Clone, Copy)]
pub struct Trajectory {
    /// Emission angle measured from the +z axis, in [0, π].
    pub theta: f64,
    /// Flight time (s).
    pub t: f64,
    /// Sign of cosθ: +1 for launch against the force, −1 for launch with it.
    pub branch: i8,
    /// Classical action S_cl(r, t; o, 0) (J·s).
    pub action: f64,
    /// Reduced action Φ = S_cl + Et (J·s); stationary in t on a true path.
    pub phi: f64,
    /// d²Φ/dt² (J/s); vanishes on a caustic.
    pub d2phi_dt2: f64,
    /// Number of axis-return times T_j crossed before arrival.
    pub maslov: u32,
    /// Set when the root sits at the sinθ = 1 boundary within tolerance.
    pub near_caustic: bool,
}

/// Result of a path search, including roots dropped by refinement failures.
#[derive(Debug, Clone, Default)]
pub struct PathSearch {
    pub trajectories: Vec<Trajectory>,
    pub dropped_roots: usize,
}

/// Geometry of the k-th focusing resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceInfo {
    pub k: u32,
    /// Axis-return time T_k = kπ/ω_L (s).
    pub t_k: f64,
    /// Resonance center z_k = −F T_k²/(2m) (m).
    pub z_k: f64,
    /// Focal-spot width at z_k: AC ≈ E/F, independent of B (m).
    pub width_ac: f64,
    /// Axial elongation BD = 2kπp/(ω_L m), independent of F (m).
    pub length_bd: f64,
    /// Cyclotron radius p/(mω_L), the maximal lateral extension (m).
    pub rho_max: f64,
    /// Adjacent resonances overlap when F/(pB) < e/(πm).
    pub overlapping: bool,
}

/// Sampled caustic sheet bounding the four-path sector of resonance k.
#[derive(Debug, Clone)]
pub struct CausticCurve {
    pub k: u32,
    /// (θ, ρ, z) samples; the cosθ ≷ 0 half-ranges trace the two sheets.
    pub samples: Vec<(f64, f64, f64)>,
}

/// Classical transverse uncertainty averages at the k-th focal plane.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalUncertainty {
    /// (E/F)·√(32/45·mE) (J·s).
    pub closed_form: f64,
    /// √(⟨ρ²⟩⟨p⊥²⟩) with ⟨ρ²⟩ from exact arrival times, isotropic in cosθ.
    pub numeric: f64,
    /// Same with |cosθ|-flux weighting; reported as a diagnostic for the
    /// arrival-plane weighting ambiguity.
    pub flux_weighted: f64,
}

/// Evaluates the equations of motion at (θ, t).
pub fn trajectory_state(cfg: &FieldConfig, theta: f64, t: f64) -> (f64, f64) {
    let m = cfg.constants.mass;
    let p = cfg.momentum;
    let rho = if cfg.is_magnetic() {
        p * theta.sin() * (cfg.omega_l * t).sin().abs() / (m * cfg.omega_l)
    } else {
        p * theta.sin() * t / m
    };
    let z = p * theta.cos() * t / m - cfg.force * t * t / (2.0 * m);
    (rho, z)
}

/// Reduced action Φ(t) = S_cl + Et as a function of arrival time only.
pub(crate) fn reduced_action(cfg: &FieldConfig, rho: f64, z: f64, t: f64) -> f64 {
    let m = cfg.constants.mass;
    let f = cfg.force;
    let transverse = if rho == 0.0 {
        0.0
    } else if cfg.is_magnetic() {
        let w = cfg.omega_l * t;
        0.5 * m * cfg.omega_l * rho * rho * w.cos() / w.sin()
    } else {
        0.5 * m * rho * rho / t
    };
    transverse + 0.5 * m * z * z / t - 0.5 * f * t * z - f * f * t * t * t / (24.0 * m)
        + cfg.energy * t
}

#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn reduced_action_d1(cfg: &FieldConfig, rho: f64, z: f64, t: f64) -> f64 {
    let m = cfg.constants.mass;
    let f = cfg.force;
    let transverse = if rho == 0.0 {
        0.0
    } else if cfg.is_magnetic() {
        let sn = (cfg.omega_l * t).sin();
        -0.5 * m * cfg.omega_l * cfg.omega_l * rho * rho / (sn * sn)
    } else {
        -0.5 * m * rho * rho / (t * t)
    };
    transverse + cfg.energy - 0.5 * m * z * z / (t * t) - 0.5 * f * z
        - f * f * t * t / (8.0 * m)
}

pub(crate) fn reduced_action_d2(cfg: &FieldConfig, rho: f64, z: f64, t: f64) -> f64 {
    let m = cfg.constants.mass;
    let f = cfg.force;
    let transverse = if rho == 0.0 {
        0.0
    } else if cfg.is_magnetic() {
        let w = cfg.omega_l * t;
        let sn = w.sin();
        m * cfg.omega_l.powi(3) * rho * rho * w.cos() / (sn * sn * sn)
    } else {
        m * rho * rho / (t * t * t)
    };
    transverse + m * z * z / (t * t * t) - f * f * t / (4.0 * m)
}

/// Arrival times at height z for launch angle θ, solving the quadratic
/// F t²/(2m) − p cosθ t/m + z = 0 in cancellation-free form. On the
/// detector side z < 0 the falling motion crosses the height exactly once;
/// for z > 0 an up-and-down pair exists for steep enough launches.
fn arrival_times(cfg: &FieldConfig, cos_theta: f64, z: f64) -> [Option<f64>; 2] {
    let p = cfg.momentum;
    let m = cfg.constants.mass;
    let f = cfg.force;
    let pc = p * cos_theta;
    let disc = pc * pc - 2.0 * m * f * z;
    if disc < 0.0 {
        return [None, None];
    }
    let root = disc.sqrt();
    if z < 0.0 {
        let t = if pc >= 0.0 {
            (pc + root) / f
        } else {
            2.0 * m * (-z) / (root - pc)
        };
        [Some(t), None]
    } else if z == 0.0 {
        if pc > 0.0 {
            [Some(2.0 * pc / f), None]
        } else {
            [None, None]
        }
    } else {
        // Both crossings exist only for upward launches reaching above z.
        if pc <= 0.0 || root == 0.0 {
            return [None, None];
        }
        let t_late = (pc + root) / f;
        let t_early = 2.0 * m * z / (f * t_late);
        [Some(t_early), Some(t_late)]
    }
}

/// Arrival radius (p/m)·sinθ·σ(t(θ)) with σ(t) = |sin ω_L t|/ω_L (σ = t for
/// B = 0), on one arrival-time branch.
fn arrival_radius(cfg: &FieldConfig, theta: f64, z: f64, late: bool) -> Option<f64> {
    let t = arrival_times(cfg, theta.cos(), z)[late as usize]?;
    let sigma = if cfg.is_magnetic() {
        (cfg.omega_l * t).sin().abs() / cfg.omega_l
    } else {
        t
    };
    Some(cfg.momentum / cfg.constants.mass * theta.sin() * sigma)
}

/// Finds every classical trajectory from the source to (ρ, z).
///
/// Each launch angle maps to a closed-form arrival time, so trajectories are
/// the roots of the smooth arrival-radius function R(θ) = ρ. R is piecewise
/// analytic between the angles whose arrival time hits an axis return T_j;
/// within each piece the extrema of R are located first and each monotone
/// span is bisected, which cannot miss close root pairs near caustics.
pub fn find_paths(cfg: &FieldConfig, rho: f64, z: f64) -> PathSearch {
    let mut out = PathSearch::default();
    if rho < 0.0 || !rho.is_finite() || !z.is_finite() {
        return out;
    }
    if cfg.is_magnetic() && rho > cfg.rho_max() {
        return out;
    }
    let branches: &[bool] = if z < 0.0 { &[false] } else { &[false, true] };
    for &late in branches {
        search_branch(cfg, rho, z, late, &mut out);
    }
    out.trajectories
        .sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
    let mut merged: Vec<Trajectory> = Vec::with_capacity(out.trajectories.len());
    for tr in out.trajectories.drain(..) {
        if let Some(last) = merged.last() {
            if (tr.t - last.t).abs() < 1e-11 * tr.t && (tr.theta - last.theta).abs() < 1e-9 {
                continue;
            }
        }
        merged.push(tr);
    }
    out.trajectories = merged;
    out
}

fn search_branch(cfg: &FieldConfig, rho: f64, z: f64, late: bool, out: &mut PathSearch) {
    let m = cfg.constants.mass;
    let p = cfg.momentum;

    // Segment boundaries: θ = 0, π, plus every angle whose arrival time
    // coincides with an axis return (kinks of |sin ω_L t|), plus the edge of
    // the reachable-angle domain for z ≥ 0.
    let mut bounds = vec![0.0, PI];
    if z >= 0.0 {
        let c_min2 = 2.0 * m * cfg.force * z / (p * p);
        if c_min2 >= 1.0 {
            return;
        }
        bounds = vec![0.0, c_min2.sqrt().acos().min(PI)];
    }
    if cfg.is_magnetic() {
        let mut k = 1u32;
        loop {
            let t_k = cfg.t_k(k);
            // t(θ) = T_k  ⇔  cosθ = (z + F T_k²/2m)·m/(p T_k).
            let c = (z + cfg.force * t_k * t_k / (2.0 * m)) * m / (p * t_k);
            if c > 1.0 {
                break; // even the steepest launch arrives before T_k
            }
            if c >= -1.0 {
                let theta_k = c.acos();
                if matches!(arrival_times(cfg, c, z)[late as usize], Some(t)
                    if (t - t_k).abs() < 1e-6 * t_k)
                {
                    bounds.push(theta_k);
                }
            }
            k += 1;
            if k > 100_000 {
                break;
            }
        }
    }
    bounds.retain(|th| th.is_finite());
    bounds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bounds.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let radius = |theta: f64| arrival_radius(cfg, theta, z, late);

    if rho == 0.0 {
        // Axis destinations: launches with sinθ = 0, plus the degenerate
        // focal arrivals at interior kinks (flagged as caustic touches).
        for (i, &th) in bounds.iter().enumerate() {
            let interior = i > 0 && i + 1 < bounds.len();
            if let Some(r) = radius(th) {
                let t = arrival_times(cfg, th.cos(), z)[late as usize].unwrap_or(0.0);
                if r.abs() < 1e-9 * cfg.momentum / cfg.constants.mass * t {
                    push_theta_root(cfg, rho, z, th, late, interior, out);
                }
            }
        }
        return;
    }

    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < 1e-14 {
            continue;
        }
        // Locate extrema of R on the open segment by sign changes of a
        // numerical derivative, then bisect each monotone span.
        const N: usize = 96;
        let pad = (b - a) * 1e-9;
        let mut knots = vec![a + pad];
        let dtheta = (b - a - 2.0 * pad) / (N as f64);
        let slope = |th: f64| -> f64 {
            let h = (b - a) * 1e-8;
            match (radius(th + h), radius(th - h)) {
                (Some(r1), Some(r0)) => r1 - r0,
                _ => 0.0,
            }
        };
        let mut prev_th = a + pad;
        let mut prev_sl = slope(prev_th);
        for i in 1..=N {
            let th = a + pad + dtheta * i as f64;
            let sl = slope(th);
            if sl != 0.0 && prev_sl != 0.0 && sl.signum() != prev_sl.signum() {
                let (mut lo, mut hi) = (prev_th, th);
                for _ in 0..70 {
                    let mid = 0.5 * (lo + hi);
                    if slope(mid).signum() == prev_sl.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                knots.push(0.5 * (lo + hi));
            }
            prev_th = th;
            prev_sl = sl;
        }
        knots.push(b - pad);

        for span in knots.windows(2) {
            let (lo, hi) = (span[0], span[1]);
            let (Some(f_lo), Some(f_hi)) = (radius(lo), radius(hi)) else {
                continue;
            };
            let (g_lo, g_hi) = (f_lo - rho, f_hi - rho);
            if g_lo == 0.0 {
                push_theta_root(cfg, rho, z, lo, late, false, out);
                continue;
            }
            if g_lo.signum() == g_hi.signum() {
                continue;
            }
            let (mut x0, mut x1) = (lo, hi);
            let mut g0 = g_lo;
            for _ in 0..80 {
                let mid = 0.5 * (x0 + x1);
                let gm = match radius(mid) {
                    Some(r) => r - rho,
                    None => break,
                };
                if gm == 0.0 {
                    x0 = mid;
                    x1 = mid;
                    break;
                }
                if gm.signum() == g0.signum() {
                    x0 = mid;
                    g0 = gm;
                } else {
                    x1 = mid;
                }
            }
            push_theta_root(cfg, rho, z, 0.5 * (x0 + x1), late, false, out);
        }
    }
}

fn push_theta_root(
    cfg: &FieldConfig,
    rho: f64,
    z: f64,
    theta: f64,
    late: bool,
    degenerate_focus: bool,
    out: &mut PathSearch,
) {
    let Some(t) = arrival_times(cfg, theta.cos(), z)[late as usize] else {
        out.dropped_roots += 1;
        return;
    };
    if !(t > 0.0) {
        out.dropped_roots += 1;
        return;
    }
    // Verify the root reproduces the destination.
    let (rho_check, z_check) = trajectory_state(cfg, theta, t);
    let scale = z.abs().max(rho).max(cfg.energy / cfg.force);
    if (z_check - z).abs() > 1e-9 * scale || (rho_check - rho).abs() > 1e-7 * scale {
        out.dropped_roots += 1;
        return;
    }
    // Caustic adjacency: the radius function is extremal (dR/dθ ≈ 0) at the
    // root, or the arrival coincides with an axis return.
    let h = 1e-7;
    let near_caustic = degenerate_focus
        || match (
            arrival_radius(cfg, theta + h, z, late),
            arrival_radius(cfg, theta - h, z, late),
        ) {
            (Some(r1), Some(r0)) => (r1 - r0).abs() < 2.0 * h * rho.max(1e-12 * scale) * 1e-3,
            _ => true,
        };
    let phi = reduced_action(cfg, rho, z, t);
    let maslov = if cfg.is_magnetic() {
        (cfg.omega_l * t / PI).floor() as u32
    } else {
        0
    };
    out.trajectories.push(Trajectory {
        theta,
        t,
        branch: if theta <= PI / 2.0 { 1 } else { -1 },
        action: phi - cfg.energy * t,
        phi,
        d2phi_dt2: reduced_action_d2(cfg, rho, z, t),
        maslov,
        near_caustic,
    });
}

/// Number of classical paths per grid cell, evaluated in parallel.
pub fn path_count_map(cfg: &FieldConfig, grid: &GridSpec) -> Result<FieldMap> {
    grid.validate()?;
    let counts: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % grid.n_rho, idx / grid.n_rho);
            find_paths(cfg, grid.rho_at(i), grid.z_at(j)).trajectories.len() as f64
        })
        .collect();
    Ok(FieldMap::new(*grid, "paths", counts))
}

/// Geometry of the k-th resonance; requires B > 0 and k ≥ 1.
pub fn resonance_info(cfg: &FieldConfig, k: u32) -> Result<ResonanceInfo> {
    if !cfg.is_magnetic() {
        return Err(Error::Domain("resonances require B > 0".into()));
    }
    if k < 1 {
        return Err(Error::Domain(format!("resonance index must be ≥ 1, got {k}")));
    }
    let m = cfg.constants.mass;
    let p = cfg.momentum;
    let t_k = cfg.t_k(k);
    Ok(ResonanceInfo {
        k,
        t_k,
        z_k: cfg.z_k(k),
        width_ac: cfg.energy / cfg.force,
        length_bd: 2.0 * k as f64 * PI * p / (cfg.omega_l * m),
        rho_max: cfg.rho_max(),
        overlapping: cfg.force / (p * cfg.b_field) < cfg.constants.charge / (PI * m),
    })
}

/// Samples the caustic sheets of resonance k.
///
/// ρ(θ) = (2E/F)|sin³θ/cosθ| and z(θ) = z_k + (p/m)T_k cos(2θ)/cosθ for
/// θ ∈ [0, π]; the cosθ ≷ 0 half-ranges trace the two sheets. The sign of
/// the z term follows the detector-side convention (z_k < 0) and is
/// validated against brute-force path counting. Samples whose radius runs
/// past the cyclotron envelope near θ = π/2 are excluded.
pub fn caustic_curve(cfg: &FieldConfig, k: u32, n_samples: usize) -> Result<CausticCurve> {
    if !cfg.is_magnetic() {
        return Err(Error::Domain("caustic curves require B > 0".into()));
    }
    if k < 1 {
        return Err(Error::Domain(format!("resonance index must be ≥ 1, got {k}")));
    }
    if n_samples < 16 {
        return Err(Error::Domain(format!(
            "need at least 16 caustic samples, got {n_samples}"
        )));
    }
    let m = cfg.constants.mass;
    let info = resonance_info(cfg, k)?;
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let theta = PI * i as f64 / (n_samples - 1) as f64;
        let (s, c) = theta.sin_cos();
        if c.abs() < 1e-12 {
            continue;
        }
        let rho = 2.0 * cfg.energy / cfg.force * (s * s * s / c).abs();
        if rho > info.rho_max {
            continue;
        }
        let z = info.z_k + cfg.momentum / m * info.t_k * (2.0 * theta).cos() / c;
        samples.push((theta, rho, z));
    }
    Ok(CausticCurve { k, samples })
}

/// Classical transverse uncertainty product at the k-th focal plane.
///
/// The closed form is (E/F)√(32/45·mE); the numeric value integrates the
/// exact arrival radii ρ(θ)² at z = z_k over an isotropic emission
/// distribution (uniform in cosθ) with ⟨p⊥²⟩ = (4/3)mE.
pub fn classical_uncertainty(cfg: &FieldConfig, k: u32) -> Result<ClassicalUncertainty> {
    let info = resonance_info(cfg, k)?;
    if info.overlapping {
        return Err(Error::Domain(
            "resonances overlap; the classical average is not defined".into(),
        ));
    }
    let m = cfg.constants.mass;
    let p = cfg.momentum;
    let e = cfg.energy;
    let closed_form = e / cfg.force * (32.0 / 45.0 * m * e).sqrt();

    // Gauss–Legendre in u = cosθ; the arrival time near T_k solves
    // F t²/(2m) − p u t/m + z_k = 0 in closed form.
    let (nodes, weights) = gauss_legendre_64();
    let mut mean = 0.0;
    let mut mean_flux = 0.0;
    let mut norm_flux = 0.0;
    for (&u, &w) in nodes.iter().zip(weights.iter()) {
        let disc = (p * u).powi(2) + (cfg.force * info.t_k).powi(2);
        let t = (p * u + disc.sqrt()) / cfg.force;
        let st = (1.0 - u * u).max(0.0).sqrt();
        let rho = p * st * (cfg.omega_l * t).sin().abs() / (m * cfg.omega_l);
        mean += 0.5 * w * rho * rho;
        mean_flux += w * rho * rho * u.abs();
        norm_flux += w * u.abs();
    }
    let p_perp2 = 4.0 / 3.0 * m * e;
    Ok(ClassicalUncertainty {
        closed_form,
        numeric: (mean * p_perp2).sqrt(),
        flux_weighted: (mean_flux / norm_flux * p_perp2).sqrt(),
    })
}

/// Nodes and weights of 64-point Gauss–Legendre on [−1, 1], generated by
/// Newton iteration on the Legendre recurrence at first use.
pub(crate) fn gauss_legendre_64() -> (&'static [f64; 64], &'static [f64; 64]) {
    use std::sync::OnceLock;
    static TABLE: OnceLock<([f64; 64], [f64; 64])> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let n = 64usize;
        let mut xs = [0.0; 64];
        let mut ws = [0.0; 64];
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            loop {
                let (mut p0, mut p1) = (1.0f64, x);
                for j in 1..n {
                    let jf = j as f64;
                    let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
                    break;
                }
            }
            xs[i] = x;
        }
        (xs, ws)
    });
    (&t.0, &t.1)
}
