//! Propagator representation of the Green function: the time integral
//!
//!   G = (1/iħ) ∫₀^∞ a(t) · exp{ i[S_cl(ρ,z,t) + (E+iε)t]/ħ } dt,
//!
//!   S_cl = (mω_L/2)ρ² cot(ω_L t) + m z²/(2t) − F t z/2 − F² t³/(24m),
//!   a(t) = e^{−3iπ/4} · (mω_L / (2πħ sin ω_L t)) · √(m/(2πħ t)),
//!
//! with the B = 0 limits a(t) → e^{−3iπ/4}(m/2πħt)^{3/2} and the cot term
//! → mρ²/(2t). This route is the independent oracle for the Landau-channel
//! series and the only route for B = 0.
//!
//! A literal integration along the real axis is hopeless at laboratory
//! parameters (the phase swings by ~1e9 rad), and a single rotated ray fails
//! just as badly: the linear phase terms grow as e^{+s·sinφ·(E − Fz/2)/ħ}
//! along a downward ray, which overflows long before the cubic term brings
//! the integrand back down. Instead the contour descends at the requested
//! rotation angle only until it reaches depth Y = γħ/E below the real axis
//! and then runs parallel to it. On that line the integrand magnitude is
//! e^{(Y/ħ)Φ′(σ)+O(Y³)} with Φ = S_cl + Et, so it is exponentially confined
//! to the neighbourhood of the classical arrival times (where Φ′ ≈ 0), peaks
//! at e^{γ}, and oscillates only as fast as Φ′/ħ ≤ O(E/ħ·γ) — a few dozen
//! cycles that Gauss–Legendre panels resolve to near machine accuracy.

use super::ComplexField;
use crate::units::FieldConfig;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Tunables of the contour evaluation.
#[derive(Debug, Clone, Copy)]
pub struct ContourParams {
    /// Initial descent angle below the positive real axis, in (0, π/8].
    pub rotation: f64,
    /// Contour depth in units of ħ/E; the integrand peak grows like e^γ.
    pub depth_scale: f64,
}

impl Default for ContourParams {
    fn default() -> Self {
        ContourParams { rotation: PI / 16.0, depth_scale: 6.0 }
    }
}

/// Envelope threshold (in units of ħ/Y) below which the integrand is treated
/// as numerically dead.
const ENV_CUT: f64 = 60.0;

/// Evaluates the time integral with regularization energy `epsilon` and the
/// given contour rotation, Richardson-extrapolating the ε-sequence
/// {ε, ε/2, ε/4} to zero.
pub fn green_time_integral(
    cfg: &FieldConfig,
    rho: f64,
    z: f64,
    epsilon: f64,
    rotation: f64,
) -> Result<ComplexField> {
    if rho < 0.0 {
        return Err(Error::Domain(format!("rho must be non-negative, got {rho}")));
    }
    let params = ContourParams { rotation, ..ContourParams::default() };
    green_time_integral_with(cfg, rho, z, epsilon, &params)
}

/// [`green_time_integral`] with explicit contour tunables.
pub fn green_time_integral_with(
    cfg: &FieldConfig,
    rho: f64,
    z: f64,
    epsilon: f64,
    params: &ContourParams,
) -> Result<ComplexField> {
    if rho == 0.0 && z == 0.0 {
        return Err(Error::Domain(
            "green function is singular at the source point".into(),
        ));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(params.rotation > 0.0 && params.rotation <= PI / 8.0) {
        return Err(Error::Domain(format!(
            "rotation must lie in (0, π/8], got {}",
            params.rotation
        )));
    }
    let runs = integrate(cfg, rho, z, [epsilon, epsilon / 2.0, epsilon / 4.0], params);

    // Two-stage Richardson in ε: kill the linear term, then the quadratic.
    let lin1 = [
        2.0 * runs[1].0 - runs[0].0,
        2.0 * runs[1].1 - runs[0].1,
        2.0 * runs[1].2 - runs[0].2,
    ];
    let lin2 = [
        2.0 * runs[2].0 - runs[1].0,
        2.0 * runs[2].1 - runs[1].1,
        2.0 * runs[2].2 - runs[1].2,
    ];
    let diff = (lin2[0] - lin1[0]).norm();
    if !diff.is_finite() || diff > 1e-4 * lin2[0].norm().max(f64::MIN_POSITIVE) {
        return Err(Error::OracleFailure(format!(
            "epsilon extrapolation did not settle at (rho={rho:e}, z={z:e}): \
             successive estimates differ by {:e} relative",
            diff / lin2[0].norm().max(f64::MIN_POSITIVE)
        )));
    }
    let extrap = |a: Complex64, b: Complex64| (4.0 * b - a) / 3.0;
    let field = ComplexField {
        g: extrap(lin1[0], lin2[0]),
        dg_drho: if rho == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            extrap(lin1[1], lin2[1])
        },
        dg_dz: extrap(lin1[2], lin2[2]),
    };
    if !field.is_finite() {
        return Err(Error::OracleFailure(format!(
            "non-finite contour integral at (rho={rho:e}, z={z:e})"
        )));
    }
    Ok(field)
}

/// [`green_time_integral`] with the default rotation π/16 and a
/// regularization energy scaled to the classical flight time, ε = 1e-3·ħ/T.
pub fn green_time_integral_default(cfg: &FieldConfig, rho: f64, z: f64) -> Result<ComplexField> {
    let t_scale = flight_time_upper(cfg, z.min(-1e-9));
    green_time_integral(cfg, rho, z, 1e-3 * cfg.constants.hbar / t_scale, PI / 16.0)
}

/// Largest classical arrival time at height z: the θ = 0 root of
/// z(t) = pt/m − Ft²/2m.
fn flight_time_upper(cfg: &FieldConfig, z: f64) -> f64 {
    let p = cfg.momentum;
    let disc = (p * p - 2.0 * cfg.constants.mass * cfg.force * z).max(0.0);
    (p + disc.sqrt()) / cfg.force
}

struct Geometry {
    m: f64,
    hbar: f64,
    energy: f64,
    force: f64,
    omega_l: f64,
    rho: f64,
    z: f64,
    depth: f64,
    magnetic: bool,
    /// Phase reference point on the contour. Phases of order 1e9 rad are
    /// evaluated as differences against this point through cancellation-free
    /// identities, so the per-node phase noise stays at the 1e-11 rad level;
    /// the common factor e^{iΦ(t_ref)/ħ} is applied once at the end.
    t_ref: Complex64,
    inv_t_ref: Complex64,
    sin_ref: Complex64,
    cot_ref: Complex64,
}

impl Geometry {
    /// dΦ/dt at complex time, Φ = S_cl + Et. Its magnitude at depth Y sets
    /// both the oscillation rate and the amplitude-variation rate of the
    /// integrand along the lowered line (at a real-axis saddle it reduces to
    /// Y·|Φ″|, the inverse amplitude scale of the saddle bump).
    fn dphase(&self, t: Complex64) -> Complex64 {
        let mut v = Complex64::new(self.energy - self.force * self.z / 2.0, 0.0)
            - 0.5 * self.m * self.z * self.z / (t * t)
            - self.force * self.force * t * t / (8.0 * self.m);
        if self.magnetic {
            let sn = (self.omega_l * t).sin();
            v -= 0.5 * self.m * self.omega_l * self.omega_l * self.rho * self.rho / (sn * sn);
        } else {
            v -= 0.5 * self.m * self.rho * self.rho / (t * t);
        }
        v
    }

    /// Exact magnitude exponent Re[(i/ħ)(S_cl + Et)] of the integrand; the
    /// value 0 corresponds to an O(1) exponential factor.
    fn exponent_re(&self, t: Complex64) -> f64 {
        let ihbar = Complex64::new(0.0, 1.0 / self.hbar);
        let s_transverse = if self.magnetic {
            let w = self.omega_l * t;
            0.5 * self.m * self.omega_l * self.rho * self.rho * w.cos() / w.sin()
        } else {
            0.5 * self.m * self.rho * self.rho / t
        };
        let s_cl = s_transverse + 0.5 * self.m * self.z * self.z / t
            - 0.5 * self.force * t * self.z
            - self.force * self.force * t * t * t / (24.0 * self.m);
        (ihbar * (s_cl + self.energy * t)).re
    }

    /// Alive window [σ_lo, σ_hi] where the smooth part of Φ′ exceeds −K.
    /// The magnetic term only deepens suppression, so dropping it is
    /// conservative.
    fn window(&self, kappa: f64) -> (f64, f64) {
        let z_eff2 = if self.magnetic {
            self.z * self.z
        } else {
            self.z * self.z + self.rho * self.rho
        };
        let w = self.energy - self.force * self.z / 2.0 + kappa * self.hbar / self.depth;
        let half_fz = 0.5 * self.force * z_eff2.sqrt();
        let disc = w * w - half_fz * half_fz;
        let scale = 4.0 * self.m / (self.force * self.force);
        if disc <= 0.0 || w <= 0.0 {
            // Deep tunneling side: no classically alive window; fall back to
            // the vertex of the envelope parabola.
            let x_v = w.abs().max(kappa * self.hbar / self.depth) * scale * 0.5;
            let s_v = x_v.sqrt();
            return (0.2 * s_v, 3.0 * s_v);
        }
        let x_hi = (w + disc.sqrt()) * scale;
        let x_lo = (w - disc.sqrt()) * scale;
        (x_lo.max(0.0).sqrt(), x_hi.sqrt())
    }
}

type Triple = (Complex64, Complex64, Complex64);

/// Integrates the three ε-damped variants along the descent + lowered-line
/// contour. Returns (g, dg_drho, dg_dz) for each ε before the 1/iħ prefactor
/// is... the prefactor is applied here.
fn integrate(
    cfg: &FieldConfig,
    rho: f64,
    z: f64,
    epsilons: [f64; 3],
    params: &ContourParams,
) -> [Triple; 3] {
    let depth = params.depth_scale * cfg.constants.hbar / cfg.energy;
    let mut geo = Geometry {
        m: cfg.constants.mass,
        hbar: cfg.constants.hbar,
        energy: cfg.energy,
        force: cfg.force,
        omega_l: cfg.omega_l,
        rho,
        z,
        depth,
        magnetic: cfg.is_magnetic(),
        t_ref: Complex64::new(0.0, 0.0),
        inv_t_ref: Complex64::new(0.0, 0.0),
        sin_ref: Complex64::new(0.0, 0.0),
        cot_ref: Complex64::new(0.0, 0.0),
    };
    let phi = params.rotation;
    let y = geo.depth;
    let s_turn = y / phi.sin();
    let sigma0 = y / phi.tan();
    let (sigma_lo, sigma_hi) = geo.window(ENV_CUT);
    let t_ref = Complex64::new(0.5 * (sigma_lo + sigma_hi), -y);
    geo.t_ref = t_ref;
    geo.inv_t_ref = 1.0 / t_ref;
    if geo.magnetic {
        let w_ref = geo.omega_l * t_ref;
        geo.sin_ref = w_ref.sin();
        geo.cot_ref = w_ref.cos() / geo.sin_ref;
    }

    let mut acc = [Acc::default(), Acc::default(), Acc::default()];

    // Descent segment t = s·e^{−iφ}: the mr̃²/(2ħt) exponent kills it near the
    // origin; integrate only where it is alive, or skip it entirely.
    let r2 = rho * rho + z * z;
    let small_t_scale = geo.m * r2 / (2.0 * geo.hbar); // seconds
    let dead_at_turn = small_t_scale * phi.sin() / s_turn
        - geo.energy * s_turn * phi.sin() / geo.hbar;
    if dead_at_turn < ENV_CUT + 20.0 {
        let dir = Complex64::from_polar(1.0, -phi);
        let s_start = (small_t_scale * phi.sin() / (ENV_CUT + 20.0)).min(s_turn * 1e-4);
        let mut s = s_start.max(s_turn * 1e-12);
        while s < s_turn {
            let rate = small_t_scale / (s * s) + geo.energy / geo.hbar
                + geo.force * z.abs() / (2.0 * geo.hbar)
                + geo.force * geo.force * s * s / (8.0 * geo.m * geo.hbar);
            let h = (1.2 / rate).min(0.35 * s).min(s_turn - s).max(s_turn * 1e-13);
            gauss_panel(&geo, &epsilons, &mut acc, |u| (s + h * u) * dir, h * dir);
            s += h;
        }
    }

    // Lowered line t = σ − iY from the descent's endpoint through the alive
    // window, skipping the exponentially dead lead-in.
    let slope_lo = curvature_scale(&geo, sigma_lo.max(sigma0));
    let lead = 40.0 * geo.hbar / (y * slope_lo.max(1e-300));
    let sigma_a = sigma0.max(sigma_lo - lead);
    let slope_hi = curvature_scale(&geo, sigma_hi);
    let tail = 40.0 * geo.hbar / (y * slope_hi.max(1e-300));
    let sigma_b = sigma_hi + tail.min(sigma_hi);

    let mut sigma = sigma_a;
    while sigma < sigma_b {
        let t_here = Complex64::new(sigma, -y);
        let env = geo.exponent_re(t_here);
        let mut h = if env < -120.0 {
            // Numerically dead: stride across, but peek ahead so an alive
            // region is never jumped.
            let mut h = 10.0 * y;
            while h > y / 2.0 {
                let p1 = geo.exponent_re(Complex64::new(sigma + h, -y));
                let p2 = geo.exponent_re(Complex64::new(sigma + 0.5 * h, -y));
                if p1.max(p2) < -110.0 {
                    break;
                }
                h *= 0.5;
            }
            h
        } else {
            // Quarter-cycle panels in the combined phase/amplitude rate.
            let rate = geo.dphase(t_here).norm() / geo.hbar + 3.0 / y;
            1.4 / rate
        };
        if geo.magnetic {
            // Resolve the 1/sin(ω_L t) structure near axis-return times.
            let t1 = PI / geo.omega_l;
            let frac = (sigma / t1).round();
            if frac >= 1.0 && (sigma - frac * t1).abs() < 8.0 * y {
                h = h.min(y / 3.0);
            }
        }
        h = h.min(sigma_b - sigma).max(sigma_b * 1e-14);
        let base = Complex64::new(sigma, -y);
        gauss_panel(&geo, &epsilons, &mut acc, |u| base + h * u, Complex64::new(h, 0.0));
        sigma += h;
    }

    // Common reference factor e^{iΦ(t_ref)/ħ} and the 1/(iħ) prefactor.
    let pref = Complex64::new(0.0, -1.0 / geo.hbar) * geo.reference_factor();
    [0, 1, 2].map(|k| {
        (
            pref * acc[k].g.value(),
            pref * acc[k].dr.value(),
            pref * acc[k].dz.value(),
        )
    })
}

/// |Φ″| scale used to size the entry/exit margins of the alive window.
fn curvature_scale(geo: &Geometry, s: f64) -> f64 {
    geo.m * geo.z * geo.z / (s * s * s)
        + geo.force * geo.force * s / (4.0 * geo.m)
        + geo.m * geo.rho * geo.rho / (s * s * s)
}

#[derive(Default)]
struct Acc {
    g: KahanC,
    dr: KahanC,
    dz: KahanC,
}

/// 16-point Gauss–Legendre nodes (positive half) and weights on [-1, 1].
const GL_X: [f64; 8] = [
    0.095_012_509_837_637_440_185,
    0.281_603_550_779_258_913_230,
    0.458_016_777_657_227_386_342,
    0.617_876_244_402_643_748_447,
    0.755_404_408_355_003_033_895,
    0.865_631_202_387_831_743_880,
    0.944_575_023_073_232_576_078,
    0.989_400_934_991_649_932_596,
];
const GL_W: [f64; 8] = [
    0.189_450_610_455_068_496_285,
    0.182_603_415_044_923_588_867,
    0.169_156_519_395_002_538_189,
    0.149_595_988_816_576_732_081,
    0.124_628_971_255_533_872_052,
    0.095_158_511_682_492_784_810,
    0.062_253_523_938_647_892_863,
    0.027_152_459_411_754_094_852,
];

/// Adds one Gauss–Legendre panel; `point(u)` maps u ∈ [0,1] onto the contour
/// and `jac` is the constant dt/du of the segment.
fn gauss_panel<F: Fn(f64) -> Complex64>(
    geo: &Geometry,
    epsilons: &[f64; 3],
    acc: &mut [Acc; 3],
    point: F,
    jac: Complex64,
) {
    for i in 0..8 {
        for sign in [-1.0, 1.0] {
            let u = 0.5 + 0.5 * sign * GL_X[i];
            let w = 0.5 * GL_W[i];
            let t = point(u);
            let (f0, ds_drho, ds_dz) = integrand(geo, t);
            // ε-damping factors: e^{−εt/ħ} for ε, ε/2, ε/4 from one exp.
            let e_quarter = (-epsilons[2] * t / geo.hbar).exp();
            let e_half = e_quarter * e_quarter;
            let e_full = e_half * e_half;
            let jw = jac * w;
            for (k, damp) in [e_full, e_half, e_quarter].into_iter().enumerate() {
                let f = f0 * damp * jw;
                acc[k].g.add(f);
                acc[k].dr.add(f * ds_drho);
                acc[k].dz.add(f * ds_dz);
            }
        }
    }
}

impl Geometry {
    /// e^{iΦ(t_ref)/ħ}; combined with the per-node difference phases this
    /// reconstructs the full integrand.
    fn reference_factor(&self) -> Complex64 {
        let t = self.t_ref;
        let s_transverse = if self.magnetic {
            0.5 * self.m * self.omega_l * self.rho * self.rho * self.cot_ref
        } else {
            0.5 * self.m * self.rho * self.rho * self.inv_t_ref
        };
        let s_cl = s_transverse + 0.5 * self.m * self.z * self.z * self.inv_t_ref
            - 0.5 * self.force * t * self.z
            - self.force * self.force * t * t * t / (24.0 * self.m);
        (Complex64::new(0.0, 1.0 / self.hbar) * (s_cl + self.energy * t)).exp()
    }
}

/// Returns a(t)·e^{i[Φ(t)−Φ(t_ref)]/ħ} and the logarithmic-gradient factors
/// (i/ħ)∂S/∂ρ, (i/ħ)∂S/∂z at complex time t. The phase difference is built
/// from cancellation-free forms so that its rounding error is set by the
/// difference's own magnitude, not by the ~1e9 rad absolute phase.
fn integrand(geo: &Geometry, t: Complex64) -> (Complex64, Complex64, Complex64) {
    let m = geo.m;
    let hbar = geo.hbar;
    let ihbar = Complex64::new(0.0, 1.0 / hbar);
    let e3ipi4 = Complex64::from_polar(1.0, -3.0 * PI / 4.0);
    let f = geo.force;
    let rho2 = geo.rho * geo.rho;
    let z = geo.z;
    let dt = t - geo.t_ref;
    // 1/t − 1/t_ref without cancellation.
    let inv_diff = -dt * geo.inv_t_ref / t;

    let (s_diff_transverse, amp, ds_drho) = if geo.magnetic {
        let w = geo.omega_l * t;
        let sinw = w.sin();
        let cot = w.cos() / sinw;
        // cot a − cot b = sin(b − a)/(sin a · sin b).
        let cot_diff = (-geo.omega_l * dt).sin() / (sinw * geo.sin_ref);
        (
            0.5 * m * geo.omega_l * rho2 * cot_diff,
            e3ipi4 * (m * geo.omega_l / (2.0 * PI * hbar)) / sinw
                * (m / (2.0 * PI * hbar * t)).sqrt(),
            ihbar * (m * geo.omega_l * geo.rho * cot),
        )
    } else {
        (
            0.5 * m * rho2 * inv_diff,
            e3ipi4 * (m / (2.0 * PI * hbar) / t).powf(1.5),
            ihbar * (m * geo.rho / t),
        )
    };
    // t³ − t_ref³ = dt·(t² + t·t_ref + t_ref²).
    let cubic = dt * (t * t + t * geo.t_ref + geo.t_ref * geo.t_ref);
    let s_diff = s_diff_transverse + 0.5 * m * z * z * inv_diff - 0.5 * f * z * dt
        - f * f * cubic / (24.0 * m);
    let phase = ihbar * (s_diff + geo.energy * dt);
    let ds_dz = ihbar * (m * z / t - 0.5 * f * t);
    (amp * phase.exp(), ds_drho, ds_dz)
}

#[derive(Default)]
struct KahanC {
    re: f64,
    cre: f64,
    im: f64,
    cim: f64,
}

impl KahanC {
    fn add(&mut self, v: Complex64) {
        let y = v.re - self.cre;
        let t = self.re + y;
        self.cre = (t - self.re) - y;
        self.re = t;
        let y = v.im - self.cim;
        let t = self.im + y;
        self.cim = (t - self.im) - y;
        self.im = t;
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::build_config;
    use approx::assert_relative_eq;

    /// With a weak force the Green function near the source must reduce to
    /// the free-particle form −(m/2πħ²)e^{ikr}/r times the first-order
    /// phase e^{−iF·t₁·z/2ħ} of the direct path (flight time t₁ = r√(m/2E)).
    /// This pins the overall normalization, phase convention and sign of the
    /// propagator route. Residual deviation comes from the slow returning
    /// path, whose relative amplitude is ~1% at these parameters.
    #[test]
    fn reduces_to_free_particle_at_weak_force() {
        let cfg = build_config(100.0, 10.0, 0.0).unwrap();
        let hbar = cfg.constants.hbar;
        let k = cfg.momentum / hbar;
        for (rho, z) in [(0.4e-6, -0.3e-6_f64), (0.2e-6, -0.45e-6)] {
            let r: f64 = (rho * rho + z * z).sqrt();
            let field = green_time_integral_default(&cfg, rho, z).unwrap();
            let t_direct = r * (cfg.constants.mass / (2.0 * cfg.energy)).sqrt();
            let corr = -cfg.force * t_direct * z / (2.0 * hbar);
            let expect = -(cfg.constants.mass / (2.0 * PI * hbar * hbar))
                * Complex64::from_polar(1.0 / r, k * r + corr);
            let rel = (field.g - expect).norm() / expect.norm();
            assert!(rel < 0.03, "free-particle reduction off by {rel:e} at ({rho:e},{z:e})");
        }
    }

    #[test]
    fn radial_gradient_vanishes_on_axis() {
        let cfg = build_config(100.5, 423.0, 0.0).unwrap();
        let field = green_time_integral_default(&cfg, 0.0, -0.1).unwrap();
        assert_eq!(field.dg_drho, Complex64::new(0.0, 0.0));
        assert!(field.g.norm() > 0.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let cfg = build_config(100.5, 423.0, 0.0).unwrap();
        assert!(green_time_integral(&cfg, 0.0, 0.0, 1e-30, 0.1).is_err());
        assert!(green_time_integral(&cfg, 1e-6, -0.1, -1.0, 0.1).is_err());
        assert!(green_time_integral(&cfg, 1e-6, -0.1, 1e-30, 1.0).is_err());
    }
}
