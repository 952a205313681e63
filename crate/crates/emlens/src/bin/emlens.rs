//! Command-line front end: grid scans, detector profiles, resonance
//! geometry, uncertainty sweeps and the built-in verification suite.

use clap::{Args, Parser, Subcommand};
use emlens::io::{parse_config_file, write_csv, write_pgm, ConfigEcho, RunManifest};
use emlens::units::build_config;
use emlens::{FieldConfig, GridSpec};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "emlens",
    about = "Electron emission into parallel electric and magnetic fields: \
             quantum, semiclassical and classical current distributions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Emission energy in μeV.
    #[arg(long = "E-ueV")]
    e_uev: Option<f64>,
    /// Electric force in eV/m.
    #[arg(long = "F-eV-m")]
    f_ev_m: Option<f64>,
    /// Magnetic field in tesla.
    #[arg(long = "B-T")]
    b_t: Option<f64>,
    /// key=value file with E_ueV, F_eV_per_m, B_T; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl FieldArgs {
    fn resolve(&self) -> emlens::Result<(FieldConfig, ConfigEcho)> {
        let (mut e, mut f, mut b) = (None, None, None);
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)?;
            (e, f, b) = parse_config_file(&text)?;
        }
        let e = self.e_uev.or(e).ok_or(emlens::Error::Validation {
            field: "E_ueV",
            message: "missing; pass --E-ueV or a config file".into(),
        })?;
        let f = self.f_ev_m.or(f).ok_or(emlens::Error::Validation {
            field: "F_eV_per_m",
            message: "missing; pass --F-eV-m or a config file".into(),
        })?;
        let b = self.b_t.or(b).unwrap_or(0.0);
        Ok((build_config(e, f, b)?, ConfigEcho { e_uev: e, f_ev_per_m: f, b_t: b }))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a quantity on a (ρ, z) grid and write CSV or PGM.
    Scan {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0.0)]
        rho_min: f64,
        #[arg(long)]
        rho_max: f64,
        #[arg(long, allow_hyphen_values = true)]
        z_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        z_max: f64,
        #[arg(long, default_value_t = 100)]
        n_rho: usize,
        #[arg(long, default_value_t = 100)]
        n_z: usize,
        /// jmag, jz, gsq, paths or semiclassical.
        #[arg(long, default_value = "jmag")]
        quantity: String,
        #[arg(long)]
        out: PathBuf,
        /// csv or pgm.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Relative truncation tolerance of the Landau-channel series.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Logarithmic window (decades below maximum) for PGM output.
        #[arg(long, default_value_t = 6.0)]
        decades: f64,
    },
    /// Current profile across one detector plane.
    Profile {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        z_plane: f64,
        #[arg(long)]
        rho_max: f64,
        #[arg(long, default_value_t = 400)]
        n_rho: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Geometry of the k-th focusing resonance, optionally with the caustic
    /// curve as CSV.
    Resonance {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value_t = 181)]
        n_samples: usize,
        /// Write the sampled caustic sheets to this CSV path.
        #[arg(long)]
        caustic_out: Option<PathBuf>,
    },
    /// Quantum and classical uncertainty products over an energy sweep.
    Uncertainty {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 4)]
        k: u32,
        /// Sweep start:stop:steps in μeV, e.g. 2:120:12.
        #[arg(long = "E-sweep")]
        e_sweep: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the oracle-equivalence, flux, gradient and Wronskian suites.
    Selfcheck {
        #[command(flatten)]
        field: FieldArgs,
        /// Trim sample counts for a faster pass.
        #[arg(long)]
        quick: bool,
    },
}

fn main() {
    // Worker-pool size from the environment; results are independent of it.
    if let Ok(threads) = std::env::var("EMLENS_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        // Usage-level problems (bad flag values, malformed inputs) exit 2
        // like clap's own parse errors; numerical failures exit 1.
        Err(e @ (emlens::Error::Validation { .. } | emlens::Error::Parse(_))) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> emlens::Result<i32> {
    let invocation: Vec<String> = std::env::args().collect();
    match cli.command {
        Command::Scan {
            field,
            rho_min,
            rho_max,
            z_min,
            z_max,
            n_rho,
            n_z,
            quantity,
            out,
            format,
            tol,
            decades,
        } => {
            let started = Instant::now();
            let (cfg, echo) = field.resolve()?;
            let grid = GridSpec::new(rho_min, rho_max, z_min, z_max, n_rho, n_z)?;
            let map = match quantity.as_str() {
                "jmag" | "jz" | "gsq" => emlens::observables::quantum_map(&cfg, &grid, &quantity)?,
                "paths" => emlens::paths::path_count_map(&cfg, &grid)?,
                "semiclassical" => emlens::semiclassical::semiclassical_current_map(&cfg, &grid)?,
                other => {
                    return Err(emlens::Error::Validation {
                        field: "quantity",
                        message: format!(
                            "unknown quantity '{other}'; expected jmag, jz, gsq, paths \
                             or semiclassical"
                        ),
                    })
                }
            };
            let file = std::fs::File::create(&out)?;
            let writer = std::io::BufWriter::new(file);
            match format.as_str() {
                "csv" => write_csv(&map, writer)?,
                "pgm" => write_pgm(&map, decades, writer)?,
                other => {
                    return Err(emlens::Error::Validation {
                        field: "format",
                        message: format!("unknown format '{other}'; expected csv or pgm"),
                    })
                }
            }
            RunManifest::new(echo, invocation, tol, started.elapsed(), map.n_failed)
                .write_next_to(&out)?;
            println!(
                "wrote {} ({}x{} cells, {} failures, mask {:.1}%)",
                out.display(),
                n_rho,
                n_z,
                map.n_failed,
                100.0 * map.mask_fraction()
            );
            Ok(0)
        }
        Command::Profile { field, z_plane, rho_max, n_rho, out } => {
            let started = Instant::now();
            let (cfg, echo) = field.resolve()?;
            let rho_grid: Vec<f64> = (0..n_rho)
                .map(|i| rho_max * i as f64 / (n_rho - 1).max(1) as f64)
                .collect();
            let profile = emlens::observables::detector_profile(&cfg, z_plane, &rho_grid)?;
            let mut writer = std::io::BufWriter::new(std::fs::File::create(&out)?);
            use std::io::Write;
            writeln!(writer, "rho_m,jmag,jz")?;
            for (rho, jmag, jz) in &profile {
                writeln!(writer, "{rho:e},{jmag:e},{jz:e}")?;
            }
            drop(writer);
            RunManifest::new(echo, invocation, 1e-8, started.elapsed(), 0)
                .write_next_to(&out)?;
            println!("wrote {} ({} radii)", out.display(), profile.len());
            Ok(0)
        }
        Command::Resonance { field, k, n_samples, caustic_out } => {
            let started = Instant::now();
            let (cfg, echo) = field.resolve()?;
            let info = emlens::paths::resonance_info(&cfg, k)?;
            println!("resonance k = {k}");
            println!("  T_k      = {:e} s", info.t_k);
            println!("  z_k      = {:e} m", info.z_k);
            println!("  AC width = {:e} m", info.width_ac);
            println!("  BD length= {:e} m", info.length_bd);
            println!("  rho_max  = {:e} m", info.rho_max);
            println!("  overlapping = {}", info.overlapping);
            if let Some(out) = caustic_out {
                let curve = emlens::paths::caustic_curve(&cfg, k, n_samples)?;
                let mut writer = std::io::BufWriter::new(std::fs::File::create(&out)?);
                use std::io::Write;
                writeln!(writer, "theta_rad,rho_m,z_m")?;
                for (theta, rho, z) in &curve.samples {
                    writeln!(writer, "{theta:e},{rho:e},{z:e}")?;
                }
                drop(writer);
                RunManifest::new(echo, invocation, 1e-8, started.elapsed(), 0)
                    .write_next_to(&out)?;
                println!("wrote {}", out.display());
            }
            Ok(0)
        }
        Command::Uncertainty { field, k, e_sweep, out } => {
            let started = Instant::now();
            let (_, echo) = field.resolve()?;
            let parts: Vec<&str> = e_sweep.split(':').collect();
            if parts.len() != 3 {
                return Err(emlens::Error::Validation {
                    field: "E-sweep",
                    message: format!("expected start:stop:steps, got '{e_sweep}'"),
                });
            }
            let start: f64 = parts[0].parse().map_err(|e| emlens::Error::Parse(format!("{e}")))?;
            let stop: f64 = parts[1].parse().map_err(|e| emlens::Error::Parse(format!("{e}")))?;
            let steps: usize = parts[2].parse().map_err(|e| emlens::Error::Parse(format!("{e}")))?;
            if steps < 2 || !(stop > start) || !(start > 0.0) {
                return Err(emlens::Error::Validation {
                    field: "E-sweep",
                    message: "need 0 < start < stop and at least 2 steps".into(),
                });
            }
            let hbar = emlens::PhysicalConstants::codata2018().hbar;
            let mut writer = std::io::BufWriter::new(std::fs::File::create(&out)?);
            use std::io::Write;
            writeln!(writer, "E_ueV,product_over_hbar,classical_over_hbar")?;
            for i in 0..steps {
                // Logarithmic sweep: the crossover spans decades in energy.
                let e = start * (stop / start).powf(i as f64 / (steps - 1) as f64);
                let cfg = build_config(e, echo.f_ev_per_m, echo.b_t)?;
                let report = emlens::observables::uncertainty_product(&cfg, k)?;
                writeln!(
                    writer,
                    "{e:e},{:e},{:e}",
                    report.product / hbar,
                    report.classical_product / hbar
                )?;
            }
            drop(writer);
            RunManifest::new(echo, invocation, 1e-8, started.elapsed(), 0)
                .write_next_to(&out)?;
            println!("wrote {}", out.display());
            Ok(0)
        }
        Command::Selfcheck { field, quick } => {
            let (cfg, _) = field.resolve()?;
            let outcomes = emlens::selfcheck::run_all(&cfg, quick)?;
            let mut all_ok = true;
            for o in &outcomes {
                println!(
                    "{} {:22} worst {:9.3e}  tolerance {:9.3e}",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.worst,
                    o.tolerance
                );
                all_ok &= o.passed;
            }
            Ok(if all_ok { 0 } else { 1 })
        }
    }
}
