//! Serialization of field maps, profiles and run manifests: CSV (exact
//! round-trip), 16-bit binary PGM with logarithmic scaling, and the
//! key=value run-configuration format.

use crate::grid::FieldMap;
use crate::{Error, Result, CONSTANTS_VERSION};
use std::io::Write;
use std::path::Path;
use std::time::Duration;

/// Formats a sample so that parsing it back recovers the identical f64:
/// integers print bare, everything else in shortest round-trip scientific
/// notation.
fn format_value(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:e}")
    }
}

/// Writes a map as CSV with header `rho_m,z_m,value[,mask]`, row-major with
/// z as the outer loop. Identical inputs produce byte-identical files.
pub fn write_csv<W: Write>(map: &FieldMap, mut out: W) -> Result<()> {
    let has_mask = map.mask.is_some();
    if has_mask {
        writeln!(out, "rho_m,z_m,value,mask")?;
    } else {
        writeln!(out, "rho_m,z_m,value")?;
    }
    for j in 0..map.grid.n_z {
        let z = map.grid.z_at(j);
        for i in 0..map.grid.n_rho {
            let rho = map.grid.rho_at(i);
            let v = map.value(i, j);
            if has_mask {
                writeln!(
                    out,
                    "{},{},{},{}",
                    format_value(rho),
                    format_value(z),
                    format_value(v),
                    u8::from(map.is_masked(i, j))
                )?;
            } else {
                writeln!(
                    out,
                    "{},{},{}",
                    format_value(rho),
                    format_value(z),
                    format_value(v)
                )?;
            }
        }
    }
    Ok(())
}

/// Reads back a CSV produced by [`write_csv`]: returns (ρ, z, value) rows
/// and the optional mask column.
pub fn read_csv(text: &str) -> Result<(Vec<(f64, f64, f64)>, Option<Vec<bool>>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty CSV".into()))?;
    let has_mask = match header.trim() {
        "rho_m,z_m,value" => false,
        "rho_m,z_m,value,mask" => true,
        other => return Err(Error::Parse(format!("unexpected CSV header '{other}'"))),
    };
    let mut rows = Vec::new();
    let mut mask = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 + usize::from(has_mask) {
            return Err(Error::Parse(format!("line {}: wrong field count", n + 2)));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 2)))
        };
        rows.push((parse(fields[0])?, parse(fields[1])?, parse(fields[2])?));
        if has_mask {
            mask.push(fields[3].trim() == "1");
        }
    }
    Ok((rows, if has_mask { Some(mask) } else { None }))
}

/// Writes a 16-bit big-endian binary PGM (P5) with logarithmic scaling:
/// v = round(65535·clamp(log10(x/x_max) + D, 0, D)/D) over `decades` = D
/// decades below the map maximum. Masked or non-positive cells map to 0.
pub fn write_pgm<W: Write>(map: &FieldMap, decades: f64, mut out: W) -> Result<()> {
    if !(decades > 0.0) {
        return Err(Error::Domain(format!(
            "decade window must be positive, got {decades}"
        )));
    }
    let x_max = map.max_value();
    write!(out, "P5\n{} {}\n65535\n", map.grid.n_rho, map.grid.n_z)?;
    let mut buf = Vec::with_capacity(map.values.len() * 2);
    for j in 0..map.grid.n_z {
        for i in 0..map.grid.n_rho {
            let x = map.value(i, j);
            let v = if map.is_masked(i, j) || !(x > 0.0) || !(x_max > 0.0) {
                0u16
            } else {
                let scaled = ((x / x_max).log10() + decades).clamp(0.0, decades) / decades;
                (65535.0 * scaled).round() as u16
            };
            buf.extend_from_slice(&v.to_be_bytes());
        }
    }
    out.write_all(&buf)?;
    Ok(())
}

/// Provenance record written next to every output artifact.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct RunManifest {
    /// Input parameters in input units (μeV, eV/m, T).
    pub config: ConfigEcho,
    /// Full command-line invocation.
    pub invocation: Vec<String>,
    /// Solver tolerances in effect.
    pub tolerances: Tolerances,
    pub wall_time_s: f64,
    pub cell_failures: usize,
    pub constants_version: String,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ConfigEcho {
    pub e_uev: f64,
    pub f_ev_per_m: f64,
    pub b_t: f64,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub series_tol: f64,
    pub quadrature_tol: f64,
}

impl RunManifest {
    pub fn new(
        config: ConfigEcho,
        invocation: Vec<String>,
        series_tol: f64,
        wall_time: Duration,
        cell_failures: usize,
    ) -> Self {
        RunManifest {
            config,
            invocation,
            tolerances: Tolerances { series_tol, quadrature_tol: 1e-6 },
            wall_time_s: wall_time.as_secs_f64(),
            cell_failures,
            constants_version: CONSTANTS_VERSION.to_string(),
        }
    }

    /// Writes `<out>.manifest.json` next to the artifact at `out`.
    pub fn write_next_to(&self, out: &Path) -> Result<()> {
        let mut path = out.as_os_str().to_owned();
        path.push(".manifest.json");
        let file = std::fs::File::create(std::path::PathBuf::from(path))?;
        serde_json::to_writer_pretty(file, self)
            .map_err(|e| Error::Parse(format!("manifest serialization: {e}")))?;
        Ok(())
    }
}

/// Parses the key=value run-configuration format with keys E_ueV,
/// F_eV_per_m, B_T. Lines starting with '#' are comments.
pub fn parse_config_file(text: &str) -> Result<(Option<f64>, Option<f64>, Option<f64>)> {
    let mut e = None;
    let mut f = None;
    let mut b = None;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", n + 1)))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|err| Error::Parse(format!("config line {}: {err}", n + 1)))?;
        match key.trim() {
            "E_ueV" => e = Some(value),
            "F_eV_per_m" => f = Some(value),
            "B_T" => b = Some(value),
            other => {
                return Err(Error::Parse(format!(
                    "config line {}: unknown key '{other}'",
                    n + 1
                )))
            }
        }
    }
    Ok((e, f, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn sample_map() -> FieldMap {
        let grid = GridSpec::new(0.0, 2e-6, -0.21, -0.2, 3, 2).unwrap();
        let mut map = FieldMap::new(
            grid,
            "jmag",
            vec![1.5e41, 0.0, 3.25e39, 2.0, 7.0, 1.0e-280],
        );
        map.mask = Some(vec![false, true, false, false, false, false]);
        map
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let map = sample_map();
        let mut buf = Vec::new();
        write_csv(&map, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let (rows, mask) = read_csv(&text).unwrap();
        assert_eq!(rows.len(), 6);
        for (idx, (rho, z, v)) in rows.iter().enumerate() {
            let (i, j) = (idx % 3, idx / 3);
            assert_eq!(*rho, map.grid.rho_at(i), "rho at {idx}");
            assert_eq!(*z, map.grid.z_at(j), "z at {idx}");
            assert_eq!(*v, map.values[idx], "value at {idx}");
        }
        assert_eq!(mask.unwrap(), map.mask.clone().unwrap());
        // Deterministic bytes.
        let mut buf2 = Vec::new();
        write_csv(&map, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn pgm_layout_and_scaling() {
        let map = sample_map();
        let mut buf = Vec::new();
        write_pgm(&map, 6.0, &mut buf).unwrap();
        let header_end = buf.windows(6).position(|w| w == b"65535\n").unwrap() + 6;
        assert_eq!(&buf[..3], b"P5\n");
        let pixels = &buf[header_end..];
        assert_eq!(pixels.len(), 12);
        let px =
            |k: usize| -> u16 { u16::from_be_bytes([pixels[2 * k], pixels[2 * k + 1]]) };
        // Maximum maps to full scale; masked cell to zero.
        assert_eq!(px(0), 65535);
        assert_eq!(px(1), 0);
        // 1.5e41 → 3.25e39 is 1.664 decades below max over a 6-decade window.
        let expected = (65535.0 * ((3.25e39f64 / 1.5e41).log10() + 6.0) / 6.0).round() as u16;
        assert_eq!(px(2), expected);
        // Far below the decade window clamps to zero.
        assert_eq!(px(5), 0);
    }

    #[test]
    fn config_file_parsing() {
        let (e, f, b) =
            parse_config_file("# run\nE_ueV = 60.8\nF_eV_per_m=116\nB_T = 1e-3\n").unwrap();
        assert_eq!(e, Some(60.8));
        assert_eq!(f, Some(116.0));
        assert_eq!(b, Some(1e-3));
        assert!(parse_config_file("bogus = 1").is_err());
        assert!(parse_config_file("E_ueV").is_err());
    }

    #[test]
    fn manifest_round_trips_through_json() {
        let manifest = RunManifest::new(
            ConfigEcho { e_uev: 60.8, f_ev_per_m: 116.0, b_t: 1e-3 },
            vec!["emlens".into(), "scan".into()],
            1e-8,
            Duration::from_millis(1234),
            0,
        );
        let text = serde_json::to_string(&manifest).unwrap();
        let back: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back.config.e_uev, 60.8);
        assert_eq!(back.constants_version, crate::CONSTANTS_VERSION);
        assert!((back.wall_time_s - 1.234).abs() < 1e-9);
    }
}
