//! Regular (ρ, z) evaluation grids and the sampled field maps they produce.

use crate::{Error, Result};

/// A rectangular grid in the (ρ, z) plane.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub rho_min: f64,
    pub rho_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub n_rho: usize,
    pub n_z: usize,
}

impl GridSpec {
    pub fn new(
        rho_min: f64,
        rho_max: f64,
        z_min: f64,
        z_max: f64,
        n_rho: usize,
        n_z: usize,
    ) -> Result<Self> {
        let spec = GridSpec { rho_min, rho_max, z_min, z_max, n_rho, n_z };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho_min >= 0.0) {
            return Err(Error::Validation {
                field: "rho_min",
                message: format!("must be non-negative, got {}", self.rho_min),
            });
        }
        if !(self.rho_max > self.rho_min) {
            return Err(Error::Validation {
                field: "rho_max",
                message: format!("must exceed rho_min, got {} <= {}", self.rho_max, self.rho_min),
            });
        }
        if !(self.z_max > self.z_min) {
            return Err(Error::Validation {
                field: "z_max",
                message: format!("must exceed z_min, got {} <= {}", self.z_max, self.z_min),
            });
        }
        if self.n_rho < 2 || self.n_z < 2 {
            return Err(Error::Validation {
                field: "n_rho/n_z",
                message: format!("need at least 2 points per axis, got {}x{}", self.n_rho, self.n_z),
            });
        }
        Ok(())
    }

    pub fn rho_at(&self, i: usize) -> f64 {
        self.rho_min + (self.rho_max - self.rho_min) * i as f64 / (self.n_rho - 1) as f64
    }

    pub fn z_at(&self, j: usize) -> f64 {
        self.z_min + (self.z_max - self.z_min) * j as f64 / (self.n_z - 1) as f64
    }

    pub fn rho_step(&self) -> f64 {
        (self.rho_max - self.rho_min) / (self.n_rho - 1) as f64
    }

    pub fn z_step(&self) -> f64 {
        (self.z_max - self.z_min) / (self.n_z - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.n_rho * self.n_z
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A sampled scalar field on a [`GridSpec`], stored row-major with z as the
/// outer (row) index. An optional mask marks cells excluded from analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap {
    pub grid: GridSpec,
    pub channel: String,
    pub values: Vec<f64>,
    pub mask: Option<Vec<bool>>,
    /// Count of cells whose evaluation failed (these are also masked).
    pub n_failed: usize,
}

impl FieldMap {
    pub fn new(grid: GridSpec, channel: impl Into<String>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "sample count must match the grid");
        FieldMap { grid, channel: channel.into(), values, mask: None, n_failed: 0 }
    }

    pub fn index(&self, i_rho: usize, i_z: usize) -> usize {
        i_z * self.grid.n_rho + i_rho
    }

    pub fn value(&self, i_rho: usize, i_z: usize) -> f64 {
        self.values[self.index(i_rho, i_z)]
    }

    pub fn is_masked(&self, i_rho: usize, i_z: usize) -> bool {
        self.mask
            .as_ref()
            .map(|m| m[i_z * self.grid.n_rho + i_rho])
            .unwrap_or(false)
    }

    /// Fraction of masked cells (0 when there is no mask).
    pub fn mask_fraction(&self) -> f64 {
        match &self.mask {
            None => 0.0,
            Some(m) => m.iter().filter(|&&x| x).count() as f64 / m.len() as f64,
        }
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .zip(mask_iter(self))
            .filter(|(v, masked)| !masked && v.is_finite())
            .map(|(v, _)| *v)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn mask_iter(map: &FieldMap) -> Box<dyn Iterator<Item = bool> + '_> {
    match &map.mask {
        Some(m) => Box::new(m.iter().copied()),
        None => Box::new(std::iter::repeat(false)),
    }
}

/// Pearson cross-correlation of two maps over cells unmasked in both.
pub fn cross_correlation(a: &FieldMap, b: &FieldMap) -> f64 {
    assert_eq!(a.values.len(), b.values.len());
    let pairs: Vec<(f64, f64)> = a
        .values
        .iter()
        .zip(b.values.iter())
        .zip(mask_iter(a).zip(mask_iter(b)))
        .filter(|((x, y), (ma, mb))| !ma && !mb && x.is_finite() && y.is_finite())
        .map(|((x, y), _)| (*x, *y))
        .collect();
    let n = pairs.len() as f64;
    if n < 2.0 {
        return f64::NAN;
    }
    // Rescale to unit magnitude first: field values span hundreds of orders
    // of magnitude and their squared deviations overflow f64 otherwise.
    let scale_x = pairs.iter().fold(0.0f64, |m, (x, _)| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let scale_y = pairs.iter().fold(0.0f64, |m, (_, y)| m.max(y.abs())).max(f64::MIN_POSITIVE);
    let (sx, sy) = pairs
        .iter()
        .fold((0.0, 0.0), |(ax, ay), (x, y)| (ax + x / scale_x, ay + y / scale_y));
    let (mx, my) = (sx / n, sy / n);
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in &pairs {
        let dx = x / scale_x - mx;
        let dy = y / scale_y - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    cov / (vx.sqrt() * vy.sqrt())
}

/// Relative RMS deviation √(Σ(a−b)²/Σb²) over cells unmasked in both maps.
pub fn relative_rms(a: &FieldMap, b: &FieldMap) -> f64 {
    assert_eq!(a.values.len(), b.values.len());
    let scale = b
        .values
        .iter()
        .zip(mask_iter(b))
        .filter(|(v, m)| !m && v.is_finite())
        .fold(0.0f64, |m, (v, _)| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let mut num = 0.0;
    let mut den = 0.0;
    for (((x, y), ma), mb) in a
        .values
        .iter()
        .zip(b.values.iter())
        .zip(mask_iter(a))
        .zip(mask_iter(b))
    {
        if !ma && !mb && x.is_finite() && y.is_finite() {
            num += (x / scale - y / scale) * (x / scale - y / scale);
            den += (y / scale) * (y / scale);
        }
    }
    (num / den).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(0.0, 1.0, -1.0, 0.0, 4, 4).is_ok());
        assert!(GridSpec::new(-0.1, 1.0, -1.0, 0.0, 4, 4).is_err());
        assert!(GridSpec::new(0.0, 0.0, -1.0, 0.0, 4, 4).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, -1.0, 4, 4).is_err());
        assert!(GridSpec::new(0.0, 1.0, -1.0, 0.0, 1, 4).is_err());
    }

    #[test]
    fn row_major_layout() {
        let grid = GridSpec::new(0.0, 1.0, -1.0, 0.0, 3, 2).unwrap();
        let map = FieldMap::new(grid, "test", (0..6).map(|i| i as f64).collect());
        assert_eq!(map.value(2, 0), 2.0);
        assert_eq!(map.value(0, 1), 3.0);
        assert_eq!(map.grid.rho_at(2), 1.0);
        assert_eq!(map.grid.z_at(1), 0.0);
    }

    #[test]
    fn correlation_of_identical_maps_is_one() {
        let grid = GridSpec::new(0.0, 1.0, -1.0, 0.0, 4, 4).unwrap();
        let vals: Vec<f64> = (0..16).map(|i| (i as f64 * 0.7).sin().abs()).collect();
        let a = FieldMap::new(grid, "a", vals.clone());
        let b = FieldMap::new(grid, "b", vals);
        assert!((cross_correlation(&a, &b) - 1.0).abs() < 1e-12);
        assert!(relative_rms(&a, &b) < 1e-12);
    }
}
