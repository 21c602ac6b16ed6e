//! Compactly supported radial functions `u(r) = r^a · PL(r)` with `PL`
//! piecewise linear on a grid and vanishing from the last grid point on.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radial profile `u(r) = r^{power} PL(r)`.
///
/// `PL` interpolates `values` linearly between `radii`, is constant
/// (`values[0]`) below the first radius and zero from the last radius on;
/// the last value must be 0. A nonzero `power` carries an exact power law,
/// so a singular profile like `|x|^{-γ}` is never sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
    power: f64,
}

/// JSON descriptor of a truncated power law `r^{-γ} - R^{-γ}` on `[0, R]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawDescriptor {
    pub gamma: f64,
    pub support_radius: f64,
}

/// Geometric grid of `points` radii from `r_min` to `r_max`.
pub fn geometric_grid(r_min: f64, r_max: f64, points: usize) -> Vec<f64> {
    let points = points.max(2);
    let ratio = (r_max / r_min).ln() / (points - 1) as f64;
    let mut g: Vec<f64> = (0..points).map(|k| r_min * (ratio * k as f64).exp()).collect();
    g[points - 1] = r_max;
    g
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::with_power(radii, values, 0.0)
    }

    pub fn with_power(radii: Vec<f64>, values: Vec<f64>, power: f64) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(Error::domain("a profile needs at least two (radius, value) pairs"));
        }
        if !power.is_finite() {
            return Err(Error::domain("profile power must be finite"));
        }
        if !(radii[0] >= 0.0) || radii.iter().any(|r| !r.is_finite()) {
            return Err(Error::domain("radii must be finite and nonnegative"));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("radii must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("profile values must be finite"));
        }
        if *values.last().expect("nonempty") != 0.0 {
            return Err(Error::domain(
                "profile must vanish at its support radius (last value 0)",
            ));
        }
        Ok(Self { radii, values, power })
    }

    /// Samples `f` on `radii`; the last sample is forced to 0.
    pub fn from_fn(radii: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut values: Vec<f64> = radii.iter().map(|&r| f(r)).collect();
        if let Some(last) = values.last_mut() {
            *last = 0.0;
        }
        Self::new(radii, values)
    }

    /// Tent `1 - r/R` on `[0, R]`.
    pub fn tent(radius: f64) -> Result<Self> {
        Self::new(vec![0.0, radius], vec![1.0, 0.0])
    }

    /// `r^{-γ} - R^{-γ}` on `(0, R)`, carried as `r^{-γ}(1 - (r/R)^γ)`.
    pub fn truncated_power_law(desc: PowerLawDescriptor, points: usize) -> Result<Self> {
        let PowerLawDescriptor { gamma, support_radius: big_r } = desc;
        if !(gamma > 0.0 && big_r > 0.0) {
            return Err(Error::domain("power law needs gamma > 0 and support_radius > 0"));
        }
        let mut radii = vec![0.0];
        radii.extend(geometric_grid(big_r * 1e-4, big_r, points));
        Self::from_fn(radii, |r| 1.0 - (r / big_r).powf(gamma))
            .map(|u| Self { power: -gamma, ..u })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn support_radius(&self) -> f64 {
        *self.radii.last().expect("nonempty")
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Piecewise-linear factor at `r`.
    pub fn linear_part(&self, r: f64) -> f64 {
        let n = self.radii.len();
        if r <= self.radii[0] {
            return self.values[0];
        }
        if r >= self.radii[n - 1] {
            return 0.0;
        }
        let k = self.radii.partition_point(|&x| x <= r) - 1;
        let (a, b) = (self.radii[k], self.radii[k + 1]);
        let th = (r - a) / (b - a);
        self.values[k] + th * (self.values[k + 1] - self.values[k])
    }

    pub fn eval(&self, r: f64) -> f64 {
        let pl = self.linear_part(r);
        if self.power == 0.0 || pl == 0.0 {
            pl
        } else {
            r.powf(self.power) * pl
        }
    }

    /// `r ↦ u(r/R)`.
    pub fn dilate(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::domain("dilation factor must be positive"));
        }
        let c = factor.powf(-self.power);
        Ok(Self {
            radii: self.radii.iter().map(|r| r * factor).collect(),
            values: self.values.iter().map(|v| v * c).collect(),
            power: self.power,
        })
    }

    /// `c · u`.
    pub fn scale(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    /// `r^{alpha} u(r)`, exactly.
    pub fn times_power(&self, alpha: f64) -> Self {
        Self {
            power: self.power + alpha,
            ..self.clone()
        }
    }

    /// Reads `radius,value` rows (a header line is optional).
    pub fn read_csv(reader: impl BufRead) -> Result<Self> {
        let mut radii = Vec::new();
        let mut values = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with(|c: char| c.is_alphabetic())) {
                continue;
            }
            let mut it = line.split(',').map(str::trim);
            let (Some(r), Some(v), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse(format!("line {}: expected two columns", i + 1)));
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))
            };
            radii.push(parse(r)?);
            values.push(parse(v)?);
        }
        Self::new(radii, values)
    }

    /// Writes the sampled values `u(r_k)` as `radius,value` rows.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "radius,value")?;
        for &r in &self.radii {
            writeln!(out, "{r:e},{:e}", self.eval(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(RadialProfile::new(vec![1.0, 0.5], vec![1.0, 0.0]).is_err());
        assert!(RadialProfile::new(vec![0.0, 1.0], vec![1.0, 0.5]).is_err());
        assert!(RadialProfile::new(vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn evaluation_and_dilation() {
        let u = RadialProfile::tent(2.0).unwrap();
        assert_eq!(u.eval(1.0), 0.5);
        assert_eq!(u.eval(3.0), 0.0);
        let v = u.dilate(3.0).unwrap();
        assert!((v.eval(3.0) - u.eval(1.0)).abs() < 1e-15);
        let w = u.times_power(-0.5).dilate(4.0).unwrap();
        assert!((w.eval(4.0) - u.times_power(-0.5).eval(1.0)).abs() < 1e-15);
    }

    #[test]
    fn truncated_power_law_is_exact_at_nodes() {
        let d = PowerLawDescriptor { gamma: 0.7, support_radius: 2.0 };
        let u = RadialProfile::truncated_power_law(d, 100).unwrap();
        for &r in &u.radii()[1..] {
            let exact = r.powf(-0.7) - 2f64.powf(-0.7);
            assert!((u.eval(r) - exact).abs() < 1e-12 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn csv_round_trip() {
        let u = RadialProfile::from_fn(geometric_grid(0.01, 1.0, 20), |r| (1.0 - r) * r).unwrap();
        let mut buf = Vec::new();
        u.write_csv(&mut buf).unwrap();
        let v = RadialProfile::read_csv(buf.as_slice()).unwrap();
        assert_eq!(u, v);
        assert!(RadialProfile::read_csv("radius,value\n1,x\n".as_bytes()).is_err());
    }
}
