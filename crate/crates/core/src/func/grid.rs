use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default number of samples for grid windows.
pub const DEFAULT_POINTS: usize = 4096;
/// Default half-width of grid windows, in units of `tau`.
pub const DEFAULT_HALF_WIDTH: f64 = 16.0;

/// A window sampled on a uniform grid `u_i = origin + i·spacing`.
///
/// Values between nodes use four-point cubic interpolation; the function is
/// zero outside the sampled range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub tau: f64,
    pub origin: f64,
    pub spacing: f64,
    pub samples: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    tau: f64,
    kind: String,
    origin: f64,
    spacing: f64,
    samples: Vec<f64>,
}

impl GridFunction {
    /// Validates the raw parts without rescaling.
    pub fn from_parts(tau: f64, origin: f64, spacing: f64, samples: Vec<f64>) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidParameter("origin must be finite".into()));
        }
        if samples.len() < 4 {
            return Err(Error::InvalidParameter("grid needs at least 4 samples".into()));
        }
        if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite sample {bad}")));
        }
        Ok(GridFunction {
            tau,
            origin,
            spacing,
            samples,
        })
    }

    /// Builds a grid window rescaled so that its trapezoid integral is one.
    pub fn normalized(tau: f64, origin: f64, spacing: f64, samples: Vec<f64>) -> Result<Self> {
        let mut g = Self::from_parts(tau, origin, spacing, samples)?;
        let mass = g.integral();
        if !(mass.abs() > 0.0) {
            return Err(Error::InvalidParameter("window has zero integral".into()));
        }
        g.samples.iter_mut().for_each(|v| *v /= mass);
        Ok(g)
    }

    /// Samples `f` on the symmetric grid of `n` points spanning
    /// `[−half_width·tau, half_width·tau]`.
    pub fn sample<F: Fn(f64) -> f64>(tau: f64, n: usize, half_width: f64, f: F) -> Result<Self> {
        let (origin, spacing) = symmetric_geometry(tau, n, half_width)?;
        let samples = (0..n).map(|i| f(origin + i as f64 * spacing)).collect();
        Self::from_parts(tau, origin, spacing, samples)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn node(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.spacing
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }

    /// Same geometry, new samples.
    pub fn with_samples(&self, samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), self.len());
        GridFunction {
            samples,
            ..self.clone()
        }
    }

    pub fn integral(&self) -> f64 {
        let n = self.samples.len();
        let inner: f64 = self.samples[1..n - 1].iter().sum();
        self.spacing * (inner + 0.5 * (self.samples[0] + self.samples[n - 1]))
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    fn at(&self, i: isize) -> f64 {
        if i < 0 || i as usize >= self.samples.len() {
            0.0
        } else {
            self.samples[i as usize]
        }
    }

    /// Cubic Lagrange interpolation through the four surrounding nodes.
    pub fn eval(&self, u: f64) -> f64 {
        let s = (u - self.origin) / self.spacing;
        let last = (self.len() - 1) as f64;
        if !(s >= 0.0 && s <= last) {
            return 0.0;
        }
        let i = (s.floor() as isize).min(self.len() as isize - 2);
        let t = s - i as f64;
        let (p0, p1, p2, p3) = (self.at(i - 1), self.at(i), self.at(i + 1), self.at(i + 2));
        let w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
        w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3
    }

    /// Largest |f(u) − f(−u)| over mirrored node pairs; requires a grid
    /// symmetric about the origin.
    pub fn asymmetry(&self) -> f64 {
        let n = self.len();
        (0..n / 2).fold(0.0f64, |m, i| {
            m.max((self.samples[i] - self.samples[n - 1 - i]).abs())
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,f\n");
        for (u, v) in self.nodes().zip(&self.samples) {
            out.push_str(&format!("{u},{v}\n"));
        }
        out
    }

    /// Reads two-column `u,f` CSV (header optional) on a uniform grid and
    /// normalizes the result.
    pub fn from_csv(text: &str, tau: f64) -> Result<Self> {
        let mut us = Vec::new();
        let mut fs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',');
            let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
                return Err(Error::Parse(format!("line {}: expected two columns", lineno + 1)));
            };
            match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
                (Ok(u), Ok(f)) => {
                    us.push(u);
                    fs.push(f);
                }
                _ if lineno == 0 => continue,
                _ => return Err(Error::Parse(format!("line {}: not numeric", lineno + 1))),
            }
        }
        if us.len() < 4 {
            return Err(Error::Parse("need at least 4 rows".into()));
        }
        let spacing = (us[us.len() - 1] - us[0]) / (us.len() - 1) as f64;
        for (i, u) in us.iter().enumerate() {
            if (u - (us[0] + i as f64 * spacing)).abs() > 1e-9 * spacing.max(1.0) {
                return Err(Error::Parse(format!("row {i}: grid is not uniform")));
            }
        }
        Self::normalized(tau, us[0], spacing, fs)
    }

    pub fn to_json(&self) -> String {
        let j = GridJson {
            tau: self.tau,
            kind: "grid".into(),
            origin: self.origin,
            spacing: self.spacing,
            samples: self.samples.clone(),
        };
        serde_json::to_string_pretty(&j).expect("grid serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: GridJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if j.kind != "grid" {
            return Err(Error::Parse(format!("expected kind \"grid\", got {:?}", j.kind)));
        }
        Self::from_parts(j.tau, j.origin, j.spacing, j.samples)
    }
}

pub(crate) fn symmetric_geometry(tau: f64, n: usize, half_width: f64) -> Result<(f64, f64)> {
    if n < 4 {
        return Err(Error::InvalidParameter("grid needs at least 4 samples".into()));
    }
    if !(tau > 0.0 && half_width > 0.0) {
        return Err(Error::InvalidParameter("tau and half width must be positive".into()));
    }
    let origin = -half_width * tau;
    let spacing = 2.0 * half_width * tau / (n - 1) as f64;
    Ok((origin, spacing))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_grid() -> GridFunction {
        let g = GridFunction::sample(1.0, 512, 8.0, |u| (-u * u).exp()).unwrap();
        GridFunction::normalized(g.tau, g.origin, g.spacing, g.samples).unwrap()
    }

    #[test]
    fn normalization_and_symmetry() {
        let g = gaussian_grid();
        assert!((g.integral() - 1.0).abs() < 1e-12);
        assert!(g.asymmetry() < 1e-15);
        assert!((g.node(0) + 8.0).abs() < 1e-12 && (g.node(511) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn cubic_interpolation_is_accurate_and_vanishes_outside() {
        let g = gaussian_grid();
        let peak = 1.0 / std::f64::consts::PI.sqrt();
        for u in [0.0, 0.013, 0.5, -1.37, 2.2] {
            assert!((g.eval(u) - peak * (-u * u).exp()).abs() < 1e-5, "u={u}");
        }
        assert_eq!(g.eval(8.5), 0.0);
        assert_eq!(g.eval(-9.0), 0.0);
    }

    #[test]
    fn invalid_parts_are_rejected() {
        assert!(GridFunction::from_parts(0.0, 0.0, 1.0, vec![0.0; 8]).is_err());
        assert!(GridFunction::from_parts(1.0, 0.0, -1.0, vec![0.0; 8]).is_err());
        assert!(GridFunction::from_parts(1.0, 0.0, 1.0, vec![f64::NAN; 8]).is_err());
        assert!(GridFunction::normalized(1.0, 0.0, 1.0, vec![0.0; 8]).is_err());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let g = gaussian_grid();
        let back = GridFunction::from_json(&g.to_json()).unwrap();
        assert!(back == g, "json round trip changed samples");
        assert_eq!(back.to_json(), g.to_json());
        let from_csv = GridFunction::from_csv(&g.to_csv(), 1.0).unwrap();
        assert_eq!(from_csv.len(), g.len());
        for (a, b) in from_csv.samples.iter().zip(&g.samples) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(GridFunction::from_csv("u,f\n0,1\n1,2\n3,3\n4,4\n", 1.0).is_err());
    }
}
