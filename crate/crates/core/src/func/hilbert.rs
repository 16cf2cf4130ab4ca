//! Sinc-interpolation transforms on uniform grids, applied as linear
//! convolutions through zero-padded FFTs.
//!
//! For samples `g_n` of a band-limited function the Hilbert transform and the
//! derivative at the nodes are exact discrete convolutions:
//!
//! ```text
//! (H g)_m = Σ_n g_n · h[m−n],   h[j] = −2/(πj) for odd j, 0 otherwise
//! (D g)_m = Σ_n g_n · d[m−n],   d[j] = (−1)^j / (j·spacing), d[0] = 0
//! ```
//!
//! with `(H g)(u) = (1/π) p.v.∫ g(w)/(w−u) dw`. Padding to twice the grid
//! length keeps the circular convolution free of wrap-around.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::GridFunction;
use crate::{Error, Result};

/// Edge-to-peak ratio above which a window is considered truncated.
pub const EDGE_LIMIT: f64 = 1e-10;
/// Allowed spectral content above half-Nyquist, relative to the peak.
pub const RESOLUTION_LIMIT: f64 = 1e-6;

/// Precomputed kernel spectra for one grid geometry.
pub struct SpectralOps {
    n: usize,
    padded: usize,
    spacing: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    hilbert_hat: Vec<Complex64>,
    deriv_hat: Vec<Complex64>,
}

impl SpectralOps {
    pub fn new(n: usize, spacing: f64) -> Self {
        let padded = 2 * n;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(padded);
        let inverse = planner.plan_fft_inverse(padded);
        let mut hk = vec![Complex64::new(0.0, 0.0); padded];
        let mut dk = vec![Complex64::new(0.0, 0.0); padded];
        for j in 1..n as isize {
            for (jj, idx) in [(j, j as usize), (-j, padded - j as usize)] {
                let jf = jj as f64;
                if jj.rem_euclid(2) == 1 {
                    hk[idx] = Complex64::new(-2.0 / (std::f64::consts::PI * jf), 0.0);
                }
                let sign = if jj.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                dk[idx] = Complex64::new(sign / (jf * spacing), 0.0);
            }
        }
        forward.process(&mut hk);
        forward.process(&mut dk);
        SpectralOps {
            n,
            padded,
            spacing,
            forward,
            inverse,
            hilbert_hat: hk,
            deriv_hat: dk,
        }
    }

    pub fn for_grid(g: &GridFunction) -> Self {
        Self::new(g.len(), g.spacing)
    }

    fn spectrum(&self, samples: &[f64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.padded];
        for (b, &s) in buf.iter_mut().zip(samples) {
            b.re = s;
        }
        self.forward.process(&mut buf);
        buf
    }

    fn apply(&self, spectrum: &[Complex64], kernel: &[Complex64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = spectrum.iter().zip(kernel).map(|(a, b)| a * b).collect();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.padded as f64;
        buf[..self.n].iter().map(|c| c.re * scale).collect()
    }

    pub fn hilbert(&self, samples: &[f64]) -> Vec<f64> {
        self.apply(&self.spectrum(samples), &self.hilbert_hat)
    }

    pub fn derivative(&self, samples: &[f64]) -> Vec<f64> {
        self.apply(&self.spectrum(samples), &self.deriv_hat)
    }

    fn omega(&self, k: usize) -> f64 {
        let k = if k <= self.padded / 2 { k as f64 } else { k as f64 - self.padded as f64 };
        2.0 * std::f64::consts::PI * k / (self.padded as f64 * self.spacing)
    }

    /// Highest angular frequency at which the padded spectrum still exceeds
    /// `floor` times its peak.
    pub fn bandwidth(&self, samples: &[f64], floor: f64) -> f64 {
        let spec = self.spectrum(samples);
        let peak = spec.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        spec.iter()
            .enumerate()
            .filter(|(_, c)| c.norm() >= floor * peak)
            .map(|(k, _)| self.omega(k).abs())
            .fold(0.0f64, f64::max)
    }

    /// Removes all content above angular frequency `cutoff`.
    pub fn low_pass(&self, samples: &[f64], cutoff: f64) -> Vec<f64> {
        let mut spec = self.spectrum(samples);
        for (k, c) in spec.iter_mut().enumerate() {
            if self.omega(k).abs() > cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        self.inverse.process(&mut spec);
        let scale = 1.0 / self.padded as f64;
        spec[..self.n].iter().map(|c| c.re * scale).collect()
    }

    /// Largest spectral magnitude above half-Nyquist relative to the peak
    /// magnitude of the zero-padded samples.
    pub fn unresolved_fraction(&self, samples: &[f64]) -> f64 {
        let spec = self.spectrum(samples);
        let quarter = self.padded / 4;
        let mut peak = 0.0f64;
        let mut high = 0.0f64;
        for (k, c) in spec.iter().enumerate() {
            let m = c.norm();
            peak = peak.max(m);
            if k > quarter && k < self.padded - quarter {
                high = high.max(m);
            }
        }
        if peak == 0.0 {
            0.0
        } else {
            high / peak
        }
    }
}

pub(crate) fn check_edges(samples: &[f64]) -> Result<()> {
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Ok(());
    }
    let edge = samples[0].abs().max(samples[samples.len() - 1].abs());
    let ratio = edge / peak;
    if ratio > EDGE_LIMIT {
        return Err(Error::EdgeLeak {
            ratio,
            limit: EDGE_LIMIT,
        });
    }
    Ok(())
}

pub(crate) fn check_resolution(ops: &SpectralOps, samples: &[f64]) -> Result<()> {
    let residual = ops.unresolved_fraction(samples);
    if residual > RESOLUTION_LIMIT {
        return Err(Error::GridTooCoarse {
            residual,
            tolerance: RESOLUTION_LIMIT,
        });
    }
    Ok(())
}

/// Discrete Hilbert transform `(1/π) p.v.∫ g(w)/(w−u) dw` at the grid nodes.
pub fn hilbert(g: &GridFunction) -> Result<GridFunction> {
    check_edges(&g.samples)?;
    let ops = SpectralOps::for_grid(g);
    check_resolution(&ops, &g.samples)?;
    Ok(g.with_samples(ops.hilbert(&g.samples)))
}

/// Hilbert transform without the decay precondition; the caller accepts edge
/// truncation effects.
pub fn hilbert_unchecked(g: &GridFunction) -> GridFunction {
    let ops = SpectralOps::for_grid(g);
    g.with_samples(ops.hilbert(&g.samples))
}

pub fn derivative(g: &GridFunction) -> GridFunction {
    let ops = SpectralOps::for_grid(g);
    g.with_samples(ops.derivative(&g.samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_maps_to_zero() {
        let g = GridFunction::from_parts(1.0, -4.0, 0.01, vec![0.0; 801]).unwrap();
        let h = hilbert(&g).unwrap();
        assert!(h.samples.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn derivative_of_gaussian() {
        let g = GridFunction::sample(1.0, 1024, 10.0, |u| (-u * u).exp()).unwrap();
        let d = derivative(&g);
        for (u, v) in g.nodes().zip(&d.samples) {
            assert!((v + 2.0 * u * (-u * u).exp()).abs() < 1e-10, "u={u}");
        }
    }

    #[test]
    fn edge_leak_detected() {
        let g = GridFunction::sample(1.0, 512, 4.0, |u| 1.0 / (PI * (1.0 + u * u))).unwrap();
        assert!(matches!(hilbert(&g), Err(Error::EdgeLeak { .. })));
    }

    #[test]
    fn coarse_grid_detected() {
        // a narrow bump on a grid with about one sample across its width
        let g = GridFunction::sample(1.0, 64, 4.0, |u| (-(u * 8.0).powi(2)).exp()).unwrap();
        assert!(matches!(hilbert(&g), Err(Error::GridTooCoarse { .. })));
    }
}
