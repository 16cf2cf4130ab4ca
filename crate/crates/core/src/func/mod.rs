//! Sampling windows and their transforms.
//!
//! Conventions used throughout the crate:
//!
//! - Fourier transform `f̂(ω) = ∫ f(u) e^{iωu} du`, so normalized windows have
//!   `f̂(0) = 1`.
//! - Hilbert transform `(H g)(u) = (1/π) p.v.∫ g(w)/(w−u) dw`.
//! - Star product `f⋆f = ½[f′·(H f) − f·(H f′)]`, which for the Gaussian
//!   window `e^{−u²/τ²}/(τ√π)` equals `f/(πτ²)`.

pub mod grid;
pub mod hilbert;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::exact::{rat, Rational};
use crate::quad;
use crate::{Error, Result};

pub use grid::GridFunction;
pub use hilbert::SpectralOps;

/// Closed-form window shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Window {
    /// `e^{−u²/τ²}/(τ√π)`
    Gaussian,
    /// `τ/(π(u²+τ²))`
    Lorentzian,
    /// `2τ³/(π(u²+τ²)²)`
    SquaredLorentzian,
}

impl Window {
    pub fn name(self) -> &'static str {
        match self {
            Window::Gaussian => "gaussian",
            Window::Lorentzian => "lorentzian",
            Window::SquaredLorentzian => "squared-lorentzian",
        }
    }

    /// `∫ (d√f/du)² du` for the unit-mass window of width τ, as a rational
    /// multiple of `τ^{−2}`.
    pub fn sqrt_gradient_energy(self) -> Rational {
        match self {
            Window::Gaussian => rat(1, 2),
            Window::Lorentzian => rat(1, 8),
            Window::SquaredLorentzian => rat(1, 2),
        }
    }
}

/// A real, rapidly decaying time window.
///
/// `scale` is the total weight `∫ f du`; the public constructors produce unit
/// weight, flows produce other weights.
#[derive(Clone, Debug, PartialEq)]
pub enum SamplingFunction {
    Analytic { window: Window, tau: f64, scale: f64 },
    Grid(GridFunction),
}

impl SamplingFunction {
    pub fn analytic(window: Window, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
        }
        Ok(SamplingFunction::Analytic {
            window,
            tau,
            scale: 1.0,
        })
    }

    pub fn gaussian(tau: f64) -> Result<Self> {
        Self::analytic(Window::Gaussian, tau)
    }

    pub fn lorentzian(tau: f64) -> Result<Self> {
        Self::analytic(Window::Lorentzian, tau)
    }

    pub fn squared_lorentzian(tau: f64) -> Result<Self> {
        Self::analytic(Window::SquaredLorentzian, tau)
    }

    pub fn tau(&self) -> f64 {
        match self {
            SamplingFunction::Analytic { tau, .. } => *tau,
            SamplingFunction::Grid(g) => g.tau,
        }
    }

    pub fn window(&self) -> Option<Window> {
        match self {
            SamplingFunction::Analytic { window, .. } => Some(*window),
            SamplingFunction::Grid(_) => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        self.window().map_or("grid", Window::name)
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            SamplingFunction::Analytic { window, tau, scale } => {
                let t = *tau;
                scale
                    * match window {
                        Window::Gaussian => (-(u / t).powi(2)).exp() / (t * PI.sqrt()),
                        Window::Lorentzian => t / (PI * (u * u + t * t)),
                        Window::SquaredLorentzian => 2.0 * t.powi(3) / (PI * (u * u + t * t).powi(2)),
                    }
            }
            SamplingFunction::Grid(g) => g.eval(u),
        }
    }

    /// `f̂(ω) = ∫ f(u) e^{iωu} du`; for grid windows the real part, i.e. the
    /// transform of the even part of the window.
    pub fn fourier(&self, omega: f64) -> f64 {
        match self {
            SamplingFunction::Analytic { window, tau, scale } => {
                scale * analytic_fourier(*window, *tau, omega)
            }
            SamplingFunction::Grid(g) => grid_fourier(g, omega).re,
        }
    }

    /// `|f̂(ω)|²`.
    pub fn power(&self, omega: f64) -> f64 {
        match self {
            SamplingFunction::Grid(g) => grid_fourier(g, omega).norm_sqr(),
            _ => self.fourier(omega).powi(2),
        }
    }

    /// Samples onto the default grid (4096 points over ±16τ).
    pub fn to_grid(&self) -> Result<GridFunction> {
        self.to_grid_with(grid::DEFAULT_POINTS, grid::DEFAULT_HALF_WIDTH)
    }

    pub fn to_grid_with(&self, n: usize, half_width: f64) -> Result<GridFunction> {
        match self {
            SamplingFunction::Grid(g) => Ok(g.clone()),
            _ => GridFunction::sample(self.tau(), n, half_width, |u| self.eval(u)),
        }
    }

    pub fn frequency_profile(&self) -> FrequencyProfile {
        match self {
            SamplingFunction::Analytic { window, tau, scale } => FrequencyProfile::Analytic {
                window: *window,
                tau: *tau,
                scale: *scale,
            },
            SamplingFunction::Grid(g) => FrequencyProfile::sampled(g),
        }
    }

    /// The star product `f⋆f`.
    ///
    /// Gaussian windows return the closed form `f/(πτ²)` scaled by the
    /// current weight; everything else is evaluated on a grid through the
    /// discrete Hilbert transform.
    pub fn star(&self) -> Result<SamplingFunction> {
        match self {
            SamplingFunction::Analytic {
                window: Window::Gaussian,
                tau,
                scale,
            } => Ok(SamplingFunction::Analytic {
                window: Window::Gaussian,
                tau: *tau,
                scale: scale * scale / (PI * tau * tau),
            }),
            SamplingFunction::Analytic { .. } => {
                let g = self.to_grid()?;
                Ok(SamplingFunction::Grid(star_grid(&g, &SpectralOps::for_grid(&g))?))
            }
            SamplingFunction::Grid(g) => {
                Ok(SamplingFunction::Grid(star_grid(g, &SpectralOps::for_grid(g))?))
            }
        }
    }

    /// `−coeff · ∫ (d√f/du)² du`.
    ///
    /// Closed forms for the analytic windows; grid windows differentiate √f
    /// with the sinc-derivative kernel and sum by the trapezoid rule.
    pub fn qi_functional(&self, coeff: f64) -> Result<f64> {
        match self {
            SamplingFunction::Analytic { window, tau, scale } => {
                let energy = crate::exact::to_f64(&window.sqrt_gradient_energy()) / (tau * tau);
                Ok(-coeff * scale * energy)
            }
            SamplingFunction::Grid(g) => {
                let min = g.samples.iter().cloned().fold(f64::INFINITY, f64::min);
                if min < -1e-14 {
                    return Err(Error::NegativeWindow { min });
                }
                let root: Vec<f64> = g.samples.iter().map(|v| v.max(0.0).sqrt()).collect();
                let ops = SpectralOps::for_grid(g);
                let d = ops.derivative(&root);
                let energy: f64 = d.iter().map(|v| v * v).sum::<f64>() * g.spacing;
                Ok(-coeff * energy)
            }
        }
    }
}

/// `f⋆f` for a grid window, reusing precomputed kernels.
pub fn star_grid(g: &GridFunction, ops: &SpectralOps) -> Result<GridFunction> {
    hilbert::check_edges(&g.samples)?;
    hilbert::check_resolution(ops, &g.samples)?;
    Ok(g.with_samples(star_samples(&g.samples, ops)))
}

pub(crate) fn star_samples(samples: &[f64], ops: &SpectralOps) -> Vec<f64> {
    let df = ops.derivative(samples);
    let hf = ops.hilbert(samples);
    let hdf = ops.hilbert(&df);
    samples
        .iter()
        .zip(&df)
        .zip(hf.iter().zip(&hdf))
        .map(|((f, d), (h, hd))| 0.5 * (d * h - f * hd))
        .collect()
}

fn analytic_fourier(window: Window, tau: f64, omega: f64) -> f64 {
    let x = omega.abs() * tau;
    match window {
        Window::Gaussian => (-x * x / 4.0).exp(),
        Window::Lorentzian => (-x).exp(),
        Window::SquaredLorentzian => (1.0 + x) * (-x).exp(),
    }
}

fn grid_fourier(g: &GridFunction, omega: f64) -> Complex64 {
    let n = g.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (u, v)) in g.nodes().zip(&g.samples).enumerate() {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        acc += Complex64::from_polar(w * v, omega * u);
    }
    acc * g.spacing
}

/// Fourier-side description of a window.
#[derive(Clone, Debug, PartialEq)]
pub enum FrequencyProfile {
    /// Gaussian `e^{−ω²τ²/4}`, Lorentzian `e^{−|ω|τ}`, squared Lorentzian
    /// `(1+|ω|τ)e^{−|ω|τ}`, times `scale`.
    Analytic { window: Window, tau: f64, scale: f64 },
    /// `f̂` at `ω_k = k·d_omega`, `k ≥ 0`; negative frequencies follow by
    /// conjugation.
    Sampled { d_omega: f64, values: Vec<Complex64> },
}

impl FrequencyProfile {
    /// Transform of a grid window on a fourfold zero-padded FFT grid.
    pub fn sampled(g: &GridFunction) -> Self {
        let m = 4 * g.len().next_power_of_two();
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let n = g.len();
        for (i, (b, v)) in buf.iter_mut().zip(&g.samples).enumerate() {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            b.re = w * v;
        }
        // inverse FFT kernel e^{+i·2πkj/m} matches the e^{iωu} convention
        rustfft::FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        let d_omega = 2.0 * PI / (m as f64 * g.spacing);
        let values = buf[..=m / 2]
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::from_polar(g.spacing, k as f64 * d_omega * g.origin))
            .collect();
        FrequencyProfile::Sampled { d_omega, values }
    }

    pub fn value(&self, omega: f64) -> Complex64 {
        match self {
            FrequencyProfile::Analytic { window, tau, scale } => {
                Complex64::new(scale * analytic_fourier(*window, *tau, omega), 0.0)
            }
            FrequencyProfile::Sampled { d_omega, values } => {
                let s = omega.abs() / d_omega;
                let k = s.floor() as usize;
                if k + 1 >= values.len() {
                    return Complex64::new(0.0, 0.0);
                }
                let t = s - k as f64;
                let v = values[k] * (1.0 - t) + values[k + 1] * t;
                if omega < 0.0 {
                    v.conj()
                } else {
                    v
                }
            }
        }
    }

    /// `∫₀^∞ ω³ |f̂(ω)|² dω`.
    pub fn cubic_power_moment(&self) -> f64 {
        match self {
            FrequencyProfile::Analytic { window, tau, scale } => {
                let t4 = tau.powi(4);
                let base = match window {
                    Window::Gaussian => 2.0,
                    _ => {
                        let (w, t) = (*window, *tau);
                        quad::integrate_to_infinity(
                            |om| om.powi(3) * analytic_fourier(w, t, om).powi(2),
                            0.0,
                            1e-15,
                            1e-12,
                        )
                        .value
                            * t4
                    }
                };
                scale * scale * base / t4
            }
            FrequencyProfile::Sampled { d_omega, values } => {
                let last = values.len() - 1;
                let s: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        let w = if k == last { 0.5 } else { 1.0 };
                        w * (k as f64 * d_omega).powi(3) * v.norm_sqr()
                    })
                    .sum();
                s * d_omega
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn eval_peaks() {
        assert_close(SamplingFunction::gaussian(1.0).unwrap().eval(0.0), 0.564_189_583_5, 1e-10);
        assert_close(SamplingFunction::lorentzian(1.0).unwrap().eval(0.0), 0.318_309_886_2, 1e-10);
        assert_close(
            SamplingFunction::squared_lorentzian(1.0).unwrap().eval(1.0),
            1.0 / (2.0 * PI),
            1e-15,
        );
    }

    #[test]
    fn fourier_closed_forms() {
        for w in [Window::Gaussian, Window::Lorentzian, Window::SquaredLorentzian] {
            let f = SamplingFunction::analytic(w, 1.7).unwrap();
            assert_eq!(f.fourier(0.0), 1.0);
            assert_close(f.fourier(0.9), f.fourier(-0.9), 0.0);
        }
        assert_close(SamplingFunction::gaussian(1.0).unwrap().fourier(2.0), (-1.0f64).exp(), 1e-15);
        assert_close(SamplingFunction::lorentzian(1.0).unwrap().fourier(1.0), (-1.0f64).exp(), 1e-15);
    }

    #[test]
    fn invalid_tau() {
        assert!(SamplingFunction::gaussian(0.0).is_err());
        assert!(SamplingFunction::lorentzian(-1.0).is_err());
        assert!(SamplingFunction::gaussian(f64::NAN).is_err());
    }

    #[test]
    fn gaussian_star_is_scaled_copy() {
        let f = SamplingFunction::gaussian(1.3).unwrap();
        let s = f.star().unwrap();
        for u in [0.0, 0.4, -2.0, 3.1] {
            assert_close(s.eval(u), f.eval(u) / (PI * 1.69), 1e-15);
        }
    }

    #[test]
    fn qi_functional_closed_forms() {
        let c = 1.0;
        let g = SamplingFunction::gaussian(2.0).unwrap();
        assert_close(g.qi_functional(c / (12.0 * PI)).unwrap(), -c / (24.0 * PI * 4.0), 1e-16);
        let l = SamplingFunction::lorentzian(1.0).unwrap();
        assert_close(l.qi_functional(1.0 / (8.0 * PI * PI)).unwrap(), -1.0 / (64.0 * PI * PI), 1e-16);
    }

    #[test]
    fn negative_grid_window_rejected() {
        let g = GridFunction::sample(1.0, 256, 8.0, |u| (-u * u).exp() - 0.1 * (-(u - 1.0).powi(2) * 9.0).exp() * 5.0)
            .unwrap();
        let f = SamplingFunction::Grid(g);
        assert!(matches!(f.qi_functional(1.0), Err(Error::NegativeWindow { .. })));
    }

    #[test]
    fn sampled_profile_matches_closed_form() {
        let g = SamplingFunction::gaussian(1.0).unwrap().to_grid().unwrap();
        let p = FrequencyProfile::sampled(&g);
        for om in [0.0, 0.5, 1.0, 2.0, 3.0] {
            let v = p.value(om);
            assert_close(v.re, (-om * om / 4.0).exp(), 1e-4);
            assert!(v.im.abs() < 1e-10);
        }
        assert_close(p.cubic_power_moment(), 2.0, 1e-7);
    }
}
