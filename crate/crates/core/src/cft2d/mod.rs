//! Vacuum statistics of the smeared chiral stress tensor `T(f)` of a 2D CFT.
//!
//! The second moment is
//!
//! ```text
//! Γ₂[f] = (c/48π²) ∫₀^∞ ω³ |f̂(ω)|² dω
//! ```
//!
//! and the cumulant generating function follows from the window flow
//! `∂f_λ/∂λ = f_λ⋆f_λ` as `W[μf] = ∫₀^μ (μ−λ) Γ₂[f_λ] dλ`. For the Gaussian
//! window the flow only rescales, `f_λ = πτ²/(πτ²−λ)·f`, which gives closed
//! forms for everything.

pub mod flow;

use std::f64::consts::PI;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dist::{ExactShiftedGamma, MomentSequence, Normalization, ShiftedGamma};
use crate::exact::{int, Quantity, RatPoly, Rational};
use crate::func::{SamplingFunction, Window};
use crate::quad::gauss_legendre;
use crate::{Error, Result};
pub use flow::{flow_numeric, FlowPath, FlowState};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CftParams {
    pub c: f64,
    pub tau: f64,
}

impl CftParams {
    /// `c ≥ 0` (zero is allowed so the linearity in `c` can be probed) and
    /// `tau > 0`.
    pub fn new(c: f64, tau: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("central charge must be non-negative, got {c}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
        }
        Ok(CftParams { c, tau })
    }

    /// The central charge as an exact rational (exact for the binary value).
    pub fn c_exact(&self) -> Rational {
        Rational::from_float(self.c).expect("finite c")
    }
}

/// `Γ₂[f]`; closed form for Gaussian windows, quadrature otherwise.
pub fn gamma2(f: &SamplingFunction, params: &CftParams) -> f64 {
    params.c / (48.0 * PI * PI) * f.frequency_profile().cubic_power_moment()
}

/// `A(λ) = πτ²/(πτ² − λ)`.
pub fn flow_amplitude_gaussian(tau: f64, lambda: f64) -> Result<f64> {
    let pole = PI * tau * tau;
    if lambda >= pole {
        return Err(Error::FlowPole { lambda, pole });
    }
    Ok(pole / (pole - lambda))
}

/// Tuning for the grid evaluation of `W`.
#[derive(Clone, Copy, Debug)]
pub struct CgfOptions {
    /// Relative agreement required between successive panel doublings.
    pub rel_tol: f64,
    /// Per-step relative error of the flow integrator.
    pub flow_tol: f64,
    pub max_panels: usize,
}

impl Default for CgfOptions {
    fn default() -> Self {
        CgfOptions {
            rel_tol: 1e-8,
            flow_tol: 1e-11,
            max_panels: 32,
        }
    }
}

const GL_ORDER: usize = 8;

/// Flow pole for a Gaussian window of weight `scale`.
fn gaussian_radius(tau: f64, scale: f64) -> f64 {
    PI * tau * tau / scale
}

/// The cumulant generating function `W[μf]`.
///
/// Gaussian windows use `W = (c/24)[−ln(1 − bμ) − bμ]` with `b = s/(πτ²)`
/// for a window of weight `s`. Everything else is evaluated on a grid by
/// flowing through composite Gauss–Legendre nodes on `[0, μ]`.
pub fn cgf(f: &SamplingFunction, params: &CftParams, mu: f64) -> Result<f64> {
    cgf_with(f, params, mu, &CgfOptions::default())
}

pub fn cgf_with(f: &SamplingFunction, params: &CftParams, mu: f64, opts: &CgfOptions) -> Result<f64> {
    if let SamplingFunction::Analytic { window: Window::Gaussian, tau, scale } = f {
        let radius = gaussian_radius(*tau, *scale);
        if mu >= radius {
            return Err(Error::OutOfRadius { mu, radius });
        }
        let bmu = mu / radius;
        return Ok(params.c / 24.0 * (-(-bmu).ln_1p() - bmu));
    }
    if mu == 0.0 {
        return Ok(0.0);
    }
    let g0 = f.to_grid()?;
    let (x, w) = gauss_legendre(GL_ORDER);
    let estimate = |panels: usize| -> Result<f64> {
        let width = mu / panels as f64;
        let mut nodes = Vec::with_capacity(panels * GL_ORDER);
        let mut weights = Vec::with_capacity(panels * GL_ORDER);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + 0.5 * width * xi);
                weights.push(0.5 * width.abs() * wi);
            }
        }
        // GL nodes are ascending; for negative μ that already walks away from 0
        // in the wrong order, so sort by distance from the origin
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&a, &b| nodes[a].abs().total_cmp(&nodes[b].abs()));
        let stops: Vec<f64> = order.iter().map(|&i| nodes[i]).collect();
        let states = flow::flow_through(&g0, &stops, opts.flow_tol)?;
        if states.len() < stops.len() || states.last().is_some_and(|s| s.blown_up) {
            let radius = states.last().map_or(0.0, |s| s.lambda);
            return Err(Error::OutOfRadius { mu, radius });
        }
        let signed = mu.signum();
        Ok(order
            .iter()
            .zip(&states)
            .map(|(&i, s)| signed * weights[i] * (mu - s.lambda) * gamma2(&s.f_lambda, params))
            .sum())
    };
    let mut panels = 1;
    let mut prev = estimate(panels)?;
    loop {
        panels *= 2;
        let next = estimate(panels)?;
        if (next - prev).abs() <= opts.rel_tol * next.abs() {
            return Ok(next);
        }
        if panels >= opts.max_panels {
            return Err(Error::Convergence("cgf panel doubling did not settle"));
        }
        prev = next;
    }
}

/// Where the flow blows up, searched up to `limit`; `None` when it survives.
pub fn flow_radius(f: &SamplingFunction, limit: f64, tol: f64) -> Result<Option<f64>> {
    if let SamplingFunction::Analytic { window: Window::Gaussian, tau, scale } = f {
        let r = gaussian_radius(*tau, *scale);
        return Ok((r <= limit).then_some(r));
    }
    let path = flow_numeric(f, limit, tol, 1)?;
    Ok(path.blown_up().then(|| path.last().lambda))
}

/// Sampled `W(μ)` with the validity radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CgfCurve {
    pub mu_values: Vec<f64>,
    #[serde(rename = "W_values")]
    pub w_values: Vec<f64>,
    pub radius: Option<f64>,
}

impl CgfCurve {
    /// Evaluates `W` at each `μ`; values at or beyond the radius are an
    /// error. `radius_search` bounds the blow-up search for grid windows.
    pub fn compute(f: &SamplingFunction, params: &CftParams, mus: &[f64], radius_search: f64) -> Result<Self> {
        let radius = flow_radius(f, radius_search, CgfOptions::default().flow_tol)?;
        let mut w_values = Vec::with_capacity(mus.len());
        for &mu in mus {
            if let Some(r) = radius {
                if mu >= r {
                    return Err(Error::OutOfRadius { mu, radius: r });
                }
            }
            w_values.push(cgf(f, params, mu)?);
        }
        Ok(CgfCurve { mu_values: mus.to_vec(), w_values, radius })
    }

    /// Smallest second divided difference over consecutive triples.
    pub fn min_second_difference(&self) -> f64 {
        let (m, w) = (&self.mu_values, &self.w_values);
        (1..m.len().saturating_sub(1))
            .map(|i| {
                let d1 = (w[i] - w[i - 1]) / (m[i] - m[i - 1]);
                let d2 = (w[i + 1] - w[i]) / (m[i + 1] - m[i]);
                2.0 * (d2 - d1) / (m[i + 1] - m[i - 1])
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_convex(&self) -> bool {
        self.min_second_difference() >= -1e-9
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("mu,W\n");
        for (m, w) in self.mu_values.iter().zip(&self.w_values) {
            out.push_str(&format!("{m},{w}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `γ_n = (πτ²)ⁿ Γ_n` for the Gaussian window as polynomials in `c`:
/// `γ₀ = 1`, `γ₁ = 0`, `γ_n = (n−1)(c/24)γ_{n−2} + (n−1)γ_{n−1}`.
pub fn gaussian_moment_polynomials(n_max: usize) -> Vec<RatPoly> {
    let gamma2 = RatPoly::linear(Rational::new(1.into(), 24.into()));
    let mut g = vec![RatPoly::constant(int(1)), RatPoly::zero()];
    for n in 2..=n_max {
        let k = int(n as i64 - 1);
        let next = &(&gamma2 * &g[n - 2]).scale(&k) + &g[n - 1].scale(&k);
        g.push(next);
    }
    g.truncate(n_max + 1);
    g
}

/// Unit `(πτ²)⁻¹` of the normalized Gaussian moments.
pub fn gaussian_moment_unit() -> Quantity {
    Quantity::new(int(1), -1, -2)
}

/// Exact Gaussian-window moments at central charge `params.c`.
pub fn moments_recursion_gaussian(params: &CftParams, n_max: usize) -> MomentSequence {
    moments_recursion_gaussian_exact(&params.c_exact(), n_max)
}

pub fn moments_recursion_gaussian_exact(c: &Rational, n_max: usize) -> MomentSequence {
    let values = gaussian_moment_polynomials(n_max).iter().map(|p| p.eval(c)).collect();
    MomentSequence::exact(
        values,
        Normalization::Scaled { unit: gaussian_moment_unit() },
        "cft2d-gaussian-recursion",
    )
    .expect("γ0 = 1")
}

fn positive_c(c: &Rational) -> Result<()> {
    if c.is_zero() || *c < Rational::zero() {
        return Err(Error::InvalidParameter("distribution needs c > 0".into()));
    }
    Ok(())
}

/// Chiral Gaussian-window distribution: `α = c/24`, `β = πτ²`,
/// `ω₀ = c/(24πτ²)`.
pub fn chiral_distribution_exact(c: &Rational) -> Result<ExactShiftedGamma> {
    positive_c(c)?;
    let alpha = c / int(24);
    ExactShiftedGamma::new(
        alpha.clone(),
        Quantity::new(int(1), 1, 2),
        Quantity::new(alpha, -1, -2),
    )
}

pub fn chiral_distribution(params: &CftParams) -> Result<ShiftedGamma> {
    Ok(chiral_distribution_exact(&params.c_exact())?.to_float(params.tau))
}

/// Energy density `x = ρτ²` of both chiralities: `α = c/12`, `β = π`,
/// `x₀ = c/(12π)`.
pub fn energy_density_distribution_exact(c: &Rational) -> Result<ExactShiftedGamma> {
    positive_c(c)?;
    let alpha = c / int(12);
    ExactShiftedGamma::new(
        alpha.clone(),
        Quantity::new(int(1), 1, 0),
        Quantity::new(alpha, -1, 0),
    )
}

pub fn energy_density_distribution(params: &CftParams) -> Result<ShiftedGamma> {
    Ok(energy_density_distribution_exact(&params.c_exact())?.to_float(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn gamma2_closed_forms() {
        let p = CftParams::new(1.0, 1.0).unwrap();
        let g = SamplingFunction::gaussian(1.0).unwrap();
        assert!((gamma2(&g, &p) - 1.0 / (24.0 * PI * PI)).abs() < 1e-16);
        let l = SamplingFunction::lorentzian(1.0).unwrap();
        assert!((gamma2(&l, &p) - 1.0 / (128.0 * PI * PI)).abs() < 1e-12);
        assert_eq!(gamma2(&g, &CftParams::new(0.0, 1.0).unwrap()), 0.0);
    }

    #[test]
    fn flow_amplitude() {
        assert_eq!(flow_amplitude_gaussian(1.0, 0.0).unwrap(), 1.0);
        assert!((flow_amplitude_gaussian(1.0, PI / 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(flow_amplitude_gaussian(1.0, PI), Err(Error::FlowPole { .. })));
    }

    #[test]
    fn gaussian_cgf_closed_form() {
        let p = CftParams::new(1.0, 1.0).unwrap();
        let g = SamplingFunction::gaussian(1.0).unwrap();
        assert_eq!(cgf(&g, &p, 0.0).unwrap(), 0.0);
        let w = cgf(&g, &p, PI / 2.0).unwrap();
        assert!((w - (2f64.ln() - 0.5) / 24.0).abs() < 1e-15);
        assert!((w - 0.008_047_799_19).abs() < 1e-11);
        assert!(matches!(cgf(&g, &p, PI), Err(Error::OutOfRadius { .. })));
    }

    #[test]
    fn low_order_polynomials() {
        let g = gaussian_moment_polynomials(4);
        assert!(g[1].is_zero());
        assert_eq!(g[2], RatPoly::linear(rat(1, 24)));
        assert_eq!(g[3], RatPoly::linear(rat(1, 12)));
        // γ4 = 3γ2² + 3γ3
        assert_eq!(g[4], RatPoly::new(vec![int(0), rat(1, 4), rat(3, 576)]));
    }

    #[test]
    fn distributions() {
        let d = chiral_distribution_exact(&int(1)).unwrap();
        assert_eq!(d.alpha, rat(1, 24));
        assert_eq!(d.mean_in_units(), int(0));
        let e = energy_density_distribution(&CftParams::new(1.0, 1.0).unwrap()).unwrap();
        assert!((e.omega0 - 1.0 / (12.0 * PI)).abs() < 1e-17);
        assert!(chiral_distribution_exact(&int(0)).is_err());
    }

    #[test]
    fn curve_json_round_trip() {
        let p = CftParams::new(1.0, 1.0).unwrap();
        let g = SamplingFunction::gaussian(1.0).unwrap();
        let mus: Vec<f64> = (-4..=4).map(|i| i as f64 * 0.35).collect();
        let c = CgfCurve::compute(&g, &p, &mus, 10.0).unwrap();
        assert!(c.is_convex());
        assert_eq!(c.radius, Some(PI));
        let back = CgfCurve::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(c.to_csv().starts_with("mu,W\n"));
    }
}
