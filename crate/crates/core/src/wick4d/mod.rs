//! Exact vacuum moments of the time-smeared Wick square `:Φ²:` of a massless
//! scalar in four dimensions, and of the squared time derivative `:(∂_tΦ)²:`.
//!
//! At spatial coincidence the two-point function is
//! `(1/4π²) ∫₀^∞ ω^p e^{−iωΔt} dω` with `p = 1` for the field and `p = 3` for
//! its time derivative. The `n`-th moment of `∫ :Φ²: w dt` is a sum over Wick
//! contractions, which split into cycles; the connected part of a `k`-cycle is
//! the cumulant
//!
//! ```text
//! κ_k = 2^{k−1} (k−1)! · (4π²)^{−k} · C_k · τ^{−(p+1)k}
//! ```
//!
//! where `C_k` is the frequency integral of a `k`-cycle averaged over the
//! `(k−1)!/2` cyclic orderings of the operator positions. Everything is done
//! in exact rationals with `τ = 1`; π only appears as an explicit power.
//!
//! The primary evaluator integrates each cycle chain by chain: vertices that
//! are earlier or later than both neighbours factor into a small separable
//! kernel, and the runs of vertices between them are iterated one-dimensional
//! [`ExpPoly`] convolutions. [`cycle_integral_by_sectors`] evaluates the same
//! integrals by brute-force sector decomposition.

pub mod cycles;
pub mod exppoly;
pub mod sectors;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{fit_from_moments, verify_fit, FitReport, MomentSequence, Normalization};
use crate::exact::{binomial, factorial, format_decimal, format_rational, int, rat, Quantity, Rational};
use crate::func::Window;
use crate::{Error, Result};

pub use cycles::{cycle_partitions, sum_over_partitions, CyclePartition};
pub use exppoly::ExpPoly;

/// Largest cycle length evaluated unless the caller raises it.
pub const DEFAULT_BUDGET: usize = 9;

/// Normalized moments `M_n = (4πτ)^{2n} m_n` of the Lorentzian-smeared `:Φ²:`.
pub const TABLE1: [u64; 9] = [1, 0, 2, 48, 1740, 83904, 5051640, 364724928, 30707616912];

/// A window whose Fourier transform is an exponential polynomial, together
/// with the frequency weight `ω^p` of the smeared operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpectrum {
    pub kind: Window,
    pub p: u32,
}

impl WindowSpectrum {
    pub fn new(kind: Window, p: u32) -> Result<Self> {
        if kind == Window::Gaussian {
            return Err(Error::InvalidParameter(
                "the Gaussian spectrum is not an exponential polynomial".into(),
            ));
        }
        if p != 1 && p != 3 {
            return Err(Error::InvalidParameter(format!("weight power must be 1 or 3, got {p}")));
        }
        Ok(WindowSpectrum { kind, p })
    }

    /// `:Φ²:` smeared with `kind`.
    pub fn field_square(kind: Window) -> Result<Self> {
        Self::new(kind, 1)
    }

    /// `:(∂_tΦ)²:` smeared with `kind`.
    pub fn time_derivative(kind: Window) -> Result<Self> {
        Self::new(kind, 3)
    }

    /// Coefficients `q_j` of `ŵ(ω) = Σ_j q_j ω^j e^{−ω}` at `τ = 1`.
    pub fn profile(&self) -> Vec<i64> {
        match self.kind {
            Window::SquaredLorentzian => vec![1, 1],
            _ => vec![1],
        }
    }

    pub fn spectrum(&self) -> ExpPoly {
        let mut e = ExpPoly::zero();
        for (j, q) in self.profile().into_iter().enumerate() {
            e.add_term(int(q), j as u32, int(1));
        }
        e
    }

    /// Unit of the normalized moments, `1/(16π² τ^{p+1})` per order.
    pub fn moment_unit(&self) -> Quantity {
        Quantity::new(rat(1, 16), -2, -(self.p as i32 + 1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WickOptions {
    /// Largest cycle length that may be evaluated.
    pub budget: usize,
}

impl Default for WickOptions {
    fn default() -> Self {
        WickOptions { budget: DEFAULT_BUDGET }
    }
}

impl WickOptions {
    fn admit(&self, k: usize) -> Result<()> {
        if k > self.budget {
            return Err(Error::Intractable { k, budget: self.budget });
        }
        Ok(())
    }
}

/// `ŵ(x + y) = Σ c · x^a · y^b · e^{−x} e^{−y}` as `(a, b, c)`.
fn turning_terms(w: &WindowSpectrum) -> Vec<(u32, u32, Rational)> {
    let mut out = Vec::new();
    for (j, q) in w.profile().into_iter().enumerate() {
        for i in 0..=j {
            let c = int(q) * Rational::from_integer(binomial(j, i));
            out.push((i as u32, (j - i) as u32, c));
        }
    }
    out
}

type Matrix = Vec<Vec<Rational>>;

/// Transfer matrix of a chain of `m` edges between two turning vertices.
/// Row: term of the opening vertex; column: term of the closing vertex.
fn transfer_matrix(m: usize, w: &WindowSpectrum) -> Result<Matrix> {
    let terms = turning_terms(w);
    let q: Vec<Rational> = w.profile().into_iter().map(int).collect();
    terms
        .iter()
        .map(|&(_, open, _)| {
            let mut f = ExpPoly::monomial(int(1), open + w.p, int(1));
            for _ in 1..m {
                f = f.convolve_abs(&q).shift_power(w.p);
            }
            terms
                .iter()
                .map(|(close, _, c)| Ok(f.mul(&ExpPoly::monomial(c.clone(), *close, int(1))).integrate()?))
                .collect()
        })
        .collect()
}

fn trace_of_product(mats: &[&Matrix]) -> Rational {
    let r = mats[0].len();
    let mut acc: Matrix = (0..r)
        .map(|i| (0..r).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for m in mats {
        acc = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).fold(Rational::zero(), |s, l| s + &acc[i][l] * &m[l][j]))
                    .collect()
            })
            .collect();
    }
    (0..r).fold(Rational::zero(), |s, i| s + &acc[i][i])
}

/// Number of undirected cycles on `k` positions.
fn cycle_count(k: usize) -> Rational {
    if k == 2 {
        Rational::one()
    } else {
        Rational::new(factorial(k - 1), BigInt::from(2))
    }
}

/// `C_k`: the cycle frequency integral averaged over cyclic orderings.
pub fn cycle_integral(k: usize, w: &WindowSpectrum) -> Result<Rational> {
    cycle_integral_with(k, w, &WickOptions::default())
}

pub fn cycle_integral_with(k: usize, w: &WindowSpectrum, opts: &WickOptions) -> Result<Rational> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("cycle length {k} < 2")));
    }
    opts.admit(k)?;
    let mats: BTreeMap<usize, Matrix> =
        (1..k).into_par_iter().map(|m| transfer_matrix(m, w).map(|t| (m, t))).collect::<Result<_>>()?;
    let census: Vec<(Vec<usize>, u64)> = cycles::chain_census(k).into_iter().collect();
    let total = census
        .par_iter()
        .map(|(chains, count)| {
            let ms: Vec<&Matrix> = chains.iter().map(|m| &mats[m]).collect();
            trace_of_product(&ms) * Rational::from_integer((*count).into())
        })
        .reduce(Rational::zero, |a, b| a + b);
    Ok(total / cycle_count(k))
}

/// `C_k` by sector decomposition of every cycle; `k!` sectors per cycle.
pub fn cycle_integral_by_sectors(k: usize, w: &WindowSpectrum, opts: &WickOptions) -> Result<Rational> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("cycle length {k} < 2")));
    }
    opts.admit(k)?;
    let q = w.profile();
    let total = cycles::undirected_cycles(k)
        .par_iter()
        .map(|c| sectors::cycle_value_by_sectors(c, &q, w.p, false))
        .reduce(Rational::zero, |a, b| a + b);
    Ok(total / cycle_count(k))
}

/// Exact cumulants `κ_0..κ_{n_max}` with explicit π and τ powers.
pub fn cumulants(n_max: usize, w: &WindowSpectrum) -> Result<Vec<Quantity>> {
    cumulants_with(n_max, w, &WickOptions::default())
}

pub fn cumulants_with(n_max: usize, w: &WindowSpectrum, opts: &WickOptions) -> Result<Vec<Quantity>> {
    opts.admit(n_max)?;
    let tp = -(w.p as i32 + 1);
    let mut out = vec![Quantity::new(int(0), 0, 0)];
    if n_max >= 1 {
        out.push(Quantity::new(int(0), -2, tp));
    }
    for k in 2..=n_max {
        let c = cycle_integral_with(k, w, opts)?;
        let weight = cycles::contractions_per_cycle(k) / Rational::from_integer(BigInt::from(4).pow(k as u32));
        out.push(Quantity::new(weight * c, -2 * k as i32, tp * k as i32));
    }
    Ok(out)
}

/// Moments from cumulants, expressed in powers of `unit`.
pub fn moments_from_cumulants(kappas: &[Quantity], unit: &Quantity, source: &str) -> Result<MomentSequence> {
    let mut scaled = vec![int(0)];
    for (k, kappa) in kappas.iter().enumerate().skip(1) {
        let v = if kappa.is_zero() {
            int(0)
        } else {
            kappa.ratio(&unit.powi(k as i32))?
        };
        scaled.push(v);
    }
    let m = crate::dist::moments::moments_from_cumulants(&scaled);
    MomentSequence::exact(m, Normalization::Scaled { unit: unit.clone() }, source)
}

/// Normalized moments through `n_max` in units of [`WindowSpectrum::moment_unit`].
pub fn moments(n_max: usize, w: &WindowSpectrum) -> Result<MomentSequence> {
    moments_with(n_max, w, &WickOptions::default())
}

pub fn moments_with(n_max: usize, w: &WindowSpectrum, opts: &WickOptions) -> Result<MomentSequence> {
    let k = cumulants_with(n_max, w, opts)?;
    let source = format!("wick4d {} p={}", w.kind.name(), w.p);
    moments_from_cumulants(&k, &w.moment_unit(), &source)
}

/// Computes the Lorentzian `:Φ²:` moments through `n_max ≤ 8` and checks
/// every one against [`TABLE1`].
pub fn reproduce_table1(n_max: usize) -> Result<Vec<BigInt>> {
    let golden_budget = TABLE1.len() - 1;
    if n_max > golden_budget {
        return Err(Error::Intractable { k: n_max, budget: golden_budget });
    }
    let w = WindowSpectrum::field_square(Window::Lorentzian)?;
    let m = moments(n_max.max(2), &w)?;
    let values = m.as_exact().expect("exact moments");
    let mut out = Vec::with_capacity(n_max + 1);
    for (n, v) in values.iter().take(n_max + 1).enumerate() {
        let golden = BigInt::from(TABLE1[n]);
        if !v.is_integer() || v.to_integer() != golden {
            return Err(Error::MismatchAgainstGolden {
                order: n,
                computed: format_rational(v),
                golden: golden.to_string(),
            });
        }
        out.push(golden);
    }
    Ok(out)
}

/// Shifted-Gamma prediction for the optimal lower bound on smeared `:Φ²:`
/// against the general quantum inequality for the same window.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjecturedQi {
    /// `ω₀` of the fitted distribution; the conjectured bound is `−ω₀`.
    pub omega0: Quantity,
    /// `−(1/8π²) ∫ (d√w/dt)² dt`.
    pub general_bound: Quantity,
    /// `general_bound / (−ω₀)`.
    pub ratio: Rational,
}

pub fn conjectured_qi(w: &WindowSpectrum) -> Result<ConjecturedQi> {
    if w.p != 1 {
        return Err(Error::InvalidParameter("the quantum inequality comparison needs p = 1".into()));
    }
    let fit = fit_from_moments(&moments(3, w)?)?;
    let d = fit.as_exact().expect("exact moments give an exact fit");
    let general_bound = Quantity::new(-w.kind.sqrt_gradient_energy() / int(8), -2, -2);
    let ratio = general_bound.ratio(&-d.omega0.clone())?;
    Ok(ConjecturedQi { omega0: d.omega0.clone(), general_bound, ratio })
}

/// Fits the Lorentzian `:(∂_tΦ)²:` moments from orders ≤ 3 and reports the
/// residuals through `n_max`.
pub fn misfit_demo(n_max: usize) -> Result<FitReport> {
    if n_max < 4 {
        return Err(Error::InvalidParameter(format!("misfit needs n_max ≥ 4, got {n_max}")));
    }
    let w = WindowSpectrum::time_derivative(Window::Lorentzian)?;
    let m = moments(n_max, &w)?;
    let fit = fit_from_moments(&m.truncated(3))?;
    verify_fit(&fit, &m)
}

/// The fit underestimates at least one moment above order three.
pub fn underestimates(report: &FitReport) -> bool {
    report.residuals.iter().skip(4).any(|r| r.is_positive())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentRow {
    pub n: usize,
    /// `M_n` to 17 significant digits.
    pub decimal: String,
    /// `M_n` as `p/q`.
    pub exact: String,
    /// The un-normalized moment as `p/q·π^a·τ^b`.
    pub raw: String,
}

/// Normalized moments as emitted by the command-line tool.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentTable {
    pub window: String,
    pub p: u32,
    /// Moments are `M_n · unit^n`.
    pub unit: String,
    pub rows: Vec<MomentRow>,
}

impl MomentTable {
    pub fn new(w: &WindowSpectrum, m: &MomentSequence) -> Self {
        let unit = m.unit();
        let rows = m
            .as_exact()
            .expect("exact moments")
            .iter()
            .enumerate()
            .map(|(n, v)| MomentRow {
                n,
                decimal: format_decimal(v, 17),
                exact: format_rational(v),
                raw: unit.powi(n as i32).scale(v).to_string(),
            })
            .collect();
        MomentTable { window: w.kind.name().into(), p: w.p, unit: unit.to_string(), rows }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Two-column table, `n` and `M_n`.
    pub fn to_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.exact.len()).max().unwrap_or(1).max(3);
        let mut s = String::new();
        let _ = writeln!(s, "{:>3}  {:>width$}", "n", "M_n");
        for r in &self.rows {
            let _ = writeln!(s, "{:>3}  {:>width$}", r.n, r.exact);
        }
        s
    }
}

/// Normalized moments summed directly over cycle types,
/// `M_n = Σ weight · ∏_cycles 4^k C_k`, bypassing the cumulant recursion.
pub fn moments_by_partitions(n_max: usize, w: &WindowSpectrum, opts: &WickOptions) -> Result<Vec<Rational>> {
    opts.admit(n_max)?;
    let mut c = vec![Rational::zero(); n_max + 1];
    for (k, slot) in c.iter_mut().enumerate().skip(2) {
        *slot = cycle_integral_with(k, w, opts)? * num_traits::pow(int(4), k);
    }
    Ok((0..=n_max).map(|n| sum_over_partitions(n, |k| c[k].clone())).collect())
}
