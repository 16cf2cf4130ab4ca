//! The window flow `∂f_λ/∂λ = f_λ⋆f_λ`, integrated on a grid with the
//! Dormand–Prince 5(4) pair.

use crate::func::grid::GridFunction;
use crate::func::hilbert::SpectralOps;
use crate::func::{star_grid, star_samples, SamplingFunction};
use crate::{Error, Result};

/// Sup-norm growth factor treated as blow-up.
pub const BLOW_UP_FACTOR: f64 = 1e6;

/// Spectral floor, relative to the peak, that fixes the band kept by the
/// flow's low-pass filter.
pub const BAND_FLOOR: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct FlowState {
    pub lambda: f64,
    pub f_lambda: SamplingFunction,
    /// The flow blew up right after this state; it is the last valid one.
    pub blown_up: bool,
}

#[derive(Clone, Debug)]
pub struct FlowPath {
    pub states: Vec<FlowState>,
}

impl FlowPath {
    pub fn last(&self) -> &FlowState {
        self.states.last().expect("path holds the initial state")
    }

    pub fn blown_up(&self) -> bool {
        self.last().blown_up
    }
}

// Dormand–Prince tableau; the flow is autonomous so the nodes c_i are unused
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

struct Stepper {
    ops: SpectralOps,
    tol: f64,
    cutoff: f64,
}

impl Stepper {
    // Forward in λ the flow amplifies a perturbation at frequency ω roughly
    // like exp(ω/2 ∫ f_λ dλ), so round-off far above the window's band
    // would swamp the solution long before the true pole. The right-hand
    // side is therefore restricted to the band of the initial window. The
    // window checks run once on the initial state.
    fn rhs(&self, y: &[f64]) -> Vec<f64> {
        self.ops.low_pass(&star_samples(y, &self.ops), self.cutoff)
    }

    /// One attempted step; returns the fifth-order solution and the scaled
    /// error (≤ 1 means accept).
    fn attempt(&self, y: &[f64], k1: &[f64], h: f64) -> (Vec<f64>, Vec<f64>, f64) {
        let n = y.len();
        let mut k: Vec<Vec<f64>> = vec![k1.to_vec()];
        for stage in 1..7 {
            let mut ys = y.to_vec();
            for (j, kj) in k.iter().enumerate() {
                let a = A[stage][j];
                if a != 0.0 {
                    ys.iter_mut().zip(kj).for_each(|(s, kv)| *s += h * a * kv);
                }
            }
            k.push(self.rhs(&ys));
        }
        let mut y5 = y.to_vec();
        let mut delta = vec![0.0; n];
        for (s, ks) in k.iter().enumerate() {
            let (b5, db) = (B5[s], B5[s] - B4[s]);
            for i in 0..n {
                y5[i] += h * b5 * ks[i];
                delta[i] += h * db * ks[i];
            }
        }
        let scale = sup(y).max(sup(&y5)).max(f64::MIN_POSITIVE);
        let err = sup(&delta) / (self.tol * scale);
        // first-same-as-last: the seventh stage is f(y5)
        let k_next = k.pop().expect("seven stages");
        (y5, k_next, err)
    }
}

/// Integrates the flow from `λ = 0` through each of `stops` (monotone in one
/// direction), returning the state at every stop reached. Stops after a
/// blow-up are not reached; the last returned state carries `blown_up`.
pub(crate) fn flow_through(g0: &GridFunction, stops: &[f64], tol: f64) -> Result<Vec<FlowState>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("flow tolerance must be positive".into()));
    }
    let ops = SpectralOps::for_grid(g0);
    let cutoff = ops.bandwidth(&g0.samples, BAND_FLOOR);
    let stepper = Stepper {
        ops,
        tol,
        cutoff,
    };
    let sup0 = sup(&g0.samples);
    let mut y = g0.samples.clone();
    star_grid(g0, &stepper.ops)?;
    let mut k1 = stepper.rhs(&y);
    let mut lambda = 0.0f64;
    let tau2 = g0.tau * g0.tau;
    let mut h_abs = 1e-2 * tau2;
    let mut out = Vec::with_capacity(stops.len());
    for &stop in stops {
        let dir = if stop >= lambda { 1.0 } else { -1.0 };
        while (stop - lambda) * dir > 1e-15 * tau2 {
            let remaining = (stop - lambda).abs();
            let h = dir * h_abs.min(remaining);
            let (y5, k_next, err) = stepper.attempt(&y, &k1, h);
            if err <= 1.0 {
                if sup(&y5) > BLOW_UP_FACTOR * sup0 || !y5.iter().all(|v| v.is_finite()) {
                    out.push(FlowState {
                        lambda,
                        f_lambda: SamplingFunction::Grid(g0.with_samples(y)),
                        blown_up: true,
                    });
                    return Ok(out);
                }
                lambda = if h.abs() == remaining { stop } else { lambda + h };
                y = y5;
                k1 = k_next;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            // a step shortened only to land on a stop keeps the proposed size
            let clipped = h.abs() < h_abs && err <= 1.0;
            h_abs = if clipped { h_abs.max(h.abs() * factor) } else { h.abs() * factor };
            if h_abs < 1e-14 * tau2 {
                return Err(Error::Convergence("flow step size underflow"));
            }
        }
        out.push(FlowState {
            lambda,
            f_lambda: SamplingFunction::Grid(g0.with_samples(y.clone())),
            blown_up: false,
        });
    }
    Ok(out)
}

/// Integrates the flow from 0 to `lambda_max` (either sign), recording
/// `samples` evenly spaced states after the initial one.
///
/// Analytic windows are sampled onto the default grid first. The path stops
/// early with `blown_up` set once the sup norm exceeds
/// [`BLOW_UP_FACTOR`] times its initial value.
pub fn flow_numeric(f: &SamplingFunction, lambda_max: f64, tol: f64, samples: usize) -> Result<FlowPath> {
    let g0 = f.to_grid()?;
    let mut states = vec![FlowState {
        lambda: 0.0,
        f_lambda: SamplingFunction::Grid(g0.clone()),
        blown_up: false,
    }];
    if lambda_max == 0.0 {
        return Ok(FlowPath { states });
    }
    let n = samples.max(1);
    let stops: Vec<f64> = (1..=n).map(|i| lambda_max * i as f64 / n as f64).collect();
    states.extend(flow_through(&g0, &stops, tol)?);
    Ok(FlowPath { states })
}
