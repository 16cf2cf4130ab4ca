//! Command implementations. Each returns the rendered output; JSON documents
//! are plain serde structs so that parsing and re-emitting is byte-identical.

use std::f64::consts::PI;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use smearstat::cft2d::{
    chiral_distribution, chiral_distribution_exact, energy_density_distribution, energy_density_distribution_exact,
    moments_recursion_gaussian_exact, CftParams,
};
use smearstat::dist::sample::sample as draw;
use smearstat::dist::{fit_from_moments, ExactShiftedGamma, MomentSequence, ShiftedGamma};
use smearstat::exact::{format_decimal, format_rational, int, Quantity};
use smearstat::func::{SamplingFunction, Window};
use smearstat::wick4d::{self, MomentRow, WickOptions, WindowSpectrum, TABLE1};

use crate::{Case, Common, Engine, Failure, WindowArg};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("plain data") + "\n"
}

fn case_name(case: Case) -> &'static str {
    match case {
        Case::Chiral => "chiral",
        Case::EnergyDensity => "energy-density",
        Case::Phi2 => "phi2",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactParams {
    pub alpha: String,
    pub beta: String,
    pub omega0: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistReport {
    pub case: String,
    pub units: String,
    pub tau: f64,
    pub central_charge: Option<f64>,
    pub window: String,
    pub alpha: f64,
    pub beta: f64,
    pub omega0: f64,
    pub prob_negative: f64,
    /// Lower bound from the quantum inequality for this observable.
    pub qi_bound: f64,
    /// Bound from the general quantum inequality when it differs from −ω₀.
    pub general_qi_bound: Option<f64>,
    pub exact: Option<ExactParams>,
}

fn exact_params(d: &ExactShiftedGamma) -> ExactParams {
    ExactParams {
        alpha: format_rational(&d.alpha),
        beta: d.beta.to_string(),
        omega0: d.omega0.to_string(),
    }
}

/// Exact parameters of the shifted Gamma law for one of the named cases.
fn distribution(common: &Common, case: Case, window: WindowArg) -> Result<(ShiftedGamma, DistReport), Failure> {
    let tau = common.tau;
    let c = common.central_charge;
    let gaussian = || SamplingFunction::gaussian(tau);
    let (d, units, window_name, qi_bound, general, exact, charge) = match case {
        Case::Chiral => {
            let p = CftParams::new(c, tau)?;
            let d = chiral_distribution(&p)?;
            let qi = gaussian()?.qi_functional(c / (12.0 * PI))?;
            let e = chiral_distribution_exact(&p.c_exact())?;
            (d, "tau^-2", "gaussian", qi, None, Some(exact_params(&e)), Some(c))
        }
        Case::EnergyDensity => {
            let p = CftParams::new(c, tau)?;
            let d = energy_density_distribution(&p)?;
            // both chiral halves, in x = ρτ²
            let qi = SamplingFunction::gaussian(1.0)?.qi_functional(c / (6.0 * PI))?;
            let e = energy_density_distribution_exact(&p.c_exact())?;
            (d, "x = rho tau^2", "gaussian", qi, None, Some(exact_params(&e)), Some(c))
        }
        Case::Phi2 => {
            let w = WindowSpectrum::field_square(window.into())?;
            let fit = fit_from_moments(&wick4d::moments(3, &w)?)?;
            let e = fit.as_exact().expect("exact moments give an exact fit").clone();
            let d = fit.at_tau(tau);
            let general = SamplingFunction::analytic(w.kind, tau)?.qi_functional(1.0 / (8.0 * PI * PI))?;
            (d, "tau^-2", w.kind.name(), -d.omega0, Some(general), Some(exact_params(&e)), None)
        }
    };
    let report = DistReport {
        case: case_name(case).into(),
        units: units.into(),
        tau,
        central_charge: charge,
        window: window_name.into(),
        alpha: d.alpha,
        beta: d.beta,
        omega0: d.omega0,
        prob_negative: d.prob_negative(),
        qi_bound,
        general_qi_bound: general,
        exact,
    };
    Ok((d, report))
}

pub fn dist(common: &Common, case: Case, window: WindowArg) -> Result<String, Failure> {
    let (_, r) = distribution(common, case, window)?;
    let exact = r.exact.clone();
    let ex = |f: fn(&ExactParams) -> &String| exact.as_ref().map(|e| f(e).clone()).unwrap_or_default();
    let mut rows: Vec<(&str, String, String)> = vec![
        ("case", r.case.clone(), String::new()),
        ("units", r.units.clone(), String::new()),
        ("window", r.window.clone(), String::new()),
        ("alpha", r.alpha.to_string(), ex(|e| &e.alpha)),
        ("beta", r.beta.to_string(), ex(|e| &e.beta)),
        ("omega0", r.omega0.to_string(), ex(|e| &e.omega0)),
        ("prob_negative", r.prob_negative.to_string(), String::new()),
        ("qi_bound", r.qi_bound.to_string(), String::new()),
    ];
    if let Some(g) = r.general_qi_bound {
        rows.push(("general_qi_bound", g.to_string(), String::new()));
    }
    Ok(match common.format {
        Format::Json => to_json(&r),
        Format::Csv => {
            let mut s = String::from("key,value,exact\n");
            for (k, v, e) in rows {
                let _ = writeln!(s, "{k},{v},{e}");
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (k, v, e) in rows {
                let _ = if e.is_empty() {
                    writeln!(s, "{k:<18}{v}")
                } else {
                    writeln!(s, "{k:<18}{v:<24}{e}")
                };
            }
            s
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub n: usize,
    pub decimal: String,
    pub exact: String,
    pub golden: Option<String>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub budget: usize,
    pub all_pass: bool,
    pub rows: Vec<Table1Row>,
}

pub fn table1(common: &Common, order: usize, budget: usize) -> Result<(String, Option<Failure>), Failure> {
    let w = WindowSpectrum::field_square(Window::Lorentzian)?;
    let m = wick4d::moments_with(order, &w, &WickOptions { budget })?;
    let rows: Vec<Table1Row> = m
        .as_exact()
        .expect("exact")
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let golden = TABLE1.get(n).copied();
            let status = match golden {
                Some(g) if *v == int(g as i64) => "PASS",
                Some(_) => "FAIL",
                None => "NO-GOLDEN",
            };
            Table1Row {
                n,
                decimal: format_decimal(v, 17),
                exact: format_rational(v),
                golden: golden.map(|g| g.to_string()),
                status: status.into(),
            }
        })
        .collect();
    let failed: Vec<usize> = rows.iter().filter(|r| r.status == "FAIL").map(|r| r.n).collect();
    let report = Table1Report { budget, all_pass: failed.is_empty(), rows };
    let text = match common.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("n,M_n,status\n");
            for r in &report.rows {
                let _ = writeln!(s, "{},{},{}", r.n, r.exact, r.status);
            }
            s
        }
        Format::Text => {
            let width = report.rows.iter().map(|r| r.exact.len()).max().unwrap_or(1).max(3);
            let mut s = format!("{:>3}  {:>width$} {}\n", "n", "M_n", "check");
            for r in &report.rows {
                let _ = writeln!(s, "{:>3}  {:>width$} {}", r.n, r.exact, r.status);
            }
            s
        }
    };
    let failure = (!failed.is_empty()).then(|| Failure::Golden(format!("orders {failed:?} differ from the table")));
    Ok((text, failure))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig1Point {
    pub x: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig1Report {
    pub central_charge: f64,
    pub alpha: f64,
    pub beta: f64,
    pub x0: f64,
    pub points: Vec<Fig1Point>,
}

/// 400 uniform points on `(−x₀, x_max]` and 100 log-spaced points within
/// 1e-6 of `−x₀`.
pub fn fig1_grid(x0: f64, x_max: f64) -> Vec<f64> {
    let mut xs: Vec<f64> = (1..=400).map(|i| -x0 + (x_max + x0) * i as f64 / 400.0).collect();
    xs.extend((0..100).map(|k| -x0 + 10f64.powf(-14.0 + 8.0 * k as f64 / 99.0)));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

pub fn fig1(common: &Common, x_max: f64) -> Result<String, Failure> {
    let p = CftParams::new(common.central_charge, 1.0)?;
    let d = energy_density_distribution(&p)?;
    let x0 = d.omega0;
    if !(x_max > 0.0) {
        return Err(Failure::Usage(format!("--x-max must be positive, got {x_max}")));
    }
    let points: Vec<Fig1Point> = fig1_grid(x0, x_max)
        .into_iter()
        .map(|x| Fig1Point { x, p: d.pdf_offset(x + x0) })
        .collect();
    let report = Fig1Report { central_charge: common.central_charge, alpha: d.alpha, beta: d.beta, x0, points };
    Ok(match common.format {
        Format::Json => to_json(&report),
        Format::Csv | Format::Text => {
            let mut s = format!("# x0={} alpha={} beta={} c={}\nx,P\n", x0, d.alpha, d.beta, common.central_charge);
            for pt in &report.points {
                let _ = writeln!(s, "{:e},{:e}", pt.x, pt.p);
            }
            s
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub case: String,
    pub seed: u64,
    pub alpha: f64,
    pub beta: f64,
    pub omega0: f64,
    pub draws: Vec<f64>,
}

pub fn sample(common: &Common, case: Case, window: WindowArg, count: usize, seed: u64) -> Result<String, Failure> {
    let (d, r) = distribution(common, case, window)?;
    let draws = draw(&d, count, seed)?;
    Ok(match common.format {
        Format::Json => to_json(&SampleReport {
            case: r.case,
            seed,
            alpha: d.alpha,
            beta: d.beta,
            omega0: d.omega0,
            draws,
        }),
        Format::Csv | Format::Text => smearstat::dist::sample::to_csv(&draws),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentsReport {
    pub engine: String,
    pub source: String,
    /// Moment n is `exact · unit^n`.
    pub unit: String,
    pub rows: Vec<MomentRow>,
}

fn moment_rows(m: &MomentSequence) -> Vec<MomentRow> {
    let unit = m.unit();
    m.as_exact()
        .expect("exact")
        .iter()
        .enumerate()
        .map(|(n, v)| MomentRow {
            n,
            decimal: format_decimal(v, 17),
            exact: format_rational(v),
            raw: unit.powi(n as i32).scale(v).to_string(),
        })
        .collect()
}

pub fn moments(
    common: &Common,
    engine: Engine,
    order: usize,
    window: WindowArg,
    derivative: bool,
    budget: usize,
) -> Result<String, Failure> {
    let (name, m) = match engine {
        Engine::Cft2d => {
            let p = CftParams::new(common.central_charge, common.tau)?;
            ("cft2d", moments_recursion_gaussian_exact(&p.c_exact(), order))
        }
        Engine::Wick4d => {
            let w = WindowSpectrum::new(window.into(), if derivative { 3 } else { 1 })?;
            ("wick4d", wick4d::moments_with(order, &w, &WickOptions { budget })?)
        }
    };
    let report = MomentsReport {
        engine: name.into(),
        source: m.source.clone(),
        unit: m.unit().to_string(),
        rows: moment_rows(&m),
    };
    Ok(match common.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("n,exact,decimal\n");
            for r in &report.rows {
                let _ = writeln!(s, "{},{},{}", r.n, r.exact, r.decimal);
            }
            s
        }
        Format::Text => {
            let width = report.rows.iter().map(|r| r.exact.len()).max().unwrap_or(1).max(5);
            let mut s = format!("# {} moments in units of ({})^n\n", report.source, report.unit);
            let _ = writeln!(s, "{:>3}  {:>width$}  decimal", "n", "exact");
            for r in &report.rows {
                let _ = writeln!(s, "{:>3}  {:>width$}  {}", r.n, r.exact, r.decimal);
            }
            s
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QiReport {
    pub window: String,
    pub tau: f64,
    pub central_charge: f64,
    /// `−(c/12π) ∫ (d√f)²`, the chiral stress-tensor bound.
    pub chiral_bound: f64,
    pub chiral_bound_exact: String,
    /// Wick-square bounds, for windows with an exact moment engine.
    pub phi2: Option<Phi2Qi>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phi2Qi {
    pub general_bound: f64,
    pub general_bound_exact: String,
    pub conjectured_bound: f64,
    pub conjectured_bound_exact: String,
    /// general / conjectured.
    pub ratio: String,
}

pub fn qi(common: &Common, window: WindowArg) -> Result<String, Failure> {
    let c = common.central_charge;
    let p = CftParams::new(c, common.tau)?;
    let kind: Window = window.into();
    let f = SamplingFunction::analytic(kind, common.tau)?;
    let chiral = f.qi_functional(c / (12.0 * PI))?;
    let chiral_exact = Quantity::new(-(p.c_exact() * kind.sqrt_gradient_energy()) / int(12), -1, -2);
    let phi2 = match kind {
        Window::Gaussian => None,
        _ => {
            let q = wick4d::conjectured_qi(&WindowSpectrum::field_square(kind)?)?;
            let conjectured = -q.omega0.clone();
            Some(Phi2Qi {
                general_bound: q.general_bound.value(common.tau),
                general_bound_exact: q.general_bound.to_string(),
                conjectured_bound: conjectured.value(common.tau),
                conjectured_bound_exact: conjectured.to_string(),
                ratio: format_rational(&q.ratio),
            })
        }
    };
    let report = QiReport {
        window: kind.name().into(),
        tau: common.tau,
        central_charge: c,
        chiral_bound: chiral,
        chiral_bound_exact: chiral_exact.to_string(),
        phi2,
    };
    let mut rows = vec![(
        "chiral_bound".to_string(),
        report.chiral_bound.to_string(),
        report.chiral_bound_exact.clone(),
    )];
    if let Some(q) = &report.phi2 {
        rows.push(("phi2_general_bound".into(), q.general_bound.to_string(), q.general_bound_exact.clone()));
        rows.push(("phi2_conjectured_bound".into(), q.conjectured_bound.to_string(), q.conjectured_bound_exact.clone()));
        rows.push(("phi2_ratio".into(), q.ratio.clone(), q.ratio.clone()));
    }
    Ok(match common.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("key,value,exact\n");
            for (k, v, e) in rows {
                let _ = writeln!(s, "{k},{v},{e}");
            }
            s
        }
        Format::Text => {
            let mut s = format!("{:<24}{}\n", "window", report.window);
            for (k, v, e) in rows {
                let _ = writeln!(s, "{k:<24}{v:<24}{e}");
            }
            s
        }
    })
}
