use std::f64::consts::PI;

use proptest::prelude::*;
use smearstat::cft2d::{
    cgf, chiral_distribution, chiral_distribution_exact, energy_density_distribution,
    energy_density_distribution_exact, flow_numeric, gamma2, moments_recursion_gaussian_exact,
    CftParams, CgfCurve,
};
use smearstat::exact::{int, rat, Rational};
use smearstat::func::grid::GridFunction;
use smearstat::func::SamplingFunction;
use smearstat::quad;

fn unit() -> CftParams {
    CftParams::new(1.0, 1.0).unwrap()
}

fn grid_gaussian(tau: f64) -> SamplingFunction {
    SamplingFunction::Grid(SamplingFunction::gaussian(tau).unwrap().to_grid().unwrap())
}

#[test]
fn numeric_flow_doubles_the_gaussian_at_half_the_pole() {
    let f = SamplingFunction::gaussian(1.0).unwrap();
    let path = flow_numeric(&f, PI / 2.0, 1e-10, 4).unwrap();
    assert!(!path.blown_up());
    let end = path.last();
    assert_eq!(end.lambda, PI / 2.0);
    let peak = 2.0 * f.eval(0.0);
    let SamplingFunction::Grid(g) = &end.f_lambda else { panic!("grid state") };
    let worst = g
        .nodes()
        .zip(&g.samples)
        .map(|(u, v)| (v - 2.0 * f.eval(u)).abs())
        .fold(0.0f64, f64::max);
    assert!(worst <= 1e-8 * peak, "sup error {worst}");
    for u in [-2.5, -1.0, 0.0, 0.4, 2.0] {
        let rel = (end.f_lambda.eval(u) - 2.0 * f.eval(u)).abs() / (2.0 * f.eval(u));
        assert!(rel < 1e-5, "u={u}: rel {rel}");
    }
}

#[test]
fn zero_length_flow_is_the_initial_state() {
    let path = flow_numeric(&SamplingFunction::gaussian(1.0).unwrap(), 0.0, 1e-8, 3).unwrap();
    assert_eq!(path.states.len(), 1);
    assert_eq!(path.states[0].lambda, 0.0);
}

#[test]
fn blow_up_found_at_the_pole() {
    for tau in [1.0, 0.7] {
        let f = SamplingFunction::gaussian(tau).unwrap();
        let path = flow_numeric(&f, 2.0 * PI * tau * tau, 1e-8, 1).unwrap();
        assert!(path.blown_up());
        let pole = PI * tau * tau;
        let rel = (path.last().lambda - pole).abs() / pole;
        assert!(rel < 0.02, "tau={tau}: {}", path.last().lambda);
    }
}

#[test]
fn grid_cgf_matches_closed_form() {
    let closed = SamplingFunction::gaussian(1.0).unwrap();
    let grid = grid_gaussian(1.0);
    for k in -4..=4 {
        let mu = k as f64 * PI / 8.0;
        let a = cgf(&closed, &unit(), mu).unwrap();
        let b = cgf(&grid, &unit(), mu).unwrap();
        if mu == 0.0 {
            assert_eq!(b, 0.0);
        } else {
            assert!((a - b).abs() <= 1e-5 * a.abs(), "mu={mu}: {a} vs {b}");
        }
    }
}

#[test]
fn series_of_the_cgf_reproduces_low_moments() {
    let p = CftParams::new(3.0, 1.3).unwrap();
    let f = SamplingFunction::gaussian(p.tau).unwrap();
    let w = |mu: f64| cgf(&f, &p, mu).unwrap();
    let h = 1e-3;
    let g2 = (w(h) - 2.0 * w(0.0) + w(-h)) / (h * h);
    let g3 = (w(2.0 * h) - 2.0 * w(h) + 2.0 * w(-h) - w(-2.0 * h)) / (2.0 * h * h * h);
    let t2 = p.tau * p.tau;
    let exact2 = p.c / (24.0 * PI * PI * t2 * t2);
    let exact3 = p.c / (12.0 * PI.powi(3) * t2.powi(3));
    assert!((g2 - exact2).abs() <= 1e-6 * exact2);
    assert!((g3 - exact3).abs() <= 1e-6 * exact3);
    assert!((gamma2(&f, &p) - exact2).abs() <= 1e-15 * exact2);
}

#[test]
fn grid_cgf_for_a_non_gaussian_window_starts_at_gamma2() {
    let g = GridFunction::sample(1.0, 4096, 16.0, |u| (-u * u).exp() + 0.3 * (-(u * u) / 3.0).exp()).unwrap();
    let f = SamplingFunction::Grid(GridFunction::normalized(g.tau, g.origin, g.spacing, g.samples).unwrap());
    let p = unit();
    let h = 0.02;
    let second = (cgf(&f, &p, h).unwrap() + cgf(&f, &p, -h).unwrap()) / (h * h);
    let g2 = gamma2(&f, &p);
    assert!((second - g2).abs() <= 1e-3 * g2, "{second} vs {g2}");
    let curve = CgfCurve::compute(&f, &p, &[-0.6, -0.3, 0.0, 0.3, 0.6], 6.0).unwrap();
    assert!(curve.is_convex());
    assert!(curve.radius.is_some());
}

#[test]
fn lorentzian_gamma2_against_elementary_integral() {
    let l = SamplingFunction::lorentzian(1.0).unwrap();
    let oracle = quad::integrate_to_infinity(|w| w.powi(3) * (-2.0 * w).exp(), 0.0, 1e-15, 1e-13).value;
    assert!((oracle - 3.0 / 8.0).abs() < 1e-12);
    let expected = oracle / (48.0 * PI * PI);
    assert!((gamma2(&l, &unit()) - expected).abs() < 1e-14);
}

#[test]
fn gaussian_cgf_convex_with_radius_pi_tau_squared() {
    let tau = 0.8;
    let p = CftParams::new(2.0, tau).unwrap();
    let f = SamplingFunction::gaussian(tau).unwrap();
    let r = PI * tau * tau;
    let mus: Vec<f64> = (0..60).map(|i| -3.0 + i as f64 * (r + 3.0) / 60.0).collect();
    let curve = CgfCurve::compute(&f, &p, &mus, 10.0).unwrap();
    assert!(curve.is_convex());
    assert_eq!(curve.radius, Some(r));
    let d = chiral_distribution(&p).unwrap();
    assert!((d.beta - r).abs() < 1e-15);
}

#[test]
fn minus_omega0_is_the_quantum_inequality_bound() {
    for (c, tau) in [(1.0, 1.0), (0.5, 2.0), (24.0, 0.3)] {
        let p = CftParams::new(c, tau).unwrap();
        let d = chiral_distribution(&p).unwrap();
        let qi = SamplingFunction::gaussian(tau).unwrap().qi_functional(c / (12.0 * PI)).unwrap();
        assert!((-d.omega0 - qi).abs() <= 1e-10 * qi.abs());
    }
}

#[test]
fn chiral_parameters() {
    let d = chiral_distribution(&unit()).unwrap();
    assert!((d.alpha - 1.0 / 24.0).abs() < 1e-17);
    assert!((d.beta - PI).abs() < 1e-15);
    assert!((d.omega0 - 1.0 / (24.0 * PI)).abs() < 1e-17);
    let d24 = chiral_distribution(&CftParams::new(24.0, 1.0).unwrap()).unwrap();
    assert_eq!(d24.alpha, 1.0);
    assert!(d24.pdf(d24.lower_endpoint()).is_finite());
}

#[test]
fn energy_density_is_two_independent_chiral_halves() {
    let p = unit();
    let e = energy_density_distribution(&p).unwrap();
    assert!((e.alpha - 1.0 / 12.0).abs() < 1e-17);
    assert!((e.omega0 - 1.0 / (12.0 * PI)).abs() < 1e-17);
    // one chirality in x = ρτ² units
    let half = chiral_distribution(&p).unwrap().scaled(p.tau * p.tau).unwrap();
    for mu in [-5.0, -1.0, 0.5, 2.0, 3.0] {
        let lhs = e.cgf(mu).unwrap();
        let rhs = 2.0 * half.cgf(mu).unwrap();
        assert!((lhs - rhs).abs() < 1e-14, "mu={mu}");
    }
}

proptest! {
    #[test]
    fn recursion_equals_shifted_gamma_moments(num in 1i64..500, den in 1i64..60) {
        let c: Rational = rat(num, den);
        let rec = moments_recursion_gaussian_exact(&c, 12);
        let d = chiral_distribution_exact(&c).unwrap();
        let sg = d.moments(12).rescaled(&rec.unit()).unwrap();
        prop_assert_eq!(rec.as_exact().unwrap(), sg.as_exact().unwrap());
        // same for the energy density after doubling c
        let e = energy_density_distribution_exact(&c).unwrap();
        prop_assert_eq!(&e.alpha, &(&d.alpha * int(2)));
    }
}

#[test]
fn recursion_low_orders() {
    let m = moments_recursion_gaussian_exact(&int(1), 3);
    let v = m.as_exact().unwrap();
    assert_eq!(v[1], int(0));
    assert_eq!(v[2], rat(1, 24));
    assert_eq!(v[3], rat(1, 12));
    // κ₃ = 2α/β³ with α = 1/24
    let k = m.cumulants_exact().unwrap();
    assert_eq!(k[3], int(2) * rat(1, 24));
}
