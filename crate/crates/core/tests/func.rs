use std::f64::consts::PI;

use smearstat::func::{grid::GridFunction, hilbert, SamplingFunction, Window};
use smearstat::quad;
use smearstat::Error;

/// Principal value (1/π) p.v.∫ g(w)/(w−u) dw by folding the integrand about u.
fn pv_hilbert_oracle<G: Fn(f64) -> f64>(g: G, u: f64) -> f64 {
    let folded = |s: f64| (g(u + s) - g(u - s)) / s;
    quad::integrate_to_infinity(folded, 0.0, 1e-13, 1e-11).value / PI
}

#[test]
fn hilbert_sign_fixed_by_principal_value_oracle() {
    let lorentz = |u: f64| 1.0 / (PI * (u * u + 1.0));
    // conjugate kernel under this orientation is −u/(π(u²+1))
    for u in [-2.0, -0.5, 0.3, 1.0, 2.5] {
        let pv = pv_hilbert_oracle(lorentz, u);
        assert!((pv + u / (PI * (u * u + 1.0))).abs() < 1e-9, "u={u}: {pv}");
    }
    // discrete transform on a wide grid agrees in the interior
    let g = GridFunction::sample(1.0, 1 << 16, 2048.0, lorentz).unwrap();
    let h = hilbert::hilbert_unchecked(&g);
    for u in [-2.0, -0.5, 0.3, 1.0, 2.5] {
        let expected = -u / (PI * (u * u + 1.0));
        assert!((h.eval(u) - expected).abs() < 1e-4, "u={u}: {} vs {expected}", h.eval(u));
    }
    // and the checked entry point refuses the slowly decaying window
    assert!(matches!(hilbert::hilbert(&g), Err(Error::EdgeLeak { .. })));
}

#[test]
fn hilbert_of_gaussian_matches_oracle() {
    let gauss = |u: f64| (-u * u).exp();
    let g = GridFunction::sample(1.0, 4096, 16.0, gauss).unwrap();
    let h = hilbert::hilbert(&g).unwrap();
    for u in [-3.0, -1.0, 0.0, 0.7, 2.0, 5.0] {
        let oracle = pv_hilbert_oracle(gauss, u);
        assert!((h.eval(u) - oracle).abs() < 1e-8, "u={u}");
    }
}

#[test]
fn hilbert_involution_in_the_interior() {
    // fourth derivative of e^{−u²}: zero moments through order three, so H g
    // decays like u^{−5} and the grid truncation is negligible
    let g4 = |u: f64| {
        let u2 = u * u;
        (16.0 * u2 * u2 - 48.0 * u2 + 12.0) * (-u2).exp()
    };
    let g = GridFunction::sample(1.0, 4096, 16.0, g4).unwrap();
    let hh = hilbert::hilbert_unchecked(&hilbert::hilbert(&g).unwrap());
    let peak = g.sup_norm();
    let interior = g.len() / 4..3 * g.len() / 4;
    let err = interior
        .map(|i| (hh.samples[i] + g.samples[i]).abs())
        .fold(0.0f64, f64::max);
    assert!(err <= 1e-6 * peak, "involution error {err}");
}

#[test]
fn grid_star_matches_gaussian_closed_form() {
    let tau = 1.0;
    let f = SamplingFunction::gaussian(tau).unwrap();
    let grid = SamplingFunction::Grid(f.to_grid().unwrap());
    let numeric = grid.star().unwrap();
    let closed = f.star().unwrap();
    let peak = closed.eval(0.0);
    let SamplingFunction::Grid(ng) = &numeric else {
        panic!("grid star must stay on the grid")
    };
    let mut worst = 0.0f64;
    for u in ng.nodes() {
        worst = worst.max((numeric.eval(u) - closed.eval(u)).abs());
    }
    assert!(worst <= 1e-6 * peak, "pointwise error {worst}");
    // relative agreement where the window is appreciable
    for u in [-4.0, -2.0, -0.5, 0.0, 1.0, 3.0, 4.0] {
        let rel = (numeric.eval(u) - closed.eval(u)).abs() / closed.eval(u);
        assert!(rel < 1e-6, "u={u} rel={rel}");
    }
}

#[test]
fn star_preserves_parity() {
    // an even, non-Gaussian window: mixture of two widths
    let g = GridFunction::sample(1.0, 4096, 16.0, |u| {
        (-u * u).exp() + 0.5 * (-(u * u) / 4.0).exp()
    })
    .unwrap();
    let g = GridFunction::normalized(g.tau, g.origin, g.spacing, g.samples).unwrap();
    let s = SamplingFunction::Grid(g).star().unwrap();
    let SamplingFunction::Grid(sg) = s else { unreachable!() };
    assert!(sg.asymmetry() <= 1e-8 * sg.sup_norm());
}

#[test]
fn star_weight_is_not_zero_for_gaussian() {
    // ∫ f⋆f = 1/(πτ²) for the unit Gaussian
    let g = SamplingFunction::gaussian(1.0).unwrap().to_grid().unwrap();
    let SamplingFunction::Grid(s) = SamplingFunction::Grid(g).star().unwrap() else {
        unreachable!()
    };
    assert!((s.integral() - 1.0 / PI).abs() < 1e-9);
}

#[test]
fn fourier_against_quadrature_oracle() {
    let cases = [
        (Window::Gaussian, 2.0, (-1.0f64).exp()),
        (Window::Lorentzian, 1.0, (-1.0f64).exp()),
        (Window::SquaredLorentzian, 1.5, 2.5 * (-1.5f64).exp()),
    ];
    for (w, omega, expected) in cases {
        let f = SamplingFunction::analytic(w, 1.0).unwrap();
        let oracle = quad::integrate_real_line(|u| f.eval(u) * (omega * u).cos(), 1e-13, 1e-11).value;
        // the oscillatory u^-2 tail limits the oracle itself to about 1e-7
        assert!((oracle - expected).abs() < 1e-6, "{w:?} oracle {oracle}");
        assert!((f.fourier(omega) - expected).abs() < 1e-15);
    }
}

#[test]
fn every_constructed_window_is_normalized() {
    for w in [Window::Gaussian, Window::Lorentzian, Window::SquaredLorentzian] {
        let f = SamplingFunction::analytic(w, 0.7).unwrap();
        assert!((f.fourier(0.0) - 1.0).abs() < 1e-12);
    }
    let raw = GridFunction::sample(2.0, 1000, 16.0, |u| 3.0 * (-(u * u) / 4.0).exp()).unwrap();
    let g = GridFunction::normalized(raw.tau, raw.origin, raw.spacing, raw.samples).unwrap();
    let f = SamplingFunction::Grid(g);
    assert!((f.fourier(0.0) - 1.0).abs() < 1e-12);
}

/// ∫ (d√f/du)² du by adaptive quadrature of (f′)²/(4f), f′ by central
/// differences.
fn qi_quadrature_oracle(f: &SamplingFunction) -> f64 {
    let integrand = |u: f64| {
        let h = 1e-5 * f.tau();
        let v = f.eval(u);
        if v < 1e-300 {
            return 0.0;
        }
        let d = (f.eval(u + h) - f.eval(u - h)) / (2.0 * h);
        d * d / (4.0 * v)
    };
    quad::integrate_real_line(integrand, 1e-14, 1e-10).value
}

#[test]
fn qi_functional_matches_quadrature_and_closed_forms() {
    let c = 1.0;
    for tau in [0.5, 1.0, 3.0] {
        let g = SamplingFunction::gaussian(tau).unwrap();
        let qi = g.qi_functional(c / (12.0 * PI)).unwrap();
        assert!((qi + c / (24.0 * PI * tau * tau)).abs() < 1e-14);
        let l = SamplingFunction::lorentzian(tau).unwrap();
        let qi = l.qi_functional(1.0 / (8.0 * PI * PI)).unwrap();
        assert!((qi + 1.0 / (64.0 * PI * PI * tau * tau)).abs() < 1e-14);
    }
    for w in [Window::Gaussian, Window::Lorentzian, Window::SquaredLorentzian] {
        let f = SamplingFunction::analytic(w, 1.3).unwrap();
        let oracle = qi_quadrature_oracle(&f);
        let closed = -f.qi_functional(1.0).unwrap();
        assert!((oracle - closed).abs() < 1e-6 * closed, "{w:?}: {oracle} vs {closed}");
    }
}

#[test]
fn qi_functional_scales_as_inverse_square() {
    for w in [Window::Gaussian, Window::Lorentzian, Window::SquaredLorentzian] {
        let a = SamplingFunction::analytic(w, 1.0).unwrap().qi_functional(1.0).unwrap();
        let b = SamplingFunction::analytic(w, 2.5).unwrap().qi_functional(1.0).unwrap();
        assert!((b - a / 6.25).abs() < 1e-15);
    }
    // the grid route honours the same law
    let g1 = SamplingFunction::Grid(SamplingFunction::gaussian(1.0).unwrap().to_grid().unwrap());
    let g2 = SamplingFunction::Grid(SamplingFunction::gaussian(2.0).unwrap().to_grid().unwrap());
    let (a, b) = (g1.qi_functional(1.0).unwrap(), g2.qi_functional(1.0).unwrap());
    assert!((a + 0.5).abs() < 1e-9);
    assert!((b - a / 4.0).abs() < 1e-9);
}
