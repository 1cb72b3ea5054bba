use num_complex::Complex64;
use proptest::prelude::*;
use spectral_local::arch_local::*;
use spectral_local::specfun::{gamma_r, integrate_real, Domain, QuadratureSpec};
use spectral_local::Error;
use std::f64::consts::PI;

// Reference values from tests/oracle/*.py (mpmath, 30-40 digits).

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn pair() -> BivariateWeight {
    BivariateWeight::new(TestFunction::bump(1.2, 0.6), TestFunction::bump(1.0, 0.5))
}

#[test]
fn kernel_reference() {
    let k = kernel_K(c(1.0, 0.0), 1.0).unwrap();
    assert!(rel(k, c(-1.019_684_476_440_520_4, 0.0)) < 1e-12, "{k}");
    let k = kernel_K(c(1.0, 0.0), 1e6).unwrap();
    assert!(rel(k, c(-0.001_772_481_458_651_111_5, 0.0)) < 1e-10, "{k}");
    assert!(kernel_K(c(1.0, 0.0), -1.0).is_err());
}

#[test]
fn tilde_reference() {
    let v = motohashi_tilde(
        &TestFunction::bump(1.5, 0.5),
        1.0,
        &QuadratureSpec::default(),
    )
    .unwrap();
    assert!(rel(v, c(-0.244_463_921_275_771_63, 0.0)) < 1e-10, "{v}");
}

#[test]
fn gamma_quotient_reference() {
    let g = gamma_quotient_G(
        &ArchRep::principal(0.0, 0),
        &ArchCharacter::new(c(0.25, 0.0), 0),
    )
    .unwrap();
    assert!(rel(g, c(10.101_548_718_589_685, 0.0)) < 1e-12, "{g}");
    let d = gamma_quotient_G(
        &ArchRep::discrete(4).unwrap(),
        &ArchCharacter::new(c(0.1, 0.0), 1),
    )
    .unwrap();
    assert_eq!(d, c(0.0, 0.0));
}

#[test]
fn h_of_reference() {
    let h = pair();
    let v = H_of(1.0, &ArchCharacter::trivial(), &h).unwrap();
    assert!(rel(v, c(0.057_640_302_411_913_59, 0.0)) < 1e-11, "{v}");
    let v = H_of(0.8, &ArchCharacter::new(c(0.3, 1.0), 0), &h).unwrap();
    assert!(
        rel(v, c(0.069_215_282_237_354_53, 0.011_548_083_060_083_921)) < 1e-11,
        "{v}"
    );
    assert_eq!(
        H_of(10.0, &ArchCharacter::trivial(), &h).unwrap(),
        c(0.0, 0.0)
    );
}

#[test]
fn w_reference() {
    let v = w_eta_chi(
        &ArchCharacter::unitary(2.0),
        &ArchCharacter::trivial(),
        &pair(),
    )
    .unwrap();
    assert!(
        rel(v, c(0.041_785_467_837_305_24, -0.015_950_061_141_120_33)) < 1e-9,
        "{v}"
    );
}

#[test]
fn residue_kernel_reference() {
    for (r, x, want) in [
        (1.0, 0.5, -8.157_475_811_524_163),
        (2.0, -1.5, -2.761_599_115_769_503),
        (3.0, 0.3, -1.207_808_046_114_455_8),
    ] {
        let v = residue_kernel(r, x).unwrap();
        assert!(rel(v, c(want, 0.0)) < 1e-11, "RK({r}, {x}) = {v}");
    }
    assert!(residue_kernel(1.0, 1.5).is_err());
}

#[test]
fn whittaker_reference() {
    let w = whittaker_spherical(0.0, 1.0).unwrap();
    assert!((w - 0.001_833_168_721_808_740_6).abs() < 1e-10 * 0.0018);
    assert_eq!(
        whittaker_spherical(1.7, -0.4).unwrap(),
        whittaker_spherical(1.7, 0.4).unwrap()
    );
}

#[test]
fn whittaker_mellin_ratio_is_constant() {
    let r = 2.0;
    let spec = QuadratureSpec::default().with_tol(1e-15, 1e-13);
    let ratio = |s: f64| {
        // y = e^v; W(e^v) < e^{−500} beyond v = 4.5
        let m = integrate_real(
            |v| whittaker_spherical(r, v.exp()).unwrap() * (s * v).exp(),
            Domain::Finite(-60.0, 4.5),
            &spec,
        );
        let g = gamma_r(c(s + 0.5, r)).unwrap() * gamma_r(c(s + 0.5, -r)).unwrap();
        m.value / g
    };
    let vals: Vec<Complex64> = [0.3, 0.7, 1.1].iter().map(|&s| ratio(s)).collect();
    for v in &vals {
        assert!(rel(*v, vals[0]) < 1e-8, "{vals:?}");
    }
    assert!(rel(vals[0], c(0.5, 0.0)) < 1e-8);
}

#[test]
fn plancherel_shape() {
    let d = plancherel_density(&ArchRep::principal(1.0, 1));
    assert!((d - (PI).tanh() / (4.0 * PI * PI)).abs() < 1e-15);
    let d = plancherel_density(&ArchRep::discrete(6).unwrap());
    assert!((d - 5.0 / (4.0 * PI * PI)).abs() < 1e-15);
}

#[test]
fn h_vee_contour_independence() {
    let h = BivariateWeight::new(TestFunction::bump(1.5, 1.0), TestFunction::bump(0.6, 0.5));
    let triv = ArchRep::principal(0.0, 0);
    let pis = [
        ArchRep::principal(1.0, 0),
        ArchRep::principal(2.5, 1),
        ArchRep::discrete(4).unwrap(),
    ];
    let transforms: Vec<VeeTransform> = [0.2, 0.25, 0.3]
        .iter()
        .map(|&s| {
            VeeTransform::new(
                1.0,
                &h,
                &triv,
                &triv,
                &ContourSpec::default().with_sigma(s).with_cutoff(500.0),
            )
            .unwrap()
        })
        .collect();
    for pi in &pis {
        let vals: Vec<Complex64> = transforms
            .iter()
            .map(|t| t.eval(pi).unwrap().value)
            .collect();
        for v in &vals {
            assert!(rel(*v, vals[1]) < 1e-8, "{pi:?}: {vals:?}");
        }
    }
}

#[test]
fn h_sharp_methods_agree() {
    let h = BivariateWeight::new(TestFunction::bump(1.2, 0.3), TestFunction::bump(0.4, 0.2));
    let triv = ArchRep::principal(0.0, 0);
    let chi0 = ArchCharacter::trivial();
    let contour = ContourSpec::default().with_cutoff(400.0);
    let pi = ArchRep::principal(2.0, 0);
    let auto = SharpTransform::new(
        SharpSource::Weight(&h),
        &chi0,
        &triv,
        &triv,
        &contour,
        SharpMethod::Auto,
        TransformOptions::default(),
    )
    .unwrap();
    assert_eq!(auto.method(), SharpMethod::Residue);
    let a = auto.eval(&pi).unwrap().value;
    let b = SharpTransform::new(
        SharpSource::Weight(&h),
        &chi0,
        &triv,
        &triv,
        &contour,
        SharpMethod::Contour,
        TransformOptions::default(),
    )
    .unwrap()
    .eval(&pi)
    .unwrap()
    .value;
    assert!(rel(b, a) < 1e-7, "{a} {b}");
}

#[test]
fn sharp_rejects_sigma_outside_strip() {
    let h = pair();
    let triv = ArchRep::principal(0.0, 0);
    let r = h_sharp(
        &ArchRep::principal(1.0, 0),
        &ArchCharacter::trivial(),
        &h,
        &triv,
        &triv,
        &ContourSpec::default().with_sigma(0.6),
    );
    assert!(matches!(r, Err(Error::StripViolation { .. })));
}

#[test]
fn appendix_cases() {
    let spec = QuadratureSpec::default();
    let zero = appendix_check(&TestFunction::zero(), 1.0, &spec).unwrap();
    assert_eq!(
        (zero.lhs, zero.rhs, zero.residual),
        (c(0.0, 0.0), c(0.0, 0.0), 0.0)
    );
    let mixed = TestFunction::bump(1.0, 0.5);
    assert!(matches!(
        appendix_check(&mixed, 1.0, &spec),
        Err(Error::MixedSupport)
    ));
    let out = appendix_check_with(
        &TestFunction::bump(2.0, 0.5),
        5.0,
        &spec,
        &ContourSpec::default().with_cutoff(200.0),
    )
    .unwrap();
    assert!(out.residual < 1e-6, "{out:?}");
    let res = out.rhs_residue.unwrap();
    assert!(rel(res, out.lhs) < 1e-10);
}

#[test]
fn motohashi_check_matches_single_integral() {
    let spec = QuadratureSpec::default();
    for phi in [TestFunction::bump(0.5, 0.3), TestFunction::bump(2.0, 0.5)] {
        for t in [1.0, 4.0] {
            let a = motohashi_check(&phi, t, &spec).unwrap();
            let b = wcheck(&phi, t, &spec).unwrap();
            assert!(rel(a, b) < 1e-6, "{t}: {a} {b}");
        }
    }
}

#[test]
fn invert_rejects_wrong_shift() {
    let h = pair();
    let triv = ArchRep::principal(0.0, 0);
    let contour = ContourSpec::default();
    let grid = SpectralGrid::hvee(1.0, &h, &triv, &triv, &contour, 2.0, 4).unwrap();
    assert!(invert_h(1.0, 0.5, &grid, &triv, &triv, &contour).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn h_vee_is_linear(a in -2.0..2.0f64, b in -2.0..2.0f64, c1 in 1.2..2.0f64, c2 in 0.5..0.9f64, r in 0.0..6.0f64) {
        let g = TestFunction::bump(0.7, 0.3);
        let f1 = TestFunction::bump(c1, 0.4);
        let f2 = TestFunction::bump(c2, 0.3);
        let triv = ArchRep::principal(0.0, 0);
        let contour = ContourSpec::default().with_cutoff(100.0);
        let pi = ArchRep::principal(r, 0);
        let v = |h: &BivariateWeight| h_vee(&pi, 1.0, h, &triv, &triv, &contour).unwrap().value;
        let combo = BivariateWeight::new(f1.clone().scaled(a).plus(&f2.clone().scaled(b)).unwrap(), g.clone());
        let lhs = v(&combo);
        let rhs = v(&BivariateWeight::new(f1, g.clone())) * a + v(&BivariateWeight::new(f2, g)) * b;
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()), "{lhs} {rhs}");
    }

    #[test]
    fn kernel_is_even_in_t(t in 0.01..8.0f64, y in 0.05..20.0f64) {
        let a = kernel_K(c(t, 0.0), y).unwrap();
        let b = kernel_K(c(-t, 0.0), y).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
    }
}
