use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_local::arch_local::*;
use spectral_local::global_demo::*;
use spectral_local::specfun::{integrate_real, Domain, QuadratureSpec};
use spectral_local::Error;
use std::collections::BTreeMap;

fn tau_trial(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count() as u64
}

fn brute_force(b: u64, w: impl Fn(f64) -> f64, n_max: u64) -> f64 {
    let mut acc = BigRational::zero();
    for n in 1..=n_max {
        let term = (tau_trial(n + b) as f64 * tau_trial(n) as f64) * w(n as f64);
        acc += BigRational::from_float(term).unwrap();
    }
    acc.to_f64().unwrap()
}

fn datum(r: f64, hecke: &[(u64, f64)]) -> SpectralDatum {
    SpectralDatum {
        r,
        parity: 0,
        hecke: hecke.iter().cloned().collect::<BTreeMap<_, _>>(),
        l_half: Some(1.0),
        l_one_ad: Some(1.0),
        c_abs: Some(1.0),
        c_sign: Some(1),
        source: "synthetic".into(),
    }
}

#[test]
fn divisor_sieve() {
    let t = divisor_coeffs(1_000_000).unwrap();
    assert_eq!((t[1], t[12], t[720_720]), (1, 6, 240));
    let a = divisor_asymptotics(&t);
    assert_eq!(a.sum, divisor_summatory(1_000_000));
    assert!(a.normalized < 1.0, "{a:?}");
    assert!(divisor_coeffs(0).is_err());
}

#[test]
fn shifted_sum_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let b = rng.gen_range(1..40u64);
        let spec = if rng.gen_bool(0.5) {
            let c = rng.gen_range(1.5..6.0);
            let hw = rng.gen_range(0.2..1.0);
            ShiftedSumSpec::new(
                CoefficientSource::Divisor,
                b,
                Window::Scaled(TestFunction::bump(c, hw)),
            )
            .unwrap()
        } else {
            let x = rng.gen_range(50.0..400.0f64).round();
            let y = rng.gen_range(5.0..60.0);
            ShiftedSumSpec::new(
                CoefficientSource::Divisor,
                b,
                Window::ShortInterval {
                    x,
                    y,
                    v: TestFunction::bump(1.5, 0.5),
                },
            )
            .unwrap()
        };
        let got = shifted_sum_lhs(&spec).unwrap();
        let want = brute_force(b, |n| spec.window.eval(n, b), 600);
        assert_eq!(got.to_bits(), want.to_bits(), "{spec:?}: {got} {want}");
    }
}

#[test]
fn empty_windows() {
    let none = ShiftedSumSpec::new(
        CoefficientSource::Divisor,
        1,
        Window::Scaled(TestFunction::zero()),
    )
    .unwrap();
    assert_eq!(shifted_sum_lhs(&none).unwrap(), 0.0);
    let gap = ShiftedSumSpec::new(
        CoefficientSource::Divisor,
        1,
        Window::Scaled(TestFunction::bump(1.5, 0.01)),
    )
    .unwrap();
    assert_eq!(shifted_sum_lhs(&gap).unwrap(), 0.0);
    assert!(ShiftedSumSpec::new(
        CoefficientSource::Divisor,
        0,
        Window::Scaled(TestFunction::zero())
    )
    .is_err());
}

#[test]
fn hecke_source_needs_coefficients() {
    let f = datum(9.5, &[(2, 1.0), (3, 0.5), (4, 0.0)]);
    let src = CoefficientSource::Hecke {
        f: Box::new(f.clone()),
        g: Box::new(f),
    };
    let spec =
        ShiftedSumSpec::new(src.clone(), 1, Window::Scaled(TestFunction::bump(4.0, 0.9))).unwrap();
    assert!(matches!(
        shifted_sum_lhs(&spec),
        Err(Error::InsufficientCoefficients { .. })
    ));
    // n ∈ {2}: λ(3)λ(2)V(2)
    let spec = ShiftedSumSpec::new(src, 1, Window::Scaled(TestFunction::bump(2.0, 0.3))).unwrap();
    assert_eq!(
        shifted_sum_lhs(&spec).unwrap(),
        0.5 * TestFunction::bump(2.0, 0.3).eval(2.0)
    );
}

#[test]
fn c_abs_examples() {
    let t = Temperedness::TemperedAtS;
    assert_eq!(c_abs_from_L(0.0, 3.0, &t).unwrap(), 0.0);
    assert_eq!(c_abs_from_L(1.0, 1.0, &t).unwrap(), 1.0);
    assert_eq!(c_abs_from_L(4.0, 2.0, &t).unwrap(), 1.0);
    assert!(matches!(
        c_abs_from_L(4.0, 2.0, &Temperedness::Corrected(None)),
        Err(Error::MissingData(_))
    ));
    assert_eq!(
        c_abs_from_L(4.0, 2.0, &Temperedness::Corrected(Some(0.5))).unwrap(),
        0.5
    );
    assert!(c_abs_from_L(1.0, 0.0, &t).is_err());
}

#[test]
fn ingestion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, "").unwrap();
    assert!(ingest_spectral_data(&path).unwrap().records.is_empty());

    let text = r#"[{"r": 9.53369526135, "parity": 0, "hecke": {"2": 10.0, "3": 0.2}, "L_half": 0.5, "L_one_ad": 1.1, "c_abs": null, "c_sign": null, "source": "test"}]"#;
    let data = parse_spectral_data(text).unwrap();
    assert_eq!(data.records.len(), 1);
    assert!(
        data.warnings.iter().any(|w| w.message.contains("λ(2)")),
        "{:?}",
        data.warnings
    );

    let bad = parse_spectral_data(
        "[{\"r\": 1.0,\n \"parity\": 3, \"hecke\": {}, \"L_half\": 1, \"L_one_ad\": 1}]",
    )
    .unwrap_err();
    assert!(bad.to_string().contains("parity"), "{bad}");
    let syntax = parse_spectral_data("[{\"r\": 1.0,\n \"parity\": }]").unwrap_err();
    assert!(syntax.to_string().contains("line 2"), "{syntax}");

    let recs = vec![
        datum(
            0.1 + 0.2,
            &[
                (2, 1.0 / 3.0),
                (3, -std::f64::consts::FRAC_1_SQRT_2),
                (6, -0.2357022603955159),
            ],
        ),
        datum(13.7797513519, &[(2, 1e-300)]),
    ];
    let path = dir.path().join("round.json");
    write_spectral_data(&path, &recs).unwrap();
    let back = ingest_spectral_data(&path).unwrap();
    assert_eq!(back.records, recs);
    for (a, b) in back.records.iter().zip(&recs) {
        assert_eq!(a.r.to_bits(), b.r.to_bits());
    }
    assert!(back.warnings.is_empty(), "{:?}", back.warnings);
}

#[test]
fn multiplicativity_check() {
    let d = datum(1.0, &[(2, 0.5), (3, 0.4), (6, 0.3)]);
    assert_eq!(multiplicativity_defects(&d, 1e-6).len(), 1);
    let d = datum(1.0, &[(2, 0.5), (3, 0.4), (6, 0.2)]);
    assert!(multiplicativity_defects(&d, 1e-6).is_empty());
}

fn decaying_weight() -> BivariateWeight {
    BivariateWeight::new(TestFunction::bump(3.0, 2.0), TestFunction::bump(1.5, 1.0))
}

#[test]
fn spectral_side() {
    let triv = ArchRep::principal(0.0, 0);
    let h = decaying_weight();
    let contour = ContourSpec::default();
    let empty = spectral_rhs_truncated(1, &h, &triv, &triv, &[], &[10.0, 20.0], &contour).unwrap();
    assert!(empty
        .rows
        .iter()
        .all(|r| r.partial_sum.norm() == 0.0 && r.majorant == 0.0));

    let one =
        spectral_rhs_truncated(1, &h, &triv, &triv, &[datum(5.0, &[])], &[10.0], &contour).unwrap();
    let direct = h_vee(&ArchRep::principal(5.0, 0), 1.0, &h, &triv, &triv, &contour)
        .unwrap()
        .value
        * 0.5;
    assert!((one.rows[0].partial_sum - direct).norm() <= 1e-14 * direct.norm());

    let data: Vec<SpectralDatum> = (1..=45).map(|k| datum(k as f64, &[])).collect();
    let rep =
        spectral_rhs_truncated(1, &h, &triv, &triv, &data, &[20.0, 30.0, 40.0], &contour).unwrap();
    let s: Vec<_> = rep.rows.iter().map(|r| r.partial_sum).collect();
    assert!((s[2] - s[1]).norm() < (s[1] - s[0]).norm());

    let v5 = h_vee(&ArchRep::principal(5.0, 0), 1.0, &h, &triv, &triv, &contour)
        .unwrap()
        .value
        .norm();
    let v30 = h_vee(
        &ArchRep::principal(30.0, 0),
        1.0,
        &h,
        &triv,
        &triv,
        &contour,
    )
    .unwrap()
    .value
    .norm();
    assert!(v5 >= 1e3 * v30, "{v5} {v30}");

    let mut unsigned = datum(3.0, &[]);
    unsigned.c_abs = None;
    unsigned.l_half = None;
    let err =
        spectral_rhs_truncated(2, &h, &triv, &triv, &[unsigned], &[10.0], &contour).unwrap_err();
    assert!(
        err.to_string().contains("L_half") && err.to_string().contains("hecke[2]"),
        "{err}"
    );
}

#[test]
fn divisor_main_term_tracks_correlation() {
    let n = 200_000u64;
    let t = divisor_coeffs(n as usize + 1).unwrap();
    let sum: u64 = (1..=n)
        .map(|k| t[k as usize] as u64 * t[k as usize + 1] as u64)
        .sum();
    let spec = QuadratureSpec::default().with_tol(0.0, 1e-12);
    let mt = integrate_real(
        |x| divisor_correlation_density(x, 1),
        Domain::Finite(1.0, n as f64),
        &spec,
    )
    .value
    .re;
    assert!(
        (sum as f64 - mt).abs() < (n as f64).powf(2.0 / 3.0),
        "{sum} {mt}"
    );
    // leading coefficient σ_{−1}(b)/ζ(2)
    let x = 1e300f64;
    for (b, sigma) in [(1u64, 1.0), (6, 2.0)] {
        let lead = divisor_correlation_density(x, b) / x.ln().powi(2);
        assert!(
            (lead / (sigma * 6.0 / std::f64::consts::PI.powi(2)) - 1.0).abs() < 0.02,
            "{b}: {lead}"
        );
    }
}

#[test]
fn scaling_basics() {
    let mut cfg = ScalingConfig::divisor_grid(&[1e4], 0.75, &[1]);
    cfg.v = TestFunction::zero();
    let r = scaling_experiment(&cfg).unwrap();
    assert!(r
        .rows
        .iter()
        .all(|row| row.s_abs == 0.0 && row.mean_square == 0.0));

    let cfg = ScalingConfig::divisor_grid(&[1e4, 3e4], 0.75, &[1, 4]);
    let a = scaling_experiment(&cfg).unwrap();
    let b = scaling_experiment(&cfg).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );

    let mut cfg = ScalingConfig::divisor_grid(&[1e4], 0.75, &[1]);
    cfg.grid.push((1e4, 2000.0, 1));
    let r = scaling_experiment(&cfg).unwrap();
    // only the mean square with the divisor main term removed stays within the factor 2
    assert!(r.rows[1].ratio_mean_square_off_main <= 2.0 * r.rows[0].ratio_mean_square_off_main);
}
