//! Closed-form values checked against frozen numbers and against an
//! independent brute-force Fock-series evaluation that shares no code with
//! the library's state construction.

use num_complex::Complex64;
use recoil_slits::fockspace::{coherent_state, displacement_operator, FockSpace, FockVector};
use recoil_slits::oracle::{
    contrast_b, contrast_c, contrast_exact, longpulse_contrast, whichway_probabilities,
};
use recoil_slits::scenarios::{build, Config, Pulse, ScenarioSpec, Treatment};
use recoil_slits::twopath::visibility;

/// `<a|b>` for untruncated coherent states summed term by term.
fn series_overlap(a: Complex64, b: Complex64, terms: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for n in 0..terms {
        if n > 0 {
            term = term * a.conj() * b / n as f64;
        }
        sum += term;
    }
    sum * (-(a.norm_sqr() + b.norm_sqr()) / 2.0).exp()
}

#[test]
fn frozen_values() {
    assert!((contrast_exact(Config::B, 0.2).unwrap() - 0.960_789_439_152_323).abs() < 1e-14);
    assert!((contrast_exact(Config::C1, 0.3).unwrap() - 0.835_270_211_411_272).abs() < 1e-14);
    assert!(
        (contrast_exact(Config::C2, 0.3_f64.sqrt()).unwrap() - 0.548_811_636_094_026).abs() < 1e-14
    );
    assert!((whichway_probabilities(1.0, 1.0).p_minus - 0.018_315_638_888_734).abs() < 1e-14);
    assert!((contrast_b(0.3) - 0.91).abs() < 1e-15);
    assert!((contrast_c(0.3) - 0.82).abs() < 1e-15);
}

#[test]
fn antipodal_overlap_frozen() {
    let nmax = 16;
    let plus = coherent_state(Complex64::new(0.3, 0.0), nmax)
        .unwrap()
        .vector;
    let minus = coherent_state(Complex64::new(-0.3, 0.0), nmax)
        .unwrap()
        .vector;
    let overlap = plus.inner(&minus).unwrap();
    assert!((overlap.norm_sqr() - 0.697_676_326_071_031).abs() < 1e-12);
    assert!(overlap.im.abs() < 1e-15);
}

#[test]
fn series_matches_closed_form_overlaps() {
    for beta in [0.05, 0.1, 0.2, 0.3, 0.5] {
        let b = Complex64::new(beta, 0.0);
        let ground = series_overlap(Complex64::new(0.0, 0.0), b, 60);
        assert!((ground.norm_sqr() - contrast_exact(Config::B, beta).unwrap()).abs() < 1e-14);
        let anti = series_overlap(b, -b, 60);
        assert!((anti.norm() - contrast_exact(Config::C1, beta).unwrap()).abs() < 1e-14);
    }
}

#[test]
fn simulated_visibility_matches_series() {
    for beta in [0.05, 0.1, 0.2, 0.3] {
        let b = Complex64::new(beta, 0.0);
        let spec = ScenarioSpec::new(Config::C1)
            .beta(beta)
            .treatment(Treatment::Exact);
        let v = visibility(&build(&spec).unwrap()).unwrap().visibility;
        assert!(
            (v - series_overlap(b, -b, 60).norm()).abs() < 1e-12,
            "beta {beta}"
        );

        let spec = ScenarioSpec::new(Config::B)
            .beta(beta)
            .treatment(Treatment::Exact);
        let v = visibility(&build(&spec).unwrap()).unwrap().visibility;
        let g = series_overlap(Complex64::new(0.0, 0.0), b, 60).norm_sqr();
        assert!((v - g).abs() < 1e-12, "beta {beta}");
    }
}

#[test]
fn first_order_contrasts_from_simulation() {
    for beta in [0.05, 0.1, 0.2, 0.3] {
        for (config, oracle) in [
            (Config::B, contrast_b(beta)),
            (Config::C1, contrast_c(beta)),
        ] {
            let spec = ScenarioSpec::new(config)
                .beta(beta)
                .treatment(Treatment::FirstOrder);
            let v = visibility(&build(&spec).unwrap()).unwrap().visibility;
            assert!((v - oracle).abs() < 1e-12, "{config:?} beta {beta}");
        }
    }
}

#[test]
fn long_pulse_contrasts_from_simulation() {
    for beta in [0.0, 0.1, 0.3, 0.5] {
        for config in [Config::A, Config::B, Config::C1, Config::C2, Config::E] {
            let spec = ScenarioSpec::new(config).pulse(Pulse::Long).beta(beta);
            let spec = if config == Config::A {
                ScenarioSpec::new(config).pulse(Pulse::Long)
            } else {
                spec
            };
            let v = visibility(&build(&spec).unwrap()).unwrap().visibility;
            let oracle =
                longpulse_contrast(config, if config == Config::A { 0.0 } else { beta }).unwrap();
            assert!((v - oracle).abs() < 1e-12, "{config:?} beta {beta}");
        }
    }
}

#[test]
fn coherent_state_matches_displaced_vacuum() {
    let nmax = 30;
    let space = FockSpace::single(nmax).unwrap();
    let vacuum = FockVector::basis(&space, &[0]).unwrap();
    for beta in [
        Complex64::new(0.4, 0.0),
        Complex64::new(0.0, 0.7),
        Complex64::new(-0.5, 0.9),
    ] {
        let via_series = coherent_state(beta, nmax).unwrap().vector;
        let via_expm = vacuum
            .apply(&displacement_operator(beta, nmax).unwrap())
            .unwrap();
        let d = via_series.max_abs_diff(&via_expm).unwrap();
        assert!(d < 1e-10, "{beta}: {d}");
        for n in 0..6 {
            let mut fact = 1.0;
            for k in 1..=n {
                fact *= k as f64;
            }
            let expected = (-beta.norm_sqr() / 2.0).exp() * beta.powu(n as u32) / fact.sqrt();
            let got = via_series.amplitude(&[n]).unwrap();
            assert!((got - expected).norm() < 1e-10, "{beta} n={n}");
        }
    }
}
