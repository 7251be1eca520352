//! Scenario construction checked against closed forms and physical limits.

use recoil_slits::oracle::{contrast_b, contrast_exact, longpulse_weights};
use recoil_slits::scenarios::{build, Config, Pulse, ScenarioSpec, Treatment};
use recoil_slits::transforms::{apply_eraser, evolve_beat, named_projector, ProjectorName};
use recoil_slits::twopath::{condition, visibility, FreqTag};
use recoil_slits::Error;
use std::f64::consts::FRAC_PI_4;

fn vis(spec: &ScenarioSpec) -> f64 {
    visibility(&build(spec).unwrap()).unwrap().visibility
}

#[test]
fn long_pulse_shares_match_weight_tables() {
    let labels = |tag: FreqTag, config: Config| match (config, tag) {
        (_, FreqTag::Elastic) => "elastic",
        (Config::E, FreqTag::Sym) => "sym",
        (Config::E, FreqTag::Antisym) => "antisym",
        _ => "shifted",
    };
    for config in [Config::B, Config::C1, Config::C2, Config::E] {
        for beta in [0.1, 0.3, 0.5] {
            let m = build(&ScenarioSpec::new(config).pulse(Pulse::Long).beta(beta)).unwrap();
            let table = longpulse_weights(config, beta).unwrap();
            let mut summed: Vec<(&str, f64)> = Vec::new();
            for (tag, share) in m.intensity_shares() {
                let label = labels(tag, config);
                match summed.iter_mut().find(|e| e.0 == label) {
                    Some(e) => e.1 += share,
                    None => summed.push((label, share)),
                }
            }
            if config == Config::B {
                let per_atom: Vec<f64> = m
                    .intensity_shares()
                    .into_iter()
                    .filter(|e| e.0 == FreqTag::Shifted)
                    .map(|e| e.1)
                    .collect();
                assert_eq!(per_atom.len(), 2);
                assert!((per_atom[0] - table.get("atom1").unwrap()).abs() < 1e-12);
                assert!((per_atom[1] - table.get("atom2").unwrap()).abs() < 1e-12);
                let shifted = summed.iter().find(|e| e.0 == "shifted").unwrap().1;
                assert!(
                    (shifted - table.get("atom1").unwrap() - table.get("atom2").unwrap()).abs()
                        < 1e-12
                );
                assert!((summed[0].1 - table.get("elastic").unwrap()).abs() < 1e-12);
                continue;
            }
            assert_eq!(summed.len(), table.entries.len());
            for (label, share) in summed {
                let expected = table.get(label).unwrap();
                assert!(
                    (share - expected).abs() < 1e-12,
                    "{config:?} {beta} {label}: {share} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn perturbative_error_is_fourth_order() {
    for beta in [0.05, 0.1, 0.2, 0.3] {
        let exact = vis(&ScenarioSpec::new(Config::B).beta(beta));
        let first = vis(&ScenarioSpec::new(Config::B)
            .beta(beta)
            .treatment(Treatment::FirstOrder));
        assert!((first - contrast_b(beta)).abs() < 1e-12);
        assert!((exact - first).abs() / beta.powi(4) <= 5.0);
    }
}

#[test]
fn c1_and_c2_agree() {
    for beta in [0.0, 0.1, 0.3] {
        for treatment in [Treatment::Exact, Treatment::FirstOrder] {
            let a = build(
                &ScenarioSpec::new(Config::C1)
                    .beta(beta)
                    .treatment(treatment),
            )
            .unwrap();
            let b = build(
                &ScenarioSpec::new(Config::C2)
                    .beta(beta)
                    .treatment(treatment),
            )
            .unwrap();
            assert_eq!(a.max_abs_diff(&b).unwrap(), 0.0);
        }
    }
}

#[test]
fn longitudinal_kick_is_invisible() {
    for beta in [0.1, 0.3] {
        let reference = contrast_exact(Config::D, beta).unwrap();
        for alpha in [0.0, 1.0, 3.0] {
            let v = vis(&ScenarioSpec::new(Config::D).beta(beta).alpha(alpha));
            assert!((v - reference).abs() < 1e-10, "alpha {alpha}");
        }
    }
}

#[test]
fn quarter_beat_matches_eraser() {
    for g in [0.5, 1.0, 3.0] {
        let t = FRAC_PI_4 / g;
        let coupled = build(
            &ScenarioSpec::new(Config::E)
                .beta(0.3)
                .coupling(g)
                .evolve_time(t),
        )
        .unwrap();
        let erased = apply_eraser(
            &build(
                &ScenarioSpec::new(Config::B)
                    .beta(0.3)
                    .treatment(Treatment::FirstOrder),
            )
            .unwrap(),
        )
        .unwrap();
        for name in [ProjectorName::Atom1Excited, ProjectorName::Atom2Excited] {
            let p = named_projector(name, coupled.space()).unwrap();
            let a = visibility(&condition(&coupled, &p).unwrap().mixture)
                .unwrap()
                .visibility;
            let b = visibility(&condition(&erased, &p).unwrap().mixture)
                .unwrap()
                .visibility;
            assert!((a - b).abs() < 1e-9 && (a - 1.0).abs() < 1e-9);
        }
        let free = evolve_beat(&coupled, g, 0.0).unwrap();
        assert_eq!(free.max_abs_diff(&coupled).unwrap(), 0.0);
    }
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(matches!(
        build(&ScenarioSpec::new(Config::D).pulse(Pulse::Long)),
        Err(Error::Unsupported(_))
    ));
    assert!(matches!(
        build(&ScenarioSpec::new(Config::E).treatment(Treatment::Exact)),
        Err(Error::Unsupported(_)) | Err(Error::InvalidSpec { .. })
    ));
    assert!(matches!(
        build(&ScenarioSpec::new(Config::B).beta(3.0)),
        Err(Error::Truncation { .. })
    ));
    assert!(build(&ScenarioSpec::new(Config::B).epsilon(0.5)).is_err());
    assert!(build(&ScenarioSpec::new(Config::B).epsilon(0.0)).is_err());
}

#[test]
fn spec_file_round_trip_with_comments() {
    let spec = ScenarioSpec::new(Config::E)
        .beta(0.2)
        .coupling(1.5)
        .evolve_time(0.3)
        .nmax(12);
    let text = format!("# coupled slits\n{}\n", spec.to_kv());
    assert_eq!(ScenarioSpec::from_kv(&text).unwrap(), spec);
    assert!(ScenarioSpec::from_kv("beta=0.1\n").is_err());
    assert!(ScenarioSpec::from_kv("config=B\nspin=up\n").is_err());
}
