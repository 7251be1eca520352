//! End-to-end runs of the `recoil-slits` binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recoil-slits"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn meta(csv: &str, key: &str) -> f64 {
    let prefix = format!("# {key}=");
    csv.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in\n{csv}"))
        .parse()
        .unwrap()
}

fn pattern_visibility(args: &[&str]) -> f64 {
    let mut full = vec!["pattern", "--samples", "32"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    meta(&stdout(&out), "visibility")
}

/// Data rows of a sweep CSV as `(beta, exact, first_order, oracle, deviation)`.
fn sweep_rows(csv: &str) -> Vec<Vec<Option<f64>>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().ok()).collect())
        .collect()
}

#[test]
fn rigid_slits_have_full_contrast() {
    assert!((pattern_visibility(&["--config", "A"]) - 1.0).abs() < 1e-12);
}

#[test]
fn long_pulse_single_slit_and_dispersive_element() {
    let v = pattern_visibility(&["--config", "C1", "--pulse", "long", "--beta", "0.5"]);
    assert!((v - 0.5).abs() < 1e-12);
    let v = pattern_visibility(&[
        "--config",
        "C1",
        "--pulse",
        "long",
        "--beta",
        "0.5",
        "--dispersive",
        "SHIFTED",
    ]);
    assert!((v - 1.0).abs() < 1e-12);
}

#[test]
fn pattern_csv_layout() {
    let out = stdout(&run(&[
        "pattern",
        "--config",
        "B",
        "--beta",
        "0.2",
        "--samples",
        "16",
    ]));
    let data: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "phi,intensity");
    assert_eq!(data.len(), 17);
    assert!(out.contains("# spec=config=B,"));
    assert!(out.ends_with('\n') && !out.contains('\r'));
}

#[test]
fn pattern_json_schema() {
    let out = run(&[
        "pattern",
        "--config",
        "C2",
        "--beta",
        "0.1",
        "--samples",
        "16",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "meta",
        "pattern",
        "visibility",
        "phase_offset",
        "condition",
        "post_selection_probability",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["pattern"]["phis"].as_array().unwrap().len(), 16);
    assert_eq!(v["pattern"]["intensities"].as_array().unwrap().len(), 16);
    assert_eq!(v["meta"]["spec"]["config"], "C2");
    assert!(v["meta"]["version"].is_string());
}

#[test]
fn eraser_and_coincidence_restore_contrast() {
    for outcome in ["atom1_excited", "atom2_excited"] {
        let v = pattern_visibility(&[
            "--config",
            "B",
            "--beta",
            "0.3",
            "--eraser",
            "--coincidence",
            outcome,
        ]);
        assert!((v - 1.0).abs() < 1e-9, "{outcome}: {v}");
    }
    for outcome in ["single_atom_0", "single_atom_1"] {
        let v = pattern_visibility(&["--config", "C1", "--beta", "0.3", "--coincidence", outcome]);
        assert!((v - 1.0).abs() < 1e-9, "{outcome}: {v}");
    }
}

#[test]
fn identical_flags_give_identical_bytes() {
    let args = [
        "pattern",
        "--config",
        "E",
        "--beta",
        "0.2",
        "--coupling",
        "1",
        "--evolve-time",
        "0.7",
        "--samples",
        "64",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = [
        "sweep",
        "--config",
        "C1",
        "--beta-range",
        "0:0.4:9",
        "--format",
        "json",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("recoil-slits-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.csv");
    let args = [
        "pattern",
        "--config",
        "B",
        "--beta",
        "0.1",
        "--samples",
        "16",
    ];
    let direct = run(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(run(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), direct);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unused_flag_is_a_flag_error() {
    let out = run(&["pattern", "--config", "B", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--alpha"));
    let out = run(&["pattern", "--config", "A", "--beta", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["pattern", "--config", "B", "--coupling", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_is_a_flag_error() {
    for args in [
        &["pattern", "--config", "Q"][..],
        &["pattern", "--config", "B", "--beta", "zero"],
        &["pattern", "--config", "B", "--coincidence", "nonsense"],
        &["pattern", "--config", "C1", "--dispersive", "BLUE"],
        &["sweep", "--config", "B", "--beta-range", "0.3:0.1:3"],
        &[
            "sweep",
            "--config",
            "B",
            "--beta",
            "0.1",
            "--beta-range",
            "0:0.1:2",
        ],
        &["pattern", "--config", "D", "--pulse", "long"],
        &["pattern", "--config", "E", "--coupling", "-1"],
        &["pattern", "--config", "C1", "--eraser"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn truncation_failure_is_a_physics_error() {
    let out = run(&["pattern", "--config", "B", "--beta", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn sweep_tracks_perturbative_bound() {
    let out = run(&["sweep", "--config", "B", "--beta-range", "0:0.3:7"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = sweep_rows(&stdout(&out));
    assert_eq!(rows.len(), 7);
    for r in rows {
        let beta = r[0].unwrap();
        let dev = r[4].unwrap();
        assert!(dev <= 5.0 * beta.powi(4) + 1e-15, "beta {beta}: {dev}");
        assert!((r[2].unwrap() - r[3].unwrap()).abs() < 1e-12);
    }
}

#[test]
fn longitudinal_recoil_leaves_sweep_unchanged() {
    let base = stdout(&run(&[
        "sweep",
        "--config",
        "D",
        "--alpha",
        "0",
        "--beta-range",
        "0:0.3:4",
    ]));
    let kicked = stdout(&run(&[
        "sweep",
        "--config",
        "D",
        "--alpha",
        "3",
        "--beta-range",
        "0:0.3:4",
    ]));
    let (a, b) = (sweep_rows(&base), sweep_rows(&kicked));
    assert_eq!(a.len(), 4);
    for (x, y) in a.iter().zip(&b) {
        for col in 1..4 {
            assert!((x[col].unwrap() - y[col].unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn single_point_sweep_matches_pattern() {
    let rows = sweep_rows(&stdout(&run(&[
        "sweep",
        "--config",
        "C2",
        "--beta-range",
        "0.25:0.25:1",
    ])));
    assert_eq!(rows.len(), 1);
    let v = pattern_visibility(&["--config", "C2", "--beta", "0.25"]);
    assert!((rows[0][1].unwrap() - v).abs() < 1e-12);
}

#[test]
fn sweep_with_transforms_has_no_oracle() {
    let rows = sweep_rows(&stdout(&run(&[
        "sweep",
        "--config",
        "C1",
        "--pulse",
        "long",
        "--dispersive",
        "SHIFTED",
        "--beta-range",
        "0:0.4:3",
    ])));
    for r in rows {
        assert!(r[3].is_none() && r[4].is_none());
        assert!((r[1].unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn whichway_outputs() {
    let out = stdout(&run(&["whichway", "--beta", "1", "--delta", "1"]));
    assert!((meta(&out, "p_minus") - 0.018_315_638_888_734).abs() < 1e-14);
    assert!((meta(&out, "simulated_p_minus") - meta(&out, "p_minus")).abs() < 1e-12);
    let curve: Vec<Vec<f64>> = out
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert!(!curve.is_empty());
    for pair in curve.windows(2) {
        assert!(pair[1][0] < pair[0][0] && pair[1][2] < pair[0][2]);
    }

    let v: serde_json::Value = serde_json::from_slice(
        &run(&[
            "whichway", "--beta", "0.5", "--delta", "0.8", "--format", "json",
        ])
        .stdout,
    )
    .unwrap();
    for key in ["meta", "oracle", "simulated", "deviation", "tradeoff"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v["deviation"]["p_plus"].as_f64().unwrap() < 1e-10);
    assert_eq!(
        run(&["whichway", "--beta", "-1", "--delta", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn report_passes_and_detects_corrupted_tolerances() {
    let out = run(&["report"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 9);
    assert_eq!(
        run(&["report", "--tolerance-scale", "1e-30"]).status.code(),
        Some(4)
    );
}

#[test]
fn help_and_unknown_subcommand() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert!(stdout(&run(&["--help"])).contains("2g"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
