//! CSV and JSON writers.
//!
//! CSV files open with `# key=value` metadata lines followed by a header row;
//! floats use the shortest decimal that round-trips, lines end in LF. Nothing
//! time-dependent is written, so identical inputs give identical bytes.

use super::{CliResult, OutputArgs};
use crate::acceptance::CriterionReport;
use crate::oracle::{TradeoffPoint, WhichWay};
use crate::scenarios::ScenarioSpec;
use crate::twopath::PatternScan;
use crate::VERSION;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::io::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformEcho {
    pub eraser: bool,
    pub dispersive: Vec<String>,
    pub coincidence: Option<String>,
}

impl TransformEcho {
    fn kv(&self) -> String {
        format!(
            "eraser={},dispersive={},coincidence={}",
            self.eraser,
            self.dispersive.join("|"),
            self.coincidence.as_deref().unwrap_or("none")
        )
    }
}

fn spec_json(spec: &ScenarioSpec) -> Value {
    let map: Map<String, Value> = spec
        .kv_pairs()
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    Value::Object(map)
}

fn spec_kv(spec: &ScenarioSpec) -> String {
    spec.kv_pairs()
        .into_iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternOutput {
    pub spec: ScenarioSpec,
    pub transforms: TransformEcho,
    pub scan: PatternScan,
    pub post_selection_probability: f64,
}

impl PatternOutput {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = String::new();
                let _ = writeln!(s, "# version={VERSION}");
                let _ = writeln!(s, "# spec={}", spec_kv(&self.spec));
                let _ = writeln!(s, "# transforms={}", self.transforms.kv());
                let _ = writeln!(s, "# condition={}", self.scan.condition);
                let _ = writeln!(s, "# visibility={}", self.scan.visibility);
                let _ = writeln!(s, "# phase_offset={}", self.scan.phase_offset);
                let _ = writeln!(
                    s,
                    "# post_selection_probability={}",
                    self.post_selection_probability
                );
                s.push_str("phi,intensity\n");
                for (phi, i) in self.scan.phis.iter().zip(&self.scan.intensities) {
                    let _ = writeln!(s, "{phi},{i}");
                }
                s
            }
            Format::Json => to_json(&json!({
                "meta": {
                    "spec": spec_json(&self.spec),
                    "transforms": self.transforms,
                    "version": VERSION,
                },
                "pattern": {
                    "phis": self.scan.phis,
                    "intensities": self.scan.intensities,
                },
                "visibility": self.scan.visibility,
                "phase_offset": self.scan.phase_offset,
                "condition": self.scan.condition,
                "post_selection_probability": self.post_selection_probability,
            })),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub beta: f64,
    pub visibility_exact: Option<f64>,
    pub visibility_first_order: Option<f64>,
    pub oracle: Option<f64>,
    pub abs_deviation: Option<f64>,
}

pub(super) fn render_sweep(
    base: &ScenarioSpec,
    transforms: &TransformEcho,
    range: &str,
    rows: &[SweepRow],
    format: Format,
) -> String {
    match format {
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# version={VERSION}");
            let _ = writeln!(s, "# spec={}", spec_kv(base));
            let _ = writeln!(s, "# transforms={}", transforms.kv());
            let _ = writeln!(s, "# beta_range={range}");
            s.push_str("beta,visibility_exact,visibility_first_order,oracle,abs_deviation\n");
            for r in rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.beta,
                    opt(r.visibility_exact),
                    opt(r.visibility_first_order),
                    opt(r.oracle),
                    opt(r.abs_deviation)
                );
            }
            s
        }
        Format::Json => to_json(&json!({
            "meta": {
                "spec": spec_json(base),
                "transforms": transforms,
                "version": VERSION,
                "beta_range": range,
            },
            "rows": rows,
        })),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhichwayOutput {
    pub beta: f64,
    pub delta: f64,
    pub nmax: usize,
    pub oracle: WhichWay,
    pub simulated_p_plus: f64,
    pub simulated_p_minus: f64,
    pub simulated_ratio: f64,
    pub curve: Vec<TradeoffPoint>,
}

impl WhichwayOutput {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let o = &self.oracle;
                let mut s = String::new();
                let _ = writeln!(s, "# version={VERSION}");
                let _ = writeln!(s, "# beta={}", self.beta);
                let _ = writeln!(s, "# delta={}", self.delta);
                let _ = writeln!(s, "# nmax={}", self.nmax);
                let _ = writeln!(s, "# p_plus={}", o.p_plus);
                let _ = writeln!(s, "# p_minus={}", o.p_minus);
                let _ = writeln!(s, "# fractional_error={}", opt(o.fractional_error));
                let _ = writeln!(s, "# detect_prob={}", o.detect_prob);
                let _ = writeln!(s, "# simulated_p_plus={}", self.simulated_p_plus);
                let _ = writeln!(s, "# simulated_p_minus={}", self.simulated_p_minus);
                let _ = writeln!(s, "# simulated_ratio={}", self.simulated_ratio);
                s.push_str("fractional_error,delta,detect_prob\n");
                for p in &self.curve {
                    let _ = writeln!(s, "{},{},{}", p.fractional_error, p.delta, p.detect_prob);
                }
                s
            }
            Format::Json => to_json(&json!({
                "meta": {
                    "version": VERSION,
                    "beta": self.beta,
                    "delta": self.delta,
                    "nmax": self.nmax,
                },
                "oracle": self.oracle,
                "simulated": {
                    "p_plus": self.simulated_p_plus,
                    "p_minus": self.simulated_p_minus,
                    "ratio": self.simulated_ratio,
                },
                "deviation": {
                    "p_plus": (self.simulated_p_plus - self.oracle.p_plus).abs(),
                    "p_minus": (self.simulated_p_minus - self.oracle.p_minus).abs(),
                },
                "tradeoff": self.curve,
            })),
        }
    }
}

pub(super) fn render_report(reports: &[CriterionReport], tolerance_scale: f64) -> String {
    to_json(&json!({
        "version": VERSION,
        "tolerance_scale": tolerance_scale,
        "all_passed": reports.iter().all(|r| r.passed),
        "criteria": reports,
    }))
}

pub(super) fn emit(target: &OutputArgs, text: &str) -> CliResult<()> {
    match &target.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
