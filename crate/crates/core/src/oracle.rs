//! Closed-form results for every configuration.
//!
//! Scalar arithmetic only; nothing here touches Fock-space vectors, so
//! agreement with the simulation compares two independent computations.

use crate::scenarios::Config;
use num_complex::Complex64;
use serde::Serialize;

/// First-order contrast of independent slits, `1 - |beta|^2`.
pub fn contrast_b(beta: impl Into<Complex64>) -> f64 {
    1.0 - beta.into().norm_sqr()
}

/// First-order contrast of a single recoiling scatterer, `1 - 2|beta|^2`.
pub fn contrast_c(beta: impl Into<Complex64>) -> f64 {
    1.0 - 2.0 * beta.into().norm_sqr()
}

/// Exact coherent-state overlap magnitude for the short-pulse configurations:
/// `|<beta|0>|^2 = exp(-|beta|^2)` for B, `|<beta|-beta>| = exp(-2|beta|^2)`
/// for C and D. `None` for E, which has no exact treatment.
pub fn contrast_exact(config: Config, beta: impl Into<Complex64>) -> Option<f64> {
    let beta_sq = beta.into().norm_sqr();
    match config {
        Config::A => Some(1.0),
        Config::B => Some((-beta_sq).exp()),
        Config::C1 | Config::C2 | Config::D => Some((-2.0 * beta_sq).exp()),
        Config::E => None,
    }
}

/// Outcome of probing the recoiled atom with a coherent-state projector `|delta>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WhichWay {
    /// `exp(-|delta - beta|^2)`, click probability for the `|+beta>` path.
    pub p_plus: f64,
    /// `exp(-|delta + beta|^2)`, click probability for the `|-beta>` path.
    pub p_minus: f64,
    /// `p_minus / p_plus = exp(-4 beta delta)`; only for real, non-negative inputs.
    pub fractional_error: Option<f64>,
    /// `exp(-|delta|^2)`, probability of registering the recoil at all.
    pub detect_prob: f64,
}

pub fn whichway_probabilities(beta: impl Into<Complex64>, delta: impl Into<Complex64>) -> WhichWay {
    let (beta, delta) = (beta.into(), delta.into());
    let p_plus = (-(delta - beta).norm_sqr()).exp();
    let p_minus = (-(delta + beta).norm_sqr()).exp();
    let real_nonneg = |z: Complex64| z.im == 0.0 && z.re >= 0.0;
    let fractional_error =
        (real_nonneg(beta) && real_nonneg(delta)).then(|| (-4.0 * beta.re * delta.re).exp());
    WhichWay {
        p_plus,
        p_minus,
        fractional_error,
        detect_prob: (-delta.norm_sqr()).exp(),
    }
}

/// One point of the certainty/probability tradeoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TradeoffPoint {
    pub fractional_error: f64,
    pub delta: f64,
    pub detect_prob: f64,
}

/// For each target error `e`, the probe `delta = -ln(e) / (4 beta)` and its
/// detection probability `exp(-(ln e)^2 / (16 beta^2))`.
///
/// Points come back ordered by decreasing error, i.e. increasing certainty.
pub fn tradeoff_curve(beta: f64, errors: &[f64]) -> Vec<TradeoffPoint> {
    let mut errors: Vec<f64> = errors
        .iter()
        .copied()
        .filter(|e| *e > 0.0 && *e < 1.0)
        .collect();
    errors.sort_by(|a, b| b.total_cmp(a));
    errors
        .into_iter()
        .map(|e| {
            let delta = -e.ln() / (4.0 * beta);
            TradeoffPoint {
                fractional_error: e,
                delta,
                detect_prob: (-(e.ln().powi(2)) / (16.0 * beta * beta)).exp(),
            }
        })
        .collect()
}

/// Long-pulse intensity shares, labelled by outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightTable {
    pub entries: Vec<(&'static str, f64)>,
}

impl WeightTable {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries.iter().find(|(l, _)| *l == label).map(|e| e.1)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

/// Golden-rule probabilities of each long-pulse outcome. `None` for
/// configurations without a long-pulse form.
pub fn longpulse_weights(config: Config, beta: impl Into<Complex64>) -> Option<WeightTable> {
    let b2 = beta.into().norm_sqr();
    let entries = match config {
        Config::A => vec![("elastic", 1.0)],
        Config::B => vec![
            ("elastic", 1.0 - b2),
            ("atom1", b2 / 2.0),
            ("atom2", b2 / 2.0),
        ],
        Config::C1 | Config::C2 => vec![("elastic", 1.0 - b2), ("shifted", b2)],
        Config::E => vec![
            ("elastic", 1.0 - b2),
            ("sym", b2 / 2.0),
            ("antisym", b2 / 2.0),
        ],
        Config::D => return None,
    };
    Some(WeightTable { entries })
}

/// Unconditioned visibility of a long pulse: each shifted outcome adds a
/// full-contrast pattern that is either in phase or pi-shifted.
pub fn longpulse_contrast(config: Config, beta: impl Into<Complex64>) -> Option<f64> {
    let b2 = beta.into().norm_sqr();
    match config {
        Config::A => Some(1.0),
        Config::B | Config::E => Some(1.0 - b2),
        Config::C1 | Config::C2 => Some(1.0 - 2.0 * b2),
        Config::D => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contrasts() {
        assert_eq!(contrast_b(0.0), 1.0);
        assert!((contrast_b(0.2) - 0.96).abs() < 1e-15);
        assert_eq!(contrast_c(0.0), 1.0);
        assert!((contrast_c(0.3) - 0.82).abs() < 1e-15);
        assert!((contrast_c(Complex64::new(0.0, 0.3)) - 0.82).abs() < 1e-15);
    }

    #[test]
    fn exact_contrasts() {
        assert!((contrast_exact(Config::B, 0.2).unwrap() - 0.960_789_439_152_323).abs() < 1e-15);
        assert!((contrast_exact(Config::C1, 0.3).unwrap() - 0.835_270_211_411_272).abs() < 1e-15);
        assert_eq!(contrast_exact(Config::D, 0.0), Some(1.0));
        assert_eq!(contrast_exact(Config::E, 0.1), None);
    }

    #[test]
    fn whichway_unit_inputs() {
        let w = whichway_probabilities(1.0, 1.0);
        assert_eq!(w.p_plus, 1.0);
        assert!((w.p_minus - 0.018_315_638_888_734).abs() < 1e-15);
        assert!((w.fractional_error.unwrap() - 0.018_315_638_888_734).abs() < 1e-15);
        assert!((w.detect_prob - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn zero_probe_cannot_discriminate() {
        let w = whichway_probabilities(0.4, 0.0);
        assert_eq!(w.p_plus, w.p_minus);
        assert!((w.p_plus - (-0.16f64).exp()).abs() < 1e-15);
        assert_eq!(w.fractional_error, Some(1.0));
    }

    #[test]
    fn complex_inputs_have_no_error_ratio() {
        let w = whichway_probabilities(Complex64::new(0.0, 0.3), 0.5);
        assert_eq!(w.fractional_error, None);
        assert!((w.p_plus - (-(0.25 + 0.09f64)).exp()).abs() < 1e-15);
    }

    #[test]
    fn weight_tables() {
        assert_eq!(
            longpulse_weights(Config::B, 0.0).unwrap().get("elastic"),
            Some(1.0)
        );
        let c = longpulse_weights(Config::C1, 0.5).unwrap();
        assert_eq!(c.entries, vec![("elastic", 0.75), ("shifted", 0.25)]);
        for cfg in [Config::B, Config::C2, Config::E] {
            for beta in [0.0, 0.1, 0.35, 0.7] {
                assert!((longpulse_weights(cfg, beta).unwrap().total() - 1.0).abs() < 1e-15);
            }
        }
        assert!(longpulse_weights(Config::D, 0.1).is_none());
    }

    #[test]
    fn tradeoff_is_ordered_and_monotone() {
        let curve = tradeoff_curve(0.5, &[1e-3, 0.1, 1e-2, 2.0, 0.0]);
        assert_eq!(curve.len(), 3);
        for pair in curve.windows(2) {
            assert!(pair[1].fractional_error < pair[0].fractional_error);
            assert!(pair[1].detect_prob < pair[0].detect_prob);
        }
        for p in &curve {
            let w = whichway_probabilities(0.5, p.delta);
            assert!((w.fractional_error.unwrap() - p.fractional_error).abs() < 1e-14);
            assert!((w.detect_prob - p.detect_prob).abs() < 1e-14);
        }
    }
}
