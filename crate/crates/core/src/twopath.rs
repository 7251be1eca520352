//! Two-path interference: path amplitudes, fringe patterns and visibility.
//!
//! A photon reaching the detector came through path 1 or path 2; each path
//! leaves the atoms in a (generally unnormalized) state `psi1` or `psi2`. The
//! detector phase `phi` enters only as the relative path phase, so a single
//! component produces `I(phi) = |psi1 + e^{i phi} psi2|^2`. Long-pulse states
//! are incoherent mixtures of such components.

use crate::error::{Error, Result};
use crate::fockspace::{FockSpace, FockVector, Projector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

/// Largest allowed gap between the harmonic-fit and closed-form visibility.
pub const SAMPLED_VISIBILITY_TOLERANCE: f64 = 1e-6;

/// Minimum number of detector phases in a scan.
pub const MIN_SAMPLES: usize = 16;

const EMPTY_INTENSITY: f64 = 1e-300;

/// Frequency of the scattered light relative to the drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FreqTag {
    Elastic,
    /// Shifted by the trap frequency.
    Shifted,
    /// Shifted by the symmetric normal-mode frequency.
    Sym,
    /// Shifted by the antisymmetric normal-mode frequency.
    Antisym,
}

impl FreqTag {
    pub const ALL: [FreqTag; 4] = [
        FreqTag::Elastic,
        FreqTag::Shifted,
        FreqTag::Sym,
        FreqTag::Antisym,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FreqTag::Elastic => "ELASTIC",
            FreqTag::Shifted => "SHIFTED",
            FreqTag::Sym => "SYM",
            FreqTag::Antisym => "ANTISYM",
        }
    }
}

impl fmt::Display for FreqTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FreqTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FreqTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownTag(s.to_string()))
    }
}

/// Atomic states attached to the two scattering paths.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPathComponent {
    psi1: FockVector,
    psi2: FockVector,
    freq_tag: FreqTag,
    weight: f64,
}

impl TwoPathComponent {
    pub fn new(psi1: FockVector, psi2: FockVector, freq_tag: FreqTag, weight: f64) -> Result<Self> {
        psi1.space().ensure_compatible(psi2.space())?;
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::InvalidWeight(weight));
        }
        Ok(Self {
            psi1,
            psi2,
            freq_tag,
            weight,
        })
    }

    pub fn psi1(&self) -> &FockVector {
        &self.psi1
    }

    pub fn psi2(&self) -> &FockVector {
        &self.psi2
    }

    pub fn freq_tag(&self) -> FreqTag {
        self.freq_tag
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn space(&self) -> &FockSpace {
        self.psi1.space()
    }

    /// `<psi1|psi2>`
    pub fn coherence(&self) -> Complex64 {
        self.psi1
            .inner(&self.psi2)
            .expect("component paths share a space")
    }

    /// Phase-averaged unweighted intensity `|psi1|^2 + |psi2|^2`.
    pub fn mean_intensity(&self) -> f64 {
        self.psi1.norm_sqr() + self.psi2.norm_sqr()
    }

    /// Unweighted `|psi1 + e^{i phi} psi2|^2`, evaluated from the amplitudes.
    pub fn intensity_at(&self, phi: f64) -> f64 {
        let phase = Complex64::from_polar(1.0, phi);
        self.psi1
            .amplitudes()
            .iter()
            .zip(self.psi2.amplitudes())
            .map(|(a, b)| (a + phase * b).norm_sqr())
            .sum()
    }

    /// Applies `f` to both path states, keeping tag and weight.
    pub fn map_paths(&self, mut f: impl FnMut(&FockVector) -> Result<FockVector>) -> Result<Self> {
        Self::new(f(&self.psi1)?, f(&self.psi2)?, self.freq_tag, self.weight)
    }

    /// Multiplies path 2 by `e^{i theta}`.
    pub fn with_path2_phase(&self, theta: f64) -> Self {
        Self {
            psi2: self.psi2.scale(Complex64::from_polar(1.0, theta)),
            ..self.clone()
        }
    }
}

/// Incoherent, weighted set of two-path components.
///
/// Components never interfere with one another, even when they share a
/// frequency tag; all coherence lives inside a single component.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPathMixture {
    components: Vec<TwoPathComponent>,
}

impl TwoPathMixture {
    pub fn new(components: Vec<TwoPathComponent>) -> Result<Self> {
        let first = components.first().ok_or(Error::EmptyMixture)?;
        for c in &components[1..] {
            first.space().ensure_compatible(c.space())?;
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if total <= 0.0 {
            return Err(Error::ZeroWeight);
        }
        Ok(Self { components })
    }

    pub fn single(component: TwoPathComponent) -> Result<Self> {
        Self::new(vec![component])
    }

    pub fn components(&self) -> &[TwoPathComponent] {
        &self.components
    }

    pub fn space(&self) -> &FockSpace {
        self.components[0].space()
    }

    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    /// Weighted phase-averaged intensity.
    pub fn mean_intensity(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * c.mean_intensity())
            .sum()
    }

    /// Weighted `I(phi)` summed component by component.
    pub fn intensity_at(&self, phi: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * c.intensity_at(phi))
            .sum()
    }

    /// Fraction of the mean intensity carried by each component.
    pub fn intensity_shares(&self) -> Vec<(FreqTag, f64)> {
        let total = self.mean_intensity();
        self.components
            .iter()
            .map(|c| (c.freq_tag, c.weight * c.mean_intensity() / total))
            .collect()
    }

    /// Drops zero-weight components, keeping at least one.
    pub fn pruned(mut self) -> Self {
        if self.components.iter().any(|c| c.weight > 0.0) {
            self.components.retain(|c| c.weight > 0.0);
        }
        self
    }

    pub fn map_components(
        &self,
        f: impl FnMut(&TwoPathComponent) -> Result<TwoPathComponent>,
    ) -> Result<Self> {
        Self::new(self.components.iter().map(f).collect::<Result<_>>()?)
    }

    /// Largest elementwise amplitude or weight difference against `other`.
    pub fn max_abs_diff(&self, other: &TwoPathMixture) -> Result<f64> {
        if self.components.len() != other.components.len() {
            return Ok(f64::INFINITY);
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.components.iter().zip(&other.components) {
            if a.freq_tag != b.freq_tag {
                return Ok(f64::INFINITY);
            }
            worst = worst
                .max((a.weight - b.weight).abs())
                .max(a.psi1.max_abs_diff(&b.psi1)?)
                .max(a.psi2.max_abs_diff(&b.psi2)?);
        }
        Ok(worst)
    }
}

/// `sum_k w_k <psi1_k|psi2_k>`
pub fn coherence_sum(m: &TwoPathMixture) -> Complex64 {
    m.components.iter().map(|c| c.coherence() * c.weight).sum()
}

/// Closed-form fringe contrast and offset of a mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Visibility {
    pub visibility: f64,
    /// Detector phase of the fringe maximum, in `(-pi, pi]`.
    pub phase_offset: f64,
}

/// `V = 2|C| / sum w (|psi1|^2 + |psi2|^2)` with `C` the coherence sum.
///
/// `I(phi) = A (1 + V cos(phi - phase_offset))`, so the offset is `-arg C`.
pub fn visibility(m: &TwoPathMixture) -> Result<Visibility> {
    let mean = m.mean_intensity();
    if mean <= EMPTY_INTENSITY {
        return Err(Error::EmptyEnsemble);
    }
    let coherence = coherence_sum(m);
    let visibility = (2.0 * coherence.norm() / mean).clamp(0.0, 1.0);
    let phase_offset = if coherence.norm() <= 1e-15 * mean {
        0.0
    } else {
        wrap_phase(-coherence.arg())
    };
    Ok(Visibility {
        visibility,
        phase_offset,
    })
}

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    // rem_euclid can leave -0.0 or land exactly on -pi
    if t <= -PI {
        t += TAU;
    }
    if t == 0.0 {
        0.0
    } else {
        t
    }
}

/// Sampled interference pattern with its extracted contrast.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternScan {
    pub phis: Vec<f64>,
    pub intensities: Vec<f64>,
    /// Closed-form visibility.
    pub visibility: f64,
    pub phase_offset: f64,
    /// `(Imax - Imin) / (Imax + Imin)` of the first-harmonic fit to the samples.
    pub sampled_visibility: f64,
    /// Coincidence projection applied before scanning, `none` if unconditioned.
    pub condition: String,
}

impl PatternScan {
    /// Visibility from the sampled extremes alone. Approaches the closed form
    /// as the grid is refined.
    pub fn extreme_visibility(&self) -> f64 {
        let max = self.intensities.iter().cloned().fold(f64::MIN, f64::max);
        let min = self.intensities.iter().cloned().fold(f64::MAX, f64::min);
        (max - min) / (max + min)
    }
}

/// Samples `I(phi)` on `nsamples` uniform phases in `[0, 2 pi)`.
pub fn pattern(m: &TwoPathMixture, nsamples: usize) -> Result<PatternScan> {
    if nsamples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {nsamples}"
        )));
    }
    let closed = visibility(m)?;
    let phis: Vec<f64> = (0..nsamples)
        .map(|k| TAU * k as f64 / nsamples as f64)
        .collect();
    let intensities: Vec<f64> = phis.iter().map(|&phi| m.intensity_at(phi)).collect();
    let sampled_visibility = harmonic_visibility(&phis, &intensities);
    if (sampled_visibility - closed.visibility).abs() > SAMPLED_VISIBILITY_TOLERANCE {
        return Err(Error::Inconsistent {
            sampled: sampled_visibility,
            closed: closed.visibility,
        });
    }
    Ok(PatternScan {
        phis,
        intensities,
        visibility: closed.visibility,
        phase_offset: closed.phase_offset,
        sampled_visibility,
        condition: "none".to_string(),
    })
}

/// Contrast of the best-fit `a + b cos(phi - phi0)` to uniform samples.
///
/// A two-path pattern has no higher harmonics, so the fit is exact for any
/// grid of three or more points.
fn harmonic_visibility(phis: &[f64], intensities: &[f64]) -> f64 {
    let n = intensities.len() as f64;
    let mean = intensities.iter().sum::<f64>() / n;
    let first: Complex64 = phis
        .iter()
        .zip(intensities)
        .map(|(&phi, &i)| Complex64::from_polar(i, -phi))
        .sum::<Complex64>()
        / n;
    let amplitude = 2.0 * first.norm();
    let (max, min) = (mean + amplitude, mean - amplitude);
    (max - min) / (max + min)
}

/// A mixture restricted to a coincidence outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditioned {
    pub mixture: TwoPathMixture,
    /// Fraction of the detected light that coincides with the outcome.
    pub post_selection_probability: f64,
}

/// Projects every path state; weights are kept so the lost norm is the
/// post-selection cost.
pub fn condition(m: &TwoPathMixture, projector: &Projector) -> Result<Conditioned> {
    projector.space().ensure_compatible(m.space())?;
    let before = m.mean_intensity();
    let mixture = m.map_components(|c| c.map_paths(|psi| projector.apply(psi)))?;
    let after = mixture.mean_intensity();
    let post_selection_probability = if before > 0.0 { after / before } else { 0.0 };
    Ok(Conditioned {
        mixture,
        post_selection_probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::coherent_state;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single_space() -> FockSpace {
        FockSpace::single(16).unwrap()
    }

    fn ground() -> FockVector {
        FockVector::basis(&single_space(), &[0]).unwrap()
    }

    fn mix(psi1: FockVector, psi2: FockVector) -> TwoPathMixture {
        TwoPathMixture::single(TwoPathComponent::new(psi1, psi2, FreqTag::Elastic, 1.0).unwrap())
            .unwrap()
    }

    #[test]
    fn rigid_slits_give_full_contrast() {
        let scan = pattern(&mix(ground(), ground()), 64).unwrap();
        assert!((scan.visibility - 1.0).abs() < 1e-12);
        assert_eq!(scan.phase_offset, 0.0);
        assert!(scan.intensities.iter().all(|&i| i >= 0.0));
    }

    #[test]
    fn single_path_is_flat() {
        let m = mix(ground(), FockVector::zeros(&single_space()));
        let scan = pattern(&m, 32).unwrap();
        assert_eq!(scan.visibility, 0.0);
        assert!(scan.intensities.iter().all(|&i| (i - 1.0).abs() < 1e-14));
    }

    #[test]
    fn opposite_coherent_states() {
        // |<0.3|-0.3>| = exp(-0.18)
        let psi1 = coherent_state(c(0.3, 0.0), 16).unwrap().vector;
        let psi2 = coherent_state(c(-0.3, 0.0), 16).unwrap().vector;
        let scan = pattern(&mix(psi1, psi2), 64).unwrap();
        assert!((scan.visibility - 0.835_270_211_411_272).abs() < 1e-12);
        assert!((scan.visibility - 0.82).abs() < 0.02);
    }

    #[test]
    fn both_paths_null_is_empty_ensemble() {
        let z = FockVector::zeros(&single_space());
        assert_eq!(
            pattern(&mix(z.clone(), z), 32).unwrap_err(),
            Error::EmptyEnsemble
        );
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            pattern(&mix(ground(), ground()), 8),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn empty_mixture_rejected() {
        assert_eq!(
            TwoPathMixture::new(vec![]).unwrap_err(),
            Error::EmptyMixture
        );
    }

    #[test]
    fn negative_weight_rejected() {
        assert!(matches!(
            TwoPathComponent::new(ground(), ground(), FreqTag::Elastic, -0.1),
            Err(Error::InvalidWeight(_))
        ));
    }

    #[test]
    fn phase_offset_tracks_path_phase() {
        let m = mix(ground(), ground().scale(Complex64::from_polar(1.0, 0.7)));
        let v = visibility(&m).unwrap();
        assert!((v.phase_offset + 0.7).abs() < 1e-12);
        // fringe maximum sits at the reported offset
        let at_peak = m.intensity_at(v.phase_offset);
        assert!((at_peak - 4.0).abs() < 1e-12);
    }

    #[test]
    fn pi_shift_wraps_to_positive_pi() {
        let m = mix(ground(), ground().scale(c(-1.0, 0.0)));
        let v = visibility(&m).unwrap();
        assert_eq!(v.phase_offset, PI);
    }

    #[test]
    fn identity_condition_is_noop() {
        let m = mix(ground(), ground());
        let out = condition(&m, &Projector::identity(m.space())).unwrap();
        assert_eq!(out.mixture, m);
        assert_eq!(out.post_selection_probability, 1.0);
    }

    #[test]
    fn extreme_visibility_converges() {
        let m = mix(ground(), ground().scale(Complex64::from_polar(0.5, 0.3)));
        let coarse = pattern(&m, 16).unwrap();
        let fine = pattern(&m, 4096).unwrap();
        let err_coarse = (coarse.extreme_visibility() - coarse.visibility).abs();
        let err_fine = (fine.extreme_visibility() - fine.visibility).abs();
        assert!(err_fine < err_coarse);
        assert!(err_fine < 1e-6);
    }

    #[test]
    fn tag_names_round_trip() {
        for t in FreqTag::ALL {
            assert_eq!(t.as_str().parse::<FreqTag>().unwrap(), t);
        }
        assert!("BLUE".parse::<FreqTag>().is_err());
    }
}
