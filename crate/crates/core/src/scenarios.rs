//! Slit configurations and pulse regimes as two-path mixtures.
//!
//! | config | slits                               | atomic space            |
//! |--------|-------------------------------------|-------------------------|
//! | A      | rigid                               | two oscillators, ground |
//! | B      | two independent atoms               | `atom1 x atom2`         |
//! | C1, C2 | one mobile slit / rigid moving pair | `atom`                  |
//! | D      | C with longitudinal motion          | `z x y`                 |
//! | E      | two atoms on a weak spring          | `atom1 x atom2`         |
//!
//! The first-order treatment keeps a single recoil quantum per path and
//! conserves probability: the unexcited amplitude is `sqrt(1 - |beta|^2)`,
//! so the marker populations are exactly `1 - |beta|^2` and `|beta|^2`.
//! Every component is weighted by the scattering probability `epsilon^2`.

use crate::error::{Error, Result};
use crate::fockspace::{
    check_truncation, coherent_state, first_order_displacement, tensor, FockSpace, FockVector,
    DEFAULT_NMAX,
};
use crate::transforms::evolve_beat;
use crate::twopath::{FreqTag, TwoPathComponent, TwoPathMixture};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_EPSILON: f64 = 0.01;

pub const TWO_SLIT_LABELS: [&str; 2] = ["atom1", "atom2"];
pub const SINGLE_SLIT_LABEL: &str = "atom";
pub const LONGITUDINAL_LABELS: [&str; 2] = ["z", "y"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Config {
    A,
    B,
    C1,
    C2,
    D,
    E,
}

impl Config {
    pub const ALL: [Config; 6] = [
        Config::A,
        Config::B,
        Config::C1,
        Config::C2,
        Config::D,
        Config::E,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Config::A => "A",
            Config::B => "B",
            Config::C1 => "C1",
            Config::C2 => "C2",
            Config::D => "D",
            Config::E => "E",
        }
    }

    /// Configurations whose atomic space is two separate oscillators.
    pub fn has_two_slit_space(self) -> bool {
        matches!(self, Config::A | Config::B | Config::E)
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Config {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Config::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidSpec {
                field: "config",
                reason: format!("unknown configuration '{s}'"),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pulse {
    /// Shorter than the trap period: the recoil phase is recorded.
    Short,
    /// Much longer than the trap period: golden-rule mixture.
    Long,
}

impl Pulse {
    pub fn as_str(self) -> &'static str {
        match self {
            Pulse::Short => "short",
            Pulse::Long => "long",
        }
    }
}

impl FromStr for Pulse {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "short" => Ok(Pulse::Short),
            "long" => Ok(Pulse::Long),
            _ => Err(Error::InvalidSpec {
                field: "pulse",
                reason: format!("expected short or long, got '{s}'"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Treatment {
    /// Full coherent-state recoil.
    Exact,
    /// Single recoil quantum.
    FirstOrder,
}

impl Treatment {
    pub fn as_str(self) -> &'static str {
        match self {
            Treatment::Exact => "exact",
            Treatment::FirstOrder => "first",
        }
    }
}

impl FromStr for Treatment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Treatment::Exact),
            "first" | "first_order" => Ok(Treatment::FirstOrder),
            _ => Err(Error::InvalidSpec {
                field: "treatment",
                reason: format!("expected exact or first, got '{s}'"),
            }),
        }
    }
}

/// Declarative description of one experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub config: Config,
    pub pulse: Pulse,
    /// Transverse recoil displacement.
    pub beta: Complex64,
    /// Longitudinal recoil displacement (config D).
    pub alpha: Complex64,
    /// Scattering amplitude; enters only as the overall weight `epsilon^2`.
    pub epsilon: f64,
    /// Spring coupling between the slits (config E).
    pub coupling_g: f64,
    /// Free evolution after a short pulse (config E).
    pub evolve_time: f64,
    pub treatment: Treatment,
    pub nmax: usize,
}

impl ScenarioSpec {
    pub fn new(config: Config) -> Self {
        Self {
            config,
            pulse: Pulse::Short,
            beta: Complex64::new(0.0, 0.0),
            alpha: Complex64::new(0.0, 0.0),
            epsilon: DEFAULT_EPSILON,
            coupling_g: 0.0,
            evolve_time: 0.0,
            treatment: if config == Config::E {
                Treatment::FirstOrder
            } else {
                Treatment::Exact
            },
            nmax: DEFAULT_NMAX,
        }
    }

    pub fn pulse(mut self, pulse: Pulse) -> Self {
        self.pulse = pulse;
        self
    }

    pub fn beta(mut self, beta: impl Into<Complex64>) -> Self {
        self.beta = beta.into();
        self
    }

    pub fn alpha(mut self, alpha: impl Into<Complex64>) -> Self {
        self.alpha = alpha.into();
        self
    }

    pub fn epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn coupling(mut self, g: f64) -> Self {
        self.coupling_g = g;
        self
    }

    pub fn evolve_time(mut self, t: f64) -> Self {
        self.evolve_time = t;
        self
    }

    pub fn treatment(mut self, treatment: Treatment) -> Self {
        self.treatment = treatment;
        self
    }

    pub fn nmax(mut self, nmax: usize) -> Self {
        self.nmax = nmax;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.1) {
            return Err(Error::InvalidSpec {
                field: "epsilon",
                reason: format!("must lie in (0, 0.1], got {}", self.epsilon),
            });
        }
        if !(self.beta.re.is_finite() && self.beta.im.is_finite()) {
            return Err(Error::InvalidSpec {
                field: "beta",
                reason: "not finite".into(),
            });
        }
        if !(self.alpha.re.is_finite() && self.alpha.im.is_finite()) {
            return Err(Error::InvalidSpec {
                field: "alpha",
                reason: "not finite".into(),
            });
        }
        if !(self.coupling_g >= 0.0 && self.coupling_g.is_finite()) {
            return Err(Error::InvalidSpec {
                field: "coupling_g",
                reason: format!("must be >= 0, got {}", self.coupling_g),
            });
        }
        if !(self.evolve_time >= 0.0 && self.evolve_time.is_finite()) {
            return Err(Error::InvalidSpec {
                field: "evolve_time",
                reason: format!("must be >= 0, got {}", self.evolve_time),
            });
        }
        if self.nmax < 2 {
            return Err(Error::InvalidSpec {
                field: "nmax",
                reason: format!("must be >= 2, got {}", self.nmax),
            });
        }
        Ok(())
    }

    /// Flat `key=value` lines in a fixed order.
    pub fn to_kv(&self) -> String {
        self.kv_pairs()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    pub fn kv_pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("config", self.config.to_string()),
            ("pulse", self.pulse.as_str().to_string()),
            ("treatment", self.treatment.as_str().to_string()),
            ("beta", format_complex(self.beta)),
            ("alpha", format_complex(self.alpha)),
            ("epsilon", self.epsilon.to_string()),
            ("coupling_g", self.coupling_g.to_string()),
            ("evolve_time", self.evolve_time.to_string()),
            ("nmax", self.nmax.to_string()),
        ]
    }

    /// Parses `key=value` lines; blank lines and `#` comments are skipped.
    /// `config` is required, every other key defaults as in [`ScenarioSpec::new`].
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::InvalidSpec {
                field: "kv",
                reason: format!("expected key=value, got '{line}'"),
            })?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let config = pairs
            .iter()
            .find(|(k, _)| k == "config")
            .ok_or(Error::InvalidSpec {
                field: "config",
                reason: "missing".into(),
            })?
            .1
            .parse::<Config>()?;
        let mut spec = ScenarioSpec::new(config);
        for (k, v) in &pairs {
            spec.set_field(k, v)?;
        }
        Ok(spec)
    }

    /// Sets one field from its `key=value` spelling.
    pub fn set_field(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(field: &'static str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::InvalidSpec {
                field,
                reason: format!("cannot parse '{v}'"),
            })
        }
        match key {
            "config" => self.config = value.parse()?,
            "pulse" => self.pulse = value.parse()?,
            "treatment" => self.treatment = value.parse()?,
            "beta" => {
                self.beta = parse_complex(value).map_err(|reason| Error::InvalidSpec {
                    field: "beta",
                    reason,
                })?
            }
            "alpha" => {
                self.alpha = parse_complex(value).map_err(|reason| Error::InvalidSpec {
                    field: "alpha",
                    reason,
                })?
            }
            "epsilon" => self.epsilon = num("epsilon", value)?,
            "coupling_g" => self.coupling_g = num("coupling_g", value)?,
            "evolve_time" => self.evolve_time = num("evolve_time", value)?,
            "nmax" => self.nmax = num("nmax", value)?,
            _ => {
                return Err(Error::InvalidSpec {
                    field: "kv",
                    reason: format!("unknown key '{key}'"),
                })
            }
        }
        Ok(())
    }
}

/// `re+imi`, both parts in shortest round-trip form.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi` (and `j` for `i`).
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number '{s}'");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |p: &str| -> std::result::Result<f64, String> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidSpec {
        field,
        reason: reason.into(),
    }
}

fn require(spec: &ScenarioSpec, configs: &[Config], pulse: Option<Pulse>) -> Result<()> {
    spec.validate()?;
    if !configs.contains(&spec.config) {
        return Err(invalid(
            "config",
            format!("builder does not handle config {}", spec.config),
        ));
    }
    if let Some(p) = pulse {
        if spec.pulse != p {
            return Err(invalid(
                "pulse",
                format!("builder needs a {} pulse", p.as_str()),
            ));
        }
    }
    Ok(())
}

pub fn two_slit_space(nmax: usize) -> Result<FockSpace> {
    FockSpace::new(vec![nmax, nmax], TWO_SLIT_LABELS)
}

pub fn single_slit_space(nmax: usize) -> Result<FockSpace> {
    FockSpace::new(vec![nmax], [SINGLE_SLIT_LABEL])
}

/// Truncation for the longitudinal mode: at least `nmax`, and large enough
/// that the truncation guard admits `alpha`.
pub fn longitudinal_dim(alpha: Complex64, nmax: usize) -> usize {
    nmax.max((4.0 * alpha.norm_sqr()).ceil() as usize)
}

/// `sqrt(1 - |beta|^2)|0> + beta|1>`: the linearized recoil applied to the
/// ground state with the unexcited amplitude fixed by probability conservation.
pub fn first_order_marker(beta: Complex64, nmax: usize) -> Result<FockVector> {
    let beta_sq = beta.norm_sqr();
    if beta_sq >= 1.0 {
        return Err(Error::PerturbativeRange(beta_sq));
    }
    let space = FockSpace::single(nmax)?;
    let ground = FockVector::basis(&space, &[0])?;
    let kicked = ground.apply(&first_order_displacement(beta, nmax)?)?;
    let mut amps = kicked.amplitudes().to_vec();
    amps[0] = Complex64::new((1.0 - beta_sq).sqrt(), 0.0);
    FockVector::from_amplitudes(&space, amps)
}

fn ground(nmax: usize) -> Result<FockVector> {
    FockVector::basis(&FockSpace::single(nmax)?, &[0])
}

fn weight(spec: &ScenarioSpec) -> f64 {
    spec.epsilon * spec.epsilon
}

fn single_component(
    spec: &ScenarioSpec,
    psi1: FockVector,
    psi2: FockVector,
) -> Result<TwoPathMixture> {
    TwoPathMixture::single(TwoPathComponent::new(
        psi1,
        psi2,
        FreqTag::Elastic,
        weight(spec),
    )?)
}

fn marker(spec: &ScenarioSpec, beta: Complex64) -> Result<FockVector> {
    match spec.treatment {
        Treatment::Exact => Ok(coherent_state(beta, spec.nmax)?.vector),
        Treatment::FirstOrder => first_order_marker(beta, spec.nmax),
    }
}

/// Dispatches on configuration and pulse.
pub fn build(spec: &ScenarioSpec) -> Result<TwoPathMixture> {
    match (spec.config, spec.pulse) {
        (Config::A, _) => build_a(spec),
        (Config::B, Pulse::Short) => build_b_short(spec),
        (Config::B, Pulse::Long) => build_b_long(spec),
        (Config::C1 | Config::C2, Pulse::Short) => build_c_short(spec),
        (Config::C1 | Config::C2, Pulse::Long) => build_c_long(spec),
        (Config::D, Pulse::Short) => build_d_short(spec),
        (Config::D, Pulse::Long) => Err(Error::Unsupported(
            "config D is only defined for short pulses".into(),
        )),
        (Config::E, Pulse::Short) => build_e_short(spec),
        (Config::E, Pulse::Long) => build_e_long(spec),
    }
}

/// Rigid slits: both paths leave the two oscillators in their ground state.
pub fn build_a(spec: &ScenarioSpec) -> Result<TwoPathMixture> {
    require(spec, &[Config::A], None)?;
    let g = ground(spec.nmax)?;
    let psi = tensor(&[&g, &g])?.relabel(TWO_SLIT_LABELS)?;
    single_component(spec, psi.clone(), psi)
}

/// Independent slits, short pulse: `|beta,0>` against `|0,beta>`.
pub fn build_b_short(spec: &ScenarioSpec) -> Result<TwoPathMixture> {
    require(spec, &[Config::B], Some(Pulse::Short))?;
    let kicked = marker(spec, spec.beta)?;
    let g = ground(spec.nmax)?;
    let psi1 = tensor(&[&kicked, &g])?.relabel(TWO_SLIT_LABELS)?;
    let psi2 = tensor(&[&g, &kicked])?.relabel(TWO_SLIT_LABELS)?;
    single_component(spec, psi1, psi2)
}

/// Independent slits, long pulse: elastic light plus one shifted component
/// per excited atom, with intensity shares `1 - |beta|^2`, `|beta|^2 / 2`,
/// `|beta|^2 / 2`.
pub fn build_b_long(spec: &ScenarioSpec) -> Result<TwoPathMixture> {
    require(spec, &[Config::B], Some(Pulse::Long))?;
    let beta_sq = long_pulse_beta_sq(spec)?;
    let space = two_slit_space(spec.nmax)?;
    let ground = FockVector::basis(&space, &[0, 0])?;
    let zero = FockVector::zeros(&space);
    let w = weight(spec);
    TwoPathMixture::new(vec![
        TwoPathComponent::new(
            ground.clone(),
            ground,
            FreqTag::Elastic,
            w * (1.0 - beta_sq),
        )?,
        TwoPathComponent::new(
            FockVector::basis(&space, &[1, 0])?,
            zero.clone(),
            FreqTag::Shifted,
            w * beta_sq,
        )?,
        TwoPathComponent::new(
            zero,
            FockVector::basis(&space, &[0, 1])?,
            FreqTag::Shifted,
            w * beta_sq,
        )?,
    ])
    .map(TwoPathMixture::pruned)
}

/// Single mobile scatterer, short pulse: opposite recoils `|beta>`, `|-beta>`.
pub fn build_c_short(spec: &ScenarioSpec) -> Result<TwoPathMixture> {
    require(spec, &[Config::C1, Config::C2], Some(Pulse::Short))?;
    let psi1 = marker(spec, spec.beta)?.relabel([SINGLE_SLIT_LABEL])?;
    let psi2 = marker(spec, -spec.beta)?.relabel([SINGLE_SLIT_LABEL])?;
    single_component(spec, psi1, psi2)
}

/// Single mobile scatterer, long pulse: an elastic symmetric pattern and a
/// trap-shifted pi-shifted pattern with shares `1 - |beta|^2` and `|beta|^2`.
pub fn build_c_long(spec: &ScenarioSpec) -> Result<TwoPathMixture> {
    require(spec, &[Config::C1, Config::C2], Some(Pulse::Long))?;
    let beta_sq = long_pulse_beta_sq(spec)?;
    let space = single_slit_space(spec.nmax)?;
    let ground = FockVector::basis(&space, &[0])?;
    let excited = FockVector::basis(&space, &[1])?;
    let w = weight(spec);
    TwoPathMixture::new(vec![
        TwoPathComponent::new(
            ground.clone(),
            ground,
            FreqTag::Elastic,
            w * (1.0 - beta_sq),
        )?,
        TwoPathComponent::new(
            excited.clone(),
            excited.scale(Complex64::new(-1.0, 0.0)),
            FreqTag::Shifted,
            w * beta_sq,
        )?,
    ])
    .map(TwoPathMixture::pruned)
}

/// Config C with a longitudinal recoil `alpha` shared by both paths.
pub fn build_d_short(spec: &ScenarioSpec) -> Result<TwoPathMixture> {
    require(spec, &[Config::D], Some(Pulse::Short))?;
    check_truncation(spec.beta, spec.nmax)?;
    let z = coherent_state(spec.alpha, longitudinal_dim(spec.alpha, spec.nmax))?.vector;
    let y1 = marker(spec, spec.beta)?;
    let y2 = marker(spec, -spec.beta)?;
    let psi1 = tensor(&[&z, &y1])?.relabel(LONGITUDINAL_LABELS)?;
    let psi2 = tensor(&[&z, &y2])?.relabel(LONGITUDINAL_LABELS)?;
    single_component(spec, psi1, psi2)
}

/// Coupled slits, short pulse: first-order independent-slit state followed by
/// free evolution under the spring coupling for `evolve_time`.
pub fn build_e_short(spec: &ScenarioSpec) -> Result<TwoPathMixture> {
    require(spec, &[Config::E], Some(Pulse::Short))?;
    if spec.treatment == Treatment::Exact {
        return Err(Error::Unsupported(
            "config E is modeled at first order only".into(),
        ));
    }
    let b = ScenarioSpec {
        config: Config::B,
        ..*spec
    };
    evolve_beat(&build_b_short(&b)?, spec.coupling_g, spec.evolve_time)
}

/// Coupled slits, long pulse: light tagged by the normal-mode frequency it
/// excited. The symmetric mode marks an in-phase pattern, the antisymmetric
/// mode a pi-shifted one.
pub fn build_e_long(spec: &ScenarioSpec) -> Result<TwoPathMixture> {
    require(spec, &[Config::E], Some(Pulse::Long))?;
    let beta_sq = long_pulse_beta_sq(spec)?;
    let space = two_slit_space(spec.nmax)?;
    let ground = FockVector::basis(&space, &[0, 0])?;
    let (sym, antisym) = normal_modes(&space)?;
    let w = weight(spec);
    TwoPathMixture::new(vec![
        TwoPathComponent::new(
            ground.clone(),
            ground,
            FreqTag::Elastic,
            w * (1.0 - beta_sq),
        )?,
        TwoPathComponent::new(sym.clone(), sym, FreqTag::Sym, w * beta_sq / 2.0)?,
        TwoPathComponent::new(
            antisym.clone(),
            antisym.scale(Complex64::new(-1.0, 0.0)),
            FreqTag::Antisym,
            w * beta_sq / 2.0,
        )?,
    ])
    .map(TwoPathMixture::pruned)
}

/// `(|1,0> + |0,1>)/sqrt 2` and `(|1,0> - |0,1>)/sqrt 2`.
pub fn normal_modes(space: &FockSpace) -> Result<(FockVector, FockVector)> {
    let e10 = FockVector::basis(space, &[1, 0])?;
    let e01 = FockVector::basis(space, &[0, 1])?;
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Ok((
        e10.add(&e01)?.scale(h),
        e10.add_scaled(Complex64::new(-1.0, 0.0), &e01)?.scale(h),
    ))
}

fn long_pulse_beta_sq(spec: &ScenarioSpec) -> Result<f64> {
    let beta_sq = spec.beta.norm_sqr();
    if beta_sq >= 1.0 {
        return Err(Error::PerturbativeRange(beta_sq));
    }
    Ok(beta_sq)
}
