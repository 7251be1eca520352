//! Truncated harmonic-oscillator state spaces.
//!
//! A [`FockSpace`] is a product of one to three truncated oscillator modes.
//! Joint basis states are indexed row-major with the first-listed mode
//! varying slowest, so for dims `[d0, d1]` the level pair `(n0, n1)` sits at
//! index `n0 * d1 + n1`. Serialized amplitude vectors use the same order.

mod matrix;

pub use matrix::{annihilation, creation, CMatrix};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::SQRT_2;

/// Default per-mode truncation.
pub const DEFAULT_NMAX: usize = 16;

const MAX_MODES: usize = 3;

/// Largest `|beta|^2` accepted for a mode truncated at `nmax` levels.
pub fn truncation_limit(nmax: usize) -> f64 {
    nmax as f64 / 4.0
}

/// Fails when a displacement `beta` is too large for `nmax` levels.
pub fn check_truncation(beta: Complex64, nmax: usize) -> Result<()> {
    if nmax < 2 {
        return Err(Error::InvalidDimension(nmax));
    }
    let beta_sq = beta.norm_sqr();
    let limit = truncation_limit(nmax);
    if !beta_sq.is_finite() || beta_sq > limit {
        return Err(Error::Truncation {
            beta_sq,
            limit,
            nmax,
        });
    }
    Ok(())
}

/// Product of truncated oscillator modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockSpace {
    mode_dims: Vec<usize>,
    labels: Vec<String>,
}

impl FockSpace {
    pub fn new<S: Into<String>>(
        mode_dims: Vec<usize>,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if mode_dims.is_empty() || mode_dims.len() > MAX_MODES {
            return Err(Error::ModeCount(mode_dims.len()));
        }
        if labels.len() != mode_dims.len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} modes",
                labels.len(),
                mode_dims.len()
            )));
        }
        if let Some(&d) = mode_dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self { mode_dims, labels })
    }

    /// Single mode labelled `mode`.
    pub fn single(nmax: usize) -> Result<Self> {
        Self::new(vec![nmax], ["mode"])
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.mode_dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn modes(&self) -> usize {
        self.mode_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.mode_dims.iter().product()
    }

    /// Same mode dimensions; labels are descriptive only.
    pub fn compatible(&self, other: &FockSpace) -> bool {
        self.mode_dims == other.mode_dims
    }

    pub fn ensure_compatible(&self, other: &FockSpace) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.mode_dims.clone(),
                found: other.mode_dims.clone(),
            })
        }
    }

    pub fn mode_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Joint index of a level tuple.
    pub fn index(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.mode_dims.clone(),
                found: levels.to_vec(),
            });
        }
        let mut idx = 0;
        for (mode, (&level, &dim)) in levels.iter().zip(&self.mode_dims).enumerate() {
            if level >= dim {
                return Err(Error::LevelOutOfRange { mode, level, dim });
            }
            idx = idx * dim + level;
        }
        Ok(idx)
    }

    /// Level tuple of a joint index.
    pub fn levels(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.modes()];
        for (slot, &dim) in out.iter_mut().zip(&self.mode_dims).rev() {
            *slot = index % dim;
            index /= dim;
        }
        out
    }

    /// Stride of `mode` in the joint index.
    fn stride(&self, mode: usize) -> usize {
        self.mode_dims[mode + 1..].iter().product()
    }
}

/// Complex amplitudes over a [`FockSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    space: FockSpace,
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn zeros(space: &FockSpace) -> Self {
        Self {
            amplitudes: vec![Complex64::new(0.0, 0.0); space.dim()],
            space: space.clone(),
        }
    }

    /// Basis state with the given level in each mode.
    pub fn basis(space: &FockSpace, levels: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(space);
        let idx = space.index(levels)?;
        v.amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_amplitudes(space: &FockSpace, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: vec![space.dim()],
                found: vec![amplitudes.len()],
            });
        }
        Ok(Self {
            space: space.clone(),
            amplitudes,
        })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, levels: &[usize]) -> Result<Complex64> {
        Ok(self.amplitudes[self.space.index(levels)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < 1e-10
    }

    /// Unit-norm copy. A null vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(Complex64::new(1.0 / n, 0.0))
        }
    }

    /// Same amplitudes, relabelled modes.
    pub fn relabel<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        self.space = FockSpace::new(self.space.mode_dims.clone(), labels)?;
        Ok(self)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            space: self.space.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &FockVector) -> Result<Self> {
        self.space.ensure_compatible(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: Complex64, other: &FockVector) -> Result<Self> {
        self.space.ensure_compatible(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        inner(self, other)
    }

    pub fn max_abs_diff(&self, other: &FockVector) -> Result<f64> {
        self.space.ensure_compatible(&other.space)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Applies a single-mode operator to `mode`, identity on the others.
    pub fn apply_mode_operator(&self, mode: usize, op: &CMatrix) -> Result<Self> {
        let modes = self.space.modes();
        if mode >= modes {
            return Err(Error::ModeOutOfRange { mode, modes });
        }
        let dim = self.space.mode_dims[mode];
        if op.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: vec![dim],
                found: vec![op.dim()],
            });
        }
        let stride = self.space.stride(mode);
        let block = stride * dim;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        let mut fiber = vec![Complex64::new(0.0, 0.0); dim];
        for outer in (0..self.amplitudes.len()).step_by(block) {
            for inner_off in 0..stride {
                for (n, slot) in fiber.iter_mut().enumerate() {
                    *slot = self.amplitudes[outer + n * stride + inner_off];
                }
                let mapped = op.mul_vec(&fiber);
                for (n, value) in mapped.into_iter().enumerate() {
                    out[outer + n * stride + inner_off] = value;
                }
            }
        }
        Ok(Self {
            space: self.space.clone(),
            amplitudes: out,
        })
    }

    /// Applies a matrix over the whole joint space.
    pub fn apply(&self, op: &CMatrix) -> Result<Self> {
        if op.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: vec![self.space.dim()],
                found: vec![op.dim()],
            });
        }
        Ok(Self {
            space: self.space.clone(),
            amplitudes: op.mul_vec(&self.amplitudes),
        })
    }

    /// Applies a 2x2 unitary on the span of two basis states, identity elsewhere.
    pub fn rotate_pair(&self, first: usize, second: usize, u: [[Complex64; 2]; 2]) -> Self {
        let mut out = self.clone();
        let a = self.amplitudes[first];
        let b = self.amplitudes[second];
        out.amplitudes[first] = u[0][0] * a + u[0][1] * b;
        out.amplitudes[second] = u[1][0] * a + u[1][1] * b;
        out
    }

    /// Component with `mode` fixed to `level`, unnormalized.
    pub fn project(&self, mode: usize, level: usize) -> Result<Projection> {
        project(self, mode, level)
    }
}

/// Sesquilinear inner product `<u|v>`.
pub fn inner(u: &FockVector, v: &FockVector) -> Result<Complex64> {
    u.space.ensure_compatible(&v.space)?;
    Ok(u.amplitudes
        .iter()
        .zip(&v.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Kronecker product; the first vector's modes vary slowest.
pub fn tensor(vs: &[&FockVector]) -> Result<FockVector> {
    let (first, rest) = vs
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("tensor of no vectors".into()))?;
    let mut dims = first.space.mode_dims.clone();
    let mut labels = first.space.labels.clone();
    let mut amps = first.amplitudes.clone();
    for v in rest {
        dims.extend_from_slice(&v.space.mode_dims);
        labels.extend(v.space.labels.iter().cloned());
        amps = amps
            .iter()
            .flat_map(|a| v.amplitudes.iter().map(move |b| a * b))
            .collect();
    }
    let space = FockSpace::new(dims, labels)?;
    FockVector::from_amplitudes(&space, amps)
}

/// Result of fixing one mode to a level.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub vector: FockVector,
    pub probability: f64,
}

pub fn project(v: &FockVector, mode: usize, level: usize) -> Result<Projection> {
    let modes = v.space.modes();
    if mode >= modes {
        return Err(Error::ModeOutOfRange { mode, modes });
    }
    let dim = v.space.mode_dims[mode];
    if level >= dim {
        return Err(Error::LevelOutOfRange { mode, level, dim });
    }
    let mut out = FockVector::zeros(&v.space);
    for (idx, (dst, src)) in out.amplitudes.iter_mut().zip(&v.amplitudes).enumerate() {
        if v.space.levels(idx)[mode] == level {
            *dst = *src;
        }
    }
    let probability = out.norm_sqr();
    Ok(Projection {
        vector: out,
        probability,
    })
}

/// Orthogonal projector on an atomic space.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    space: FockSpace,
    kind: ProjectorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum ProjectorKind {
    /// Keeps the basis states whose mask entry is set.
    Diagonal(Vec<bool>),
    /// Sum of `|v><v|` over orthonormal vectors.
    Span(Vec<FockVector>),
}

impl Projector {
    pub fn identity(space: &FockSpace) -> Self {
        Self {
            space: space.clone(),
            kind: ProjectorKind::Diagonal(vec![true; space.dim()]),
        }
    }

    /// Diagonal projector onto basis states selected by their level tuples.
    pub fn from_levels(space: &FockSpace, keep: impl Fn(&[usize]) -> bool) -> Self {
        let mask = (0..space.dim()).map(|i| keep(&space.levels(i))).collect();
        Self {
            space: space.clone(),
            kind: ProjectorKind::Diagonal(mask),
        }
    }

    /// Projector onto the span of orthonormal `vectors`.
    pub fn onto(space: &FockSpace, vectors: Vec<FockVector>) -> Result<Self> {
        for (i, v) in vectors.iter().enumerate() {
            space.ensure_compatible(v.space())?;
            for w in &vectors[..i] {
                if w.inner(v)?.norm() > 1e-10 {
                    return Err(Error::InvalidArgument(
                        "projector vectors must be orthogonal".into(),
                    ));
                }
            }
            if !v.is_normalized() {
                return Err(Error::InvalidArgument(
                    "projector vectors must be normalized".into(),
                ));
            }
        }
        Ok(Self {
            space: space.clone(),
            kind: ProjectorKind::Span(vectors),
        })
    }

    /// Levels `>= 1` in `mode`, anything in the others.
    pub fn mode_excited(space: &FockSpace, mode: usize) -> Result<Self> {
        if mode >= space.modes() {
            return Err(Error::ModeOutOfRange {
                mode,
                modes: space.modes(),
            });
        }
        Ok(Self::from_levels(space, |l| l[mode] >= 1))
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.space.ensure_compatible(v.space())?;
        match &self.kind {
            ProjectorKind::Diagonal(mask) => {
                let amps = v
                    .amplitudes
                    .iter()
                    .zip(mask)
                    .map(|(a, &keep)| if keep { *a } else { Complex64::new(0.0, 0.0) })
                    .collect();
                FockVector::from_amplitudes(v.space(), amps)
            }
            ProjectorKind::Span(basis) => {
                let mut out = FockVector::zeros(v.space());
                for b in basis {
                    out = out.add_scaled(b.inner(v)?, b)?;
                }
                Ok(out)
            }
        }
    }
}

/// Photon recoil and oscillator length, fixing the displacement `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoilParams {
    q: f64,
    x0: f64,
    beta: Complex64,
}

impl RecoilParams {
    /// `q` is the recoil wavevector, `x0 = sqrt(hbar / (m * omega_trap))`.
    pub fn new(q: f64, x0: f64) -> Result<Self> {
        if !(x0 > 0.0 && x0.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "oscillator length must be positive, got {x0}"
            )));
        }
        if !q.is_finite() {
            return Err(Error::InvalidArgument(format!("recoil wavevector {q}")));
        }
        Ok(Self {
            q,
            x0,
            beta: Complex64::new(0.0, q * x0 / SQRT_2),
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// `i q x0 / sqrt(2)`
    pub fn beta(&self) -> Complex64 {
        self.beta
    }
}

/// A truncated coherent state and the norm lost to truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    pub vector: FockVector,
    /// `1 - sum |c_n|^2` before renormalization.
    pub truncation_residual: f64,
}

/// Coherent state `|beta>` from its Fock series, renormalized to unit norm.
pub fn coherent_state(beta: Complex64, nmax: usize) -> Result<CoherentState> {
    check_truncation(beta, nmax)?;
    let mut amps = Vec::with_capacity(nmax);
    let mut c = Complex64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(c);
    for n in 1..nmax {
        c = c * beta / (n as f64).sqrt();
        amps.push(c);
    }
    let kept: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let space = FockSpace::single(nmax)?;
    let vector = FockVector::from_amplitudes(&space, amps)?.normalized();
    Ok(CoherentState {
        vector,
        truncation_residual: 1.0 - kept,
    })
}

/// `exp(beta a† - beta* a)` on `nmax` levels.
pub fn displacement_operator(beta: Complex64, nmax: usize) -> Result<CMatrix> {
    check_truncation(beta, nmax)?;
    let a = annihilation(nmax);
    let ad = creation(nmax);
    let generator = &ad.scale(beta) - &a.scale(beta.conj());
    Ok(generator.expm())
}

/// `1 + beta (a† + a)`, the linearized recoil operator. Not unitary.
pub fn first_order_displacement(beta: Complex64, nmax: usize) -> Result<CMatrix> {
    if nmax < 2 {
        return Err(Error::InvalidDimension(nmax));
    }
    let quadrature = &creation(nmax) + &annihilation(nmax);
    Ok(&CMatrix::identity(nmax) + &quadrature.scale(beta))
}
