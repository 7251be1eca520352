//! Operations applied after scattering: the quantum eraser, coupled-slit
//! beat evolution, the dispersive phase plate, and named coincidence bases.

use crate::error::{Error, Result};
use crate::fockspace::{FockSpace, FockVector, Projector};
use crate::scenarios::{normal_modes, SINGLE_SLIT_LABEL, TWO_SLIT_LABELS};
use crate::twopath::{FreqTag, TwoPathMixture};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

/// Marker mode of the longitudinal (z, y) space.
const TRANSVERSE_LABEL: &str = "y";

type Rotation = [[Complex64; 2]; 2];

fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Indices of `|1,0>` and `|0,1>` in a two-oscillator space.
fn single_excitation_pair(space: &FockSpace) -> Result<(usize, usize)> {
    if space.modes() != 2 {
        return Err(Error::WrongAtomicSpace(space.mode_dims().to_vec()));
    }
    Ok((space.index(&[1, 0])?, space.index(&[0, 1])?))
}

fn rotate_mixture(m: &TwoPathMixture, u: Rotation) -> Result<TwoPathMixture> {
    let (first, second) = single_excitation_pair(m.space())?;
    m.map_components(|c| c.map_paths(|psi| Ok(psi.rotate_pair(first, second, u))))
}

/// `|1,0> -> (|1,0> - |0,1>)/sqrt 2` and `|0,1> -> (|1,0> + |0,1>)/sqrt 2`,
/// written as the matrix acting on `(c10, c01)`.
const fn eraser_rotation() -> Rotation {
    let h = FRAC_1_SQRT_2;
    [
        [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        [Complex64::new(-h, 0.0), Complex64::new(h, 0.0)],
    ]
}

/// Rotates the single-excitation markers of two slits by pi/2. Every other
/// basis state, including multiply excited ones, is left alone.
pub fn apply_eraser(m: &TwoPathMixture) -> Result<TwoPathMixture> {
    rotate_mixture(m, eraser_rotation())
}

/// Undoes [`apply_eraser`].
pub fn apply_eraser_inverse(m: &TwoPathMixture) -> Result<TwoPathMixture> {
    let u = eraser_rotation();
    let inverse = [
        [u[0][0].conj(), u[1][0].conj()],
        [u[0][1].conj(), u[1][1].conj()],
    ];
    rotate_mixture(m, inverse)
}

/// Free evolution of two slits coupled by `g (a1† a2 + a2† a1)`, restricted to
/// the single-excitation subspace and without the common phase.
///
/// Normal modes split by `2 g`, so a quarter beat period is `g t = pi / 4`.
pub fn evolve_beat(m: &TwoPathMixture, g: f64, t: f64) -> Result<TwoPathMixture> {
    if !(g >= 0.0) {
        return Err(Error::NegativeCoupling(g));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "evolution time must be >= 0, got {t}"
        )));
    }
    let theta = g * t;
    let (cos, sin) = (theta.cos(), theta.sin());
    let u = [
        [r(cos), Complex64::new(0.0, -sin)],
        [Complex64::new(0.0, -sin), r(cos)],
    ];
    rotate_mixture(m, u)
}

/// Phase plate giving light at the tagged frequencies an extra pi between
/// the paths. Untagged components pass unchanged.
pub fn apply_dispersive(m: &TwoPathMixture, tags: &[FreqTag]) -> Result<TwoPathMixture> {
    if tags.is_empty() {
        return Err(Error::InvalidArgument("no frequency tags given".into()));
    }
    m.map_components(|c| {
        Ok(if tags.contains(&c.freq_tag()) {
            c.with_path2_phase(std::f64::consts::PI)
        } else {
            c.clone()
        })
    })
}

/// Coincidence bases addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjectorName {
    /// Every oscillator in its ground state.
    Ground,
    Atom1Excited,
    Atom2Excited,
    /// Single scatterer (or transverse mode of D) in `|0>`.
    SingleAtom0,
    SingleAtom1,
    Sym,
    Antisym,
}

impl ProjectorName {
    pub const ALL: [ProjectorName; 7] = [
        ProjectorName::Ground,
        ProjectorName::Atom1Excited,
        ProjectorName::Atom2Excited,
        ProjectorName::SingleAtom0,
        ProjectorName::SingleAtom1,
        ProjectorName::Sym,
        ProjectorName::Antisym,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProjectorName::Ground => "ground",
            ProjectorName::Atom1Excited => "atom1_excited",
            ProjectorName::Atom2Excited => "atom2_excited",
            ProjectorName::SingleAtom0 => "single_atom_0",
            ProjectorName::SingleAtom1 => "single_atom_1",
            ProjectorName::Sym => "sym",
            ProjectorName::Antisym => "antisym",
        }
    }
}

impl fmt::Display for ProjectorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProjectorName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ProjectorName::ALL
            .into_iter()
            .find(|p| p.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownProjector(s.to_string()))
    }
}

/// Builds the named projector on `space`.
///
/// Two-slit names need modes labelled `atom1`, `atom2`; `single_atom_*`
/// acts on the `atom` mode, or on the transverse `y` mode of the
/// longitudinal space.
pub fn named_projector(name: ProjectorName, space: &FockSpace) -> Result<Projector> {
    let mismatch = || Error::ProjectorMismatch {
        name: name.to_string(),
        labels: space.labels().to_vec(),
    };
    let two_slit = space.labels() == TWO_SLIT_LABELS;
    match name {
        ProjectorName::Ground => Ok(Projector::from_levels(space, |l| l.iter().all(|&n| n == 0))),
        ProjectorName::Atom1Excited | ProjectorName::Atom2Excited => {
            if !two_slit {
                return Err(mismatch());
            }
            let target = if name == ProjectorName::Atom1Excited {
                [1, 0]
            } else {
                [0, 1]
            };
            Ok(Projector::from_levels(space, |l| l == target))
        }
        ProjectorName::SingleAtom0 | ProjectorName::SingleAtom1 => {
            let mode = space
                .mode_by_label(SINGLE_SLIT_LABEL)
                .or_else(|| space.mode_by_label(TRANSVERSE_LABEL))
                .ok_or_else(mismatch)?;
            let level = usize::from(name == ProjectorName::SingleAtom1);
            Ok(Projector::from_levels(space, |l| l[mode] == level))
        }
        ProjectorName::Sym | ProjectorName::Antisym => {
            if !two_slit {
                return Err(mismatch());
            }
            let (sym, antisym) = normal_modes(space)?;
            let v: FockVector = if name == ProjectorName::Sym {
                sym
            } else {
                antisym
            };
            Projector::onto(space, vec![v])
        }
    }
}

/// [`named_projector`] from its CLI spelling.
pub fn projector_by_name(name: &str, space: &FockSpace) -> Result<Projector> {
    named_projector(name.parse()?, space)
}
