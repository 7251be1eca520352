use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mode dimension {0}: every mode needs at least 2 levels")]
    InvalidDimension(usize),

    #[error("unsupported number of modes {0}: expected 1 to 3")]
    ModeCount(usize),

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("Fock level {level} out of range for mode {mode} (dimension {dim})")]
    LevelOutOfRange {
        mode: usize,
        level: usize,
        dim: usize,
    },

    #[error("mode index {mode} out of range for a {modes}-mode space")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("truncation too small: |beta|^2 = {beta_sq} exceeds nmax/4 = {limit} (nmax = {nmax})")]
    Truncation {
        beta_sq: f64,
        limit: f64,
        nmax: usize,
    },

    #[error("first-order treatment needs |beta| < 1, got |beta|^2 = {0}")]
    PerturbativeRange(f64),

    #[error("empty mixture")]
    EmptyMixture,

    #[error("mixture has no positive weight")]
    ZeroWeight,

    #[error("negative or non-finite component weight {0}")]
    InvalidWeight(f64),

    #[error("empty ensemble: both paths vanish after conditioning")]
    EmptyEnsemble,

    #[error("unknown projector name '{0}'")]
    UnknownProjector(String),

    #[error("unknown frequency tag '{0}'")]
    UnknownTag(String),

    #[error("projector '{name}' does not apply to a space with modes {labels:?}")]
    ProjectorMismatch { name: String, labels: Vec<String> },

    #[error("operation needs a two-oscillator atomic space, found modes {0:?}")]
    WrongAtomicSpace(Vec<usize>),

    #[error("coupling must be non-negative, got {0}")]
    NegativeCoupling(f64),

    #[error("invalid scenario field '{field}': {reason}")]
    InvalidSpec { field: &'static str, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sampled visibility {sampled} disagrees with closed form {closed}")]
    Inconsistent { sampled: f64, closed: f64 },
}
