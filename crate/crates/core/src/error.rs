use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group action: {0}")]
    InvalidGroup(String),

    #[error("invalid e-variable: {0}")]
    InvalidVariable(String),

    #[error("invalid e-variable system: {0}")]
    InvalidSystem(String),

    #[error("domain mismatch: variable has {variable} points, action has {action}")]
    DomainMismatch { variable: usize, action: usize },

    /// Witness `(k, φ1, φ2)`: θ(φ1) = θ(φ2) but θ(kφ1) ≠ θ(kφ2).
    #[error("not permissible: element {element} separates points {first} and {second}")]
    NotPermissible {
        element: usize,
        first: usize,
        second: usize,
    },

    #[error("direction is not a unit vector (norm² = {norm_sq})")]
    NonUnitDirection { norm_sq: f64 },

    #[error("invalid spin: {0}")]
    InvalidSpin(String),

    #[error("answer {twice_k}/2 is not an eigenvalue for 2j = {twice_j}")]
    InvalidAnswer { twice_k: i32, twice_j: u32 },

    #[error("degenerate spectrum: eigenvalues {0} and {1} coincide")]
    Degenerate(f64, f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid ket: {0}")]
    InvalidKet(String),

    #[error("invalid projector: {0}")]
    InvalidProjector(String),

    #[error("invalid resolution of identity: {0}")]
    InvalidResolution(String),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("not a probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid statistical model: {0}")]
    InvalidModel(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("unknown scenario {0:?} (expected cat, wigner or two-slit)")]
    UnknownScenario(String),
    #[error("unknown data label {0:?}")]
    UnknownLabel(String),

    #[error("duplicate values: {0}")]
    DuplicateValues(String),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("outcome has zero probability ({0:e})")]
    ZeroProbability(f64),

    #[error("data are impossible under every answer of the model")]
    InconsistentData,

    #[error("empty data")]
    EmptyData,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("states are not orthonormal (Gram residual {0:e})")]
    NotOrthonormal(f64),

    #[error("no connector from {from} to {to}")]
    MissingConnector { from: String, to: String },

    #[error("projection onto H vanishes for variable {variable}, answer {answer}")]
    VanishingProjection { variable: String, answer: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
