use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{0}")]
    Invalid(String),
    #[error("gram matrix is not positive definite (leading minor {minor} ≤ 0)")]
    NotPositiveDefinite { minor: usize },
    #[error("end {label}: cross-section dimension {found}, expected n-1 = {expected}")]
    DimensionMismatch { label: String, expected: usize, found: usize },
    #[error("end {label}: flux length ≠ b₁ (expected {expected}, found {found})")]
    FluxLength { label: String, expected: usize, found: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid value at {path}: {message}")]
    Semantic { path: String, message: String },
}

impl ConfigError {
    pub fn semantic(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Semantic { path: path.into(), message: message.into() }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("gauge-dependent: classify a potential instead")]
    GaugeDependent,
    #[error("lagrangian basis does not have full column rank")]
    RankDeficient,
    #[error("{0}")]
    Invalid(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("lattice sum diverges: s = {s} ≤ {abscissa}")]
    Divergent { s: f64, abscissa: f64 },
    #[error("end {label}: spectral data requires closed θ₀ and constant φ₀")]
    NotNormalized { label: String },
    #[error("counting function diverges with r_max: potential is non-trapping")]
    NonTrapping,
    #[error("potential is not trapping; Weyl constants are undefined")]
    NotTrapping,
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("{0}")]
    Precondition(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
