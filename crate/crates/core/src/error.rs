use thiserror::Error;

pub type Result<T> = std::result::Result<T, HomogError>;

#[derive(Debug, Error)]
pub enum HomogError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid cutoff {cutoff} for axis of length {n}: must satisfy cutoff < n/2 = {}", n / 2)]
    InvalidCutoff { cutoff: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ill-conditioned fine block ({detail}); min(a) = {min_coefficient:e}")]
    IllConditioned { min_coefficient: f64, detail: String },

    #[error("degenerate coefficient: minimum value {min:e} is not positive")]
    DegenerateCoefficient { min: f64 },

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("fine block of dimension {dim} exceeds the configured cap {cap}")]
    TooLarge { dim: usize, cap: usize },

    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("{0}")]
    Config(String),

    #[error("csv error: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HomogError {
    /// Stable machine-readable category, used by the CLI for error reporting.
    pub fn category(&self) -> &'static str {
        match self {
            HomogError::InvalidGrid(_)
            | HomogError::InvalidCutoff { .. }
            | HomogError::DimensionMismatch { .. }
            | HomogError::InvalidParameter(_) => "invalid-input",
            HomogError::IllConditioned { .. } => "ill-conditioned",
            HomogError::DegenerateCoefficient { .. } => "degenerate-coefficient",
            HomogError::UndefinedRatio(_) => "undefined-ratio",
            HomogError::TooLarge { .. } => "too-large",
            HomogError::Solver(_) => "solver",
            HomogError::Config(_) => "config",
            HomogError::Csv(_) => "csv",
            HomogError::Io(_) => "io",
        }
    }

    /// Process exit code associated with the category.
    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "config" => 2,
            "invalid-input" => 3,
            "ill-conditioned" | "degenerate-coefficient" | "undefined-ratio" | "solver" => 4,
            "too-large" => 5,
            _ => 6,
        }
    }
}
