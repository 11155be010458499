use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    Size { what: &'static str, needed: usize, cap: usize },
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("no fusion: intertwiner space is empty for {0}")]
    NoFusion(String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("inconsistent fusion: {0}")]
    InconsistentFusion(String),
    #[error("not a cocycle: residual {0:e}")]
    NotACocycle(f64),
    #[error("extraction inconsistency: methods differ by {0:e}")]
    ExtractionInconsistency(f64),
    #[error("comultiplication mask error: residual {0:e}")]
    Mask(f64),
    #[error("degenerate algebra: {0}")]
    DegenerateAlgebra(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("not semisimple: radical has dimension {0}")]
    NotSemisimple(usize),
    #[error("inconsistent coproduct: {0}")]
    InconsistentCoproduct(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("pairing error: {0}")]
    Pairing(String),
    #[error("theorem precondition failed: {0}")]
    Precondition(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("zero quotient: module lies in the radical")]
    ZeroQuotient,
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by ill-conditioned or degenerate numerics rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_) | Error::Singular(_) | Error::RankDeficient(_) | Error::DegenerateAlgebra(_)
        )
    }

    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input(_) | Error::Json(_) | Error::Shape(_) | Error::Parameter(_) | Error::Pairing(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
