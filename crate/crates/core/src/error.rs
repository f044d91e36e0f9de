use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. Callers that need coarse buckets
/// (the CLI exit codes) use [`Error::kind`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by the zero operator")]
    DivisionByZeroOperator,
    #[error("irreducibility certification needs degree {degree}, above the bound {bound}")]
    FactorDegreeExceeded { degree: usize, bound: usize },
    #[error("operator has order {0}, expected 2")]
    NotOrderTwo(usize),
    #[error("place {0} is irregular: the indicial polynomial has degree below the order")]
    IrregularPlace(String),
    #[error("local analysis at {0} needs constants outside Q (non-rational place with irregular or algebraic local data)")]
    UnsupportedPlace(String),
    #[error("candidate combinations ({count}) exceed the cap {cap}")]
    CandidateExplosion { count: usize, cap: usize },
    #[error("monomial support ({size}) exceeds the cap {cap}")]
    BasisExplosion { size: usize, cap: usize },
    #[error("algebraic constant required outside Q: {0}")]
    AlgebraicConstantsRequired(String),
    #[error("ill-formed tower: {0}")]
    IllFormedTower(String),
    #[error("elements belong to different towers")]
    TowerMismatch,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("D appears inside a coefficient at line {line}, column {column}")]
    DInCoefficient { line: usize, column: usize },
    #[error("no algebraic relation among the derivatives within the search bound {0}")]
    RelationNotFoundWithinCap(usize),
    #[error("generator derivative {0} is not in the field generated by the inputs")]
    NotDifferentiallyClosed(String),
    #[error("no first-order right factor leaves a remainder in the current field; annihilator {0}")]
    NoFirstOrderFactor(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("time budget of {0} ms exceeded")]
    BudgetExceeded(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Coarse classification of errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Inconclusive,
    InvalidInput,
    Budget,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Parse { .. } | DInCoefficient { .. } => ErrorKind::Parse,
            RelationNotFoundWithinCap(_) | Inconclusive(_) | NoFirstOrderFactor(_) => {
                ErrorKind::Inconclusive
            }
            FactorDegreeExceeded { .. }
            | CandidateExplosion { .. }
            | BasisExplosion { .. }
            | BudgetExceeded(_)
            | UnsupportedPlace(_)
            | AlgebraicConstantsRequired(_) => ErrorKind::Budget,
            DivisionByZero
            | DivisionByZeroOperator
            | NotOrderTwo(_)
            | IrregularPlace(_)
            | IllFormedTower(_)
            | TowerMismatch
            | NotDifferentiallyClosed(_)
            | InvalidInput(_) => ErrorKind::InvalidInput,
        }
    }
}
