use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("invalid lattice: {0}")]
    Validation(Violation),
    #[error("prime {p} divides the discriminant {disc}")]
    BadPrime { p: u64, disc: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} exceeded the node limit of {limit}")]
    ResourceCap { what: &'static str, limit: u64 },
    #[error("lattice is not in this genus: {0}")]
    NotInGenus(String),
    #[error("forms belong to different genera")]
    GenusMismatch,
    #[error("classes {0} and {1} are isometric")]
    DuplicateClass(usize, usize),
    #[error("class {index}: supplied automorphism order {supplied} but computed {computed}")]
    AutOrderMismatch {
        index: usize,
        supplied: String,
        computed: String,
    },
    #[error("form is not an eigenvector: {0}")]
    NotEigenvector(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Which lattice invariant a Gram matrix violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    Empty,
    NotSquare,
    NotSymmetric,
    OddDiagonal,
    NotPositiveDefinite,
    EntryTooLarge,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::Empty => "empty gram matrix",
            Violation::NotSquare => "gram matrix is not square",
            Violation::NotSymmetric => "gram matrix is not symmetric",
            Violation::OddDiagonal => "diagonal entry is odd (lattice not even)",
            Violation::NotPositiveDefinite => "not positive definite",
            Violation::EntryTooLarge => "entry too large for machine arithmetic",
        };
        f.write_str(s)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
