use thiserror::Error;

use crate::complex::Simplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("simplex with no vertices")]
    EmptySimplex,

    #[error("simplex {0} repeats a vertex")]
    RepeatedVertex(Simplex),

    #[error("simplex {simplex} given with conflicting births {first} and {second}")]
    ConflictingBirth { simplex: Simplex, first: i64, second: i64 },

    #[error("face {face} (birth {face_birth}) is born after its coface {coface} (birth {coface_birth})")]
    Monotonicity { face: Simplex, face_birth: i64, coface: Simplex, coface_birth: i64 },

    #[error("no value given for vertex {0}")]
    MissingVertexValue(u32),

    #[error("grid step must be positive")]
    NonPositiveGrid,

    #[error("cover member {member:?} contains {simplex}, which is not in the ambient complex")]
    NotSubcomplex { member: String, simplex: Simplex },

    #[error("cover leaves {} simplices uncovered: {}", .0.len(), list(.0))]
    Uncovered(Vec<Simplex>),

    #[error("ambient birth of {simplex} is {ambient} but the cover members give {members}")]
    IncompatibleCover { simplex: Simplex, ambient: i64, members: i64 },

    #[error("invalid index set: {0}")]
    IndexSet(String),

    #[error("inconsistent shapes: {0}")]
    Shape(String),

    #[error("naturality square fails at slice {slice}")]
    Naturality { slice: i64 },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

fn list(simplices: &[Simplex]) -> String {
    simplices.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
