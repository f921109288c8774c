use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix entry count {actual} does not match {rows}x{cols}")]
    Shape { rows: usize, cols: usize, actual: usize },

    #[error("fan: {0}")]
    InvalidFan(String),

    #[error("cone {cone} references ray index {index}, but only {rays} rays exist")]
    RayIndexOutOfRange { cone: usize, index: usize, rays: usize },

    #[error("ray {index} {coords:?} is not primitive (gcd {gcd})")]
    NotPrimitive { index: usize, coords: Vec<i64>, gcd: i64 },

    #[error("rays {first} and {second} are identical")]
    DuplicateRay { first: usize, second: usize },

    #[error("fan is not a smooth complete fan: {0}")]
    UnvalidatedFan(String),

    #[error("weight polytope is unbounded along direction {witness:?}")]
    Unbounded { witness: Vec<String> },

    #[error("degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("operands belong to different algebras ({0})")]
    VariantMismatch(String),

    #[error("element is not in the space of holomorphic polyvector fields: {0}")]
    NotHolomorphic(String),

    #[error("delta is not admissible: <delta, e{ray}> = {value}, expected -1")]
    Inadmissible { ray: usize, value: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("invalid field `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("{0}")]
    Input(String),
}
