use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {from} does not divide {to}")]
    NotDivisible { from: u32, to: u32 },
    #[error("value is not a root of unity")]
    NotRootOfUnity,
    #[error("operands belong to different torus specs")]
    SpecMismatch,
    #[error("lattice point {0:?} is not in the radical")]
    NotInRadical(Vec<i64>),
    #[error("unsupported power {power} for a module of dimension {dim}")]
    BadPower { power: usize, dim: usize },
    #[error("lattice point {0:?} lies outside the box")]
    OutOfBox(Vec<i64>),
    #[error("operator at weight {0:?} is not scalar")]
    NotScalar(Vec<i64>),
    #[error("extracted twist is not a character: {0}")]
    NotCharacter(String),
    #[error("radical lattice is not diagonal in the torus coordinates")]
    NonDiagonalRadical,
    #[error("invalid torus spec: {0}")]
    InvalidSpec(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
