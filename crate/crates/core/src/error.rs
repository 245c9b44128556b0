use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is singular over GF(2)")]
    SingularMatrix,

    #[error("boundary operator must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("boundary operator does not square to zero")]
    NotAComplex,

    #[error("stabilizers do not commute: X generator {x} overlaps Z generator {z} oddly")]
    NonCommuting { x: usize, z: usize },

    #[error("X and Z stabilizer groups differ in dimension ({x_rank} vs {z_rank}); pad the code first")]
    AsymmetricCode { x_rank: usize, z_rank: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("enumeration of {requested} candidates exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: u128 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("gate {gate} is not transversal: {reason}")]
    NotTransversal { gate: String, reason: String },

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("expected {expected} syndrome bits, got {got}")]
    SyndromeLength { expected: usize, got: usize },

    #[error("unknown code name `{0}`")]
    UnknownCode(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
