use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: modulus {0} is not prime")]
    InvalidField(u64),

    #[error("budget exceeded: {what} needs {needed}, cap is {cap}")]
    BudgetExceeded { what: &'static str, needed: u128, cap: u128 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("every vertex of the tree is a root")]
    AllRoots,

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("root mismatch: {0}")]
    RootMismatch(String),

    #[error("copies are not vertex-disjoint: {0}")]
    NotDisjoint(String),

    #[error("tree is not balanced: subset {witness:?} has edge ratio {edges}/{size}")]
    Unbalanced { witness: Vec<String>, edges: usize, size: usize },

    #[error("size error: {0}")]
    Size(String),

    #[error("colouring is not proper: vertex {vertex} sees colour {colour} on edges to {a} and {b}")]
    ImproperColouring { vertex: usize, colour: u64, a: usize, b: usize },

    #[error("degenerate output: {0}")]
    DegenerateOutput(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
