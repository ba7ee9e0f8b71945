use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),

    #[error("variable `{0}` declared or bound twice")]
    DuplicateVariable(String),

    #[error("theory/atom mismatch: {0}")]
    TheoryMismatch(String),

    #[error("partition side `{0}` is empty")]
    EmptyPartition(&'static str),

    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),

    #[error("formula must be quantifier-free")]
    Quantified,

    #[error("oracle evaluation handles one bound variable, found {0}")]
    TooManyBoundVariables(usize),

    #[error("ambient variables differ: {left:?} vs {right:?}")]
    AmbientMismatch { left: Vec<String>, right: Vec<String> },

    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("cell is empty")]
    EmptyCell,

    #[error("hyperplane contains the component")]
    DegenerateHyperplane,

    #[error("facet split is {found}, expected {expected}")]
    WrongSplit {
        expected: &'static str,
        found: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: i64, found: i64 },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("scalar out of range for the chosen number type: {0}")]
    ScalarRange(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
