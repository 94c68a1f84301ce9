use thiserror::Error;

/// A malformed input file. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("order must be between 1 and 255, got {0}")]
    InvalidOrder(usize),
    #[error("table has {found} entries, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("entry {value} at position {position} is out of range for order {order}")]
    EntryOutOfRange { position: usize, value: usize, order: usize },
    #[error("not a ternary quasigroup: {slot} slot is not a bijection")]
    NotQuasigroup { slot: crate::algebra::Slot },
    #[error("algebra does not satisfy axiom {0}")]
    AxiomFails(&'static str),
    #[error("algebra is not involutory (T differs from its middle division)")]
    NotInvolutory,
    #[error("order {order} exceeds the enumeration cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("face index {index} out of range for degree {degree}")]
    FaceIndex { index: usize, degree: isize },
    #[error("substitution position {index} out of range for degree {degree}")]
    SubstitutionIndex { index: usize, degree: isize },
    #[error("tuple entry {value} is out of range for order {order}")]
    EntryOutOfRange { value: usize, order: usize },
    #[error("degree {degree} exceeds the materialization cap {cap} for order {order}")]
    DegreeCapExceeded { degree: isize, cap: isize, order: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("degree {0} is below -1")]
    DegreeTooLow(isize),
    #[error("{which} chain is not a cycle modulo the relators")]
    NotACycle { which: &'static str },
    #[error("expected a chain of degree {expected}, got degree {found}")]
    WrongDegree { expected: isize, found: isize },
    #[error("relator span is not closed under the differential at degree {0}")]
    NotClosed(isize),
    #[error("cochain modulus {found} does not match {expected}")]
    ModulusMismatch { expected: u64, found: u64 },
    #[error("variant {0} is not supported here")]
    UnsupportedVariant(String),
    #[error("cochain is not a 2-cocycle: it is nonzero on the boundary of {0:?}")]
    NotACocycle(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("coloring has {found} entries but the diagram has {expected} regions")]
    ColoringLength { expected: usize, found: usize },
    #[error("coloring violates crossing {0}")]
    InvalidColoring(usize),
    #[error("associated chain is not a cycle; the crossing roles are inconsistent")]
    NotACycle,
    #[error("diagrams mix flat and classical crossings")]
    KindMismatch,
    #[error("region {region} is out of range for a diagram with {num_regions} regions")]
    RegionOutOfRange { region: usize, num_regions: usize },
    #[error("coloring {index} of the first diagram has {found} matches in the second")]
    Correspondence { index: usize, found: usize },
}

/// Top-level error used by the command line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

impl Error {
    /// Process exit code: 1 usage, 2 input format, 3 mathematical precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Parse { .. } | Error::Io { .. } => 2,
            _ => 3,
        }
    }
}
