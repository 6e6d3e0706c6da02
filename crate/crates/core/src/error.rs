use thiserror::Error;

/// Errors shared across the crate. The leading token of each message is the
/// stable error name the CLI reports on stderr.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("EmptyInput: no facets given")]
    EmptyInput,
    #[error("BadFacetArity: facet [{0}] must have 4 distinct positive vertices")]
    BadFacetArity(String),
    #[error("DuplicateFacet: facet [{0}] listed more than once")]
    DuplicateFacet(String),
    #[error("NonPseudomanifold: triangle [{0}] lies in {1} facets, want exactly 2")]
    NonPseudomanifold(String, usize),
    #[error("EulerViolation: V-E+F-T = {0}, want 0")]
    EulerViolation(i64),
    #[error("VertexNotPresent: vertex {0}")]
    VertexNotPresent(u32),
    #[error("EdgeNotPresent: edge [{0}]")]
    EdgeNotPresent(String),
    #[error("TriangleNotPresent: triangle [{0}]")]
    TriangleNotPresent(String),
    #[error("IllegalMove: {0}: {1}")]
    IllegalMove(String, String),
    #[error("NotInvertiblePair: move applied to the first triangulation does not yield the second")]
    NotInvertiblePair,
    #[error("PreparationStalled: no link-expanding flip left, link size {0}")]
    PreparationStalled(usize),
    #[error("TooManyVertices: {0} vertices exceeds the supported maximum {1}")]
    TooManyVertices(usize, usize),
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("Parse: line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
