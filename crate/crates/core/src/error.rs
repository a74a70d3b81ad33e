use thiserror::Error;

use crate::cc::AxiomReport;

/// Parse failures for the textual graph formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("graph6: empty input")]
    Empty,
    #[error("graph6: byte {byte:#04x} at offset {offset} is outside the printable range 63..=126")]
    ByteOutOfRange { offset: usize, byte: u8 },
    #[error("graph6: malformed length field at offset {offset}")]
    MalformedLength { offset: usize },
    #[error("graph6: truncated edge data, expected {expected} bytes after offset {offset}")]
    Truncated { offset: usize, expected: usize },
    #[error("graph6: trailing garbage starting at offset {offset}")]
    TrailingGarbage { offset: usize },
    #[error("graph6: non-zero padding bits in final byte at offset {offset}")]
    NonZeroPadding { offset: usize },
    #[error("edge list line {line}: missing header `n <count>`")]
    MissingHeader { line: usize },
    #[error("edge list line {line}: malformed line `{text}`")]
    MalformedLine { line: usize, text: String },
    #[error("edge list line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("edge list line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown named graph `{0}`")]
    UnknownGraph(String),
    #[error("invalid parameter for `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("graph must be connected ({context})")]
    Disconnected { context: String },
    #[error("graph must have at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },
    #[error("cartesian product of an empty factor list")]
    EmptyFactorList,

    #[error("point count mismatch: {left} vs {right}")]
    PointCountMismatch { left: usize, right: usize },
    #[error("relation is not a union of basis colors ({context})")]
    NotColorExact { context: String },
    #[error("not a partial parabolic: {0}")]
    NotPartialParabolic(String),
    #[error("not a homogeneity set: {0}")]
    NotHomogeneitySet(String),
    #[error("partition is not a coherent configuration: {0}")]
    NotCoherent(Box<AxiomReport>),
    #[error("coherence failure: intersection number c[{r},{s}]^{t} differs between representatives")]
    RepresentativeMismatch { r: u32, s: u32, t: u32 },
    #[error("malformed color matrix: {0}")]
    MalformedColoring(String),
    #[error("unknown tag `{0}`")]
    UnknownTag(String),

    #[error("refusing {what}: size {size} exceeds cap {cap}")]
    SizeCap { what: String, size: usize, cap: usize },
    #[error("refusing k-WL: {required} tuples exceed the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("invalid index set {0:?}")]
    BadIndexSet(Vec<usize>),
    #[error("dimension k = {0} is outside the supported range 2..=6")]
    BadDimension(usize),

    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("degree mismatch: family of {family} vs group of degree {group}")]
    DegreeMismatch { family: usize, group: usize },
    #[error("graphs {i} and {j} are not WL-equivalent")]
    NotEquivalent { i: usize, j: usize },
    #[error("factor {index} is not prime ({factors} prime factors)")]
    NotPrime { index: usize, factors: usize },
    #[error("algebraic isomorphism family violates {0}")]
    BrokenFamily(String),

    #[error("factorization certification failed: {0}")]
    CertificationFailed(String),
    #[error("exponentiation is not coherent: {0}")]
    ExponentiationFailed(Box<AxiomReport>),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
