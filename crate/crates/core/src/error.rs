use thiserror::Error;

/// Errors raised by the toolkit. Input problems and violated
/// preconditions are distinguished from internal invariant failures so the
/// command-line front end can map them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate arrow ({0}, {1})")]
    DuplicateArrow(usize, usize),
    #[error("vertex index {index} out of range for {count} vertices")]
    VertexOutOfRange { index: usize, count: usize },
    #[error("graph is not symmetric: arrow ({0}, {1}) has no reverse")]
    NotSymmetric(usize, usize),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("sublattice containment violated")]
    NotContained,
    #[error("maps do not compose to zero")]
    NonZeroComposition,
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("malformed ideal word: {0}")]
    MalformedWord(String),

    #[error("digraph does not satisfy (V_2); first failure at length {0}")]
    VanishingViolated(usize),

    #[error("empty facet list")]
    EmptyComplex,
    #[error("empty facet")]
    EmptyFacet,
    #[error("facet has a repeated vertex")]
    RepeatedVertex,
    #[error("complex is not pure: facet dimensions {0} and {1}")]
    NotPure(usize, usize),
    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<usize>),
    #[error("poset is not ranked: {0}")]
    NotRanked(String),
    #[error("empty poset")]
    EmptyPoset,

    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for internal invariant failures, false for rejected input.
    /// Composition and containment failures only arise from maps the
    /// library builds itself, so they count as internal too.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_) | Error::NonZeroComposition | Error::NotContained)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
