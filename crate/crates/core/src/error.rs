use thiserror::Error;

/// Every failure the library reports. Verdict-style operations (planarity,
/// decomposition validation) return values instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid drawing: {0}")]
    InvalidDrawing(String),
    #[error("overlapping collinear segments on edges {0} and {1}")]
    Overlap(usize, usize),
    #[error("degenerate zero-length segment")]
    DegenerateSegment,
    #[error("graph is not chordal; chordless cycle {cycle:?}")]
    NotChordal { cycle: Vec<usize> },
    #[error("graph is not an interval graph")]
    NotInterval,
    #[error("graph is not planar ({0})")]
    NotPlanar(String),
    #[error("graph is not outerplanar")]
    NotOuterplanar,
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
