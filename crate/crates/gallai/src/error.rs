//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("subset must be strictly increasing, got {0:?}")]
    InvalidSubset(Vec<usize>),

    #[error("need order >= uniformity >= 2, got n={n}, r={r}")]
    BadDimensions { n: usize, r: usize },

    #[error("hyperedge rank {rank} out of range, complete hypergraph has {count} hyperedges")]
    RankOutOfRange { rank: usize, count: usize },

    #[error("expected {expected} color entries, got {got}")]
    ColorCount { expected: usize, got: usize },

    #[error("color {color} outside palette 1..={t}")]
    ColorOutOfRange { color: u16, t: u16 },

    #[error("palette must have at least one color")]
    EmptyPalette,

    #[error("pattern {text}: {reason}")]
    BadPattern { text: String, reason: String },

    #[error("certificate line {line}: {reason}")]
    CertFormat { line: usize, reason: String },

    #[error("certificate data has {got} entries, expected {expected}")]
    CertDataCount { expected: usize, got: usize },

    #[error("provenance must be a single line without newlines")]
    ProvenanceNewline,

    #[error("avoid list has {got} patterns but the coloring has {t} colors")]
    AvoidLength { t: u16, got: usize },

    #[error("order {n} exceeds the exhaustive cap {cap}")]
    OrderCap { n: usize, cap: usize },

    #[error("uniformity mismatch: {a} vs {b}")]
    UniformityMismatch { a: usize, b: usize },

    #[error("expected uniformity {expected}, got {got}")]
    WrongUniformity { expected: usize, got: usize },

    #[error("color count mismatch: {a} vs {b}")]
    ColorCountMismatch { a: u16, b: u16 },

    #[error("input contains a rainbow triangle on {0:?}, lift is undefined there")]
    RainbowTriangle([usize; 3]),

    #[error("input is not a Gallai coloring: rainbow simplex on {0:?}")]
    NotGallai(Vec<usize>),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("problem has {edges} hyperedges, search supports at most {cap}")]
    TooManyEdges { edges: usize, cap: usize },

    #[error("registry manifest line {line}: {reason}")]
    ManifestParse { line: usize, reason: String },

    #[error("bound value overflow during derivation")]
    ValueOverflow,
}
