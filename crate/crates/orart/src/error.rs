use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Library-wide error type. Variants carry enough context to print a
/// one-line diagnostic; callers that need machine-readable detail match on
/// the variant.
#[derive(Debug, Error)]
pub enum Error {
    #[error("curvature mismatch: {0} vs {1}")]
    KappaMismatch(f64, f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("point violates the {space} constraint (residual {residual:.3e})")]
    OffManifold { space: &'static str, residual: f64 },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is not a tree")]
    NotATree,

    #[error("unknown vertex id: {0}")]
    UnknownVertex(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("metric axiom violated at ({p}, {q}, {r}): {detail}")]
    MetricViolation {
        p: String,
        q: String,
        r: String,
        detail: String,
    },

    #[error("no midpoint found for ({0}, {1})")]
    NoMidpoint(String, String),

    #[error("path is not a geodesic: {0}")]
    NotGeodesic(String),

    #[error("graph is not chordal")]
    NotChordal,

    #[error("clique-tree intersection property fails: {0}")]
    IntersectionProperty(String),

    #[error("unsupported graph shape for this operation: {0}")]
    UnsupportedShape(String),

    #[error("rewriting step cap exceeded ({0} steps)")]
    RewriteCap(usize),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("set is not closed under composition: {0}")]
    ClosureViolated(String),

    #[error("orbit exceeded the growth cap ({0} points)")]
    OrbitCap(usize),

    #[error("schema error: {0}")]
    Schema(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        // serde_json reports line/column in its Display output.
        Error::Schema(e.to_string())
    }
}
