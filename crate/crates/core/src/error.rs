use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("malformed mesh: {0}")]
    MalformedMesh(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("active region is empty for m={m}, n={n}, p={p}, q={q}")]
    EmptyActiveRegion { m: usize, n: usize, p: usize, q: usize },

    #[error("mesh is not analysis-suitable ({0} intersecting extension pairs)")]
    NotAnalysisSuitable(usize),

    #[error("mesh is not valid: {0}")]
    InvalidMesh(String),

    #[error("ran out of skeleton lines while building local index vectors for anchor {0}")]
    SkeletonExhausted(String),

    #[error("incompatible meshes: {0}")]
    Incompatible(String),

    #[error("element [{s0}, {s1}] crosses a knot of the function's local knot vector")]
    ElementCrossesKnot { s0: f64, s1: f64 },

    #[error("nesting violated: residual {0:e} exceeds tolerance")]
    NestingViolated(f64),

    #[error("non-positive weight {value} at {location}")]
    NonPositiveWeight { value: f64, location: String },

    #[error("refinement would exceed the maximum of {0} levels")]
    TooManyLevels(usize),

    #[error("analysis-suitable completion did not converge after {0} rounds")]
    NoFixedPoint(usize),

    #[error("domain is not a union of level-{level} element closures")]
    BadDomain { level: usize },

    #[error("degenerate element {0}: zero area or singular Jacobian")]
    DegenerateElement(usize),

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("linear solve residual {0:e} above bound")]
    InaccurateSolve(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
