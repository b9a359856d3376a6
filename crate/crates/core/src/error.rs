use thiserror::Error;

/// Violations of the shape invariants and geometric preconditions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("need at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },
    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("edge starting at vertex {index} has zero length")]
    DegenerateEdge { index: usize },
    #[error("vertex {index} is a cusp (edges fold back onto each other)")]
    Cusp { index: usize },
    #[error("curve is clockwise (signed area {signed_area:e})")]
    Clockwise { signed_area: f64 },
    #[error("edges {first} and {second} intersect")]
    SelfIntersection { first: usize, second: usize },
    #[error("edge {index} reversed direction during the step")]
    FlippedEdge { index: usize },
    #[error("face {face} references vertex {vertex} out of range")]
    IndexOutOfRange { face: usize, vertex: usize },
    #[error("face {face} is degenerate")]
    DegenerateFace { face: usize },
    #[error("face {face} is inconsistently oriented with its neighbours")]
    FlippedFace { face: usize },
    #[error("edge ({a}, {b}) is not shared by exactly two faces")]
    NonManifoldEdge { a: usize, b: usize },
    #[error("vertex {vertex} has a non-manifold neighbourhood")]
    NonManifoldVertex { vertex: usize },
    #[error("Euler characteristic is {chi}, expected 2")]
    EulerCharacteristic { chi: i64 },
    #[error("enclosed measure {value:e} is not positive (inward orientation)")]
    InwardOrientation { value: f64 },
    #[error("shape is not convex: vertex {vertex} violates element {element}")]
    NotConvex { element: usize, vertex: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0}")]
    Other(String),
}

/// Domain violations of the closed-form transforms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("time {t_hat} is outside the equivalence domain t̂ < {limit}")]
    OutsideDomain { t_hat: f64, limit: f64 },
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("invalid context: {0}")]
    InvalidContext(String),
}

/// Errors raised while evaluating velocities or stepping a flow.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("radial drift is singular at vertex {vertex} (r = 0, φ'(0) = {dphi0})")]
    SingularDrift { vertex: usize, dphi0: f64 },
    #[error("vertex {vertex} at radius {r} lies outside the radial table (max {max})")]
    DensityDomain { vertex: usize, r: f64, max: f64 },
    #[error("rescaled flow evaluated at t̂ = {t_hat}, beyond the guard band limit {limit}")]
    GuardBand { t_hat: f64, limit: f64 },
    #[error("invalid flow parameters: {0}")]
    InvalidParams(String),
    #[error("state is not running")]
    NotRunning,
}

/// Top-level error for I/O, configuration and command execution.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("numerical abort: {0}")]
    NonFinite(String),
}

impl Error {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonFinite(_) => 3,
            Error::Flow(FlowError::Geom(GeomError::NonFinite { .. })) => 3,
            _ => 2,
        }
    }
}
