use thiserror::Error;

/// Errors raised across the curve, period, differential and inversion layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial degree must be odd and >= 3, got {0}")]
    BadDegree(usize),
    #[error("curve is singular: branch points {0} and {1} coincide within tolerance")]
    SingularCurve(usize, usize),
    #[error("branch point root finding failed: residual {0:.3e} above tolerance")]
    RootResidual(f64),
    #[error("x = {0} is a branch point")]
    AtBranchPoint(num_complex::Complex<f64>),
    #[error("point ({x}, {y}) does not satisfy the curve equation (residual {residual:.3e})")]
    NotOnCurve {
        x: num_complex::Complex<f64>,
        y: num_complex::Complex<f64>,
        residual: f64,
    },
    #[error("sheet tracking became ambiguous near x = {0}")]
    SheetAmbiguity(num_complex::Complex<f64>),
    #[error("degenerate branch-point geometry: {0}")]
    DegenerateGeometry(String),
    #[error("quadrature failed to reach tolerance {wanted:.3e} (achieved {achieved:.3e})")]
    QuadratureFailure { wanted: f64, achieved: f64 },
    #[error("period matrix is not canonical: {0}")]
    NonCanonicalBasis(String),
    #[error("a-period matrix is ill conditioned (cond ~ {0:.3e})")]
    IllConditioned(f64),
    #[error("third-kind pole sits at a branch place")]
    PoleAtBranch,
    #[error("third-kind poles coincide")]
    CoincidentPoles,
    #[error("no admissible path between endpoints: {0}")]
    PathBlocked(String),
    #[error("divisor point collides with a prescribed pole")]
    DivisorTouchesPole,
    #[error("cycle passes through a prescribed pole and no perturbation cleared it")]
    CycleTouchesPole,
    #[error("contour for residue extraction passes through a zero")]
    ContourThroughZero,
    #[error("generalized lattice is ill conditioned")]
    IllConditionedLattice,
    #[error("contour boundary is too close to a zero or pole")]
    BoundaryTooClose,
    #[error("winding number {0:.4} is not within 0.2 of an integer")]
    NonIntegerWinding(f64),
    #[error("the inversion function vanishes identically for this argument")]
    IdenticallyZero,
    #[error("zero count certificate {found} does not match expected {expected}: {detail}")]
    CountMismatch {
        found: i64,
        expected: i64,
        detail: String,
    },
    #[error("Newton refinement stalled at x = {0}")]
    NewtonStall(num_complex::Complex<f64>),
    #[error("argument does not lie on the generalized theta divisor (|theta| = {0:.3e})")]
    NotOnThetaDivisor(f64),
    #[error("no zero of the inversion function coincides with the base point")]
    BasePointZeroMissing,
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("{file}: {msg}")]
    Parse { file: String, msg: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
