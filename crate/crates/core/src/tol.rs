//! Pinned numerical tolerances.
//!
//! Every threshold used by the verification suite and the acceptance gates is
//! a named constant here, not an inline literal.

/// Residual bound for branch-point root refinement, relative to the
/// coefficient scale of the defining polynomial.
pub const ROOT_RESIDUAL: f64 = 1e-12;

/// Two branch points closer than this (relative to curve scale) make the
/// curve singular.
pub const BRANCH_SEPARATION: f64 = 1e-8;

/// On-curve residual bound for places: |y^2 - f(x)| < ON_CURVE * (1 + |f(x)|).
pub const ON_CURVE: f64 = 1e-8;

/// Default absolute tolerance per period-matrix entry.
pub const PERIOD_QUAD: f64 = 1e-11;

/// Default absolute tolerance for Abel-map and third-kind path integrals.
pub const PATH_QUAD: f64 = 1e-11;

/// Symmetry bound: ||tau - tau^T||_max < TAU_SYMMETRY * (1 + ||tau||_max).
pub const TAU_SYMMETRY: f64 = 1e-9;

/// Normalized a-periods must equal the identity to this tolerance.
pub const A_PERIOD_IDENTITY: f64 = 1e-10;

/// j-invariant agreement for the genus-1 theta-constant cross check.
pub const J_INVARIANT: f64 = 1e-5;

/// Condition-number ceiling for the raw a-period matrix.
pub const A_COND_LIMIT: f64 = 1e12;

/// Contour-verified residues of third-kind differentials.
pub const RESIDUE: f64 = 1e-8;

/// a-periods of normalized third-kind differentials must vanish to this.
pub const THIRD_KIND_A_PERIOD: f64 = 1e-9;

/// Both routes of the bilinear identity must agree to this.
pub const BILINEAR: f64 = 1e-8;

/// b-loop quasi-periodicity factor agreement for the inversion function.
pub const QUASI_B: f64 = 1e-8;

/// a-loop and gamma-loop invariance of the inversion function.
pub const QUASI_A: f64 = 1e-10;

/// Residues of d ln f at the prescribed poles.
pub const DLOG_RESIDUE: f64 = 1e-6;

/// Direct vs recursive generalized-theta agreement (relative).
pub const RECURSION_REL: f64 = 1e-10;

/// Residual for the K2 cross validation modulo the generalized lattice.
pub const K2_CROSS: f64 = 1e-7;

/// Default truncation target for theta sums.
pub const THETA_EPS: f64 = 1e-12;

/// Winding-number quadrature tolerance.
pub const WINDING_QUAD: f64 = 1e-6;

/// Accepted distance of a winding estimate from the nearest integer.
pub const WINDING_INT: f64 = 0.2;

/// Newton refinement target for simple zeros.
pub const NEWTON: f64 = 1e-10;

/// Zeros closer than this merge into one reported zero with multiplicity.
pub const MERGE_RADIUS: f64 = 1e-5;

/// Place recovery bound for inversion round trips.
pub const ROUNDTRIP_PLACE: f64 = 1e-6;

/// Relaxed residual accepted at a multiple zero.
pub const MULTIPLE_ZERO: f64 = 1e-4;

/// |Theta_n| below this (relative to term scale) counts as on the divisor.
pub const THETA_DIVISOR_MEMBERSHIP: f64 = 1e-7;

/// Forward-inverse consistency modulo the generalized lattice.
pub const LATTICE_RESIDUAL: f64 = 1e-7;

/// Sampled |f| below this (relative) on every probe declares f identically zero.
pub const IDENTICALLY_ZERO: f64 = 1e-10;

/// Non-genericity flag threshold for the leading coefficients near poles.
pub const GENERICITY: f64 = 1e-8;

/// Classical (theta-only) divisor recovery bound.
pub const CLASSICAL_PLACE: f64 = 1e-6;
