//! Numerical periods, differentials of the third kind with a common pole,
//! generalized theta functions, and inversion of the extended Abel map on
//! odd-degree hyperelliptic curves.

pub mod curve;
pub mod differentials;
pub mod error;
pub mod homology;
pub mod numeric;
pub mod periods;
pub mod planner;
pub mod poly;
pub mod quad;
pub mod surface;
pub mod theta;
pub mod tol;

pub use curve::{HyperellipticCurve, PathPlan, Place};
pub use error::{Error, Result};
pub use surface::{Sheet, Surface};
