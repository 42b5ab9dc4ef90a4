//! Stochastic geometry of s-concave functions.
//!
//! The crate provides the pieces needed to experiment with random convex
//! approximants of s-concave functions:
//!
//! - [`convex`]: exact V-polytope kernel in dimensions 1-3 (hulls, Minkowski
//!   combinations, measures, horizontal slices of lifted bodies).
//! - [`smeans`]: s-means, analytic s-concave function families, grid
//!   functions, rearrangements, and a grid oracle for sup-convolutions.
//! - [`lift`]: the lifting that turns integrals of s-concave functions into
//!   weighted measures of convex epigraph/hypograph bodies, plus evaluation
//!   and Minkowski combination of lifted bodies.
//! - [`sampling`]: seeded rejection sampling under a function graph and the
//!   induced random majorants/minorants.
//! - [`shadow`]: linear parameter systems, shadow-system projections, and
//!   convexity probes for parameterized lifted measures.
//!
//! The crate is `no_std` (it allocates through `alloc`); IO, configuration,
//! and CSV reporting live in the companion CLI crate.
//!
//! Coordinates are plain `f64` in model units of order one; tolerances are
//! documented in [`tol`].

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod convex;
mod error;
mod fm;
pub mod lift;
pub mod sampling;
pub mod shadow;
pub mod smeans;
pub mod tol;

pub use error::{Error, Result};

pub mod prelude {
    //! Convenient re-exports of the most used types and operations.
    pub use crate::convex::{Axis, BodyKind, CoefficientBody, LiftedBody, Point, VPolytope};
    pub use crate::error::{Error, Result};
    pub use crate::lift::{combine_lifted, lift_points, nu_measure, unlift_eval, LiftSpec, WeightFn};
    pub use crate::sampling::{build_approx, integral_approx, sample_under_graph, RandomApprox, SampleCloud};
    pub use crate::shadow::{brunn_profile, lps_at, project_shadow, scan_convexity, steiner_convexity_probe, LpsSpec, ShadowEpiSpec};
    pub use crate::smeans::{m_mean, sup_convolution_grid, GridFn, MeanOrder, SConcaveFn, SParam};
}
