//! Numerical tolerances shared across the crate.
//!
//! All geometry assumes coordinates in model units of order one to order
//! ten; callers should rescale wildly scaled inputs before use. Each
//! constant documents the predicate it guards.

/// Coordinate tolerance for vertex deduplication and canonical-form
/// equality. Two vertices closer than this per coordinate are one vertex.
pub const EPS_VERTEX: f64 = 1e-12;

/// Cross-product tolerance for collinearity in planar hull construction.
/// Turns with |cross| below this are treated as straight.
pub const EPS_CROSS: f64 = 1e-12;

/// Signed-distance tolerance for face visibility and half-space
/// containment in dimension 3 (plane normals are unit length).
pub const EPS_FACE: f64 = 1e-9;

/// Relative tolerance for the adaptive Gauss-Legendre quadrature used by
/// the lifted-measure integration.
pub const QUAD_REL_TOL: f64 = 1e-9;

/// Maximum bisection depth for a single quadrature panel before the
/// integration reports non-convergence instead of returning a guess.
pub const QUAD_MAX_DEPTH: usize = 32;

/// Normalized second-difference floor for convexity verdicts on scanned
/// integral curves: the curve counts as convex when
/// `min_k (I_{k-1} - 2 I_k + I_{k+1}) >= -EPS_CONVEXITY * max_k |I_k|`.
pub const EPS_CONVEXITY: f64 = 1e-7;

/// Second-difference floor for concavity of polytope section profiles,
/// which are piecewise linear and therefore nearly exact.
pub const EPS_PROFILE: f64 = 1e-9;

/// Rejection-sampling attempt cap; exceeding it reports a stalled sampler
/// instead of looping forever on a degenerate target.
pub const MAX_SAMPLE_ATTEMPTS: u64 = 50_000_000;
