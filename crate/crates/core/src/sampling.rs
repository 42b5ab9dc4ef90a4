//! Random approximants of s-concave functions.
//!
//! Pairs `(X, Z)` are drawn by rejection sampling uniformly from the
//! region under the graph of a family member, so the abscissae have
//! density `f / int f` and the heights are uniform on each fiber. Lifting
//! the sampled heights and taking the convex hull side appropriate to the
//! sign of `s` yields the random approximant: the least s-concave
//! function with `[f](X_i) >= Z_i`, a minorant of `f` that grows
//! monotonically (as a body) in the sample count.
//!
//! Determinism: a cloud is a pure function of `(family, count, seed)`, and
//! drawing a longer cloud from the same seed extends a shorter one — the
//! rejection stream is consumed in a fixed order, so prefixes coincide.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex::{LiftedBody, Point, VPolytope};
use crate::error::{Error, Result};
use crate::lift::{lift_points, nu_measure, unlift_eval, LiftSpec};
use crate::smeans::{SConcaveFn, SParam};
use crate::tol::MAX_SAMPLE_ATTEMPTS;

/// Accepted `(abscissa, height)` samples, carrying the seed and attempt
/// count that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleCloud {
    dim: usize,
    seed: u64,
    attempts: u64,
    samples: Vec<(Point, f64)>,
}

impl SampleCloud {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Total rejection-loop iterations spent producing the cloud.
    pub fn attempts(&self) -> u64 {
        self.attempts
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The accepted graph points `(X_i, Z_i)` with `0 < Z_i <= f(X_i)`.
    pub fn samples(&self) -> &[(Point, f64)] {
        &self.samples
    }

    /// The accepted abscissae alone.
    pub fn abscissae(&self) -> Vec<Point> {
        self.samples.iter().map(|(x, _)| *x).collect()
    }

    /// The first `n` accepted samples, as the same cloud a shorter run
    /// would have produced.
    pub fn prefix(&self, n: usize) -> SampleCloud {
        SampleCloud {
            dim: self.dim,
            seed: self.seed,
            attempts: self.attempts,
            samples: self.samples[..n.min(self.samples.len())].to_vec(),
        }
    }
}

/// Draws `n` pairs uniformly from the region strictly under the graph of
/// `f` by rejection from the support box times the height range. The
/// abscissae then carry density `f / int f`.
pub fn sample_under_graph(f: &SConcaveFn, n: usize, seed: u64) -> Result<SampleCloud> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be positive"));
    }
    let (lo, hi) = f.support_box();
    let h = f.height();
    let dim = f.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n);
    let mut attempts: u64 = 0;
    while samples.len() < n {
        attempts += 1;
        if attempts > MAX_SAMPLE_ATTEMPTS {
            return Err(Error::SamplingStalled);
        }
        let x = match dim {
            1 => Point::one(lo.coord(0) + (hi.coord(0) - lo.coord(0)) * rng.random::<f64>()),
            _ => {
                let px = lo.coord(0) + (hi.coord(0) - lo.coord(0)) * rng.random::<f64>();
                let py = lo.coord(1) + (hi.coord(1) - lo.coord(1)) * rng.random::<f64>();
                Point::two(px, py)
            }
        };
        let z = h * rng.random::<f64>();
        // Strictly positive heights keep the lift well-defined for every
        // sign of s; z = 0 has probability zero anyway.
        if z > 0.0 && z < f.evaluate(&x) {
            samples.push((x, z));
        }
    }
    Ok(SampleCloud {
        dim,
        seed,
        attempts,
        samples,
    })
}

/// The random minorant built from a sample cloud: the lifted hull of the
/// sampled graph points, read back as a function.
#[derive(Clone, Debug)]
pub struct RandomApprox {
    s: SParam,
    body: LiftedBody,
}

impl RandomApprox {
    /// Least s-concave function above prescribed graph points
    /// `(x_i, v_i)`; the deterministic counterpart of `build_approx`.
    pub fn from_samples(s: SParam, samples: &[(Point, f64)]) -> Result<RandomApprox> {
        let body = lift_points(samples, LiftSpec::new(s))?;
        Ok(RandomApprox { s, body })
    }

    pub fn s_param(&self) -> SParam {
        self.s
    }

    pub fn body(&self) -> &LiftedBody {
        &self.body
    }

    /// Support of the approximant: the hull of the accepted points.
    pub fn support(&self) -> VPolytope {
        self.body.base_hull()
    }

    /// Pointwise value; zero outside the support hull.
    pub fn evaluate(&self, x: &Point) -> Result<f64> {
        unlift_eval(&self.body, self.s, x)
    }
}

/// Builds the random approximant from the cloud's sampled graph points:
/// the least s-concave function lying on or above every `(X_i, Z_i)`.
pub fn build_approx(f: &SConcaveFn, cloud: &SampleCloud) -> Result<RandomApprox> {
    if cloud.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: cloud.dim(),
        });
    }
    RandomApprox::from_samples(f.s_param(), cloud.samples())
}

/// Integral of a random approximant.
pub fn integral_approx(approx: &RandomApprox) -> Result<f64> {
    nu_measure(approx.body(), approx.s_param())
}
