//! Power means, s-concave function families, and a grid-based
//! sup-convolution route.
//!
//! An s-concave function satisfies `f(lx + (1-l)y) >= M_s(f(x), f(y); l)`
//! where `M_s` is the s-power mean with the zero-annihilation convention.
//! Families here are constructed so that the transformed profile (`f^s`,
//! or `-log f` at `s = 0`) is affine-or-better, which makes them exactly
//! s-concave and gives every family a closed-form integral.
//!
//! All families are compactly supported: fractional-power and exponential
//! profiles are truncated radially so that rejection sampling and grid
//! rasterization operate on bounded boxes.

use alloc::vec;
use alloc::vec::Vec;

use crate::convex::{Axis, BodyKind, LiftedBody, Point, VPolytope};
use crate::error::{Error, Result};
#[allow(unused_imports)] // test-profile builds link std, whose inherent float methods shadow the shim
use crate::fm::FloatExt;
use crate::tol::EPS_VERTEX;

/// Order of a two-point power mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeanOrder {
    MinusInfinity,
    /// Order-`p` mean; `p = 0` is the geometric mean.
    Finite(f64),
    PlusInfinity,
}

/// Two-point power mean `M_p(a, b; lambda)` with the zero-annihilation
/// convention: the mean is zero whenever either argument is zero, for
/// every order including `+inf`.
pub fn m_mean(order: MeanOrder, a: f64, b: f64, lambda: f64) -> f64 {
    debug_assert!(a >= 0.0 && b >= 0.0);
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    match order {
        MeanOrder::MinusInfinity => a.min(b),
        MeanOrder::PlusInfinity => a.max(b),
        MeanOrder::Finite(p) => {
            if p == 0.0 {
                a.powf(lambda) * b.powf(1.0 - lambda)
            } else {
                (lambda * a.powf(p) + (1.0 - lambda) * b.powf(p)).powf(1.0 / p)
            }
        }
    }
}

/// Concavity parameter `s` tied to an ambient dimension `n`, restricted to
/// the admissible range `s >= -1/n` where the dimensional mean inequality
/// is meaningful.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SParam {
    s: f64,
    dim: usize,
}

impl SParam {
    pub fn new(s: f64, dim: usize) -> Result<SParam> {
        if !(1..=2).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !s.is_finite() || s < -1.0 / dim as f64 - EPS_VERTEX {
            return Err(Error::InvalidSRange { s, dim });
        }
        Ok(SParam { s, dim })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_log_concave(&self) -> bool {
        self.s == 0.0
    }

    /// Which lifted-body side represents the transformed profile: the
    /// hypograph of `f^s` for `s > 0`, the epigraph of `f^s` (resp.
    /// `-log f`) for `s < 0` (resp. `s = 0`).
    pub fn body_kind(&self) -> BodyKind {
        if self.s > 0.0 {
            BodyKind::Hypograph
        } else {
            BodyKind::Epigraph
        }
    }

    /// The mean order `s / (1 + n s)` governing how integrals of
    /// sup-convolutions dominate the integrals of the inputs. At the
    /// endpoint `s = -1/n` the order degenerates to `-inf`.
    pub fn integral_mean_order(&self) -> MeanOrder {
        let n = self.dim as f64;
        let denom = 1.0 + n * self.s;
        if denom <= EPS_VERTEX {
            MeanOrder::MinusInfinity
        } else {
            MeanOrder::Finite(self.s / denom)
        }
    }
}

fn ball_measure(dim: usize, r: f64) -> f64 {
    let r = r.max(0.0);
    match dim {
        1 => 2.0 * r,
        2 => core::f64::consts::PI * r * r,
        _ => unreachable!("dimension validated upstream"),
    }
}

/// `int_1^w t^p dt`, with the logarithmic branch at `p = -1`.
fn power_antiderivative(w: f64, p: f64) -> f64 {
    if (p + 1.0).abs() <= 1e-12 {
        w.ln()
    } else {
        (w.powf(p + 1.0) - 1.0) / (p + 1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Shape {
    /// `h * (1 - |x|/r)_+^(1/s)` on the ball of radius `r`; requires `s > 0`.
    Cap { h: f64, r: f64 },
    /// `h * (1 + |x|/r)^(1/s)` truncated at radius `cutoff`; requires `s < 0`.
    NegCap { h: f64, r: f64, cutoff: f64 },
    /// `h * exp(-|x|^2 / sigma^2)` truncated at radius `cutoff`; `s = 0`.
    LogGauss { h: f64, sigma: f64, cutoff: f64 },
    /// `h * exp(-|x|_1 / sigma)` truncated at l1-radius `cutoff`; `s = 0`.
    LogTent { h: f64, sigma: f64, cutoff: f64 },
    /// `h` on a polytope, zero outside; s-concave for every admissible `s`.
    Indicator { h: f64, set: VPolytope },
    /// `h` on a Euclidean ball; the rearranged form of a 2D indicator.
    IndicatorBall { h: f64, r: f64 },
}

/// A member of one of the built-in s-concave families, positioned by a
/// center point (indicators carry their position in the set itself).
#[derive(Clone, Debug, PartialEq)]
pub struct SConcaveFn {
    s: SParam,
    center: Point,
    shape: Shape,
}

fn check_positive(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        let _ = what;
        Err(Error::InvalidParameter("family parameter must be positive and finite"))
    }
}

impl SConcaveFn {
    fn build(s: SParam, center: Point, shape: Shape) -> Result<SConcaveFn> {
        if center.dim() != s.dim() {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                got: center.dim(),
            });
        }
        Ok(SConcaveFn { s, center, shape })
    }

    pub fn cap(s: SParam, h: f64, r: f64, center: Point) -> Result<SConcaveFn> {
        if s.s() <= 0.0 {
            return Err(Error::InvalidParameter("cap family needs s > 0"));
        }
        SConcaveFn::build(
            s,
            center,
            Shape::Cap {
                h: check_positive(h, "h")?,
                r: check_positive(r, "r")?,
            },
        )
    }

    pub fn neg_cap(s: SParam, h: f64, r: f64, cutoff: f64, center: Point) -> Result<SConcaveFn> {
        if s.s() >= 0.0 {
            return Err(Error::InvalidParameter("neg_cap family needs s < 0"));
        }
        SConcaveFn::build(
            s,
            center,
            Shape::NegCap {
                h: check_positive(h, "h")?,
                r: check_positive(r, "r")?,
                cutoff: check_positive(cutoff, "cutoff")?,
            },
        )
    }

    pub fn log_gauss(s: SParam, h: f64, sigma: f64, cutoff: f64, center: Point) -> Result<SConcaveFn> {
        if !s.is_log_concave() {
            return Err(Error::InvalidParameter("log_gauss family needs s = 0"));
        }
        SConcaveFn::build(
            s,
            center,
            Shape::LogGauss {
                h: check_positive(h, "h")?,
                sigma: check_positive(sigma, "sigma")?,
                cutoff: check_positive(cutoff, "cutoff")?,
            },
        )
    }

    pub fn log_tent(s: SParam, h: f64, sigma: f64, cutoff: f64, center: Point) -> Result<SConcaveFn> {
        if !s.is_log_concave() {
            return Err(Error::InvalidParameter("log_tent family needs s = 0"));
        }
        SConcaveFn::build(
            s,
            center,
            Shape::LogTent {
                h: check_positive(h, "h")?,
                sigma: check_positive(sigma, "sigma")?,
                cutoff: check_positive(cutoff, "cutoff")?,
            },
        )
    }

    pub fn indicator(s: SParam, h: f64, set: VPolytope) -> Result<SConcaveFn> {
        if set.dim() != s.dim() {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                got: set.dim(),
            });
        }
        if set.measure() <= 0.0 {
            return Err(Error::ZeroMeasureSupport);
        }
        let center = match set.dim() {
            1 => {
                let v = set.vertices();
                Point::one(0.5 * (v[0].coord(0) + v[v.len() - 1].coord(0)))
            }
            _ => {
                let v = set.vertices();
                let mut cx = 0.0;
                let mut cy = 0.0;
                for p in v {
                    cx += p.coord(0);
                    cy += p.coord(1);
                }
                Point::two(cx / v.len() as f64, cy / v.len() as f64)
            }
        };
        SConcaveFn::build(
            s,
            center,
            Shape::Indicator {
                h: check_positive(h, "h")?,
                set,
            },
        )
    }

    pub fn indicator_ball(s: SParam, h: f64, r: f64, center: Point) -> Result<SConcaveFn> {
        SConcaveFn::build(
            s,
            center,
            Shape::IndicatorBall {
                h: check_positive(h, "h")?,
                r: check_positive(r, "r")?,
            },
        )
    }

    pub fn s_param(&self) -> SParam {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn center(&self) -> Point {
        self.center
    }

    /// Peak value; every family attains its maximum at the center.
    pub fn height(&self) -> f64 {
        match &self.shape {
            Shape::Cap { h, .. }
            | Shape::NegCap { h, .. }
            | Shape::LogGauss { h, .. }
            | Shape::LogTent { h, .. }
            | Shape::Indicator { h, .. }
            | Shape::IndicatorBall { h, .. } => *h,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.shape {
            Shape::Cap { .. } => "cap",
            Shape::NegCap { .. } => "neg_cap",
            Shape::LogGauss { .. } => "log_gauss",
            Shape::LogTent { .. } => "log_tent",
            Shape::Indicator { .. } => "indicator",
            Shape::IndicatorBall { .. } => "indicator_ball",
        }
    }

    fn radial(&self, x: &Point) -> f64 {
        let d = *x - self.center;
        d.as_slice().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    fn l1(&self, x: &Point) -> f64 {
        let d = *x - self.center;
        d.as_slice().iter().map(|c| c.abs()).sum()
    }

    /// Pointwise value; zero outside the (compact) support.
    pub fn evaluate(&self, x: &Point) -> f64 {
        if x.dim() != self.dim() {
            return 0.0;
        }
        match &self.shape {
            Shape::Cap { h, r } => {
                let u = 1.0 - self.radial(x) / r;
                if u <= 0.0 {
                    0.0
                } else {
                    h * u.powf(1.0 / self.s.s())
                }
            }
            Shape::NegCap { h, r, cutoff } => {
                let rho = self.radial(x);
                if rho > *cutoff {
                    0.0
                } else {
                    h * (1.0 + rho / r).powf(1.0 / self.s.s())
                }
            }
            Shape::LogGauss { h, sigma, cutoff } => {
                let rho = self.radial(x);
                if rho > *cutoff {
                    0.0
                } else {
                    h * (-(rho * rho) / (sigma * sigma)).exp()
                }
            }
            Shape::LogTent { h, sigma, cutoff } => {
                let t = self.l1(x);
                if t > *cutoff {
                    0.0
                } else {
                    h * (-t / sigma).exp()
                }
            }
            Shape::Indicator { h, set } => {
                if set.contains(x, EPS_VERTEX) {
                    *h
                } else {
                    0.0
                }
            }
            Shape::IndicatorBall { h, r } => {
                if self.radial(x) <= *r {
                    *h
                } else {
                    0.0
                }
            }
        }
    }

    /// Axis-aligned bounding box of the support.
    pub fn support_box(&self) -> (Point, Point) {
        let reach = match &self.shape {
            Shape::Cap { r, .. } => *r,
            Shape::NegCap { cutoff, .. }
            | Shape::LogGauss { cutoff, .. }
            | Shape::LogTent { cutoff, .. } => *cutoff,
            Shape::IndicatorBall { r, .. } => *r,
            Shape::Indicator { set, .. } => {
                let v = set.vertices();
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for p in v {
                    for i in 0..p.dim() {
                        lo[i] = lo[i].min(p.coord(i));
                        hi[i] = hi[i].max(p.coord(i));
                    }
                }
                return match self.dim() {
                    1 => (Point::one(lo[0]), Point::one(hi[0])),
                    _ => (Point::two(lo[0], lo[1]), Point::two(hi[0], hi[1])),
                };
            }
        };
        match self.dim() {
            1 => (
                Point::one(self.center.coord(0) - reach),
                Point::one(self.center.coord(0) + reach),
            ),
            _ => (
                Point::two(self.center.coord(0) - reach, self.center.coord(1) - reach),
                Point::two(self.center.coord(0) + reach, self.center.coord(1) + reach),
            ),
        }
    }

    /// Exact Lebesgue integral.
    pub fn integral(&self) -> f64 {
        let n = self.dim();
        match &self.shape {
            Shape::Cap { h, r } => {
                let q = 1.0 / self.s.s();
                match n {
                    1 => 2.0 * h * r / (q + 1.0),
                    _ => {
                        2.0 * core::f64::consts::PI * h * r * r / ((q + 1.0) * (q + 2.0))
                    }
                }
            }
            Shape::NegCap { h, r, cutoff } => {
                let q = 1.0 / self.s.s();
                let w = 1.0 + cutoff / r;
                match n {
                    1 => 2.0 * h * r * power_antiderivative(w, q),
                    _ => {
                        2.0 * core::f64::consts::PI
                            * h
                            * r
                            * r
                            * (power_antiderivative(w, q + 1.0) - power_antiderivative(w, q))
                    }
                }
            }
            Shape::LogGauss { h, sigma, cutoff } => match n {
                1 => h * sigma * core::f64::consts::PI.sqrt() * crate::fm::FloatExt::erf(cutoff / sigma),
                _ => {
                    let e = (-(cutoff * cutoff) / (sigma * sigma)).exp();
                    core::f64::consts::PI * h * sigma * sigma * (1.0 - e)
                }
            },
            Shape::LogTent { h, sigma, cutoff } => {
                let e = (-cutoff / sigma).exp();
                match n {
                    1 => 2.0 * h * sigma * (1.0 - e),
                    _ => 4.0 * h * sigma * (sigma - e * (sigma + cutoff)),
                }
            }
            Shape::Indicator { h, set } => h * set.measure(),
            Shape::IndicatorBall { h, r } => h * ball_measure(n, *r),
        }
    }

    /// Measure of the super-level set `{f >= t}` for `t > 0`.
    pub fn level_set_measure(&self, t: f64) -> Result<f64> {
        // NaN must also be rejected, hence the negated comparison.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(t > 0.0) {
            return Err(Error::InvalidParameter("level must be positive"));
        }
        let n = self.dim();
        let h = self.height();
        if t > h {
            return Ok(0.0);
        }
        Ok(match &self.shape {
            Shape::Cap { r, .. } => ball_measure(n, r * (1.0 - (t / h).powf(self.s.s()))),
            Shape::NegCap { r, cutoff, .. } => {
                let rho = (r * ((t / h).powf(self.s.s()) - 1.0)).min(*cutoff);
                ball_measure(n, rho)
            }
            Shape::LogGauss { sigma, cutoff, .. } => {
                let rho = (sigma * (h / t).ln().sqrt()).min(*cutoff);
                ball_measure(n, rho)
            }
            Shape::LogTent { sigma, cutoff, .. } => {
                let tt = (sigma * (h / t).ln()).min(*cutoff);
                match n {
                    1 => 2.0 * tt,
                    _ => 2.0 * tt * tt,
                }
            }
            Shape::Indicator { set, .. } => set.measure(),
            Shape::IndicatorBall { r, .. } => ball_measure(n, *r),
        })
    }

    /// Symmetric decreasing rearrangement. Radially decreasing families
    /// recenter at the origin; a polytope indicator becomes the centered
    /// interval or ball of equal measure. The 2D l1-tent also recenters,
    /// which preserves its level-set geometry rather than rounding it.
    pub fn rearrange(&self) -> SConcaveFn {
        let origin = match self.dim() {
            1 => Point::one(0.0),
            _ => Point::two(0.0, 0.0),
        };
        match &self.shape {
            Shape::Indicator { h, set } => {
                let vol = set.measure();
                match self.dim() {
                    1 => {
                        let half = vol / 2.0;
                        let set = VPolytope::hull(&[Point::one(-half), Point::one(half)])
                            .expect("two points");
                        SConcaveFn::indicator(self.s, *h, set).expect("valid rearrangement")
                    }
                    _ => {
                        let r = (vol / core::f64::consts::PI).sqrt();
                        SConcaveFn::indicator_ball(self.s, *h, r, origin)
                            .expect("valid rearrangement")
                    }
                }
            }
            _ => SConcaveFn {
                s: self.s,
                center: origin,
                shape: self.shape.clone(),
            },
        }
    }

    /// The finitely generated lifted body that represents the transformed
    /// profile exactly, when one exists: piecewise-linear transformed
    /// profiles (1D cap and neg-cap, l1-tents, indicators over polytopes).
    pub fn exact_lift(&self) -> Option<LiftedBody> {
        let s = self.s.s();
        let kind = self.s.body_kind();
        let h = self.height();
        let level = |v: f64| -> f64 {
            if s == 0.0 {
                -v.ln()
            } else {
                v.powf(s)
            }
        };
        let gens: Vec<(Point, f64)> = match &self.shape {
            Shape::Cap { r, .. } => {
                if self.dim() != 1 {
                    return None;
                }
                let c = self.center.coord(0);
                vec![
                    (Point::one(c - r), 0.0),
                    (Point::one(c), level(h)),
                    (Point::one(c + r), 0.0),
                ]
            }
            Shape::NegCap { r, cutoff, .. } => {
                if self.dim() != 1 {
                    return None;
                }
                let c = self.center.coord(0);
                let edge = level(h) * (1.0 + cutoff / r);
                vec![
                    (Point::one(c - cutoff), edge),
                    (Point::one(c), level(h)),
                    (Point::one(c + cutoff), edge),
                ]
            }
            Shape::LogTent { sigma, cutoff, .. } => {
                let base = -h.ln();
                let edge = base + cutoff / sigma;
                match self.dim() {
                    1 => {
                        let c = self.center.coord(0);
                        vec![
                            (Point::one(c - cutoff), edge),
                            (Point::one(c), base),
                            (Point::one(c + cutoff), edge),
                        ]
                    }
                    _ => {
                        let (cx, cy) = (self.center.coord(0), self.center.coord(1));
                        vec![
                            (Point::two(cx - cutoff, cy), edge),
                            (Point::two(cx + cutoff, cy), edge),
                            (Point::two(cx, cy - cutoff), edge),
                            (Point::two(cx, cy + cutoff), edge),
                            (Point::two(cx, cy), base),
                        ]
                    }
                }
            }
            Shape::Indicator { set, .. } => set
                .vertices()
                .iter()
                .map(|v| (*v, level(h)))
                .collect(),
            Shape::LogGauss { .. } | Shape::IndicatorBall { .. } => {
                return None;
            }
        };
        Some(LiftedBody::new(self.dim(), kind, &gens).expect("valid generators"))
    }
}

/// Function sampled on a uniform grid of cell centers; the mass is the
/// cell sum scaled by the cell measure.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFn {
    dim: usize,
    origin: [f64; 2],
    step: f64,
    n: [usize; 2],
    vals: Vec<f64>,
}

impl GridFn {
    /// Samples `f` at cell centers on a grid of spacing `step` covering
    /// the support box.
    pub fn rasterize(f: &SConcaveFn, step: f64) -> Result<GridFn> {
        let (lo, hi) = f.support_box();
        GridFn::tabulate(f.dim(), &lo, &hi, step, |x| f.evaluate(x))
    }

    /// Samples an arbitrary evaluator at cell centers over the box
    /// `[lo, hi]` with spacing `step`.
    pub fn tabulate<F>(dim: usize, lo: &Point, hi: &Point, step: f64, eval: F) -> Result<GridFn>
    where
        F: Fn(&Point) -> f64,
    {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter("grid step must be positive"));
        }
        if !(1..=2).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if lo.dim() != dim || hi.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: lo.dim().min(hi.dim()),
            });
        }
        let mut n = [1usize; 2];
        let mut origin = [0.0f64; 2];
        for i in 0..dim {
            let extent = hi.coord(i) - lo.coord(i);
            if extent < 0.0 {
                return Err(Error::InvalidParameter("tabulation box is inverted"));
            }
            n[i] = ((extent / step).ceil() as usize).max(1);
            origin[i] = lo.coord(i) + step / 2.0;
        }
        let mut vals = Vec::with_capacity(n[0] * n[1]);
        for iy in 0..n[1] {
            for ix in 0..n[0] {
                let x = match dim {
                    1 => Point::one(origin[0] + ix as f64 * step),
                    _ => Point::two(origin[0] + ix as f64 * step, origin[1] + iy as f64 * step),
                };
                vals.push(eval(&x));
            }
        }
        Ok(GridFn {
            dim,
            origin,
            step,
            n,
            vals,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn counts(&self) -> (usize, usize) {
        (self.n[0], self.n[1])
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.vals[iy * self.n[0] + ix]
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point {
        match self.dim {
            1 => Point::one(self.origin[0] + ix as f64 * self.step),
            _ => Point::two(
                self.origin[0] + ix as f64 * self.step,
                self.origin[1] + iy as f64 * self.step,
            ),
        }
    }

    /// Riemann mass: cell sum times cell measure.
    pub fn mass(&self) -> f64 {
        let cell = self.step.powi(self.dim as i32);
        self.vals.iter().sum::<f64>() * cell
    }

    pub fn max_value(&self) -> f64 {
        self.vals.iter().fold(0.0f64, |a, &b| a.max(b))
    }

    /// Steiner symmetral along `axis`: each fiber is replaced by its
    /// symmetric decreasing rearrangement about the fiber midpoint. The
    /// multiset of fiber values is permuted, so mass is preserved exactly.
    pub fn steiner_symmetral(&self, axis: Axis) -> Result<GridFn> {
        let ai = axis.index();
        if ai >= self.dim {
            return Err(Error::InvalidParameter("axis outside grid dimension"));
        }
        let len = self.n[ai];
        // Target positions ordered center-out: nearest to the fiber
        // midpoint first, ties broken toward the lower index.
        let center = (len as f64 - 1.0) / 2.0;
        let mut slots: Vec<usize> = (0..len).collect();
        slots.sort_by(|&a, &b| {
            let da = (a as f64 - center).abs();
            let db = (b as f64 - center).abs();
            da.total_cmp(&db).then(a.cmp(&b))
        });
        let mut out = self.clone();
        let fibers = self.vals.len() / len;
        for f in 0..fibers {
            let index = |k: usize| -> usize {
                if ai == 0 {
                    f * len + k
                } else {
                    k * self.n[0] + f
                }
            };
            let mut fiber: Vec<f64> = (0..len).map(|k| self.vals[index(k)]).collect();
            fiber.sort_by(|a, b| b.total_cmp(a));
            for (rank, &slot) in slots.iter().enumerate() {
                out.vals[index(slot)] = fiber[rank];
            }
        }
        Ok(out)
    }
}

/// Grid route for the sup-convolution
/// `(f ⋆ g)(lx + (1-l)y) >= M_order(f(x), g(y); l)`:
/// every cell pair scatters its mean onto the snapped combination cell,
/// keeping the largest contribution. This is a lower approximation of the
/// exact sup-convolution with resolution-level error.
pub fn sup_convolution_grid(
    f: &GridFn,
    g: &GridFn,
    lambda: f64,
    order: MeanOrder,
) -> Result<GridFn> {
    if f.dim != g.dim {
        return Err(Error::GridMismatch);
    }
    if (f.step - g.step).abs() > 1e-12 * f.step.max(g.step) {
        return Err(Error::GridMismatch);
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidLambda(lambda));
    }
    let step = f.step;
    let mut n = [1usize; 2];
    let mut origin = [0.0f64; 2];
    for i in 0..f.dim {
        let span = lambda * (f.n[i] as f64 - 1.0) + (1.0 - lambda) * (g.n[i] as f64 - 1.0);
        n[i] = (span + 0.5).floor() as usize + 1;
        origin[i] = lambda * f.origin[i] + (1.0 - lambda) * g.origin[i];
    }
    let mut vals = vec![0.0f64; n[0] * n[1]];
    for fy in 0..f.n[1] {
        for fx in 0..f.n[0] {
            let a = f.vals[fy * f.n[0] + fx];
            if a == 0.0 {
                continue;
            }
            for gy in 0..g.n[1] {
                for gx in 0..g.n[0] {
                    let b = g.vals[gy * g.n[0] + gx];
                    if b == 0.0 {
                        continue;
                    }
                    let v = m_mean(order, a, b, lambda);
                    let kx = (lambda * fx as f64 + (1.0 - lambda) * gx as f64 + 0.5).floor()
                        as usize;
                    let ky = (lambda * fy as f64 + (1.0 - lambda) * gy as f64 + 0.5).floor()
                        as usize;
                    let kx = kx.min(n[0] - 1);
                    let ky = ky.min(n[1] - 1);
                    let slot = &mut vals[ky * n[0] + kx];
                    if v > *slot {
                        *slot = v;
                    }
                }
            }
        }
    }
    Ok(GridFn {
        dim: f.dim,
        origin,
        step,
        n,
        vals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::VPolytope;

    const PI: f64 = core::f64::consts::PI;

    fn sp(s: f64, dim: usize) -> SParam {
        SParam::new(s, dim).unwrap()
    }

    /// Midpoint-rule integral oracle over the support box.
    fn numeric_integral(f: &SConcaveFn, cells: usize) -> f64 {
        let (lo, hi) = f.support_box();
        match f.dim() {
            1 => {
                let step = (hi.coord(0) - lo.coord(0)) / cells as f64;
                let mut acc = 0.0;
                for i in 0..cells {
                    let x = lo.coord(0) + (i as f64 + 0.5) * step;
                    acc += f.evaluate(&Point::one(x));
                }
                acc * step
            }
            _ => {
                let sx = (hi.coord(0) - lo.coord(0)) / cells as f64;
                let sy = (hi.coord(1) - lo.coord(1)) / cells as f64;
                let mut acc = 0.0;
                for iy in 0..cells {
                    for ix in 0..cells {
                        let x = lo.coord(0) + (ix as f64 + 0.5) * sx;
                        let y = lo.coord(1) + (iy as f64 + 0.5) * sy;
                        acc += f.evaluate(&Point::two(x, y));
                    }
                }
                acc * sx * sy
            }
        }
    }

    #[test]
    fn mean_limits_and_zero_annihilation() {
        assert_eq!(m_mean(MeanOrder::Finite(1.0), 1.0, 3.0, 0.5), 2.0);
        assert!((m_mean(MeanOrder::Finite(-1.0), 1.0, 3.0, 0.5) - 1.5).abs() < 1e-15);
        assert!((m_mean(MeanOrder::Finite(0.0), 4.0, 1.0, 0.5) - 2.0).abs() < 1e-15);
        assert_eq!(m_mean(MeanOrder::MinusInfinity, 2.0, 5.0, 0.3), 2.0);
        assert_eq!(m_mean(MeanOrder::PlusInfinity, 2.0, 5.0, 0.3), 5.0);
        for order in [
            MeanOrder::MinusInfinity,
            MeanOrder::Finite(-0.5),
            MeanOrder::Finite(0.0),
            MeanOrder::Finite(2.0),
            MeanOrder::PlusInfinity,
        ] {
            assert_eq!(m_mean(order, 0.0, 5.0, 0.5), 0.0);
            assert_eq!(m_mean(order, 5.0, 0.0, 0.5), 0.0);
        }
    }

    #[test]
    fn mean_between_min_and_max_and_monotone_in_order() {
        let (a, b, l): (f64, f64, f64) = (0.7, 2.9, 0.4);
        let orders = [-3.0, -1.0, -0.25, 0.0, 0.5, 1.0, 4.0];
        let mut prev = a.min(b);
        for p in orders {
            let m = m_mean(MeanOrder::Finite(p), a, b, l);
            assert!(m >= prev - 1e-12, "mean must grow with order");
            assert!(m <= a.max(b) + 1e-12);
            prev = m;
        }
    }

    #[test]
    fn s_param_range_and_exponent() {
        assert!(SParam::new(-1.5, 1).is_err());
        assert!(SParam::new(-0.75, 2).is_err());
        assert!(SParam::new(-1.0, 1).is_ok());
        let s = sp(1.0, 1);
        match s.integral_mean_order() {
            MeanOrder::Finite(p) => assert!((p - 0.5).abs() < 1e-15),
            _ => panic!("expected finite order"),
        }
        assert_eq!(sp(0.0, 2).integral_mean_order(), MeanOrder::Finite(0.0));
        assert_eq!(sp(-0.5, 2).integral_mean_order(), MeanOrder::MinusInfinity);
        assert_eq!(sp(0.5, 1).body_kind(), BodyKind::Hypograph);
        assert_eq!(sp(-0.5, 1).body_kind(), BodyKind::Epigraph);
        assert_eq!(sp(0.0, 1).body_kind(), BodyKind::Epigraph);
    }

    #[test]
    fn closed_form_integrals_match_frozen_values() {
        // Triangular hat: 2 * 1 * 1 / 2.
        let hat = SConcaveFn::cap(sp(1.0, 1), 1.0, 1.0, Point::one(0.0)).unwrap();
        assert!((hat.integral() - 1.0).abs() < 1e-15);
        // Cone of height 1 over the unit disc: pi / 3.
        let cone = SConcaveFn::cap(sp(1.0, 2), 1.0, 1.0, Point::two(0.0, 0.0)).unwrap();
        assert!((cone.integral() - PI / 3.0).abs() < 1e-15);
        // Hyperbola-profile decay at the log branch: 2 ln 2.
        let nc = SConcaveFn::neg_cap(sp(-1.0, 1), 1.0, 1.0, 1.0, Point::one(0.0)).unwrap();
        assert!((nc.integral() - 2.0 * core::f64::consts::LN_2).abs() < 1e-14);
        // Truncated Gaussian: sqrt(pi) * erf(2).
        let g = SConcaveFn::log_gauss(sp(0.0, 1), 1.0, 1.0, 2.0, Point::one(0.0)).unwrap();
        assert!((g.integral() - 1.764162781524843).abs() < 1e-12);
        // 2D exponential tent truncated at l1-radius 3: 4 - 16 e^{-3}.
        let t = SConcaveFn::log_tent(sp(0.0, 2), 1.0, 1.0, 3.0, Point::two(0.0, 0.0)).unwrap();
        assert!((t.integral() - (4.0 - 16.0 * (-3.0f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn closed_form_integrals_match_numeric_oracle() {
        let cases = [
            SConcaveFn::cap(sp(0.5, 1), 2.0, 1.5, Point::one(0.7)).unwrap(),
            SConcaveFn::cap(sp(2.0, 2), 1.0, 1.0, Point::two(0.3, -0.2)).unwrap(),
            SConcaveFn::neg_cap(sp(-0.4, 1), 1.0, 2.0, 3.0, Point::one(-0.5)).unwrap(),
            SConcaveFn::neg_cap(sp(-0.5, 2), 1.5, 1.0, 2.0, Point::two(0.0, 0.4)).unwrap(),
            SConcaveFn::neg_cap(sp(-0.25, 2), 1.0, 1.0, 1.5, Point::two(0.0, 0.0)).unwrap(),
            SConcaveFn::log_gauss(sp(0.0, 2), 1.0, 0.8, 2.0, Point::two(0.1, 0.1)).unwrap(),
            SConcaveFn::log_tent(sp(0.0, 1), 1.0, 0.5, 2.0, Point::one(0.2)).unwrap(),
            SConcaveFn::log_tent(sp(0.0, 2), 2.0, 1.0, 2.5, Point::two(-0.3, 0.6)).unwrap(),
        ];
        for f in &cases {
            let cells = if f.dim() == 1 { 400_000 } else { 2_000 };
            let num = numeric_integral(f, cells);
            let exact = f.integral();
            let rel = (num - exact).abs() / exact;
            // Midpoint error for these kinked-but-bounded profiles.
            assert!(
                rel < 5e-3,
                "{}: numeric {} vs exact {}",
                f.kind_name(),
                num,
                exact
            );
        }
    }

    #[test]
    fn indicator_integral_and_ball() {
        let tri =
            VPolytope::hull(&[Point::two(0.0, 0.0), Point::two(2.0, 0.0), Point::two(0.0, 2.0)])
                .unwrap();
        let ind = SConcaveFn::indicator(sp(1.0, 2), 3.0, tri).unwrap();
        assert!((ind.integral() - 6.0).abs() < 1e-12);
        let ball = SConcaveFn::indicator_ball(sp(1.0, 2), 3.0, 1.0, Point::two(0.0, 0.0)).unwrap();
        assert!((ball.integral() - 3.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn rearrangement_is_equimeasurable_and_centered() {
        let cases = [
            SConcaveFn::cap(sp(0.5, 2), 1.0, 1.5, Point::two(2.0, -1.0)).unwrap(),
            SConcaveFn::log_gauss(sp(0.0, 1), 2.0, 1.0, 3.0, Point::one(4.0)).unwrap(),
            SConcaveFn::log_tent(sp(0.0, 2), 1.0, 1.0, 2.0, Point::two(1.0, 1.0)).unwrap(),
        ];
        for f in &cases {
            let r = f.rearrange();
            assert!(r.center().approx_eq(
                &(if f.dim() == 1 {
                    Point::one(0.0)
                } else {
                    Point::two(0.0, 0.0)
                }),
                0.0
            ));
            assert!((f.integral() - r.integral()).abs() < 1e-12);
            for t in [0.1, 0.5, 0.9] {
                let lf = f.level_set_measure(t * f.height()).unwrap();
                let lr = r.level_set_measure(t * r.height()).unwrap();
                assert!((lf - lr).abs() < 1e-12);
            }
        }
        // A 2D polytope indicator rounds into the equal-area centered ball.
        let sq = VPolytope::axis_box(&Point::two(1.0, 1.0), &Point::two(3.0, 3.0)).unwrap();
        let ind = SConcaveFn::indicator(sp(-0.25, 2), 2.0, sq).unwrap();
        let r = ind.rearrange();
        assert_eq!(r.kind_name(), "indicator_ball");
        assert!((ind.integral() - r.integral()).abs() < 1e-12);
        // A 1D indicator becomes the centered interval.
        let seg = VPolytope::hull(&[Point::one(5.0), Point::one(9.0)]).unwrap();
        let ind1 = SConcaveFn::indicator(sp(1.0, 1), 1.0, seg).unwrap();
        let r1 = ind1.rearrange();
        let (lo, hi) = r1.support_box();
        assert!((lo.coord(0) + 2.0).abs() < 1e-12 && (hi.coord(0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_lift_reproduces_pointwise_values() {
        use crate::lift::unlift_eval;
        let cases = [
            SConcaveFn::cap(sp(0.5, 1), 2.0, 1.0, Point::one(0.5)).unwrap(),
            SConcaveFn::cap(sp(2.0, 1), 1.0, 2.0, Point::one(-1.0)).unwrap(),
            SConcaveFn::neg_cap(sp(-0.4, 1), 1.0, 1.0, 2.0, Point::one(0.0)).unwrap(),
            SConcaveFn::log_tent(sp(0.0, 1), 1.0, 1.0, 2.0, Point::one(0.3)).unwrap(),
            SConcaveFn::log_tent(sp(0.0, 2), 2.0, 0.7, 1.5, Point::two(0.1, -0.2)).unwrap(),
        ];
        // Distance from `x` to the family's truncation surface, where the
        // function jumps to zero and float rounding can flip sides. `Cap`
        // decays continuously, so no collar is needed there.
        let truncation_gap = |f: &SConcaveFn, x: &Point| -> f64 {
            let off = *x - f.center();
            match &f.shape {
                Shape::NegCap { cutoff, .. } | Shape::LogGauss { cutoff, .. } => {
                    (off.norm() - cutoff).abs()
                }
                Shape::LogTent { cutoff, .. } => {
                    let l1: f64 = off.as_slice().iter().map(|c| c.abs()).sum();
                    (l1 - cutoff).abs()
                }
                _ => f64::INFINITY,
            }
        };
        for f in &cases {
            let body = f.exact_lift().expect("family is exactly liftable");
            let (lo, hi) = f.support_box();
            let steps = 41;
            for iy in 0..steps {
                for ix in 0..steps {
                    let x = match f.dim() {
                        1 => {
                            if iy > 0 {
                                continue;
                            }
                            Point::one(
                                lo.coord(0)
                                    + (hi.coord(0) - lo.coord(0)) * ix as f64 / (steps - 1) as f64,
                            )
                        }
                        _ => Point::two(
                            lo.coord(0)
                                + (hi.coord(0) - lo.coord(0)) * ix as f64 / (steps - 1) as f64,
                            lo.coord(1)
                                + (hi.coord(1) - lo.coord(1)) * iy as f64 / (steps - 1) as f64,
                        ),
                    };
                    if truncation_gap(f, &x) <= 1e-9 {
                        continue;
                    }
                    let direct = f.evaluate(&x);
                    let lifted = unlift_eval(&body, f.s_param(), &x).unwrap();
                    assert!(
                        (direct - lifted).abs() <= 1e-9 * (1.0 + direct.abs()),
                        "{} at {:?}: direct {} lifted {}",
                        f.kind_name(),
                        x.as_slice(),
                        direct,
                        lifted
                    );
                }
            }
        }
        // Indicator prisms lift exactly for every sign of s.
        for s in [sp(-0.4, 2), sp(0.0, 2), sp(1.0, 2)] {
            let sq = VPolytope::axis_box(&Point::two(0.0, 0.0), &Point::two(1.0, 2.0)).unwrap();
            let ind = SConcaveFn::indicator(s, 2.0, sq).unwrap();
            let body = ind.exact_lift().unwrap();
            for (x, want) in [
                (Point::two(0.5, 1.0), 2.0),
                (Point::two(0.999, 1.999), 2.0),
                (Point::two(1.5, 1.0), 0.0),
            ] {
                let got = unlift_eval(&body, s, &x).unwrap();
                assert!((got - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn grid_rasterize_mass_and_steiner_preserves_mass() {
        let seg = VPolytope::hull(&[Point::one(0.0), Point::one(1.0)]).unwrap();
        let f = SConcaveFn::indicator(sp(1.0, 1), 1.0, seg).unwrap();
        let grid = GridFn::rasterize(&f, 0.1).unwrap();
        assert!((grid.mass() - 1.0).abs() < 1e-12);

        let tent = SConcaveFn::log_tent(sp(0.0, 2), 1.0, 1.0, 2.0, Point::two(0.4, -0.3)).unwrap();
        let g = GridFn::rasterize(&tent, 0.05).unwrap();
        let sx = g.steiner_symmetral(Axis::X).unwrap();
        let sxy = sx.steiner_symmetral(Axis::Y).unwrap();
        assert!((g.mass() - sx.mass()).abs() < 1e-12);
        assert!((g.mass() - sxy.mass()).abs() < 1e-12);
        assert!((g.max_value() - sxy.max_value()).abs() < 1e-15);
    }

    #[test]
    fn grid_sup_convolution_of_boxes_matches_minkowski_mass() {
        // Indicator ⋆ indicator at any order is the indicator of the
        // Minkowski combination; masses must agree to resolution error.
        let a = SConcaveFn::indicator(
            sp(1.0, 1),
            1.0,
            VPolytope::hull(&[Point::one(0.0), Point::one(1.0)]).unwrap(),
        )
        .unwrap();
        let b = SConcaveFn::indicator(
            sp(1.0, 1),
            1.0,
            VPolytope::hull(&[Point::one(2.0), Point::one(4.0)]).unwrap(),
        )
        .unwrap();
        let ga = GridFn::rasterize(&a, 0.01).unwrap();
        let gb = GridFn::rasterize(&b, 0.01).unwrap();
        let out = sup_convolution_grid(&ga, &gb, 0.5, MeanOrder::Finite(0.0)).unwrap();
        // Support is 0.5*[0,1] + 0.5*[2,4] = [1, 2.5], mass 1.5.
        assert!((out.mass() - 1.5).abs() < 0.03);
        let err = sup_convolution_grid(&ga, &GridFn::rasterize(&b, 0.02).unwrap(), 0.5,
            MeanOrder::Finite(0.0));
        assert!(matches!(err, Err(Error::GridMismatch)));
    }
}
