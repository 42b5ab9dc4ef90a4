//! Shadow systems and section profiles.
//!
//! A shadow system moves each vertex of a body along a common direction at
//! its own constant speed; the family is the projection of one fixed body
//! one dimension up, which forces the volume (and, for lifted bodies, the
//! represented integral) to be convex in the parameter. Section profiles
//! go the other way: hyperplane sections of a convex body have
//! `(d-1)`-root measures that are concave across the body.
//!
//! Both facts are checked empirically by chord tests over parameter grids;
//! the tolerances are normalized by the scanned value scale.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex::{LiftedBody, Point, VPolytope};
use crate::error::{Error, Result};
#[allow(unused_imports)] // test-profile builds link std, whose inherent float methods shadow the shim
use crate::fm::FloatExt;
use crate::lift::nu_measure;
use crate::sampling::RandomApprox;
use crate::smeans::SParam;
use crate::tol::{EPS_CONVEXITY, EPS_VERTEX};

/// Fixed seed for the randomized symmetry probe; the probe is a
/// deterministic self-check, not an experiment input.
const PROBE_SEED: u64 = 0x5354_4549_4e45_5231;

fn unit_direction(direction: &Point) -> Result<Point> {
    let norm = direction.dot(direction).sqrt();
    if !norm.is_finite() || norm <= EPS_VERTEX {
        return Err(Error::InvalidParameter("direction must be nonzero"));
    }
    Ok(*direction * (1.0 / norm))
}

/// Linear parameter system of s-concave functions: graph points
/// `(x_i, z_i)` whose abscissae move along one direction at per-point
/// speeds, over a closed parameter interval. The member at `t` is the
/// least s-concave function above the moved points.
#[derive(Clone, Debug)]
pub struct LpsSpec {
    s: SParam,
    anchors: Vec<Point>,
    heights: Vec<f64>,
    speeds: Vec<f64>,
    direction: Point,
    t_lo: f64,
    t_hi: f64,
}

impl LpsSpec {
    /// Each triple is `(anchor, speed, height)` with height > 0.
    pub fn new(
        s: SParam,
        triples: &[(Point, f64, f64)],
        direction: Point,
        t_range: (f64, f64),
    ) -> Result<LpsSpec> {
        if triples.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let dim = s.dim();
        let mut anchors = Vec::with_capacity(triples.len());
        let mut speeds = Vec::with_capacity(triples.len());
        let mut heights = Vec::with_capacity(triples.len());
        for (a, v, z) in triples {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: a.dim(),
                });
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameter("speeds must be finite"));
            }
            if !(z.is_finite() && *z > 0.0) {
                return Err(Error::NonPositiveSample(*z));
            }
            anchors.push(*a);
            speeds.push(*v);
            heights.push(*z);
        }
        if direction.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: direction.dim(),
            });
        }
        let direction = unit_direction(&direction)?;
        let (t_lo, t_hi) = t_range;
        if !(t_lo.is_finite() && t_hi.is_finite() && t_lo < t_hi) {
            return Err(Error::InvalidParameter("parameter range must be a proper interval"));
        }
        Ok(LpsSpec {
            s,
            anchors,
            heights,
            speeds,
            direction,
            t_lo,
            t_hi,
        })
    }

    pub fn s_param(&self) -> SParam {
        self.s
    }

    pub fn range(&self) -> (f64, f64) {
        (self.t_lo, self.t_hi)
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// The moved graph points at parameter `t`.
    pub fn cloud_at(&self, t: f64) -> Result<Vec<(Point, f64)>> {
        if !(self.t_lo - EPS_VERTEX..=self.t_hi + EPS_VERTEX).contains(&t) {
            return Err(Error::TOutsideRange {
                t,
                lo: self.t_lo,
                hi: self.t_hi,
            });
        }
        Ok(self
            .anchors
            .iter()
            .zip(&self.speeds)
            .zip(&self.heights)
            .map(|((a, v), z)| (*a + self.direction * (t * v), *z))
            .collect())
    }
}

/// Member of a linear parameter system at parameter `t`.
pub fn lps_at(spec: &LpsSpec, t: f64) -> Result<RandomApprox> {
    RandomApprox::from_samples(spec.s, &spec.cloud_at(t)?)
}

/// Shear-projection of a body one dimension up: the image of each vertex
/// `(x, z)` under `x + t z * direction`, hulled. Projections of one fixed
/// body over varying `t` form a shadow system, which is the classical
/// source of volume convexity in `t`.
pub fn project_shadow(body: &VPolytope, direction: &Point, t: f64) -> Result<VPolytope> {
    if body.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let dim = body.dim();
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if direction.dim() != dim - 1 {
        return Err(Error::DimensionMismatch {
            expected: dim - 1,
            got: direction.dim(),
        });
    }
    let direction = unit_direction(direction)?;
    let pts: Vec<Point> = body
        .vertices()
        .iter()
        .map(|v| {
            let (x, z) = v.split_last();
            x + direction * (t * z)
        })
        .collect();
    VPolytope::hull(&pts)
}

/// Shadow system acting on a lifted body: generator base points move,
/// heights stay. Slicing commutes with the motion, so the represented
/// integral inherits convexity in `t` level by level.
///
/// Anchors are kept raw (two anchors may coincide at particular `t` while
/// carrying different speeds); members canonicalize on construction.
#[derive(Clone, Debug)]
pub struct ShadowEpiSpec {
    base_dim: usize,
    kind: crate::convex::BodyKind,
    anchors: Vec<(Point, f64)>,
    speeds: Vec<f64>,
    direction: Point,
}

impl ShadowEpiSpec {
    /// `speeds` aligns with `base.generators()` order.
    pub fn new(base: &LiftedBody, speeds: &[f64], direction: &Point) -> Result<ShadowEpiSpec> {
        if speeds.len() != base.generators().len() {
            return Err(Error::InvalidParameter("one speed per generator required"));
        }
        if direction.dim() != base.base_dim() {
            return Err(Error::DimensionMismatch {
                expected: base.base_dim(),
                got: direction.dim(),
            });
        }
        Ok(ShadowEpiSpec {
            base_dim: base.base_dim(),
            kind: base.kind(),
            anchors: base.generators().to_vec(),
            speeds: speeds.to_vec(),
            direction: unit_direction(direction)?,
        })
    }

    /// The symmetrizing system of a body along `direction`: anchors keep
    /// only their orthogonal component and move at their directional
    /// coordinate's speed. `t = 1` restores the body, `t = -1` its
    /// reflection, and `t = 0` collapses onto the symmetry hyperplane.
    pub fn symmetrizing(base: &LiftedBody, direction: &Point) -> Result<ShadowEpiSpec> {
        let direction = unit_direction(direction)?;
        if direction.dim() != base.base_dim() {
            return Err(Error::DimensionMismatch {
                expected: base.base_dim(),
                got: direction.dim(),
            });
        }
        let mut anchors = Vec::with_capacity(base.generators().len());
        let mut speeds = Vec::with_capacity(base.generators().len());
        for (y, h) in base.generators() {
            let c = y.dot(&direction);
            anchors.push((*y - direction * c, *h));
            speeds.push(c);
        }
        Ok(ShadowEpiSpec {
            base_dim: base.base_dim(),
            kind: base.kind(),
            anchors,
            speeds,
            direction,
        })
    }

    pub fn member(&self, t: f64) -> Result<LiftedBody> {
        let gens: Vec<(Point, f64)> = self
            .anchors
            .iter()
            .zip(&self.speeds)
            .map(|((y, h), v)| (*y + self.direction * (t * v), *h))
            .collect();
        LiftedBody::new(self.base_dim, self.kind, &gens)
    }

    /// Integral of the member at `t` under parameter `s`.
    pub fn nu_at(&self, s: SParam, t: f64) -> Result<f64> {
        nu_measure(&self.member(t)?, s)
    }
}

/// Chord-test report over a sampled scalar function of one parameter.
#[derive(Clone, Copy, Debug)]
pub struct ConvexityReport {
    /// Largest amount by which a sampled midpoint exceeds its chord,
    /// normalized by the value scale; convex data keeps this near zero
    /// or negative.
    pub max_chord_violation: f64,
    /// Parameter at which the worst violation occurred.
    pub worst_t: f64,
    /// Normalization: the largest absolute sampled value.
    pub scale: f64,
    /// `max_chord_violation <= EPS_CONVEXITY`.
    pub ok: bool,
}

/// Verifies discrete convexity of samples `(ts, vals)` by testing every
/// interior point against the chord of its neighbors. Handles non-uniform
/// strictly increasing grids.
pub fn scan_convexity(ts: &[f64], vals: &[f64]) -> Result<ConvexityReport> {
    if ts.len() != vals.len() {
        return Err(Error::InvalidParameter("grid and values must align"));
    }
    if ts.len() < 3 {
        return Err(Error::InvalidParameter("need at least three samples"));
    }
    for w in ts.windows(2) {
        // NaN entries must also be rejected, hence the negated comparison.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(w[1] > w[0]) {
            return Err(Error::InvalidParameter("grid must be strictly increasing"));
        }
    }
    let scale = vals.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-12);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_t = ts[0];
    for k in 1..ts.len() - 1 {
        let w = (ts[k] - ts[k - 1]) / (ts[k + 1] - ts[k - 1]);
        let chord = (1.0 - w) * vals[k - 1] + w * vals[k + 1];
        let violation = (vals[k] - chord) / scale;
        if violation > worst {
            worst = violation;
            worst_t = ts[k];
        }
    }
    Ok(ConvexityReport {
        max_chord_violation: worst,
        worst_t,
        scale,
        ok: worst <= EPS_CONVEXITY,
    })
}

/// Outcome of the randomized symmetrization probe.
#[derive(Clone, Copy, Debug)]
pub struct SteinerProbeReport {
    /// Worst normalized `|F(t) - F(-t)|` across trials; the symmetrizing
    /// system is exactly even, so this measures numerical noise only.
    pub max_evenness_gap: f64,
    /// Worst normalized chord violation of `t -> F(t)` across trials.
    pub max_chord_violation: f64,
    /// Worst normalized `F(0) - F(1)`; nonpositive when the collapsed
    /// member carries no more mass than the body itself.
    pub max_center_excess: f64,
    pub trials: usize,
    pub ok: bool,
}

/// Probes the convexity and evenness of `t -> nu(member(t))` for
/// symmetrizing shadow systems of `body` along directions drawn from an
/// internal fixed seed. Purely deterministic for a given body.
pub fn steiner_convexity_probe(
    body: &LiftedBody,
    s: SParam,
    trials: usize,
    grid_per_side: usize,
) -> Result<SteinerProbeReport> {
    if trials == 0 || grid_per_side == 0 {
        return Err(Error::InvalidParameter("probe needs trials and a grid"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let mut report = SteinerProbeReport {
        max_evenness_gap: 0.0,
        max_chord_violation: f64::NEG_INFINITY,
        max_center_excess: f64::NEG_INFINITY,
        trials,
        ok: true,
    };
    for _ in 0..trials {
        let direction = match body.base_dim() {
            1 => Point::one(1.0),
            _ => {
                let angle = rng.random::<f64>() * core::f64::consts::PI;
                Point::two(angle.cos(), angle.sin())
            }
        };
        let spec = ShadowEpiSpec::symmetrizing(body, &direction)?;
        let m = 2 * grid_per_side + 1;
        let mut ts = Vec::with_capacity(m);
        let mut vals = Vec::with_capacity(m);
        for k in 0..m {
            let t = -1.0 + 2.0 * k as f64 / (m - 1) as f64;
            ts.push(t);
            vals.push(spec.nu_at(s, t)?);
        }
        let scale = vals.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-12);
        for k in 0..grid_per_side {
            let gap = (vals[k] - vals[m - 1 - k]).abs() / scale;
            report.max_evenness_gap = report.max_evenness_gap.max(gap);
        }
        let conv = scan_convexity(&ts, &vals)?;
        report.max_chord_violation = report.max_chord_violation.max(conv.max_chord_violation);
        let center_excess = (vals[grid_per_side] - vals[m - 1]) / scale;
        report.max_center_excess = report.max_center_excess.max(center_excess);
    }
    report.ok = report.max_evenness_gap <= 1e-7
        && report.max_chord_violation <= EPS_CONVEXITY
        && report.max_center_excess <= EPS_CONVEXITY;
    Ok(report)
}

/// Measure of the section `{x : x[axis] = t}` of a convex body, taken in
/// the `(d-1)`-dimensional section plane. Exact for V-polytopes: section
/// vertices are on-plane vertices and edge-chord crossings.
pub fn section_measure(body: &VPolytope, axis_index: usize, t: f64) -> Result<f64> {
    let dim = body.dim();
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if axis_index >= dim {
        return Err(Error::InvalidParameter("section axis outside dimension"));
    }
    if body.is_empty() {
        return Ok(0.0);
    }
    let verts = body.vertices();
    let drop_axis = |p: &Point| -> Point {
        let mut kept = [0.0f64; 2];
        let mut k = 0;
        for i in 0..dim {
            if i != axis_index {
                kept[k] = p.coord(i);
                k += 1;
            }
        }
        match dim {
            2 => Point::one(kept[0]),
            _ => Point::two(kept[0], kept[1]),
        }
    };
    let mut hits: Vec<Point> = Vec::new();
    for v in verts {
        if (v.coord(axis_index) - t).abs() <= EPS_VERTEX {
            hits.push(drop_axis(v));
        }
    }
    for i in 0..verts.len() {
        for j in (i + 1)..verts.len() {
            let (ci, cj) = (verts[i].coord(axis_index), verts[j].coord(axis_index));
            if (ci - t) * (cj - t) < 0.0 {
                let w = (t - ci) / (cj - ci);
                let p = verts[i] + (verts[j] - verts[i]) * w;
                hits.push(drop_axis(&p));
            }
        }
    }
    if hits.is_empty() {
        return Ok(0.0);
    }
    Ok(VPolytope::hull(&hits)?.measure())
}

/// Section measures of a body along a coordinate axis, with the root
/// exponent under which the profile is concave.
#[derive(Clone, Debug)]
pub struct BrunnProfile {
    pub ts: Vec<f64>,
    pub measures: Vec<f64>,
    /// `1 / (d - 1)`.
    pub root_exponent: f64,
}

impl BrunnProfile {
    /// The profile raised to the concavity-restoring root.
    pub fn root_values(&self) -> Vec<f64> {
        self.measures
            .iter()
            .map(|m| {
                if *m <= 0.0 {
                    0.0
                } else {
                    m.powf(self.root_exponent)
                }
            })
            .collect()
    }
}

/// Scans `grid` evenly spaced sections of `body` across its extent along
/// the given axis.
pub fn brunn_profile(body: &VPolytope, axis_index: usize, grid: usize) -> Result<BrunnProfile> {
    let dim = body.dim();
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if axis_index >= dim {
        return Err(Error::InvalidParameter("section axis outside dimension"));
    }
    if grid < 3 {
        return Err(Error::InvalidParameter("need at least three sections"));
    }
    if body.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in body.vertices() {
        lo = lo.min(v.coord(axis_index));
        hi = hi.max(v.coord(axis_index));
    }
    let mut ts = Vec::with_capacity(grid);
    let mut measures = Vec::with_capacity(grid);
    for k in 0..grid {
        let t = lo + (hi - lo) * k as f64 / (grid - 1) as f64;
        ts.push(t);
        measures.push(section_measure(body, axis_index, t)?);
    }
    Ok(BrunnProfile {
        ts,
        measures,
        root_exponent: 1.0 / (dim as f64 - 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::BodyKind;
    use crate::smeans::SConcaveFn;

    fn sp(s: f64, dim: usize) -> SParam {
        SParam::new(s, dim).unwrap()
    }

    #[test]
    fn lps_integral_is_convex_in_the_parameter() {
        // Unit-height plateau over a square with two opposite corners
        // sliding horizontally; the integral equals the support area.
        let spec = LpsSpec::new(
            sp(1.0, 2),
            &[
                (Point::two(0.0, 0.0), 1.0, 1.0),
                (Point::two(1.0, 0.0), -0.5, 1.0),
                (Point::two(1.0, 1.0), 1.0, 1.0),
                (Point::two(0.0, 1.0), -0.5, 1.0),
            ],
            Point::two(1.0, 0.0),
            (-1.0, 1.0),
        )
        .unwrap();
        let mut ts = Vec::new();
        let mut vals = Vec::new();
        for k in 0..21 {
            let t = -1.0 + 0.1 * k as f64;
            let member = lps_at(&spec, t).unwrap();
            let integral = crate::sampling::integral_approx(&member).unwrap();
            // Constant height 1: the integral is exactly the support area.
            assert!((integral - member.support().measure()).abs() <= 1e-12);
            ts.push(t);
            vals.push(integral);
        }
        let report = scan_convexity(&ts, &vals).unwrap();
        assert!(report.ok, "violation {}", report.max_chord_violation);
        assert!(matches!(
            lps_at(&spec, 2.0),
            Err(Error::TOutsideRange { .. })
        ));
    }

    #[test]
    fn lps_support_and_shear_projection_agree() {
        // The support motion expressed directly and as the shadow of a
        // body one dimension up (third coordinate = speed) must coincide.
        let anchors = [
            Point::two(0.0, 0.0),
            Point::two(2.0, 0.3),
            Point::two(1.2, 1.7),
            Point::two(-0.4, 0.9),
        ];
        let speeds = [0.7, -0.2, 0.5, -1.1];
        let dir = Point::two(0.8, 0.6);
        let triples: Vec<(Point, f64, f64)> = anchors
            .iter()
            .zip(&speeds)
            .map(|(a, v)| (*a, *v, 1.0))
            .collect();
        let spec = LpsSpec::new(sp(1.0, 2), &triples, dir, (-2.0, 2.0)).unwrap();
        let lifted: Vec<Point> = anchors
            .iter()
            .zip(&speeds)
            .map(|(a, v)| Point::three(a.coord(0), a.coord(1), *v))
            .collect();
        let cylinder = VPolytope::hull(&lifted).unwrap();
        for t in [-1.5, -0.4, 0.0, 0.9, 2.0] {
            let a = lps_at(&spec, t).unwrap().support();
            let b = project_shadow(&cylinder, &dir, t).unwrap();
            assert!(a.approx_eq(&b, 1e-9), "mismatch at t = {}", t);
        }
    }

    #[test]
    fn lps_body_matches_moving_generator_shadow_system() {
        // A linear parameter system is the shadow system that moves the
        // lifted generators at the anchor speeds with heights fixed.
        let s = sp(1.0, 1);
        let triples = [
            (Point::one(0.0), 0.8, 1.0),
            (Point::one(0.7), -0.3, 2.2),
            (Point::one(1.5), 0.1, 1.4),
            (Point::one(2.2), -1.0, 0.6),
        ];
        let spec = LpsSpec::new(s, &triples, Point::one(1.0), (-1.0, 1.0)).unwrap();
        let base = LiftedBody::new(
            1,
            BodyKind::Hypograph,
            &triples.iter().map(|(a, _, z)| (*a, *z)).collect::<Vec<_>>(),
        )
        .unwrap();
        let speeds: Vec<f64> = base
            .generators()
            .iter()
            .map(|(a, _)| {
                triples
                    .iter()
                    .find(|(x, _, _)| x.approx_eq(a, 1e-12))
                    .expect("generator corresponds to an anchor")
                    .1
            })
            .collect();
        let shadow = ShadowEpiSpec::new(&base, &speeds, &Point::one(1.0)).unwrap();
        for t in [-1.0, -0.35, 0.0, 0.6, 1.0] {
            let via_lps = lps_at(&spec, t).unwrap();
            let via_shadow = shadow.member(t).unwrap().reduce();
            assert!(
                via_lps.body().approx_eq(&via_shadow, 1e-9),
                "mismatch at t = {}",
                t
            );
        }
    }

    #[test]
    fn lifted_shadow_integral_is_convex_and_even_under_symmetrization() {
        let tent = SConcaveFn::log_tent(sp(0.0, 2), 2.0, 0.7, 1.5, Point::two(0.6, -0.3))
            .unwrap()
            .exact_lift()
            .unwrap();
        let spec = ShadowEpiSpec::symmetrizing(&tent, &Point::two(1.0, 0.0)).unwrap();
        let mut ts = Vec::new();
        let mut vals = Vec::new();
        for k in 0..17 {
            let t = -1.0 + 2.0 * k as f64 / 16.0;
            ts.push(t);
            vals.push(spec.nu_at(sp(0.0, 2), t).unwrap());
        }
        // Exact evenness from reflection symmetry.
        for k in 0..8 {
            assert!((vals[k] - vals[16 - k]).abs() < 1e-9 * vals[16].max(1.0));
        }
        let report = scan_convexity(&ts, &vals).unwrap();
        assert!(report.ok, "violation {}", report.max_chord_violation);
        // The member at t = 1 restores the original integral.
        let original = nu_measure(&tent, sp(0.0, 2)).unwrap();
        assert!((vals[16] - original).abs() < 1e-9 * original);
        // Collapsed member carries no more mass.
        assert!(vals[8] <= original + 1e-9);
    }

    #[test]
    fn steiner_probe_passes_on_liftable_families() {
        let pyramid = crate::lift::lift_points(
            &[
                (Point::two(0.0, 0.0), 0.1),
                (Point::two(1.3, 0.0), 0.1),
                (Point::two(1.0, 1.1), 0.1),
                (Point::two(0.0, 1.0), 0.1),
                (Point::two(0.4, 0.6), 1.0),
            ],
            crate::lift::LiftSpec::new(sp(1.0, 2)),
        )
        .unwrap();
        let report = steiner_convexity_probe(&pyramid, sp(1.0, 2), 4, 4).unwrap();
        assert!(
            report.ok,
            "evenness {} chord {} center {}",
            report.max_evenness_gap, report.max_chord_violation, report.max_center_excess
        );

        let tent = SConcaveFn::log_tent(sp(0.0, 1), 1.0, 1.0, 2.0, Point::one(0.4))
            .unwrap()
            .exact_lift()
            .unwrap();
        let report = steiner_convexity_probe(&tent, sp(0.0, 1), 1, 6).unwrap();
        assert!(report.ok);
        assert_eq!(tent.kind(), BodyKind::Epigraph);
    }

    #[test]
    fn scan_convexity_flags_concave_data() {
        let ts: Vec<f64> = (0..11).map(|k| k as f64 / 10.0).collect();
        let concave: Vec<f64> = ts.iter().map(|t| -(t - 0.5) * (t - 0.5)).collect();
        let report = scan_convexity(&ts, &concave).unwrap();
        assert!(!report.ok);
        let convex: Vec<f64> = ts.iter().map(|t| (t - 0.5) * (t - 0.5)).collect();
        assert!(scan_convexity(&ts, &convex).unwrap().ok);
        assert!(scan_convexity(&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn sections_of_reference_solids() {
        let cube = VPolytope::axis_box(
            &Point::three(0.0, 0.0, 0.0),
            &Point::three(1.0, 1.0, 1.0),
        )
        .unwrap();
        for t in [0.0, 0.25, 1.0] {
            assert!((section_measure(&cube, 0, t).unwrap() - 1.0).abs() < 1e-9);
        }
        assert_eq!(section_measure(&cube, 0, 2.0).unwrap(), 0.0);

        let simplex = VPolytope::hull(&[
            Point::three(0.0, 0.0, 0.0),
            Point::three(1.0, 0.0, 0.0),
            Point::three(0.0, 1.0, 0.0),
            Point::three(0.0, 0.0, 1.0),
        ])
        .unwrap();
        // Cross-section at x = t is a right triangle with legs 1 - t.
        let got = section_measure(&simplex, 0, 0.25).unwrap();
        assert!((got - 0.5 * 0.75 * 0.75).abs() < 1e-9);

        let profile = brunn_profile(&simplex, 0, 21).unwrap();
        let roots = profile.root_values();
        // Root profile of the simplex is linear, hence concave.
        let neg: Vec<f64> = roots.iter().map(|r| -r).collect();
        assert!(scan_convexity(&profile.ts, &neg).unwrap().ok);

        // 2D: sections of a triangle are segments; length profile is
        // concave with exponent 1.
        let tri =
            VPolytope::hull(&[Point::two(0.0, 0.0), Point::two(2.0, 0.0), Point::two(1.0, 3.0)])
                .unwrap();
        let p2 = brunn_profile(&tri, 1, 13).unwrap();
        assert!((p2.root_exponent - 1.0).abs() < 1e-15);
        let neg2: Vec<f64> = p2.root_values().iter().map(|r| -r).collect();
        assert!(scan_convexity(&p2.ts, &neg2).unwrap().ok);
    }
}
