//! Exact V-polytope kernel in ambient dimensions 1 to 3.
//!
//! Polytopes are stored as minimal vertex sets in a canonical order so that
//! equality is decidable: 1D vertices ascending, 2D vertices
//! counterclockwise starting from the lexicographic minimum, 3D vertices
//! lexicographically sorted. Degenerate inputs collapse to the correct
//! lower-dimensional hull (point, segment, planar polygon) embedded in the
//! ambient space.
//!
//! [`LiftedBody`] is the finitely generated epigraph/hypograph form used by
//! the lifting machinery: a set of `(base point, height)` generators, read
//! as `conv(generators) + upward cone` for epigraphs and
//! `conv(generators ∪ base copies)` for hypographs.
//!
//! Assumptions: coordinates in model units of order one; tolerances from
//! [`crate::tol`] are absolute.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
#[allow(unused_imports)] // test-profile builds link std, whose inherent float methods shadow the shim
use crate::fm::FloatExt;
use crate::tol::{EPS_CROSS, EPS_FACE, EPS_VERTEX};

/// A point in dimension 1, 2, or 3. Unused coordinates are zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    dim: u8,
    c: [f64; 3],
}

impl Point {
    /// Builds a point from a coordinate slice of length 1 to 3.
    pub fn new(coords: &[f64]) -> Point {
        assert!(
            (1..=3).contains(&coords.len()),
            "point dimension must be 1..=3"
        );
        let mut c = [0.0; 3];
        c[..coords.len()].copy_from_slice(coords);
        Point {
            dim: coords.len() as u8,
            c,
        }
    }

    pub fn one(x: f64) -> Point {
        Point::new(&[x])
    }

    pub fn two(x: f64, y: f64) -> Point {
        Point::new(&[x, y])
    }

    pub fn three(x: f64, y: f64, z: f64) -> Point {
        Point::new(&[x, y, z])
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coord(&self, i: usize) -> f64 {
        assert!(i < self.dim());
        self.c[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c[..self.dim()]
    }

    /// Appends a final coordinate, producing a point one dimension up.
    pub fn lift(&self, h: f64) -> Point {
        assert!(self.dim() <= 2);
        let mut c = self.c;
        c[self.dim()] = h;
        Point {
            dim: self.dim + 1,
            c,
        }
    }

    /// Splits off the final coordinate.
    pub fn split_last(&self) -> (Point, f64) {
        assert!(self.dim() >= 2);
        let h = self.c[self.dim() - 1];
        let mut c = self.c;
        c[self.dim() - 1] = 0.0;
        (
            Point {
                dim: self.dim - 1,
                c,
            },
            h,
        )
    }

    pub(crate) fn lex_cmp(&self, other: &Point) -> Ordering {
        debug_assert_eq!(self.dim, other.dim);
        for i in 0..self.dim() {
            match self.c[i].total_cmp(&other.c[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// Coordinate-wise closeness within `tol`.
    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .as_slice()
                .iter()
                .zip(other.as_slice())
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    pub(crate) fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut s = 0.0;
        for i in 0..self.dim() {
            s += self.c[i] * other.c[i];
        }
        s
    }

    pub(crate) fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

impl core::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut c = self.c;
        for (x, r) in c.iter_mut().zip(rhs.c) {
            *x += r;
        }
        Point { dim: self.dim, c }
    }
}

impl core::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut c = self.c;
        for (x, r) in c.iter_mut().zip(rhs.c) {
            *x -= r;
        }
        Point { dim: self.dim, c }
    }
}

impl core::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        let mut c = self.c;
        for x in &mut c {
            *x *= k;
        }
        Point { dim: self.dim, c }
    }
}

fn cross3(a: Point, b: Point) -> Point {
    Point::three(
        a.c[1] * b.c[2] - a.c[2] * b.c[1],
        a.c[2] * b.c[0] - a.c[0] * b.c[2],
        a.c[0] * b.c[1] - a.c[1] * b.c[0],
    )
}

/// Coordinate axis used for fiber directions and section scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }

    /// Unit vector along the axis in the given ambient dimension.
    pub fn unit(self, dim: usize) -> Result<Point> {
        match (self, dim) {
            (Axis::X, 1) => Ok(Point::one(1.0)),
            (Axis::X, 2) => Ok(Point::two(1.0, 0.0)),
            (Axis::Y, 2) => Ok(Point::two(0.0, 1.0)),
            _ => Err(Error::InvalidParameter("axis outside ambient dimension")),
        }
    }
}

/// Convex polytope in vertex representation, dimensions 1 to 3.
///
/// Vertices are the minimal extreme set in canonical order. The empty
/// polytope is representable.
#[derive(Clone, Debug, PartialEq)]
pub struct VPolytope {
    dim: usize,
    verts: Vec<Point>,
}

impl VPolytope {
    /// The empty polytope in the given ambient dimension.
    pub fn empty(dim: usize) -> Result<VPolytope> {
        if (1..=3).contains(&dim) {
            Ok(VPolytope { dim, verts: Vec::new() })
        } else {
            Err(Error::UnsupportedDimension(dim))
        }
    }

    /// Convex hull of a nonempty point set. All points must share one
    /// ambient dimension. The result carries the minimal vertex set in
    /// canonical order; duplicate input points within
    /// [`EPS_VERTEX`] are merged.
    pub fn hull(points: &[Point]) -> Result<VPolytope> {
        let first = points.first().ok_or(Error::EmptyPointSet)?;
        let dim = first.dim();
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        let pts = dedup_sorted(points);
        let verts = match dim {
            1 => hull1(&pts),
            2 => {
                let idx = hull2_indexed(&pts, |p| (p.coord(0), p.coord(1)));
                idx.into_iter().map(|i| pts[i]).collect()
            }
            3 => hull3_vertices(&pts),
            _ => return Err(Error::UnsupportedDimension(dim)),
        };
        Ok(VPolytope { dim, verts })
    }

    /// Axis-aligned box `[lo, hi]` as a polytope, for fixtures and configs.
    pub fn axis_box(lo: &Point, hi: &Point) -> Result<VPolytope> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch {
                expected: lo.dim(),
                got: hi.dim(),
            });
        }
        let corners: Vec<Point> = match lo.dim() {
            1 => vec![*lo, *hi],
            2 => vec![
                *lo,
                Point::two(hi.coord(0), lo.coord(1)),
                *hi,
                Point::two(lo.coord(0), hi.coord(1)),
            ],
            3 => {
                let mut v = Vec::with_capacity(8);
                for mask in 0..8u8 {
                    let pick = |i: usize| {
                        if mask >> i & 1 == 1 {
                            hi.coord(i)
                        } else {
                            lo.coord(i)
                        }
                    };
                    v.push(Point::three(pick(0), pick(1), pick(2)));
                }
                v
            }
            d => return Err(Error::UnsupportedDimension(d)),
        };
        VPolytope::hull(&corners)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    /// Lebesgue measure in the ambient dimension: length, area, or volume.
    /// Degenerate (lower-dimensional) polytopes have measure zero.
    pub fn measure(&self) -> f64 {
        match self.dim {
            1 => {
                if self.verts.len() == 2 {
                    self.verts[1].coord(0) - self.verts[0].coord(0)
                } else {
                    0.0
                }
            }
            2 => {
                if self.verts.len() < 3 {
                    return 0.0;
                }
                let mut twice = 0.0;
                for i in 0..self.verts.len() {
                    let a = self.verts[i];
                    let b = self.verts[(i + 1) % self.verts.len()];
                    twice += a.coord(0) * b.coord(1) - b.coord(0) * a.coord(1);
                }
                twice.abs() / 2.0
            }
            3 => match classify3(&self.verts) {
                Some(Shape3::Full(seed)) => {
                    let faces = hull3_faces(&self.verts, seed);
                    let mut six = 0.0;
                    for f in &faces {
                        let a = self.verts[f.v[0]];
                        let b = self.verts[f.v[1]];
                        let c = self.verts[f.v[2]];
                        six += a.dot(&cross3(b, c));
                    }
                    six.abs() / 6.0
                }
                _ => 0.0,
            },
            _ => 0.0,
        }
    }

    /// Minkowski combination `lambda * P + (1 - lambda) * Q` via all-pairs
    /// vertex sums followed by a hull. `lambda` must lie in `[0, 1]`; the
    /// combination with an empty operand is empty.
    pub fn minkowski_lambda(&self, other: &VPolytope, lambda: f64) -> Result<VPolytope> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidLambda(lambda));
        }
        if self.is_empty() || other.is_empty() {
            return VPolytope::empty(self.dim);
        }
        let mut sums = Vec::with_capacity(self.verts.len() * other.verts.len());
        for p in &self.verts {
            for q in &other.verts {
                sums.push(*p * lambda + *q * (1.0 - lambda));
            }
        }
        VPolytope::hull(&sums)
    }

    /// Closed containment test with absolute slack `tol`.
    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        if p.dim() != self.dim || self.verts.is_empty() {
            return false;
        }
        match self.dim {
            1 => {
                let x = p.coord(0);
                let lo = self.verts[0].coord(0);
                let hi = self.verts[self.verts.len() - 1].coord(0);
                x >= lo - tol && x <= hi + tol
            }
            2 => match self.verts.len() {
                1 => p.approx_eq(&self.verts[0], tol),
                2 => dist_point_segment(*p, self.verts[0], self.verts[1]) <= tol,
                _ => {
                    for i in 0..self.verts.len() {
                        let a = self.verts[i];
                        let b = self.verts[(i + 1) % self.verts.len()];
                        let e = b - a;
                        let len = e.norm();
                        let cross = e.coord(0) * (p.coord(1) - a.coord(1))
                            - e.coord(1) * (p.coord(0) - a.coord(0));
                        if cross < -tol * len.max(1.0) {
                            return false;
                        }
                    }
                    true
                }
            },
            3 => match classify3(&self.verts) {
                Some(Shape3::Point(i)) => p.approx_eq(&self.verts[i], tol),
                Some(Shape3::Line(i, j)) => {
                    dist_point_segment(*p, self.verts[i], self.verts[j]) <= tol
                }
                Some(Shape3::Plane { origin, u, v }) => {
                    let d = *p - origin;
                    let n = cross3(u, v);
                    if d.dot(&n).abs() > tol {
                        return false;
                    }
                    let flat: Vec<Point> = self
                        .verts
                        .iter()
                        .map(|q| {
                            let dq = *q - origin;
                            Point::two(dq.dot(&u), dq.dot(&v))
                        })
                        .collect();
                    let poly = VPolytope {
                        dim: 2,
                        verts: {
                            let idx = hull2_indexed(&flat, |q| (q.coord(0), q.coord(1)));
                            idx.into_iter().map(|i| flat[i]).collect()
                        },
                    };
                    poly.contains(&Point::two(d.dot(&u), d.dot(&v)), tol)
                }
                Some(Shape3::Full(seed)) => {
                    let faces = hull3_faces(&self.verts, seed);
                    faces.iter().all(|f| f.signed_dist(p) <= tol)
                }
                None => false,
            },
            _ => false,
        }
    }

    /// Canonical-form equality up to coordinate tolerance `tol`.
    pub fn approx_eq(&self, other: &VPolytope, tol: f64) -> bool {
        self.dim == other.dim
            && self.verts.len() == other.verts.len()
            && self
                .verts
                .iter()
                .zip(&other.verts)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

fn dist_point_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let denom = ab.dot(&ab);
    let t = if denom <= EPS_VERTEX * EPS_VERTEX {
        0.0
    } else {
        ((p - a).dot(&ab) / denom).clamp(0.0, 1.0)
    };
    let proj = a + ab * t;
    (p - proj).norm()
}

/// Lexicographic sort plus adjacent-duplicate merge at [`EPS_VERTEX`].
fn dedup_sorted(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    let mut out: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last().map(|q| p.approx_eq(q, EPS_VERTEX)) != Some(true) {
            out.push(p);
        }
    }
    out
}

fn hull1(pts: &[Point]) -> Vec<Point> {
    // `pts` is sorted and deduplicated.
    if pts.len() == 1 {
        vec![pts[0]]
    } else {
        vec![pts[0], pts[pts.len() - 1]]
    }
}

/// Andrew's monotone chain over pre-sorted deduplicated points, returning
/// indices in counterclockwise order starting at the lexicographic minimum.
/// Collinear interior points are dropped, so the vertex set is minimal.
fn hull2_indexed<T, F>(pts: &[T], coords: F) -> Vec<usize>
where
    F: Fn(&T) -> (f64, f64),
{
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| {
        let (xi, yi) = coords(&pts[i]);
        let (xj, yj) = coords(&pts[j]);
        xi.total_cmp(&xj).then(yi.total_cmp(&yj))
    });
    // Merge duplicates that survived an upstream dedup in another metric.
    order.dedup_by(|&mut i, &mut j| {
        let (xi, yi) = coords(&pts[i]);
        let (xj, yj) = coords(&pts[j]);
        (xi - xj).abs() <= EPS_VERTEX && (yi - yj).abs() <= EPS_VERTEX
    });
    if order.len() <= 2 {
        return order;
    }
    let cross = |o: usize, a: usize, b: usize| -> f64 {
        let (ox, oy) = coords(&pts[o]);
        let (ax, ay) = coords(&pts[a]);
        let (bx, by) = coords(&pts[b]);
        (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
    };
    let build = |iter: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
        let mut chain: Vec<usize> = Vec::new();
        for i in iter {
            while chain.len() >= 2
                && cross(chain[chain.len() - 2], chain[chain.len() - 1], i) <= EPS_CROSS
            {
                chain.pop();
            }
            chain.push(i);
        }
        chain
    };
    let lower = build(&mut order.iter().copied());
    let upper = build(&mut order.iter().rev().copied());
    let mut hull = lower;
    hull.pop();
    hull.extend_from_slice(&upper[..upper.len() - 1]);
    if hull.len() < 2 {
        // Fully collinear input collapses to its extremes.
        return vec![order[0], order[order.len() - 1]];
    }
    hull
}

#[derive(Clone, Copy)]
enum Shape3 {
    Point(usize),
    Line(usize, usize),
    Plane { origin: Point, u: Point, v: Point },
    Full([usize; 4]),
}

/// Affine-rank classification of a deduplicated 3D point set, with
/// lexicographic tie-breaking so the seed points are genuine extreme
/// points of the hull.
fn classify3(pts: &[Point]) -> Option<Shape3> {
    if pts.is_empty() {
        return None;
    }
    let lex_min = (0..pts.len())
        .min_by(|&i, &j| pts[i].lex_cmp(&pts[j]))
        .unwrap();
    let lex_max = (0..pts.len())
        .max_by(|&i, &j| pts[i].lex_cmp(&pts[j]))
        .unwrap();
    if pts[lex_min].approx_eq(&pts[lex_max], EPS_VERTEX) {
        return Some(Shape3::Point(lex_min));
    }
    let p0 = pts[lex_min];
    let d = pts[lex_max] - p0;
    let dlen = d.norm();
    let dir = d * (1.0 / dlen);
    // Farthest from the seed line; ties resolve to the lexicographic
    // minimum, which keeps the selection an extreme point.
    let mut best2 = None::<(f64, usize)>;
    for (i, p) in pts.iter().enumerate() {
        let rel = *p - p0;
        let along = rel.dot(&dir);
        let off = (rel - dir * along).norm();
        best2 = pick_max(best2, off, i, pts);
    }
    let (off2, i2) = best2.unwrap();
    if off2 <= EPS_FACE {
        // Collinear: endpoints by parameter along the line.
        let mut lo = (f64::INFINITY, lex_min);
        let mut hi = (f64::NEG_INFINITY, lex_max);
        for (i, p) in pts.iter().enumerate() {
            let t = (*p - p0).dot(&dir);
            if t < lo.0 || (t <= lo.0 + EPS_VERTEX && pts[i].lex_cmp(&pts[lo.1]) == Ordering::Less)
            {
                lo = (t.min(lo.0), i);
            }
            if t > hi.0 || (t >= hi.0 - EPS_VERTEX && pts[i].lex_cmp(&pts[hi.1]) == Ordering::Greater)
            {
                hi = (t.max(hi.0), i);
            }
        }
        return Some(Shape3::Line(lo.1, hi.1));
    }
    let n0 = {
        let n = cross3(dir, pts[i2] - p0);
        n * (1.0 / n.norm())
    };
    let mut best3 = None::<(f64, usize)>;
    for (i, p) in pts.iter().enumerate() {
        let off = (*p - p0).dot(&n0).abs();
        best3 = pick_max(best3, off, i, pts);
    }
    let (off3, i3) = best3.unwrap();
    if off3 <= EPS_FACE {
        let v = cross3(n0, dir);
        return Some(Shape3::Plane {
            origin: p0,
            u: dir,
            v: v * (1.0 / v.norm()),
        });
    }
    Some(Shape3::Full([lex_min, lex_max, i2, i3]))
}

fn pick_max(
    best: Option<(f64, usize)>,
    val: f64,
    idx: usize,
    pts: &[Point],
) -> Option<(f64, usize)> {
    match best {
        None => Some((val, idx)),
        Some((bv, bi)) => {
            if val > bv + EPS_VERTEX {
                Some((val, idx))
            } else if val >= bv - EPS_VERTEX && pts[idx].lex_cmp(&pts[bi]) == Ordering::Less {
                Some((val.max(bv), idx))
            } else {
                Some((bv, bi))
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Face {
    v: [usize; 3],
    n: Point,
    off: f64,
}

impl Face {
    pub(crate) fn signed_dist(&self, p: &Point) -> f64 {
        self.n.dot(p) - self.off
    }

}

fn make_face(pts: &[Point], a: usize, b: usize, c: usize, inside: &Point) -> Option<Face> {
    let n = cross3(pts[b] - pts[a], pts[c] - pts[a]);
    let len = n.norm();
    if len <= 1e-14 {
        return None;
    }
    let mut n = n * (1.0 / len);
    let mut v = [a, b, c];
    if n.dot(inside) - n.dot(&pts[a]) > 0.0 {
        n = n * -1.0;
        v.swap(1, 2);
    }
    Some(Face {
        v,
        n,
        off: n.dot(&pts[a]),
    })
}

/// Incremental hull over a full-rank deduplicated 3D point set. Points are
/// added farthest-first with lexicographic tie-breaking, so only extreme
/// points ever become face corners and the final vertex set is minimal up
/// to tolerance.
fn hull3_faces(pts: &[Point], seed: [usize; 4]) -> Vec<Face> {
    let inside = (pts[seed[0]] + pts[seed[1]] + pts[seed[2]] + pts[seed[3]]) * 0.25;
    let mut faces: Vec<Face> = Vec::new();
    for (a, b, c) in [
        (seed[0], seed[1], seed[2]),
        (seed[0], seed[1], seed[3]),
        (seed[0], seed[2], seed[3]),
        (seed[1], seed[2], seed[3]),
    ] {
        if let Some(f) = make_face(pts, a, b, c, &inside) {
            faces.push(f);
        }
    }
    let mut dead = vec![false; pts.len()];
    for &s in &seed {
        dead[s] = true;
    }
    let mut guard = 0usize;
    loop {
        guard += 1;
        if guard > 4 * pts.len() + 16 {
            break;
        }
        // Farthest strictly-outside point across all faces, lex tie-break.
        let mut best = None::<(f64, usize)>;
        for (i, p) in pts.iter().enumerate() {
            if dead[i] {
                continue;
            }
            let mut d = f64::NEG_INFINITY;
            for f in &faces {
                d = d.max(f.signed_dist(p));
            }
            if d > EPS_FACE {
                best = pick_max(best, d, i, pts);
            } else {
                dead[i] = true;
            }
        }
        let Some((_, pi)) = best else {
            break;
        };
        let p = pts[pi];
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&fi| faces[fi].signed_dist(&p) > EPS_FACE)
            .collect();
        if visible.is_empty() {
            dead[pi] = true;
            continue;
        }
        // Horizon: directed edges of visible faces whose reverse is absent.
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &fi in &visible {
            let v = faces[fi].v;
            for (a, b) in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
                if let Some(pos) = edges.iter().position(|&(x, y)| x == b && y == a) {
                    edges.swap_remove(pos);
                } else {
                    edges.push((a, b));
                }
            }
        }
        let mut new_faces = Vec::with_capacity(edges.len());
        let mut degenerate = false;
        for &(a, b) in &edges {
            match make_face(pts, a, b, pi, &inside) {
                Some(f) => new_faces.push(f),
                None => {
                    degenerate = true;
                    break;
                }
            }
        }
        if degenerate {
            // The point is flat against the horizon; treat it as interior.
            dead[pi] = true;
            continue;
        }
        let mut kept: Vec<Face> = Vec::with_capacity(faces.len());
        for (fi, f) in faces.into_iter().enumerate() {
            if !visible.contains(&fi) {
                kept.push(f);
            }
        }
        kept.extend(new_faces);
        faces = kept;
        dead[pi] = true;
    }
    faces
}

fn hull3_vertices(pts: &[Point]) -> Vec<Point> {
    match classify3(pts) {
        None => Vec::new(),
        Some(Shape3::Point(i)) => vec![pts[i]],
        Some(Shape3::Line(i, j)) => {
            let mut v = vec![pts[i], pts[j]];
            v.sort_by(|a, b| a.lex_cmp(b));
            v
        }
        Some(Shape3::Plane { origin, u, v }) => {
            let flat: Vec<Point> = pts
                .iter()
                .map(|p| {
                    let d = *p - origin;
                    Point::two(d.dot(&u), d.dot(&v))
                })
                .collect();
            let idx = hull2_indexed(&flat, |p| (p.coord(0), p.coord(1)));
            let mut out: Vec<Point> = idx.into_iter().map(|i| pts[i]).collect();
            out.sort_by(|a, b| a.lex_cmp(b));
            out
        }
        Some(Shape3::Full(seed)) => {
            let faces = hull3_faces(pts, seed);
            let mut idx: Vec<usize> = faces.iter().flat_map(|f| f.v).collect();
            idx.sort_unstable();
            idx.dedup();
            let mut out: Vec<Point> = idx.into_iter().map(|i| pts[i]).collect();
            out.sort_by(|a, b| a.lex_cmp(b));
            out
        }
    }
}

/// Vertical extent of the convex hull of 2D points `(x, h)` over abscissa
/// `x`: the interval of heights `{h : (x, h) in hull}`, or `None` when the
/// vertical line misses the hull.
pub(crate) fn extent2(points: &[Point], x: f64) -> Option<(f64, f64)> {
    let hull = VPolytope::hull(points).ok()?;
    let verts = hull.vertices();
    match verts.len() {
        0 => None,
        1 => {
            if (verts[0].coord(0) - x).abs() <= EPS_FACE {
                Some((verts[0].coord(1), verts[0].coord(1)))
            } else {
                None
            }
        }
        _ => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let m = verts.len();
            let edges = if m == 2 { 1 } else { m };
            for i in 0..edges {
                let a = verts[i];
                let b = verts[(i + 1) % m];
                let (ax, bx) = (a.coord(0), b.coord(0));
                if x < ax.min(bx) - EPS_FACE || x > ax.max(bx) + EPS_FACE {
                    continue;
                }
                if (ax - bx).abs() <= EPS_FACE {
                    lo = lo.min(a.coord(1)).min(b.coord(1));
                    hi = hi.max(a.coord(1)).max(b.coord(1));
                } else {
                    let t = ((x - ax) / (bx - ax)).clamp(0.0, 1.0);
                    let h = a.coord(1) + t * (b.coord(1) - a.coord(1));
                    lo = lo.min(h);
                    hi = hi.max(h);
                }
            }
            if lo.is_finite() {
                Some((lo, hi))
            } else {
                None
            }
        }
    }
}

/// Vertical extent of the convex hull of 3D points over the vertical line
/// through base point `(x, y)`. Handles degenerate hulls of every rank.
pub(crate) fn extent3(points: &[Point], x: f64, y: f64) -> Option<(f64, f64)> {
    let pts = dedup_sorted(points);
    match classify3(&pts)? {
        Shape3::Point(i) => {
            let p = pts[i];
            if (p.coord(0) - x).abs() <= EPS_FACE && (p.coord(1) - y).abs() <= EPS_FACE {
                Some((p.coord(2), p.coord(2)))
            } else {
                None
            }
        }
        Shape3::Line(i, j) => {
            let (a, b) = (pts[i], pts[j]);
            let d = b - a;
            let base_len2 = d.coord(0) * d.coord(0) + d.coord(1) * d.coord(1);
            if base_len2 <= EPS_FACE * EPS_FACE {
                // Vertical segment.
                if (a.coord(0) - x).abs() <= EPS_FACE && (a.coord(1) - y).abs() <= EPS_FACE {
                    let lo = a.coord(2).min(b.coord(2));
                    let hi = a.coord(2).max(b.coord(2));
                    Some((lo, hi))
                } else {
                    None
                }
            } else {
                let t = ((x - a.coord(0)) * d.coord(0) + (y - a.coord(1)) * d.coord(1)) / base_len2;
                if !(-EPS_FACE..=1.0 + EPS_FACE).contains(&t) {
                    return None;
                }
                let px = a.coord(0) + t * d.coord(0);
                let py = a.coord(1) + t * d.coord(1);
                if (px - x).abs() > EPS_FACE || (py - y).abs() > EPS_FACE {
                    return None;
                }
                let h = a.coord(2) + t * d.coord(2);
                Some((h, h))
            }
        }
        Shape3::Plane { origin, u, v } => {
            let n = cross3(u, v);
            if n.coord(2).abs() > EPS_FACE {
                // Non-vertical plane: one height per base point, if inside.
                let h = origin.coord(2)
                    + (n.coord(0) * (origin.coord(0) - x) + n.coord(1) * (origin.coord(1) - y))
                        / n.coord(2);
                let q = Point::three(x, y, h);
                let d = q - origin;
                let flat: Vec<Point> = pts
                    .iter()
                    .map(|p| {
                        let dp = *p - origin;
                        Point::two(dp.dot(&u), dp.dot(&v))
                    })
                    .collect();
                let idx = hull2_indexed(&flat, |p| (p.coord(0), p.coord(1)));
                let poly = VPolytope {
                    dim: 2,
                    verts: idx.into_iter().map(|i| flat[i]).collect(),
                };
                if poly.contains(&Point::two(d.dot(&u), d.dot(&v)), EPS_FACE) {
                    Some((h, h))
                } else {
                    None
                }
            } else {
                // Vertical plane: reduce to a 2D extent along the base trace.
                let trace = Point::two(-n.coord(1), n.coord(0));
                let tl = trace.norm();
                let trace = trace * (1.0 / tl);
                let off = (x - origin.coord(0)) * n.coord(0) + (y - origin.coord(1)) * n.coord(1);
                if off.abs() > EPS_FACE * tl.max(1.0) {
                    return None;
                }
                let flat: Vec<Point> = pts
                    .iter()
                    .map(|p| {
                        let t = (p.coord(0) - origin.coord(0)) * trace.coord(0)
                            + (p.coord(1) - origin.coord(1)) * trace.coord(1);
                        Point::two(t, p.coord(2))
                    })
                    .collect();
                let tq = (x - origin.coord(0)) * trace.coord(0)
                    + (y - origin.coord(1)) * trace.coord(1);
                extent2(&flat, tq)
            }
        }
        Shape3::Full(seed) => {
            let faces = hull3_faces(&pts, seed);
            let mut lo = f64::NEG_INFINITY;
            let mut hi = f64::INFINITY;
            for f in &faces {
                let nz = f.n.coord(2);
                let rest = f.off - f.n.coord(0) * x - f.n.coord(1) * y;
                if nz > EPS_FACE {
                    hi = hi.min(rest / nz);
                } else if nz < -EPS_FACE {
                    lo = lo.max(rest / nz);
                } else if rest < -EPS_FACE {
                    return None;
                }
            }
            if lo > hi + EPS_FACE {
                None
            } else {
                let lo2 = lo.min(hi);
                Some((lo2, hi.max(lo2)))
            }
        }
    }
}

/// Which side of a lifted body is filled in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BodyKind {
    /// `conv(generators) + upward cone`: fills heights above the envelope.
    Epigraph,
    /// `conv(generators ∪ base copies)`: fills heights from zero up to the
    /// envelope. Generator heights must be nonnegative.
    Hypograph,
}

/// Finitely generated lifted body over a base of dimension 1 or 2.
///
/// Generators with coincident base points keep only the dominant height
/// (minimal for epigraphs, maximal for hypographs); generators are stored
/// in lexicographic order so structural equality is decidable.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedBody {
    base_dim: usize,
    kind: BodyKind,
    gens: Vec<(Point, f64)>,
}

impl LiftedBody {
    /// Builds a body from `(base point, height)` generators.
    pub fn new(base_dim: usize, kind: BodyKind, gens: &[(Point, f64)]) -> Result<LiftedBody> {
        if !(1..=2).contains(&base_dim) {
            return Err(Error::UnsupportedDimension(base_dim));
        }
        if gens.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let mut cleaned: Vec<(Point, f64)> = Vec::with_capacity(gens.len());
        for (x, h) in gens {
            if x.dim() != base_dim {
                return Err(Error::DimensionMismatch {
                    expected: base_dim,
                    got: x.dim(),
                });
            }
            if !h.is_finite() {
                return Err(Error::InvalidParameter("generator height must be finite"));
            }
            let mut h = *h;
            if kind == BodyKind::Hypograph {
                if h < -EPS_VERTEX {
                    return Err(Error::NegativeHeight(h));
                }
                h = h.max(0.0);
            }
            cleaned.push((*x, h));
        }
        cleaned.sort_by(|a, b| a.0.lex_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        // Coincident base points keep the dominant height.
        let mut gens: Vec<(Point, f64)> = Vec::with_capacity(cleaned.len());
        for (x, h) in cleaned {
            match gens.last_mut() {
                Some((lx, lh)) if lx.approx_eq(&x, EPS_VERTEX) => {
                    *lh = match kind {
                        BodyKind::Epigraph => lh.min(h),
                        BodyKind::Hypograph => lh.max(h),
                    };
                }
                _ => gens.push((x, h)),
            }
        }
        Ok(LiftedBody {
            base_dim,
            kind,
            gens,
        })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn kind(&self) -> BodyKind {
        self.kind
    }

    pub fn generators(&self) -> &[(Point, f64)] {
        &self.gens
    }

    /// Generators as points in the lifted space.
    pub fn lifted_points(&self) -> Vec<Point> {
        self.gens.iter().map(|(x, h)| x.lift(*h)).collect()
    }

    /// Generators plus, for hypographs, their base copies: a point set
    /// whose convex hull is the bounded part of the body.
    pub(crate) fn closure_points(&self) -> Vec<Point> {
        let mut pts = self.lifted_points();
        if self.kind == BodyKind::Hypograph {
            pts.extend(self.gens.iter().map(|(x, _)| x.lift(0.0)));
        }
        pts
    }

    /// Minimum and maximum generator height.
    pub fn height_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (_, h) in &self.gens {
            lo = lo.min(*h);
            hi = hi.max(*h);
        }
        (lo, hi)
    }

    /// Convex hull of the generator base points: the support of the
    /// represented function.
    pub fn base_hull(&self) -> VPolytope {
        let pts: Vec<Point> = self.gens.iter().map(|(x, _)| *x).collect();
        VPolytope::hull(&pts).expect("generators are nonempty")
    }

    /// Horizontal slice at height `z`, projected to the base space.
    ///
    /// For an epigraph this is the projection of the part of
    /// `conv(generators)` at heights at most `z`; for a hypograph, of the
    /// part of `conv(generators ∪ base)` at heights at least `z`. Every
    /// slice vertex is either a qualifying generator or a chord-level
    /// crossing, so the hull over all generator pairs is exact.
    pub fn slice(&self, z: f64) -> VPolytope {
        let empty = VPolytope::empty(self.base_dim).expect("base dim validated");
        if self.kind == BodyKind::Hypograph && z < -EPS_VERTEX {
            return empty;
        }
        let z = if self.kind == BodyKind::Hypograph {
            z.max(0.0)
        } else {
            z
        };
        let pts: Vec<(Point, f64)> = match self.kind {
            BodyKind::Epigraph => self.gens.clone(),
            BodyKind::Hypograph => {
                let mut v = self.gens.clone();
                v.extend(self.gens.iter().map(|(x, _)| (*x, 0.0)));
                v
            }
        };
        let qualifies = |h: f64| match self.kind {
            BodyKind::Epigraph => h <= z + EPS_VERTEX,
            BodyKind::Hypograph => h >= z - EPS_VERTEX,
        };
        let mut hits: Vec<Point> = Vec::new();
        for (x, h) in &pts {
            if qualifies(*h) {
                hits.push(*x);
            }
        }
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let (xi, hi) = pts[i];
                let (xj, hj) = pts[j];
                if (hi - z) * (hj - z) < 0.0 {
                    let t = (z - hi) / (hj - hi);
                    hits.push(xi + (xj - xi) * t);
                }
            }
        }
        if hits.is_empty() {
            empty
        } else {
            VPolytope::hull(&hits).expect("nonempty hit set")
        }
    }

    /// Drops generators that are not vertices of the body. The represented
    /// body is unchanged; downstream slicing and quadrature get cheaper.
    ///
    /// For epigraphs redundancy is decided against a truncation of the
    /// body: a generator is a vertex of `conv(G) + cone` exactly when it is
    /// a vertex of `conv(G ∪ (G + Δ e_up))` for any `Δ` exceeding the
    /// height spread.
    pub fn reduce(&self) -> LiftedBody {
        if self.gens.len() <= 2 {
            return self.clone();
        }
        let candidates: Vec<Point> = match self.kind {
            BodyKind::Epigraph => {
                let (lo, hi) = self.height_range();
                let delta = hi - lo + 1.0;
                let mut pts = self.lifted_points();
                let raised: Vec<Point> = self
                    .gens
                    .iter()
                    .map(|(x, h)| x.lift(*h + delta))
                    .collect();
                pts.extend(raised);
                pts
            }
            BodyKind::Hypograph => self.closure_points(),
        };
        let hull = VPolytope::hull(&candidates).expect("nonempty candidates");
        let kept: Vec<(Point, f64)> = self
            .gens
            .iter()
            .filter(|(x, h)| {
                let lifted = x.lift(*h);
                hull.vertices().iter().any(|v| v.approx_eq(&lifted, EPS_VERTEX))
            })
            .copied()
            .collect();
        if kept.is_empty() {
            // All generators share one height and only base-hull vertices
            // matter; keep those.
            let base = self.base_hull();
            let kept: Vec<(Point, f64)> = self
                .gens
                .iter()
                .filter(|(x, _)| base.vertices().iter().any(|v| v.approx_eq(x, EPS_VERTEX)))
                .copied()
                .collect();
            return LiftedBody::new(self.base_dim, self.kind, &kept)
                .expect("reduction keeps at least one generator");
        }
        LiftedBody::new(self.base_dim, self.kind, &kept)
            .expect("reduction keeps at least one generator")
    }

    /// Height interval of the bounded hull of the body over base point `x`,
    /// or `None` if `x` is outside the support.
    pub(crate) fn vertical_extent(&self, x: &Point) -> Result<Option<(f64, f64)>> {
        if x.dim() != self.base_dim {
            return Err(Error::DimensionMismatch {
                expected: self.base_dim,
                got: x.dim(),
            });
        }
        let pts = self.closure_points();
        Ok(match self.base_dim {
            1 => extent2(&pts, x.coord(0)),
            2 => extent3(&pts, x.coord(0), x.coord(1)),
            _ => unreachable!("base dim validated"),
        })
    }

    /// Structural equality of generators up to coordinate tolerance.
    pub fn approx_eq(&self, other: &LiftedBody, tol: f64) -> bool {
        self.base_dim == other.base_dim
            && self.kind == other.kind
            && self.gens.len() == other.gens.len()
            && self
                .gens
                .iter()
                .zip(&other.gens)
                .all(|((x, h), (y, g))| x.approx_eq(y, tol) && (h - g).abs() <= tol)
    }
}

/// Compact convex coefficient set in the closed positive orthant of `R^N`,
/// stored as a V-polytope (interpreted as the hull of its vertex list; no
/// canonicalization is performed in high dimensions).
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientBody {
    dim: usize,
    verts: Vec<Vec<f64>>,
}

impl CoefficientBody {
    pub fn new(verts: Vec<Vec<f64>>) -> Result<CoefficientBody> {
        let first = verts.first().ok_or(Error::EmptyPointSet)?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        let mut verts = verts;
        for v in &mut verts {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            for c in v.iter_mut() {
                if *c < -EPS_VERTEX {
                    return Err(Error::CoefficientsOutsidePositiveOrthant);
                }
                *c = c.max(0.0);
            }
        }
        Ok(CoefficientBody { dim, verts })
    }

    /// The standard simplex generator set `{e_1, ..., e_n}`.
    pub fn simplex(n: usize) -> Result<CoefficientBody> {
        if n == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        let verts = (0..n)
            .map(|i| {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                v
            })
            .collect();
        CoefficientBody::new(verts)
    }

    /// Minkowski combination of two coefficient bodies embedded on
    /// complementary coordinate blocks:
    /// `lambda * (A, 0) + (1 - lambda) * (0, B)` in `R^{N+M}`.
    pub fn hat_combine(a: &CoefficientBody, b: &CoefficientBody, lambda: f64) -> Result<CoefficientBody> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidLambda(lambda));
        }
        let dim = a.dim + b.dim;
        let mut verts = Vec::with_capacity(a.verts.len() * b.verts.len());
        for va in &a.verts {
            for vb in &b.verts {
                let mut v = Vec::with_capacity(dim);
                v.extend(va.iter().map(|c| lambda * c));
                v.extend(vb.iter().map(|c| (1.0 - lambda) * c));
                verts.push(v);
            }
        }
        CoefficientBody::new(verts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.verts
    }
}
