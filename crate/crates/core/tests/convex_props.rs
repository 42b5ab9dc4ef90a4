//! Property tests for the convex kernel: hull canonicalization, Minkowski
//! combinations, Brunn-Minkowski sanity, and slice monotonicity.

use proptest::prelude::*;
use sconcave::prelude::*;

/// Brute-force membership oracle used to validate hulls independently of
/// the incremental construction: a point is in the hull iff `contains`
/// says so, and a vertex is genuine iff it escapes the hull of the rest.
fn assert_hull_is_sound(points: &[Point], hull: &VPolytope) {
    for p in points {
        assert!(
            hull.contains(p, 1e-9),
            "input point {:?} escaped its own hull",
            p.as_slice()
        );
    }
    let verts = hull.vertices();
    if verts.len() < 2 {
        return;
    }
    for k in 0..verts.len() {
        let rest: Vec<Point> = verts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, v)| *v)
            .collect();
        let partial = VPolytope::hull(&rest).unwrap();
        assert!(
            !partial.contains(&verts[k], 1e-9),
            "vertex {:?} is not extreme",
            verts[k].as_slice()
        );
    }
}

fn points_1d(max_len: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(-3.0f64..3.0, 1..max_len).prop_map(|xs| {
        xs.into_iter().map(Point::one).collect()
    })
}

fn points_2d(max_len: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..max_len)
        .prop_map(|xs| xs.into_iter().map(|(x, y)| Point::two(x, y)).collect())
}

fn points_3d(max_len: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0), 1..max_len)
        .prop_map(|xs| xs.into_iter().map(|(x, y, z)| Point::three(x, y, z)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hull_is_idempotent_and_sound_1d(pts in points_1d(12)) {
        let hull = VPolytope::hull(&pts).unwrap();
        let again = VPolytope::hull(hull.vertices()).unwrap();
        prop_assert!(hull.approx_eq(&again, 1e-12));
        assert_hull_is_sound(&pts, &hull);
    }

    #[test]
    fn hull_is_idempotent_and_sound_2d(pts in points_2d(12)) {
        let hull = VPolytope::hull(&pts).unwrap();
        let again = VPolytope::hull(hull.vertices()).unwrap();
        prop_assert!(hull.approx_eq(&again, 1e-12));
        assert_hull_is_sound(&pts, &hull);
    }

    #[test]
    fn hull_is_idempotent_and_sound_3d(pts in points_3d(10)) {
        let hull = VPolytope::hull(&pts).unwrap();
        let again = VPolytope::hull(hull.vertices()).unwrap();
        prop_assert!(hull.approx_eq(&again, 1e-12));
        assert_hull_is_sound(&pts, &hull);
    }

    #[test]
    fn self_combination_is_identity_2d(pts in points_2d(10), lambda in 0.05f64..0.95) {
        let p = VPolytope::hull(&pts).unwrap();
        let combined = p.minkowski_lambda(&p, lambda).unwrap();
        prop_assert!(
            combined.approx_eq(&p, 1e-9),
            "lambda-combination of a convex set with itself moved: {:?} vs {:?}",
            combined.vertices(),
            p.vertices()
        );
    }

    #[test]
    fn self_combination_is_identity_3d(pts in points_3d(8), lambda in 0.05f64..0.95) {
        let p = VPolytope::hull(&pts).unwrap();
        let combined = p.minkowski_lambda(&p, lambda).unwrap();
        prop_assert!(combined.approx_eq(&p, 1e-9));
    }

    #[test]
    fn brunn_minkowski_inequality_2d(
        a in points_2d(10),
        b in points_2d(10),
        lambda in 0.1f64..0.9,
    ) {
        let pa = VPolytope::hull(&a).unwrap();
        let pb = VPolytope::hull(&b).unwrap();
        let sum = pa.minkowski_lambda(&pb, lambda).unwrap();
        let lhs = sum.measure().powf(0.5);
        let rhs = lambda * pa.measure().powf(0.5) + (1.0 - lambda) * pb.measure().powf(0.5);
        prop_assert!(lhs >= rhs - 1e-9, "BM violated: {} < {}", lhs, rhs);
    }

    #[test]
    fn brunn_minkowski_inequality_3d(
        a in points_3d(8),
        b in points_3d(8),
        lambda in 0.1f64..0.9,
    ) {
        let pa = VPolytope::hull(&a).unwrap();
        let pb = VPolytope::hull(&b).unwrap();
        let sum = pa.minkowski_lambda(&pb, lambda).unwrap();
        let lhs = sum.measure().powf(1.0 / 3.0);
        let rhs =
            lambda * pa.measure().powf(1.0 / 3.0) + (1.0 - lambda) * pb.measure().powf(1.0 / 3.0);
        prop_assert!(lhs >= rhs - 1e-9, "BM violated: {} < {}", lhs, rhs);
    }

    #[test]
    fn epigraph_slices_grow_with_height(
        gens in prop::collection::vec(((-3.0f64..3.0, -3.0f64..3.0), -1.0f64..2.0), 3..9),
        z in -1.0f64..2.0,
        dz in 0.01f64..1.5,
    ) {
        let samples: Vec<(Point, f64)> = gens
            .iter()
            .map(|((x, y), h)| (Point::two(*x, *y), *h))
            .collect();
        let body = LiftedBody::new(2, BodyKind::Epigraph, &samples).unwrap();
        let low = body.slice(z);
        let high = body.slice(z + dz);
        for v in low.vertices() {
            prop_assert!(
                high.contains(v, 1e-9),
                "epigraph slice shrank from z={} to z={}",
                z,
                z + dz
            );
        }
    }

    #[test]
    fn hypograph_slices_shrink_with_height(
        gens in prop::collection::vec(((-3.0f64..3.0, -3.0f64..3.0), 0.0f64..2.0), 3..9),
        z in 0.0f64..2.0,
        dz in 0.01f64..1.5,
    ) {
        let samples: Vec<(Point, f64)> = gens
            .iter()
            .map(|((x, y), h)| (Point::two(*x, *y), *h))
            .collect();
        let body = LiftedBody::new(2, BodyKind::Hypograph, &samples).unwrap();
        let low = body.slice(z);
        let high = body.slice(z + dz);
        for v in high.vertices() {
            prop_assert!(
                low.contains(v, 1e-9),
                "hypograph slice grew from z={} to z={}",
                z,
                z + dz
            );
        }
    }

    #[test]
    fn reduce_preserves_the_represented_body(
        gens in prop::collection::vec((-3.0f64..3.0, 0.0f64..2.0), 2..10),
        kind_sel in prop::bool::ANY,
        z in 0.0f64..2.0,
    ) {
        let kind = if kind_sel { BodyKind::Epigraph } else { BodyKind::Hypograph };
        let samples: Vec<(Point, f64)> = gens
            .iter()
            .map(|(x, h)| (Point::one(*x), *h))
            .collect();
        let body = LiftedBody::new(1, kind, &samples).unwrap();
        let reduced = body.reduce();
        prop_assert!(reduced.generators().len() <= body.generators().len());
        let a = body.slice(z);
        let b = reduced.slice(z);
        prop_assert!(
            (a.measure() - b.measure()).abs() <= 1e-9,
            "slice measure changed under reduce at z={}: {} vs {}",
            z,
            a.measure(),
            b.measure()
        );
    }
}

/// Minkowski combination against a brute-force point-cloud oracle: dense
/// samples of `lambda A + (1-lambda) B` must land inside the vertex-sum
/// hull, and the hull's vertices must be reachable as exact combinations.
#[test]
fn minkowski_combination_matches_brute_force_sampling() {
    let a = VPolytope::hull(&[
        Point::two(0.0, 0.0),
        Point::two(2.0, 0.2),
        Point::two(1.4, 1.8),
        Point::two(-0.3, 1.0),
    ])
    .unwrap();
    let b = VPolytope::hull(&[
        Point::two(-1.0, -1.0),
        Point::two(0.5, -1.3),
        Point::two(0.8, 0.4),
    ])
    .unwrap();
    let lambda = 0.35;
    let sum = a.minkowski_lambda(&b, lambda).unwrap();
    // Dense interior sampling of both bodies via vertex mixtures.
    let mix = |p: &VPolytope, w0: f64, w1: f64| -> Vec<Point> {
        let vs = p.vertices();
        let mut out = Vec::new();
        for i in 0..vs.len() {
            for j in 0..vs.len() {
                out.push(vs[i] * w0 + vs[j] * (1.0 - w0) * w1 + vs[(i + j) % vs.len()] * (1.0 - w0) * (1.0 - w1));
            }
        }
        out
    };
    for w0 in [0.0, 0.3, 0.8, 1.0] {
        for w1 in [0.0, 0.5, 1.0] {
            for pa in mix(&a, w0, w1) {
                for pb in mix(&b, 1.0 - w0, w1) {
                    let p = pa * lambda + pb * (1.0 - lambda);
                    assert!(sum.contains(&p, 1e-9));
                }
            }
        }
    }
    for v in sum.vertices() {
        // Every vertex of the combination is a combination of vertices.
        let reachable = a.vertices().iter().any(|va| {
            b.vertices()
                .iter()
                .any(|vb| (*va * lambda + *vb * (1.0 - lambda)).approx_eq(v, 1e-9))
        });
        assert!(reachable, "vertex {:?} is not a vertex combination", v.as_slice());
    }
}
