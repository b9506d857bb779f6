//! Planar geometric primitives with exact incidence decisions.
//!
//! Orientation uses Shewchuk's adaptive predicates (via the `robust` crate),
//! so side-of-line and segment-intersection verdicts are never wrong due to
//! rounding. Metric quantities (lengths, perimeters, angles) are ordinary
//! floating point.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn len(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Axis-aligned width of the segment.
    pub fn x_extension(&self) -> f64 {
        (self.a.x - self.b.x).abs()
    }

    pub fn y_extension(&self) -> f64 {
        (self.a.y - self.b.y).abs()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Triangle {
    pub a: Point,
    pub b: Point,
    pub c: Point,
}

/// Metric summary of a triangle. Sides are ordered (ab, bc, ca) and angles
/// (at a, at b, at c), in degrees.
#[derive(Clone, Copy, Debug)]
pub struct TriangleMetrics {
    pub perimeter: f64,
    pub side_x_extensions: [f64; 3],
    pub y_extension: f64,
    pub angles: [f64; 3],
}

impl Triangle {
    pub fn new(a: Point, b: Point, c: Point) -> Self {
        Triangle { a, b, c }
    }

    pub fn perimeter(&self) -> f64 {
        self.a.dist(self.b) + self.b.dist(self.c) + self.c.dist(self.a)
    }

    pub fn vertices(&self) -> [Point; 3] {
        [self.a, self.b, self.c]
    }
}

/// Sign of twice the signed area of (p, q, r): +1 counterclockwise,
/// 0 collinear, -1 clockwise. Exact.
pub fn orient(p: Point, q: Point, r: Point) -> i8 {
    let v = robust::orient2d(
        robust::Coord { x: p.x, y: p.y },
        robust::Coord { x: q.x, y: q.y },
        robust::Coord { x: r.x, y: r.y },
    );
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// True iff `p` lies on the closed segment [a, b]. Exact.
pub fn on_segment(p: Point, a: Point, b: Point) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// True iff the two segments share any point that is not a common endpoint
/// of both. Covers proper crossings, collinear overlaps, and an endpoint of
/// one segment interior to the other. Exact.
pub fn segments_conflict(s1: Segment, s2: Segment) -> bool {
    let (p1, p2) = (s1.a, s1.b);
    let (p3, p4) = (s2.a, s2.b);

    let d1 = orient(p3, p4, p1);
    let d2 = orient(p3, p4, p2);
    let d3 = orient(p1, p2, p3);
    let d4 = orient(p1, p2, p4);

    // Proper crossing: each segment's endpoints strictly straddle the other.
    if ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)) {
        return true;
    }

    if d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0 {
        // All collinear: conflict iff the 1-D overlap is more than a point,
        // or it is a single point that is not an endpoint of both.
        let use_x = (p1.x - p2.x).abs() >= (p1.y - p2.y).abs()
            || (p3.x - p4.x).abs() >= (p3.y - p4.y).abs();
        let key = |p: Point| if use_x { p.x } else { p.y };
        let (lo1, hi1) = minmax(key(p1), key(p2));
        let (lo2, hi2) = minmax(key(p3), key(p4));
        let lo = lo1.max(lo2);
        let hi = hi1.min(hi2);
        if lo > hi {
            return false;
        }
        if lo < hi {
            return true;
        }
        // Single shared point; it is an endpoint of both segments here
        // (the overlap endpoint is an interval endpoint of each).
        return false;
    }

    // Touching cases: some endpoint lies on the other segment.
    let touch = |p: Point, a: Point, b: Point, other: (Point, Point)| -> bool {
        // p is an endpoint of one segment lying on segment (a, b); conflict
        // unless p is also an endpoint of (a, b) shared with the other.
        if !on_segment(p, a, b) {
            return false;
        }
        let endpoint_of_ab = p == a || p == b;
        let endpoint_of_other = p == other.0 || p == other.1;
        !(endpoint_of_ab && endpoint_of_other)
    };
    touch(p1, p3, p4, (p1, p2))
        || touch(p2, p3, p4, (p1, p2))
        || touch(p3, p1, p2, (p3, p4))
        || touch(p4, p1, p2, (p3, p4))
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Perimeter, per-side x-extensions, y-extension and interior angles.
/// Errors with `collinear` on a degenerate triangle.
pub fn triangle_metrics(t: &Triangle) -> Result<TriangleMetrics> {
    if orient(t.a, t.b, t.c) == 0 {
        return Err(Error::Collinear);
    }
    let ab = t.a.dist(t.b);
    let bc = t.b.dist(t.c);
    let ca = t.c.dist(t.a);
    let angle = |opp: f64, s1: f64, s2: f64| -> f64 {
        let cos = ((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2)).clamp(-1.0, 1.0);
        cos.acos().to_degrees()
    };
    let ys = [t.a.y, t.b.y, t.c.y];
    let span = |v: [f64; 3]| v.iter().cloned().fold(f64::MIN, f64::max)
        - v.iter().cloned().fold(f64::MAX, f64::min);
    Ok(TriangleMetrics {
        perimeter: ab + bc + ca,
        side_x_extensions: [
            (t.a.x - t.b.x).abs(),
            (t.b.x - t.c.x).abs(),
            (t.c.x - t.a.x).abs(),
        ],
        y_extension: span(ys),
        angles: [angle(bc, ab, ca), angle(ca, ab, bc), angle(ab, bc, ca)],
    })
}

/// Point-in-triangle test. `strict` excludes the boundary. Exact.
pub fn point_in_triangle(p: Point, t: &Triangle, strict: bool) -> bool {
    let s = orient(t.a, t.b, t.c);
    debug_assert!(s != 0, "triangle must be non-degenerate");
    let d1 = orient(t.a, t.b, p) * s;
    let d2 = orient(t.b, t.c, p) * s;
    let d3 = orient(t.c, t.a, p) * s;
    if strict {
        d1 > 0 && d2 > 0 && d3 > 0
    } else {
        d1 >= 0 && d2 >= 0 && d3 >= 0
    }
}

/// Distance from point `p` to the closed segment [a, b].
pub fn point_segment_dist(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let l2 = dx * dx + dy * dy;
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / l2).clamp(0.0, 1.0);
    p.dist(Point::new(a.x + t * dx, a.y + t * dy))
}

/// Distance between two closed segments.
pub fn segment_segment_dist(s1: Segment, s2: Segment) -> f64 {
    if segments_conflict(s1, s2) {
        return 0.0;
    }
    point_segment_dist(s1.a, s2.a, s2.b)
        .min(point_segment_dist(s1.b, s2.a, s2.b))
        .min(point_segment_dist(s2.a, s1.a, s1.b))
        .min(point_segment_dist(s2.b, s1.a, s1.b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orient_unit_cases() {
        assert_eq!(orient(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)), 1);
        assert_eq!(orient(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)), 0);
        assert_eq!(orient(p(0.0, 0.0), p(0.0, 1.0), p(1.0, 1.0)), -1);
    }

    #[test]
    fn orient_antisymmetric() {
        let (a, b, c) = (p(0.3, 0.7), p(-1.2, 4.5), p(2.0, -0.1));
        assert_eq!(orient(a, b, c), -orient(b, a, c));
        assert_eq!(orient(a, b, c), -orient(a, c, b));
    }

    #[test]
    fn segments_conflict_cases() {
        // proper crossing
        assert!(segments_conflict(
            Segment::new(p(0.0, 0.0), p(2.0, 0.0)),
            Segment::new(p(1.0, -1.0), p(1.0, 1.0)),
        ));
        // shared endpoint only
        assert!(!segments_conflict(
            Segment::new(p(0.0, 0.0), p(1.0, 0.0)),
            Segment::new(p(1.0, 0.0), p(1.0, 1.0)),
        ));
        // endpoint interior to the other segment
        assert!(segments_conflict(
            Segment::new(p(0.0, 0.0), p(2.0, 0.0)),
            Segment::new(p(1.0, 0.0), p(1.0, 1.0)),
        ));
        // collinear overlap
        assert!(segments_conflict(
            Segment::new(p(0.0, 0.0), p(2.0, 0.0)),
            Segment::new(p(1.0, 0.0), p(3.0, 0.0)),
        ));
        // collinear, touching at a shared endpoint
        assert!(!segments_conflict(
            Segment::new(p(0.0, 0.0), p(1.0, 0.0)),
            Segment::new(p(1.0, 0.0), p(2.0, 0.0)),
        ));
        // collinear, disjoint
        assert!(!segments_conflict(
            Segment::new(p(0.0, 0.0), p(1.0, 0.0)),
            Segment::new(p(2.0, 0.0), p(3.0, 0.0)),
        ));
    }

    #[test]
    fn segments_conflict_symmetric() {
        let s1 = Segment::new(p(0.0, 0.0), p(2.0, 1.0));
        let s2 = Segment::new(p(0.5, -1.0), p(1.0, 3.0));
        assert_eq!(segments_conflict(s1, s2), segments_conflict(s2, s1));
    }

    #[test]
    fn metrics_3_4_5() {
        let t = Triangle::new(p(0.0, 0.0), p(4.0, 0.0), p(0.0, 3.0));
        let m = triangle_metrics(&t).unwrap();
        assert!((m.perimeter - 12.0).abs() < 1e-12);
        assert!((m.angles[0] - 90.0).abs() < 1e-9);
        assert!((m.angles[1] - 36.86989764584402).abs() < 1e-9);
        assert!((m.angles[2] - 53.13010235415599).abs() < 1e-9);
        assert!((m.angles.iter().sum::<f64>() - 180.0).abs() < 1e-9);
    }

    #[test]
    fn metrics_equilateral() {
        let h = (3.0f64).sqrt() / 2.0;
        let t = Triangle::new(p(0.0, 0.0), p(1.0, 0.0), p(0.5, h));
        let m = triangle_metrics(&t).unwrap();
        assert!((m.perimeter - 3.0).abs() < 1e-12);
        for a in m.angles {
            assert!((a - 60.0).abs() < 1e-9);
        }
    }

    #[test]
    fn metrics_thin_initial_triangle() {
        // Shape of the plane-3-tree drawer's outer triangle for k = 2.
        let (k, eps) = (2.0, 0.1);
        let t = Triangle::new(p(0.0, eps), p(1.0, 0.0), p(k + 1.0, eps));
        let m = triangle_metrics(&t).unwrap();
        assert_eq!(m.side_x_extensions, [1.0, 2.0, 3.0]);
        assert!((m.y_extension - 0.1).abs() < 1e-15);
    }

    #[test]
    fn metrics_degenerate() {
        let t = Triangle::new(p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0));
        assert!(matches!(triangle_metrics(&t), Err(Error::Collinear)));
    }

    #[test]
    fn point_in_triangle_cases() {
        let t = Triangle::new(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0));
        let centroid = p(1.0 / 3.0, 1.0 / 3.0);
        assert!(point_in_triangle(centroid, &t, true));
        assert!(!point_in_triangle(t.a, &t, true));
        assert!(point_in_triangle(t.a, &t, false));
        assert!(!point_in_triangle(p(10.0, 10.0), &t, false));
    }

    #[test]
    fn perimeter_rigid_motion_invariant() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let pts: Vec<Point> = (0..3)
                .map(|_| p(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
                .collect();
            let t = Triangle::new(pts[0], pts[1], pts[2]);
            if orient(t.a, t.b, t.c) == 0 {
                continue;
            }
            let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let (s, c) = theta.sin_cos();
            let (tx, ty) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let rot = |q: Point| p(c * q.x - s * q.y + tx, s * q.x + c * q.y + ty);
            let t2 = Triangle::new(rot(t.a), rot(t.b), rot(t.c));
            let p1 = t.perimeter();
            let p2 = t2.perimeter();
            assert!((p1 - p2).abs() <= 1e-9 * p1.max(1.0));
        }
    }
}
