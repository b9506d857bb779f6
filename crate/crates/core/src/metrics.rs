//! Measurement and verification: edge-length ratio, planarity and
//! properness certification, perimeter-growth checks for the nested
//! triangle instances, decomposition checks, and randomized oracles for
//! the two geometric lemmata behind the lower bound.

use crate::error::{Error, Result};
use crate::generators::{gen_nested_triangles, nested_triangle_rings};
use crate::geometry::{
    orient, on_segment, point_in_triangle, segments_conflict, Point, Segment, Triangle,
};
use crate::model::{Decomposition, Drawing, TwoTree};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative tolerance for metric (non-incidence) comparisons.
pub const METRIC_RTOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Copy, Debug)]
pub struct LengthStats {
    pub min_len: f64,
    pub max_len: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub stats: Option<LengthStats>,
}

impl VerifyReport {
    fn from_violations(violations: Vec<Violation>, stats: Option<LengthStats>) -> Self {
        VerifyReport {
            ok: violations.is_empty(),
            violations,
            stats,
        }
    }
}

/// Minimum/maximum edge length and their ratio.
pub fn length_stats(edges: &[(u32, u32)], gamma: &Drawing) -> Result<LengthStats> {
    if edges.is_empty() {
        return Err(Error::NoEdges);
    }
    let mut min_len = f64::INFINITY;
    let mut max_len = 0.0f64;
    for &(u, v) in edges {
        let l = gamma.edge_len(u, v);
        if l == 0.0 {
            return Err(Error::DegenerateEdge(u, v));
        }
        min_len = min_len.min(l);
        max_len = max_len.max(l);
    }
    Ok(LengthStats {
        min_len,
        max_len,
        ratio: max_len / min_len,
    })
}

/// Edge-length ratio: longest over shortest edge.
pub fn edge_length_ratio(edges: &[(u32, u32)], gamma: &Drawing) -> Result<f64> {
    Ok(length_stats(edges, gamma)?.ratio)
}

fn coincidence_violations(gamma: &Drawing, out: &mut Vec<Violation>) {
    let mut idx: Vec<u32> = (0..gamma.points.len() as u32).collect();
    idx.sort_by(|&a, &b| {
        let (pa, pb) = (gamma.point(a), gamma.point(b));
        pa.x.total_cmp(&pb.x).then(pa.y.total_cmp(&pb.y))
    });
    for w in idx.windows(2) {
        if gamma.point(w[0]) == gamma.point(w[1]) {
            out.push(Violation {
                kind: "coincident-vertices".into(),
                detail: format!("vertices {} and {} share a point", w[0], w[1]),
            });
        }
    }
    for (i, p) in gamma.points.iter().enumerate() {
        if !p.is_finite() {
            out.push(Violation {
                kind: "non-finite".into(),
                detail: format!("vertex {i}"),
            });
        }
    }
}

fn vertex_on_edge_violations(edges: &[(u32, u32)], gamma: &Drawing, out: &mut Vec<Violation>) {
    for &(u, v) in edges {
        let (a, b) = (gamma.point(u), gamma.point(v));
        let (lox, hix) = (a.x.min(b.x), a.x.max(b.x));
        let (loy, hiy) = (a.y.min(b.y), a.y.max(b.y));
        for t in 0..gamma.points.len() as u32 {
            if t == u || t == v {
                continue;
            }
            let p = gamma.point(t);
            if p.x < lox || p.x > hix || p.y < loy || p.y > hiy {
                continue;
            }
            if on_segment(p, a, b) {
                out.push(Violation {
                    kind: "vertex-on-edge".into(),
                    detail: format!("vertex {t} lies on edge ({u}, {v})"),
                });
            }
        }
    }
}

/// Certify a planar straight-line drawing with exact predicates: no
/// coincident vertices, no vertex interior to a non-incident edge, and no
/// two edges sharing any point other than a common endpoint.
pub fn verify_planar_straightline(edges: &[(u32, u32)], gamma: &Drawing) -> VerifyReport {
    let mut violations = Vec::new();
    coincidence_violations(gamma, &mut violations);
    vertex_on_edge_violations(edges, gamma, &mut violations);

    let segs: Vec<(Segment, [f64; 4])> = edges
        .iter()
        .map(|&(u, v)| {
            let s = Segment::new(gamma.point(u), gamma.point(v));
            let bb = [
                s.a.x.min(s.b.x),
                s.a.x.max(s.b.x),
                s.a.y.min(s.b.y),
                s.a.y.max(s.b.y),
            ];
            (s, bb)
        })
        .collect();
    for i in 0..edges.len() {
        let (si, bi) = &segs[i];
        for j in i + 1..edges.len() {
            let (sj, bj) = &segs[j];
            if bi[1] < bj[0] || bj[1] < bi[0] || bi[3] < bj[2] || bj[3] < bi[2] {
                continue;
            }
            if segments_conflict(*si, *sj) {
                violations.push(Violation {
                    kind: "edge-crossing".into(),
                    detail: format!(
                        "edges ({}, {}) and ({}, {}) intersect beyond a shared endpoint",
                        edges[i].0, edges[i].1, edges[j].0, edges[j].1
                    ),
                });
            }
        }
    }
    let stats = length_stats(edges, gamma).ok();
    VerifyReport::from_violations(violations, stats)
}

/// Certify a proper drawing: distinct vertex points and no vertex on a
/// non-incident edge. Crossings are allowed.
pub fn verify_proper(edges: &[(u32, u32)], gamma: &Drawing) -> VerifyReport {
    let mut violations = Vec::new();
    coincidence_violations(gamma, &mut violations);
    vertex_on_edge_violations(edges, gamma, &mut violations);
    let stats = length_stats(edges, gamma).ok();
    VerifyReport::from_violations(violations, stats)
}

/// Perimeters of the nested rings of a drawing of gen_nested_triangles(k).
#[derive(Clone, Debug)]
pub struct PerimeterTrace {
    pub perimeters: Vec<f64>,
    pub gamma: f64,
}

/// Compute the ring perimeters of a drawing of G_k and check the
/// theorem-backed consequences: with the minimum edge length normalized to
/// one and the outer face drawn outermost, p(ring 1) >= 3 and each ring's
/// perimeter exceeds its predecessor's by at least gamma = 0.3, hence the
/// ratio is at least 0.1 k. Violations indicate an implementation bug.
pub fn nested_triangle_perimeters(
    k: u32,
    edges: &[(u32, u32)],
    gamma: &Drawing,
    normalize: bool,
) -> Result<(PerimeterTrace, VerifyReport)> {
    let expect = gen_nested_triangles(k)?;
    if gamma.points.len() != 3 * k as usize || edges != expect.graph.edges.as_slice() {
        return Err(Error::NotNestedTriangles(format!(
            "graph is not gen_nested_triangles({k})"
        )));
    }
    let mut violations = Vec::new();
    let planar = verify_planar_straightline(edges, gamma);
    if !planar.ok {
        violations.push(Violation {
            kind: "not-planar".into(),
            detail: format!("{} planarity violations", planar.violations.len()),
        });
    }
    let stats = length_stats(edges, gamma)?;
    let scale = if normalize { 1.0 / stats.min_len } else { 1.0 };
    let scaled = gamma.scaled(scale);

    let rings = nested_triangle_rings(k);
    // Precondition: the outer face is the outermost ring.
    let (a, b, c) = rings[k as usize - 1];
    let outer = Triangle::new(scaled.point(a), scaled.point(b), scaled.point(c));
    for v in 0..scaled.points.len() as u32 {
        if v == a || v == b || v == c {
            continue;
        }
        if !point_in_triangle(scaled.point(v), &outer, true) {
            violations.push(Violation {
                kind: "outer-face".into(),
                detail: format!("vertex {v} not strictly inside the outer ring"),
            });
        }
    }

    let gamma_const = 0.3;
    let perims: Vec<f64> = rings
        .iter()
        .map(|&(a, b, c)| {
            Triangle::new(scaled.point(a), scaled.point(b), scaled.point(c)).perimeter()
        })
        .collect();
    let tol = |x: f64| METRIC_RTOL * x.abs().max(1.0);
    if perims[0] < 3.0 - tol(3.0) {
        violations.push(Violation {
            kind: "perimeter-base".into(),
            detail: format!("p(ring 1) = {} < 3", perims[0]),
        });
    }
    for i in 1..perims.len() {
        let gap = perims[i] - perims[i - 1];
        if gap < gamma_const - tol(gamma_const) {
            violations.push(Violation {
                kind: "perimeter-gap".into(),
                detail: format!("ring {} gap {} < {}", i + 1, gap, gamma_const),
            });
        }
    }
    let ratio = stats.ratio;
    if ratio < 0.1 * k as f64 - tol(0.1 * k as f64) {
        violations.push(Violation {
            kind: "ratio-lower-bound".into(),
            detail: format!("ratio {} < 0.1 k = {}", ratio, 0.1 * k as f64),
        });
    }
    Ok((
        PerimeterTrace {
            perimeters: perims,
            gamma: gamma_const,
        },
        VerifyReport::from_violations(violations, Some(stats)),
    ))
}

/// Verify a decomposition against its 2-tree: the skeleton is a linear
/// sub-2-tree rooted at (0, 1), internal vertices partition, Lemma 4's
/// integer bounds hold, and the recorded designated-edge sequence has the
/// structural properties the decomposition algorithm guarantees.
pub fn check_decomposition(g: &TwoTree, d: &Decomposition) -> VerifyReport {
    let mut violations = Vec::new();
    let mut push = |kind: &str, detail: String| {
        violations.push(Violation {
            kind: kind.into(),
            detail,
        });
    };

    if d.skeleton_to_parent.len() < 2
        || d.skeleton_to_parent[0] != 0
        || d.skeleton_to_parent[1] != 1
    {
        push("skeleton-root", "skeleton does not share the root edge".into());
    }
    if !d.skeleton.is_linear() {
        push("skeleton-linear", "skeleton is not a linear 2-tree".into());
    }
    // Proper 3-coloring restricted to the skeleton.
    for &(u, v) in d.skeleton.edges() {
        if d.vertex_classes[u as usize] == d.vertex_classes[v as usize] {
            push(
                "classification",
                format!("skeleton edge ({u}, {v}) endpoints share a class"),
            );
        }
    }

    // Recompute the components from the skeleton edge set and compare.
    let skeleton_edges_parent: Vec<(u32, u32)> = d
        .skeleton
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (
                d.skeleton_to_parent[u as usize],
                d.skeleton_to_parent[v as usize],
            );
            (a.min(b), a.max(b))
        })
        .collect();
    match g.h_components(&skeleton_edges_parent) {
        Err(e) => push("skeleton-subgraph", e.to_string()),
        Ok(recomputed) => {
            use std::collections::BTreeMap;
            let sizes = |dec: &Decomposition| -> BTreeMap<(u32, u32), u32> {
                dec.components
                    .iter()
                    .map(|c| (c.root, c.tree.n()))
                    .collect()
            };
            if sizes(&recomputed) != sizes(d) {
                push(
                    "components",
                    "component roots/sizes differ from the definition".into(),
                );
            }
        }
    }

    // Internal-vertex partition: component internals and skeleton vertices
    // cover every vertex exactly once.
    let mut owner = vec![0u32; g.n() as usize];
    for &v in &d.skeleton_to_parent {
        owner[v as usize] += 1;
    }
    for c in &d.components {
        for &v in c.to_parent.iter().skip(2) {
            owner[v as usize] += 1;
        }
        for &v in c.to_parent.iter().take(2) {
            if !d.skeleton_to_parent.contains(&v) {
                push("component-root", format!("root vertex {v} not in skeleton"));
            }
        }
    }
    if owner.iter().any(|&c| c != 1) {
        push("partition", "internal vertex sets do not partition V(G)".into());
    }

    // Lemma 4 bounds, exact integer arithmetic.
    let n = g.n() as u64 - 1;
    let (x, y, z) = d.class_maxima();
    if 2 * z > n {
        push("lemma4-z", format!("z = {z} > n/2 with n = {n}"));
    }
    let first = 2 * x <= n && 2 * y <= n - x;
    let second = 2 * y <= n && 2 * x <= n - y;
    if !(first || second) {
        push(
            "lemma4-xy",
            format!("x = {x}, y = {y} violate both branches with n = {n}"),
        );
    }

    if !d.designated.is_empty() {
        if d.designated[0] != (0, 1) {
            push("designated-root", "e_0 is not the root edge".into());
        }
        // P1: no designated edge roots a component with internal vertices.
        for c in &d.components {
            if c.tree.n() > 2 && d.designated.contains(&c.root) {
                push(
                    "p1",
                    format!("designated edge ({}, {}) roots a component", c.root.0, c.root.1),
                );
            }
        }
        // P2: every component root is a designated edge's side edge (or e_0).
        use std::collections::BTreeSet;
        let mut allowed: BTreeSet<(u32, u32)> = BTreeSet::new();
        allowed.insert((0, 1));
        for &e in &d.designated {
            for s in g.side_edges(e) {
                allowed.insert(s);
            }
        }
        for c in &d.components {
            if !allowed.contains(&c.root) {
                push(
                    "p2",
                    format!(
                        "component root ({}, {}) is not a side edge of a designated edge",
                        c.root.0, c.root.1
                    ),
                );
            }
        }
    }

    VerifyReport::from_violations(violations, None)
}

/// Which geometric lemma to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaOracle {
    /// A triangle abc with a inside bcd has smaller perimeter than bcd.
    Lemma2,
    /// If additionally |ad| >= 1 and the angle of abc at a is at most 90
    /// degrees, the perimeter gap exceeds 1.
    Lemma3,
}

/// Sample random configurations satisfying a lemma's hypotheses and check
/// its conclusion on each; any counterexample is reported with coordinates.
pub fn lemma_oracle(which: LemmaOracle, samples: u64, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut rejections = 0u64;
    let coord = |rng: &mut ChaCha8Rng| rng.random_range(-10.0..10.0);
    let mut accepted = 0u64;
    while accepted < samples {
        if rejections > 10_000_000 {
            return Err(Error::InvariantViolation(
                "oracle rejection cap exceeded".into(),
            ));
        }
        let b = Point::new(coord(&mut rng), coord(&mut rng));
        let c = Point::new(coord(&mut rng), coord(&mut rng));
        let d = Point::new(coord(&mut rng), coord(&mut rng));
        if orient(b, c, d) == 0 {
            rejections += 1;
            continue;
        }
        // a uniform inside triangle bcd.
        let (r1, r2): (f64, f64) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
        let s = r1.sqrt();
        let (l1, l2, l3) = (1.0 - s, s * (1.0 - r2), s * r2);
        let a = Point::new(
            l1 * b.x + l2 * c.x + l3 * d.x,
            l1 * b.y + l2 * c.y + l3 * d.y,
        );
        if orient(a, b, c) == 0 || !point_in_triangle(a, &Triangle::new(b, c, d), true) {
            rejections += 1;
            continue;
        }
        if which == LemmaOracle::Lemma3 {
            if a.dist(d) < 1.0 {
                rejections += 1;
                continue;
            }
            // Interior angle of abc at a, in degrees.
            let (ab, ac, bc) = (a.dist(b), a.dist(c), b.dist(c));
            let cos = (ab * ab + ac * ac - bc * bc) / (2.0 * ab * ac);
            if cos < 0.0 {
                rejections += 1;
                continue;
            }
        }
        accepted += 1;
        let p_inner = Triangle::new(a, b, c).perimeter();
        let p_outer = Triangle::new(b, c, d).perimeter();
        let required = match which {
            LemmaOracle::Lemma2 => p_inner,
            LemmaOracle::Lemma3 => p_inner + 1.0,
        };
        if p_outer <= required - METRIC_RTOL * required.max(1.0) {
            violations.push(Violation {
                kind: "lemma-violation".into(),
                detail: format!(
                    "a=({}, {}) b=({}, {}) c=({}, {}) d=({}, {}): p' = {p_outer}, bound = {required}",
                    a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y
                ),
            });
        }
    }
    Ok(VerifyReport::from_violations(violations, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn drawing(pts: &[(f64, f64)]) -> Drawing {
        Drawing::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn ratio_examples() {
        let square = drawing(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let edges = [(0, 1), (1, 2), (2, 3), (0, 3)];
        assert_eq!(edge_length_ratio(&edges, &square).unwrap(), 1.0);

        let path = drawing(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)]);
        assert_eq!(edge_length_ratio(&[(0, 1), (1, 2)], &path).unwrap(), 2.0);

        let tri = drawing(&[(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)]);
        let r = edge_length_ratio(&[(0, 1), (1, 2), (0, 2)], &tri).unwrap();
        assert!((r - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_errors() {
        let d = drawing(&[(0.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            edge_length_ratio(&[(0, 1)], &d),
            Err(Error::DegenerateEdge(0, 1))
        ));
        assert!(matches!(edge_length_ratio(&[], &d), Err(Error::NoEdges)));
    }

    #[test]
    fn ratio_scale_invariant() {
        use rand::{RngExt, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let pts: Vec<(f64, f64)> = (0..6)
                .map(|_| (rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)))
                .collect();
            let d = drawing(&pts);
            let edges = [(0u32, 1u32), (1, 2), (2, 3), (3, 4), (4, 5)];
            let r1 = match edge_length_ratio(&edges, &d) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let r2 = edge_length_ratio(&edges, &d.scaled(37.5)).unwrap();
            assert!((r1 - r2).abs() <= 1e-12 * r1);
        }
    }

    #[test]
    fn planar_verify_cases() {
        // K4 as triangle plus centroid: planar.
        let good = drawing(&[(0.0, 0.0), (3.0, 0.0), (0.0, 3.0), (1.0, 1.0)]);
        let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert!(verify_planar_straightline(&k4, &good).ok);

        // K4 as convex quadrilateral: the diagonals cross.
        let bad = drawing(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let report = verify_planar_straightline(&k4, &bad);
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| v.kind == "edge-crossing"));
    }

    #[test]
    fn proper_verify_cases() {
        // Two crossing edges on distinct points: proper but not planar.
        let d = drawing(&[(0.0, 0.0), (2.0, 2.0), (0.0, 2.0), (2.0, 0.0)]);
        let edges = [(0, 1), (2, 3)];
        assert!(verify_proper(&edges, &d).ok);
        assert!(!verify_planar_straightline(&edges, &d).ok);

        let coincident = drawing(&[(0.0, 0.0), (0.0, 0.0), (1.0, 1.0)]);
        assert!(!verify_proper(&[(0, 2)], &coincident).ok);

        // Vertex at the midpoint of a non-incident edge.
        let mid = drawing(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0)]);
        let report = verify_proper(&[(0, 1)], &mid);
        assert!(report.violations.iter().any(|v| v.kind == "vertex-on-edge"));
    }

    #[test]
    fn planar_ok_implies_proper_ok() {
        use rand::{RngExt, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let pts: Vec<(f64, f64)> = (0..8)
                .map(|_| (rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)))
                .collect();
            let d = drawing(&pts);
            let edges: Vec<(u32, u32)> = (0..7).map(|i| (i, i + 1)).collect();
            if verify_planar_straightline(&edges, &d).ok {
                assert!(verify_proper(&edges, &d).ok);
            }
        }
    }

    #[test]
    fn perimeter_trace_k1() {
        let h = (3.0f64).sqrt() / 2.0;
        let d = drawing(&[(0.0, 0.0), (1.0, 0.0), (0.5, h)]);
        let edges = [(0, 1), (0, 2), (1, 2)];
        let (trace, report) = nested_triangle_perimeters(1, &edges, &d, true).unwrap();
        assert_eq!(trace.perimeters.len(), 1);
        assert!((trace.perimeters[0] - 3.0).abs() < 1e-9);
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn perimeter_wrong_family() {
        let d = drawing(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.9), (0.5, 0.3)]);
        let edges = [(0, 1), (0, 2), (1, 2), (0, 3)];
        assert!(matches!(
            nested_triangle_perimeters(1, &edges, &d, true),
            Err(Error::NotNestedTriangles(_))
        ));
    }

    #[test]
    fn lemma2_centroid_case() {
        // a at the centroid of bcd: strict containment, strict inequality.
        let b = Point::new(0.0, 0.0);
        let c = Point::new(4.0, 0.0);
        let d = Point::new(0.0, 3.0);
        let a = Point::new(4.0 / 3.0, 1.0);
        let inner = Triangle::new(a, b, c).perimeter();
        let outer = Triangle::new(b, c, d).perimeter();
        assert!(outer > inner);
    }

    #[test]
    fn lemma3_segment_case() {
        // a on segment cd with |ad| = 1 and a right angle at a: gap > 1.
        let a = Point::new(0.0, 0.0);
        let d = Point::new(1.0, 0.0);
        let c = Point::new(-2.0, 0.0);
        let b = Point::new(0.0, 1.5);
        let inner = Triangle::new(a, b, c).perimeter();
        let outer = Triangle::new(b, c, d).perimeter();
        assert!((inner - 6.0).abs() < 1e-12);
        let expected_outer = 2.5 + 3.0 + (1.0f64 + 2.25).sqrt();
        assert!((outer - expected_outer).abs() < 1e-12);
        assert!(outer > inner + 1.0);
    }

    #[test]
    fn lemma_oracles_small_runs() {
        let r2 = lemma_oracle(LemmaOracle::Lemma2, 2000, 42).unwrap();
        assert!(r2.ok, "{:?}", r2.violations.first());
        let r3 = lemma_oracle(LemmaOracle::Lemma3, 2000, 43).unwrap();
        assert!(r3.ok, "{:?}", r3.violations.first());
    }
}
