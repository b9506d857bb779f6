use crate::draw::decompose::decompose_2tree;
use crate::draw::l2t::{l2t_layout, L2TParams};
use crate::draw::weight::f_weight;
use crate::draw::DrawReport;
use crate::error::{Error, Result};
use crate::geometry::{
    on_segment, orient, point_in_triangle, point_segment_dist, segment_segment_dist,
    segments_conflict, Point, Segment, Triangle,
};
use crate::metrics::{length_stats, verify_planar_straightline};
use crate::model::{Drawing, EdgeClass, TwoTree};

/// Cluster distance enforced on classes that must host triangle
/// components: a point at distance >= 1 from both ends of a segment fits
/// in an arbitrarily thin sliver only if the segment is longer than 2.
const TRIANGLE_DIST: f64 = 2.045;
/// Sub-instances up to this many internal-plus-one vertices may fall back
/// to the flat spine layout when the sliver recursion cannot fund its
/// triangle hosts.
const SMALL_N: u64 = 11;

/// Draw a 2-tree with every edge length in [1, f(n)], n = vertex count
/// minus one, hence edge-length ratio at most f(n) = n^(log2 phi).
///
/// The construction follows the decomposition recursion: draw a linear
/// skeleton with class-length guarantees f(x), f(y), f(z), then draw every
/// component recursively inside a thin triangle erected on its root edge.
/// Components that are single triangles need absolute room (their apex
/// must be at distance >= 1 from both root ends), which the skeleton
/// funds by stretching the affected cluster distances; small sub-instances
/// where that is impossible use a flat spine layout instead.
pub fn draw_2tree(g: &TwoTree) -> Result<DrawReport> {
    let n = g.n() as u64 - 1;
    let hyp = f_weight(n)?;
    let a1 = Point::new(0.0, 0.0);
    let a2 = Point::new(hyp, 0.0);
    let a3 = Point::new(hyp / 2.0, hyp / 2.0);
    let pts = draw_rec(g, a1, a2, a3, 0)?;
    let drawing = Drawing::new(pts)?;
    let stats = length_stats(g.edges(), &drawing)?;
    Ok(DrawReport {
        drawing,
        stats,
        theoretical_bound: hyp,
    })
}

fn draw_rec(g: &TwoTree, a1: Point, a2: Point, a3: Point, depth: u32) -> Result<Vec<Point>> {
    if depth > 300 {
        return Err(Error::PrecisionExhausted { step: depth as usize });
    }
    let n = g.n() as u64 - 1;
    if n == 1 {
        return Ok(vec![a1, a2]);
    }
    if n == 2 {
        let t = place_triangle_apex(a1, a2, a3)?;
        return Ok(vec![a1, a2, t]);
    }
    if n <= SMALL_N {
        if let Ok(pts) = standard_level(g, a1, a2, a3, depth) {
            return Ok(pts);
        }
        return flat_small(g, a1, a2, a3);
    }
    standard_level(g, a1, a2, a3, depth)
}

/// Interior height of the frame above the base point at parameter t along
/// a1 -> a2 (distance to the far boundary along the inward normal).
fn interior_height(a1: Point, a2: Point, a3: Point, t: f64) -> f64 {
    let base = a1.dist(a2);
    let ux = (a2.x - a1.x) / base;
    let uy = (a2.y - a1.y) / base;
    let side = orient(a1, a2, a3) as f64;
    let (nx, ny) = (-uy * side, ux * side);
    let p = Point::new(a1.x + t * ux, a1.y + t * uy);
    let mut best = f64::INFINITY;
    for (s1, s2) in [(a1, a3), (a2, a3)] {
        let (ex, ey) = (s2.x - s1.x, s2.y - s1.y);
        let den = nx * ey - ny * ex;
        if den == 0.0 {
            continue;
        }
        let (wx, wy) = (s1.x - p.x, s1.y - p.y);
        let tt = (wx * ey - wy * ex) / den;
        let ss = (wx * ny - wy * nx) / den;
        if tt > 0.0 && (0.0..=1.0).contains(&ss) {
            best = best.min(tt);
        }
    }
    if best.is_finite() {
        best
    } else {
        0.0
    }
}

fn unit_and_normal(a1: Point, a2: Point, a3: Point) -> (f64, f64, f64, f64) {
    let base = a1.dist(a2);
    let ux = (a2.x - a1.x) / base;
    let uy = (a2.y - a1.y) / base;
    let side = orient(a1, a2, a3) as f64;
    (ux, uy, -uy * side, ux * side)
}

/// Apex for a bare triangle instance: distance >= 1 from both base ends,
/// strictly inside the frame.
fn place_triangle_apex(a1: Point, a2: Point, a3: Point) -> Result<Point> {
    let base = a1.dist(a2);
    let (ux, uy, nx, ny) = unit_and_normal(a1, a2, a3);
    let h_int = interior_height(a1, a2, a3, base / 2.0);
    if h_int <= 0.0 {
        return Err(Error::FrameTooSmall("degenerate frame".into()));
    }
    let half = base / 2.0;
    let need = if half >= 1.02 {
        0.0
    } else {
        (1.02f64 * 1.02 - half * half).sqrt()
    };
    let h = if need == 0.0 {
        h_int / 2.0
    } else {
        need * 1.05
    };
    if h >= h_int * 0.98 {
        return Err(Error::FrameTooSmall(format!(
            "triangle apex needs height {h} in a frame of height {h_int}"
        )));
    }
    let t = Point::new(
        a1.x + half * ux + h * nx,
        a1.y + half * uy + h * ny,
    );
    debug_assert!(t.dist(a1) >= 1.0 && t.dist(a2) >= 1.0);
    Ok(t)
}

/// One level of the decomposition recursion.
fn standard_level(g: &TwoTree, a1: Point, a2: Point, a3: Point, depth: u32) -> Result<Vec<Point>> {
    let n = g.n() as u64 - 1;
    let base = a1.dist(a2);
    let d = decompose_2tree(g)?;
    let (x, y, z) = d.class_maxima();
    let (fx, fy, fz) = (f_weight(x)?, f_weight(y)?, f_weight(z)?);
    let need13 = if d.class_hosts_triangle(EdgeClass::C13) {
        fx.max(TRIANGLE_DIST)
    } else {
        fx
    };
    let need23 = if d.class_hosts_triangle(EdgeClass::C23) {
        fy.max(TRIANGLE_DIST)
    } else {
        fy
    };
    if need13 + need23 >= base {
        return Err(Error::FrameTooSmall(format!(
            "cannot fund triangle hosts: {need13} + {need23} >= {base} at n = {n}"
        )));
    }
    // Spend a tenth of the frame slack on cluster bands and keep the
    // hosting-length guarantees strict; the rest funds the leg tilt.
    let free = base - need13 - need23;
    let margin = (1e-3 * base).min(free / 20.0);
    let band_budget = ((free - 2.0 * margin) / 10.0).min(0.12 * base);
    let dist13 = need13 + 1.1 * band_budget + margin;
    let dist23 = need23 + 1.1 * band_budget + margin;

    let params = L2TParams {
        a1,
        a2,
        a3,
        l12: fz,
        l13: fx,
        l23: fy,
        dist13: Some(dist13),
        dist23: Some(dist23),
        band_cap: Some(band_budget),
    };
    let layout = l2t_layout(&d.skeleton, &params)?;

    let mut pts = vec![Point::new(f64::NAN, f64::NAN); g.n() as usize];
    for (local, &gid) in d.skeleton_to_parent.iter().enumerate() {
        pts[gid as usize] = layout.drawing.point(local as u32);
    }

    // Level-local geometry for clean sliver placement.
    let mut segs: Vec<Segment> = d
        .skeleton
        .edges()
        .iter()
        .map(|&(u, v)| {
            Segment::new(
                layout.drawing.point(u),
                layout.drawing.point(v),
            )
        })
        .collect();
    segs.push(Segment::new(a1, a3));
    segs.push(Segment::new(a2, a3));
    segs.push(Segment::new(a1, a2));
    let mut verts: Vec<Point> = layout.drawing.points.clone();
    verts.push(a3);

    // Erect a sliver frame on every component that has internal vertices,
    // largest first.
    let mut order: Vec<usize> = (0..d.components.len())
        .filter(|&i| d.components[i].tree.n() >= 3)
        .collect();
    order.sort_by_key(|&i| std::cmp::Reverse(d.components[i].tree.n()));
    let mut frames: Vec<(usize, Point, Point, Point)> = Vec::new();
    for idx in order {
        let c = &d.components[idx];
        let pu = pts[c.to_parent[0] as usize];
        let pv = pts[c.to_parent[1] as usize];
        let apex = place_sliver(pu, pv, (a1, a2, a3), &segs, &verts, &frames, depth)?;
        frames.push((idx, pu, pv, apex));
    }

    for (idx, pu, pv, apex) in frames {
        let c = &d.components[idx];
        let sub = draw_rec(&c.tree, pu, pv, apex, depth + 1)?;
        for (local, &gid) in c.to_parent.iter().enumerate().skip(2) {
            pts[gid as usize] = sub[local];
        }
        #[cfg(debug_assertions)]
        {
            let tri = Triangle::new(pu, pv, apex);
            for (local, &gid) in c.to_parent.iter().enumerate().skip(2) {
                debug_assert!(
                    point_in_triangle(pts[gid as usize], &tri, false),
                    "depth {depth}: component ({}, {}) vertex {local} escaped its sliver",
                    c.root.0,
                    c.root.1
                );
            }
        }
    }
    debug_assert!(pts.iter().all(|p| p.is_finite()));
    #[cfg(debug_assertions)]
    {
        let drawing = Drawing::new(pts.clone())?;
        let verdict = verify_planar_straightline(g.edges(), &drawing);
        debug_assert!(
            verdict.ok,
            "standard_level depth {depth} n {n}: {:?}\nframe ({:?}, {:?}, {:?})\npts {:?}\npairs {:?}",
            verdict.violations.first(),
            a1,
            a2,
            a3,
            pts,
            g.parent_pairs()
        );
    }
    Ok(pts)
}

/// Find a clean sliver apex for a component rooted at the drawn segment
/// (pu, pv): a Thales-circle point (so the root stays the hypotenuse) at
/// shrinking perpendicular distances, on either side, validated exactly
/// against the level's geometry.
fn place_sliver(
    pu: Point,
    pv: Point,
    frame: (Point, Point, Point),
    segs: &[Segment],
    verts: &[Point],
    placed: &[(usize, Point, Point, Point)],
    depth: u32,
) -> Result<Point> {
    let len = pu.dist(pv);
    let (ux, uy) = ((pv.x - pu.x) / len, (pv.y - pu.y) / len);
    let mid = Point::new((pu.x + pv.x) / 2.0, (pu.y + pv.y) / 2.0);

    // Starting distance: half the clearance of the root segment.
    let mut clearance = len / 4.0;
    for s in segs {
        if touches(s, pu, pv) {
            continue;
        }
        clearance = clearance.min(segment_segment_dist(Segment::new(pu, pv), *s) / 2.0);
    }
    for p in verts {
        if *p == pu || *p == pv {
            continue;
        }
        clearance = clearance.min(point_segment_dist(*p, pu, pv) / 2.0);
    }
    let d0 = if clearance > 0.0 { clearance } else { len / 8.0 };

    let ft = Triangle::new(frame.0, frame.1, frame.2);
    for side in [1.0f64, -1.0] {
        let (nx, ny) = (-uy * side, ux * side);
        let mut dist = d0.min(len / 2.0 * 0.999);
        for _ in 0..80 {
            let off = ((len / 2.0) * (len / 2.0) - dist * dist).max(0.0).sqrt();
            let apex = Point::new(
                mid.x + off * ux + dist * nx,
                mid.y + off * uy + dist * ny,
            );
            if sliver_clean(pu, pv, apex, &ft, segs, verts, placed) {
                return Ok(apex);
            }
            dist /= 2.0;
            if dist < 1e-13 * len {
                break;
            }
        }
    }
    Err(Error::PrecisionExhausted {
        step: depth as usize,
    })
}

fn touches(s: &Segment, pu: Point, pv: Point) -> bool {
    s.a == pu || s.a == pv || s.b == pu || s.b == pv
}

fn sliver_clean(
    pu: Point,
    pv: Point,
    apex: Point,
    frame: &Triangle,
    segs: &[Segment],
    verts: &[Point],
    placed: &[(usize, Point, Point, Point)],
) -> bool {
    if orient(pu, pv, apex) == 0 {
        return false;
    }
    if !point_in_triangle(apex, frame, true) {
        return false;
    }
    let tri = Triangle::new(pu, pv, apex);
    let new_sides = [Segment::new(pu, apex), Segment::new(pv, apex)];
    // No drawn vertex may lie in or on the sliver (its corners aside).
    for p in verts {
        if *p == pu || *p == pv {
            continue;
        }
        if point_in_triangle(*p, &tri, false) {
            return false;
        }
    }
    // The new sides must not meet any drawn segment beyond shared corners,
    // and the apex must not lie on one.
    for s in segs {
        if on_segment(apex, s.a, s.b) {
            return false;
        }
        for ns in &new_sides {
            if segments_conflict(*s, *ns) {
                return false;
            }
        }
    }
    // Pairwise against already placed slivers.
    for &(_, qu, qv, qa) in placed {
        let other = Triangle::new(qu, qv, qa);
        if point_in_triangle(apex, &other, false) || point_in_triangle(qa, &tri, false) {
            return false;
        }
        for os in [
            Segment::new(qu, qa),
            Segment::new(qv, qa),
            Segment::new(qu, qv),
        ] {
            for ns in &new_sides {
                if segments_conflict(os, *ns) {
                    return false;
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------
// Flat spine layout for small sub-instances.
// ---------------------------------------------------------------------

/// Draw a whole small 2-tree on the frame's base: x positions quantized to
/// slots at least 1.02 apart (a proper slot assignment keeps adjacent
/// vertices in different slots), y positions from a difference-constraint
/// solve that puts every vertex on the correct side of every covering
/// chord. Exact verification gates every candidate.
fn flat_small(g: &TwoTree, a1: Point, a2: Point, a3: Point) -> Result<Vec<Point>> {
    use rand::{RngExt, SeedableRng};
    let base = a1.dist(a2);
    let max_slots = (base / 1.02).floor() as usize + 1;
    if max_slots < 3 {
        return Err(Error::FrameTooSmall(format!(
            "flat layout needs 3 slots, base = {base}"
        )));
    }
    let nv = g.n() as usize;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(g.n() as u64 * 1315423911);
    for m in 3..=max_slots.min(8) {
        // Natural 3-coloring first, then randomized proper assignments.
        let mut candidates: Vec<Vec<usize>> = Vec::new();
        let classes = g.classes();
        let mid = m / 2;
        candidates.push(
            classes
                .iter()
                .map(|&c| match c {
                    1 => 0,
                    2 => m - 1,
                    _ => mid,
                })
                .collect(),
        );
        for _ in 0..12 {
            let mut slots = vec![0usize; nv];
            slots[1] = m - 1;
            for v in 2..nv {
                let (p, q) = g.parent_edge(v as u32);
                let (sp, sq) = (slots[p as usize], slots[q as usize]);
                let mut pick;
                loop {
                    pick = rng.random_range(0..m);
                    if pick != sp && pick != sq {
                        break;
                    }
                }
                slots[v] = pick;
            }
            candidates.push(slots);
        }
        for slots in candidates {
            if slots[0] == slots[1] {
                continue;
            }
            for flips in 0..8u32 {
                if let Ok(pts) = flat_attempt(g, &slots, m, a1, a2, a3, flips) {
                    return Ok(pts);
                }
            }
        }
    }
    Err(Error::PrecisionExhausted { step: nv })
}

fn flat_attempt(
    g: &TwoTree,
    slots: &[usize],
    m: usize,
    a1: Point,
    a2: Point,
    a3: Point,
    flips: u32,
) -> Result<Vec<Point>> {
    let nv = g.n() as usize;
    let base = a1.dist(a2);
    let s = base / (m as f64 - 1.0);
    let jit = s * 0.001;

    // x positions: slot centers with per-slot jitter; v0 and v1 pinned to
    // the frame corners.
    let mut xs = vec![0.0f64; nv];
    let mut counts = vec![0usize; m];
    for v in 0..nv {
        let slot = slots[v];
        let idx = counts[slot];
        counts[slot] += 1;
        let center = slot as f64 * s;
        xs[v] = match v {
            0 => 0.0,
            1 => base,
            _ => {
                if slot == m - 1 {
                    center - (idx as f64 + 1.0) * jit
                } else if slot == 0 {
                    center + (idx as f64 + 1.0) * jit
                } else {
                    center + idx as f64 * jit
                }
            }
        };
    }

    // Edge intervals and the interleaving-conflict graph.
    let edges = g.edges();
    let iv: Vec<(f64, f64)> = edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (xs[u as usize], xs[v as usize]);
            (a.min(b), a.max(b))
        })
        .collect();
    let ne = edges.len();
    let mut conflict: Vec<Vec<usize>> = vec![Vec::new(); ne];
    for i in 0..ne {
        for j in i + 1..ne {
            let (ei, ej) = (edges[i], edges[j]);
            if ei.0 == ej.0 || ei.0 == ej.1 || ei.1 == ej.0 || ei.1 == ej.1 {
                continue;
            }
            let ((l1, r1), (l2, r2)) = (iv[i], iv[j]);
            let interleave = (l1 < l2 && l2 < r1 && r1 < r2) || (l2 < l1 && l1 < r2 && r2 < r1);
            if interleave {
                conflict[i].push(j);
                conflict[j].push(i);
            }
        }
    }

    // Two-color the conflict graph; orientation of selected components is
    // controlled by the flip mask.
    let mut page = vec![u8::MAX; ne];
    let mut comp_id = 0u32;
    for start in 0..ne {
        if page[start] != u8::MAX {
            continue;
        }
        let orient_down = (flips >> comp_id.min(7)) & 1 == 0;
        comp_id += 1;
        // Root the component at its longest interval, preferring down
        // (vertices above) so the frame's base edge keeps everything above.
        let seed = start;
        page[seed] = if orient_down { 1 } else { 0 };
        let mut queue = std::collections::VecDeque::from([seed]);
        while let Some(i) = queue.pop_front() {
            for &j in &conflict[i] {
                if page[j] == u8::MAX {
                    page[j] = 1 - page[i];
                    queue.push_back(j);
                } else if page[j] == page[i] {
                    return Err(Error::PrecisionExhausted { step: j });
                }
            }
        }
    }

    // True chord constraints: a vertex inside a chord's x-interval must be
    // strictly below it (page 0) or strictly above it (page 1). Solved by
    // cyclic projection in normalized heights [0, 1]; v0 and v1 are pinned
    // to height 0.
    struct Chord {
        w: usize,
        u: usize,
        v: usize,
        t: f64, // interpolation parameter of w in (u, v)
        above: bool,
    }
    let mut chords = Vec::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        let (lo, hi) = iv[i];
        let (u, v) = (u as usize, v as usize);
        for w in 0..nv {
            if w == u || w == v {
                continue;
            }
            if xs[w] > lo && xs[w] < hi {
                let t = (xs[w] - xs[u]) / (xs[v] - xs[u]);
                chords.push(Chord {
                    w,
                    u,
                    v,
                    t,
                    above: page[i] == 1,
                });
            }
        }
    }
    // Cyclic projection with multiplicative margins: every internal vertex
    // is covered by the root chord (height 0), so positivity emerges from
    // the root's own "above" constraint.
    let mut ys = vec![0.0f64; nv];
    for (v, y) in ys.iter_mut().enumerate().skip(2) {
        *y = 0.5 + 1e-3 * (v as f64);
    }
    let mut feasible = false;
    for _ in 0..3000 {
        let mut moved = false;
        for c in &chords {
            let chord_y = ys[c.u] + c.t * (ys[c.v] - ys[c.u]);
            if c.above {
                let target = if chord_y > 0.0 {
                    chord_y * 1.02 + 1e-15
                } else {
                    chord_y * 0.98 + 1e-15
                };
                if ys[c.w] < target {
                    ys[c.w] = target;
                    moved = true;
                }
            } else {
                let target = if chord_y > 0.0 {
                    chord_y * 0.98 - 1e-15
                } else {
                    chord_y * 1.02 - 1e-15
                };
                if ys[c.w] > target {
                    ys[c.w] = target;
                    moved = true;
                }
            }
        }
        for y in ys.iter_mut().skip(2) {
            if *y > 1.0 {
                *y = 1.0;
                moved = true;
            }
        }
        if !moved {
            feasible = true;
            break;
        }
    }
    // Reject non-convergence and collapsed heights.
    if !feasible || ys.iter().skip(2).any(|&y| !(y > 1e-13 && y <= 1.0)) {
        return Err(Error::PrecisionExhausted { step: nv });
    }

    // Map normalized heights into the frame above the base.
    let (ux, uy, nx, ny) = unit_and_normal(a1, a2, a3);
    let mut h_avail = f64::INFINITY;
    for v in 2..nv {
        h_avail = h_avail.min(interior_height(a1, a2, a3, xs[v]));
    }
    if !h_avail.is_finite() || h_avail <= 0.0 {
        return Err(Error::FrameTooSmall("no interior height".into()));
    }
    let eta = 0.4 * h_avail;
    let pts: Vec<Point> = (0..nv)
        .map(|v| {
            let y = if v < 2 { 0.0 } else { eta * ys[v] };
            Point::new(a1.x + xs[v] * ux + y * nx, a1.y + xs[v] * uy + y * ny)
        })
        .collect();

    // Exact gate: planarity, containment, lengths.
    let drawing = Drawing::new(pts.clone())?;
    let verdict = verify_planar_straightline(edges, &drawing);
    if !verdict.ok {
        return Err(Error::PrecisionExhausted { step: 0 });
    }
    let ft = Triangle::new(a1, a2, a3);
    for v in 2..nv {
        if !point_in_triangle(pts[v], &ft, true) {
            return Err(Error::PrecisionExhausted { step: v });
        }
    }
    let stats = length_stats(edges, &drawing)?;
    if stats.min_len < 1.0 || stats.max_len > base * (1.0 + 1e-12) {
        return Err(Error::PrecisionExhausted { step: 0 });
    }
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_random_2tree;

    fn check(g: &TwoTree) -> DrawReport {
        let report = draw_2tree(g).unwrap();
        let verdict = verify_planar_straightline(g.edges(), &report.drawing);
        assert!(verdict.ok, "{:?}", verdict.violations.first());
        let n = g.n() as u64 - 1;
        let bound = f_weight(n).unwrap();
        assert!(
            report.stats.ratio <= bound * (1.0 + 1e-9),
            "ratio {} > f({n}) = {bound}",
            report.stats.ratio
        );
        assert!(report.stats.min_len >= 1.0 - 1e-9);
        report
    }

    #[test]
    fn single_edge() {
        let g = TwoTree::bare_edge();
        let report = check(&g);
        assert_eq!(report.stats.ratio, 1.0);
        assert_eq!(report.drawing.edge_len(0, 1), 1.0);
    }

    #[test]
    fn triangle() {
        let g = TwoTree::from_parent_pairs(&[(0, 1)]).unwrap();
        let report = check(&g);
        assert!(report.stats.ratio <= crate::draw::weight::PHI * (1.0 + 1e-12));
    }

    #[test]
    fn small_instances_exhaustive_shapes() {
        // Every labeled 2-tree on up to 5 vertices, checked fully.
        fn rec(pairs: &mut Vec<(u32, u32)>, edges: &mut Vec<(u32, u32)>, n_left: u32) {
            if n_left == 0 {
                let g = TwoTree::from_parent_pairs(pairs).unwrap();
                check(&g);
                return;
            }
            let cur = edges.len();
            for i in 0..cur {
                let (p, q) = edges[i];
                let v = pairs.len() as u32 + 2;
                pairs.push((p, q));
                edges.push((p, v));
                edges.push((q, v));
                rec(pairs, edges, n_left - 1);
                edges.truncate(cur);
                pairs.pop();
            }
        }
        for extra in 0..=3u32 {
            rec(&mut Vec::new(), &mut vec![(0, 1)], extra);
        }
    }

    #[test]
    fn random_instances() {
        for seed in 0..40u64 {
            let n = 5 + (seed % 30) as u32;
            let g = gen_random_2tree(n, seed).unwrap();
            check(&g);
        }
    }

    #[test]
    fn medium_instance() {
        let g = gen_random_2tree(200, 1).unwrap();
        check(&g);
    }
}
