use crate::error::{Error, Result};
use crate::geometry::{orient, Point};
use crate::model::{Drawing, TwoTree};

/// Input contract of the linear-2-tree drawer: a frame triangle (a1, a2, a3)
/// and minimum class lengths with l13 + l23 <= |a1 a2| and l12 < |a1 a2|.
///
/// `dist13` / `dist23` optionally raise the horizontal distance of the
/// class-3 cluster from a1 and a2 above the class minimums (the general
/// 2-tree drawer uses this to leave room on edges that must host triangle
/// components); `band_cap` limits the cluster band width.
#[derive(Clone, Copy, Debug)]
pub struct L2TParams {
    pub a1: Point,
    pub a2: Point,
    pub a3: Point,
    pub l12: f64,
    pub l13: f64,
    pub l23: f64,
    pub dist13: Option<f64>,
    pub dist23: Option<f64>,
    pub band_cap: Option<f64>,
}

impl L2TParams {
    pub fn new(a1: Point, a2: Point, a3: Point, l12: f64, l13: f64, l23: f64) -> Self {
        L2TParams {
            a1,
            a2,
            a3,
            l12,
            l13,
            l23,
            dist13: None,
            dist23: None,
            band_cap: None,
        }
    }

    fn validate(&self) -> Result<()> {
        let base = self.a1.dist(self.a2);
        if orient(self.a1, self.a2, self.a3) == 0 {
            return Err(Error::FrameTooSmall("degenerate frame triangle".into()));
        }
        if self.l12 < 1.0 || self.l13 < 1.0 || self.l23 < 1.0 {
            return Err(Error::FrameTooSmall(
                "class lengths must be at least 1".into(),
            ));
        }
        if self.l13 + self.l23 > base {
            return Err(Error::FrameTooSmall(format!(
                "l13 + l23 = {} exceeds |a1 a2| = {base}",
                self.l13 + self.l23
            )));
        }
        if !(self.l12 < base) {
            return Err(Error::FrameTooSmall(format!(
                "l12 = {} must be below |a1 a2| = {base}",
                self.l12
            )));
        }
        let lo = self.dist13.unwrap_or(self.l13).max(self.l13);
        let hi = base - self.dist23.unwrap_or(self.l23).max(self.l23);
        if lo > hi {
            return Err(Error::FrameTooSmall(format!(
                "foot-point interval empty: [{lo}, {hi}]"
            )));
        }
        Ok(())
    }
}

/// Geometry of one L2T run.
#[derive(Clone, Debug)]
pub struct L2TLayout {
    pub drawing: Drawing,
    pub classes: Vec<u8>,
}

/// Draw a linear 2-tree inside the frame so that (L1) the root lies on
/// a1, a2, (L2) every internal vertex is strictly inside the frame and
/// (L3) every class x-y edge is strictly longer than l_{x-y}.
///
/// Class-1 vertices cluster near a1, class-2 near a2, and class-3 vertices
/// sit on a leg rising from a lifted foot point; the leg tilts sideways
/// within the frame slack so its length scales with the base rather than
/// with the frame height (deep recursion frames are extremely flat, and a
/// vertical leg would crush the cluster spacing below float resolution).
pub fn l2t_draw(h: &TwoTree, params: &L2TParams) -> Result<Drawing> {
    Ok(l2t_layout(h, params)?.drawing)
}

pub fn l2t_layout(h: &TwoTree, params: &L2TParams) -> Result<L2TLayout> {
    if !h.is_linear() {
        return Err(Error::NotLinear);
    }
    params.validate()?;
    let classes = h.classes();
    let n1 = classes.iter().filter(|&&c| c == 1).count();
    let n2 = classes.iter().filter(|&&c| c == 2).count();
    let n3 = classes.iter().filter(|&&c| c == 3).count();

    let (a1, a2, a3) = (params.a1, params.a2, params.a3);
    let base = a1.dist(a2);
    let ux = (a2.x - a1.x) / base;
    let uy = (a2.y - a1.y) / base;
    let side = orient(a1, a2, a3) as f64;
    let (nx, ny) = (-uy * side, ux * side); // unit normal toward a3
    let at = |t: f64, hgt: f64| Point::new(a1.x + t * ux + hgt * nx, a1.y + t * uy + hgt * ny);

    // Foot interval honoring the requested cluster distances.
    let lo = params.dist13.unwrap_or(params.l13).max(params.l13);
    let hi = base - params.dist23.unwrap_or(params.l23).max(params.l23);
    let slack = (hi - lo) / 2.0;
    let t_p = (lo + hi) / 2.0;

    // Interior height above the foot.
    let t_hit = interior_height_at(a1, a2, a3, t_p);
    if t_hit <= 0.0 {
        return Err(Error::FrameTooSmall("foot point sees no frame interior".into()));
    }

    // Leg tilt spends most of the foot interval's slack (toward a2).
    let tilt = 0.9 * slack;
    let h_q = 0.05 * t_hit;

    // Cluster band width, kept strictly below every length budget: the leg
    // stays at least |a1 q| from a1 and, accounting for the tilt, at least
    // base - t_p - tilt from a2 horizontally (or |a2 q| when untilted);
    // class-1-2 lengths are at least base - 2 band.
    let d1 = base - t_p;
    let budget13 = (t_p * t_p + h_q * h_q).sqrt() - params.l13;
    let budget23 = if tilt > 0.0 {
        d1 - tilt - params.l23
    } else {
        (d1 * d1 + h_q * h_q).sqrt() - params.l23
    };
    let band = params
        .band_cap
        .unwrap_or(f64::INFINITY)
        .min(budget13.max(0.0) * 0.9)
        .min(budget23.max(0.0) * 0.9)
        .min((base - params.l12).max(0.0) * 0.45)
        .min(0.15 * base)
        .max(0.0);

    // Lifted tripod center q and the tilted class-3 leg: the tilt keeps the
    // leg length on the scale of the base even in very flat frames, which
    // keeps cluster spacing clear of float resolution down the recursion.
    let q = at(t_p, h_q);
    let leg_rise = 0.75 * t_hit;
    let target = at(t_p + tilt, h_q + leg_rise);
    let top = clip_into_frame(q, target, a1, a2, a3);

    let toward = |from: Point, to: Point, dist: f64| -> Point {
        let d = from.dist(to);
        if d == 0.0 {
            return from;
        }
        Point::new(
            from.x + dist * (to.x - from.x) / d,
            from.y + dist * (to.y - from.y) / d,
        )
    };

    let leg = top.dist(q);
    let b_pts: Vec<Point> = (1..=n3)
        .map(|i| toward(top, q, leg * i as f64 / (n3 as f64 + 1.0)))
        .collect();
    let s_c = band.min(a1.dist(q) * 0.4);
    let c_pts: Vec<Point> = (0..n1)
        .map(|i| {
            if i == 0 {
                a1
            } else {
                toward(a1, q, s_c * i as f64 / (n1 as f64 - 1.0).max(1.0))
            }
        })
        .collect();
    let s_d = band.min(a2.dist(q) * 0.4);
    let d_pts: Vec<Point> = (0..n2)
        .map(|i| {
            if i == 0 {
                a2
            } else {
                toward(a2, q, s_d * i as f64 / (n2 as f64 - 1.0).max(1.0))
            }
        })
        .collect();

    // Walk the chain of nontrivial edges, placing each edge's apexes with
    // the chain-continuing apex deepest.
    let mut pos = vec![Point::new(f64::NAN, f64::NAN); h.n() as usize];
    pos[0] = c_pts[0];
    if h.n() > 1 {
        pos[1] = d_pts[0];
    }
    let (mut used1, mut used2, mut used3) = (1usize, 1usize, 0usize);
    let mut cur = (0u32, 1u32);
    loop {
        let apexes = h.apexes(cur);
        if apexes.is_empty() {
            break;
        }
        let mut chain_apex: Option<u32> = None;
        let mut next_edge: Option<(u32, u32)> = None;
        for &w in apexes {
            for e in [
                (cur.0.min(w), cur.0.max(w)),
                (cur.1.min(w), cur.1.max(w)),
            ] {
                if !h.is_trivial(e) {
                    debug_assert!(next_edge.is_none(), "linear 2-tree chain is unique");
                    chain_apex = Some(w);
                    next_edge = Some(e);
                }
            }
        }
        let mut ordered: Vec<u32> = apexes
            .iter()
            .copied()
            .filter(|&w| Some(w) != chain_apex)
            .collect();
        if let Some(w) = chain_apex {
            ordered.push(w);
        }
        for w in ordered {
            let point = match classes[w as usize] {
                3 => {
                    used3 += 1;
                    b_pts[used3 - 1]
                }
                1 => {
                    used1 += 1;
                    c_pts[used1 - 1]
                }
                _ => {
                    used2 += 1;
                    d_pts[used2 - 1]
                }
            };
            pos[w as usize] = point;
        }
        match next_edge {
            Some(e) => cur = e,
            None => break,
        }
    }
    debug_assert!(pos.iter().all(|p| p.is_finite()), "chain covered all vertices");

    Ok(L2TLayout {
        drawing: Drawing::new(pos)?,
        classes,
    })
}

/// Interior height of the frame above the base point at distance t from a1
/// along the base.
pub(crate) fn interior_height_at(a1: Point, a2: Point, a3: Point, t: f64) -> f64 {
    let base = a1.dist(a2);
    let ux = (a2.x - a1.x) / base;
    let uy = (a2.y - a1.y) / base;
    let side = orient(a1, a2, a3) as f64;
    let (nx, ny) = (-uy * side, ux * side);
    let p = Point::new(a1.x + t * ux, a1.y + t * uy);
    let mut best = f64::INFINITY;
    for (s1, s2) in [(a1, a3), (a2, a3)] {
        if let Some(tt) = ray_segment(p, (nx, ny), s1, s2) {
            best = best.min(tt);
        }
    }
    if best.is_finite() {
        best
    } else {
        0.0
    }
}

/// Point along origin -> target clipped to stay strictly inside the frame.
fn clip_into_frame(origin: Point, target: Point, a1: Point, a2: Point, a3: Point) -> Point {
    let dir = (target.x - origin.x, target.y - origin.y);
    let mut t_exit = 1.0f64;
    for (s1, s2) in [(a1, a2), (a1, a3), (a2, a3)] {
        if let Some(t) = ray_segment(origin, dir, s1, s2) {
            t_exit = t_exit.min(t * 0.85);
        }
    }
    Point::new(origin.x + t_exit * dir.0, origin.y + t_exit * dir.1)
}

/// Parameter t > 0 with origin + t * dir on segment (s1, s2), if any.
fn ray_segment(origin: Point, dir: (f64, f64), s1: Point, s2: Point) -> Option<f64> {
    let (dx, dy) = dir;
    let (ex, ey) = (s2.x - s1.x, s2.y - s1.y);
    let den = dx * ey - dy * ex;
    if den == 0.0 {
        return None;
    }
    let (wx, wy) = (s1.x - origin.x, s1.y - origin.y);
    let t = (wx * ey - wy * ex) / den;
    let s = (wx * dy - wy * dx) / den;
    if t > 0.0 && (0.0..=1.0).contains(&s) {
        Some(t)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_linear_2tree, gen_random_2tree};
    use crate::geometry::{point_in_triangle, Triangle};
    use crate::metrics::verify_planar_straightline;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frame(hyp: f64) -> (Point, Point, Point) {
        (
            Point::new(0.0, 0.0),
            Point::new(hyp, 0.0),
            Point::new(hyp / 2.0, hyp / 2.0),
        )
    }

    fn check_all(h: &TwoTree, params: &L2TParams) -> Drawing {
        let drawing = l2t_draw(h, params).unwrap();
        // L1: exact root placement.
        assert_eq!(drawing.point(0), params.a1);
        assert_eq!(drawing.point(1), params.a2);
        // L2: strict interiority of internal vertices.
        let t = Triangle::new(params.a1, params.a2, params.a3);
        for v in 2..h.n() {
            assert!(point_in_triangle(drawing.point(v), &t, true), "vertex {v}");
        }
        // L3: strict class-length thresholds.
        let classes = h.classes();
        for &(u, v) in h.edges() {
            let l = drawing.edge_len(u, v);
            let bound = match (
                classes[u as usize].min(classes[v as usize]),
                classes[u as usize].max(classes[v as usize]),
            ) {
                (1, 2) => params.l12,
                (1, 3) => params.l13,
                _ => params.l23,
            };
            assert!(l > bound, "edge ({u}, {v}): {l} <= {bound}");
        }
        let verdict = verify_planar_straightline(h.edges(), &drawing);
        assert!(verdict.ok, "{:?}", verdict.violations.first());
        drawing
    }

    #[test]
    fn single_edge() {
        let h = TwoTree::bare_edge();
        let (a1, a2, a3) = frame(3.0);
        let params = L2TParams::new(a1, a2, a3, 1.5, 1.0, 1.0);
        let d = check_all(&h, &params);
        assert!(d.edge_len(0, 1) >= 1.5);
    }

    #[test]
    fn triangle_lengths() {
        let h = TwoTree::from_parent_pairs(&[(0, 1)]).unwrap();
        let (a1, a2, a3) = frame(3.0);
        let params = L2TParams::new(a1, a2, a3, 1.2, 1.3, 1.4);
        check_all(&h, &params);
    }

    #[test]
    fn random_linear_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..60 {
            let len = rng.random_range(1..8usize);
            let profile: Vec<u32> = (0..len).map(|_| rng.random_range(1..5u32)).collect();
            let h = gen_linear_2tree(&profile).unwrap();
            if h.n() > 50 {
                continue;
            }
            let l13 = rng.random_range(1.0..2.0);
            let l23 = rng.random_range(1.0..2.0);
            let hyp: f64 = (l13 + l23) * rng.random_range(1.0..2.0) + 0.1;
            let l12 = rng.random_range(1.0..hyp.max(1.01));
            let (a1, a2, a3) = frame(hyp);
            let params = L2TParams::new(a1, a2, a3, l12.min(hyp - 0.05), l13, l23);
            check_all(&h, &params);
        }
    }

    #[test]
    fn flat_sliver_frames() {
        // Extremely flat frames must still separate the clusters.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for exp in [2i32, 4, 6, 8] {
            let height = 10.0f64.powi(-exp);
            let a1 = Point::new(0.0, 0.0);
            let a2 = Point::new(6.0, 0.0);
            let a3 = Point::new(5.2, height);
            for _ in 0..10 {
                let len = rng.random_range(1..5usize);
                let profile: Vec<u32> = (0..len).map(|_| rng.random_range(1..4u32)).collect();
                let h = gen_linear_2tree(&profile).unwrap();
                let params = L2TParams::new(a1, a2, a3, 1.0, 1.3, 1.3);
                check_all(&h, &params);
            }
        }
    }

    #[test]
    fn non_linear_rejected() {
        let mut t = None;
        for seed in 0..50 {
            let g = gen_random_2tree(12, seed).unwrap();
            if !g.is_linear() {
                t = Some(g);
                break;
            }
        }
        let g = t.expect("some random 12-vertex 2-tree is non-linear");
        let (a1, a2, a3) = frame(10.0);
        let params = L2TParams::new(a1, a2, a3, 1.0, 1.0, 1.0);
        assert!(matches!(l2t_draw(&g, &params), Err(Error::NotLinear)));
    }

    #[test]
    fn frame_validation() {
        let h = TwoTree::bare_edge();
        let (a1, a2, a3) = frame(1.5);
        // l13 + l23 = 2 > 1.5.
        let params = L2TParams::new(a1, a2, a3, 1.0, 1.0, 1.0);
        assert!(matches!(
            l2t_draw(&h, &params),
            Err(Error::FrameTooSmall(_))
        ));
    }
}
