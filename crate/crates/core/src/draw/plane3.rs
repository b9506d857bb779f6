use crate::draw::DrawReport;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::metrics::length_stats;
use crate::model::{Drawing, Plane3Tree};

/// Draw a plane 3-tree of depth k with every edge length in [1, k + 1 + eps].
///
/// The outer triangle has y-extension `eps` and side x-extensions 1, k and
/// k + 1. Every face of the partial drawing keeps one side of x-extension
/// exactly 1, one of at least k_f and one of at least k_f + 1, where k_f is
/// the depth of the face's subtree; the vertex inserted into a face goes at
/// x-distance exactly 1 from the face's far corner, at the midpoint of the
/// vertical chord through the face interior.
pub fn draw_plane_3tree(g: &Plane3Tree, eps: f64) -> Result<DrawReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon);
    }
    let k = g.depth() as f64;
    let mut pts = vec![Point::new(f64::NAN, f64::NAN); g.n() as usize];
    let (a0, b0, c0) = g.nodes[0].face;
    pts[a0 as usize] = Point::new(0.0, eps);
    pts[b0 as usize] = Point::new(1.0, 0.0);
    pts[c0 as usize] = Point::new(k + 1.0, eps);

    // Stack of (node, vertices holding the labels A, B, C). The label
    // invariant: |x(A) - x(B)| = 1 and C is the far corner.
    let mut stack: Vec<(usize, u32, u32, u32)> = vec![(0, a0, b0, c0)];
    while let Some((idx, va, vb, vc)) = stack.pop() {
        let node = &g.nodes[idx];
        let (v, kids) = match (node.vertex, node.children) {
            (Some(v), Some(kids)) => (v, kids),
            _ => continue,
        };
        let (pa, pb, pc) = (pts[va as usize], pts[vb as usize], pts[vc as usize]);
        let xv = if pc.x > pa.x { pc.x - 1.0 } else { pc.x + 1.0 };
        let mut chord: Vec<f64> = Vec::with_capacity(2);
        for (p1, p2) in [(pa, pc), (pb, pc), (pa, pb)] {
            let (lo, hi) = (p1.x.min(p2.x), p1.x.max(p2.x));
            if xv > lo && xv < hi {
                chord.push(p1.y + (xv - p1.x) * (p2.y - p1.y) / (p2.x - p1.x));
            }
        }
        debug_assert_eq!(chord.len(), 2, "vertical chord must cross two sides");
        let yv = (chord[0] + chord[1]) / 2.0;
        pts[v as usize] = Point::new(xv, yv);

        // Children by the vertex they do not contain: {A,B,v} keeps the
        // labels, {A,C,v} and {B,C,v} get the new unit side (v, C').
        for &child in &kids {
            let f = g.nodes[child].face;
            let set = [f.0, f.1, f.2];
            let has = |t: u32| set.contains(&t);
            let (na, nb, nc) = if has(va) && has(vb) {
                (va, vb, v)
            } else if has(va) && has(vc) {
                (v, vc, va)
            } else {
                debug_assert!(has(vb) && has(vc));
                (v, vc, vb)
            };
            stack.push((child, na, nb, nc));
        }
    }

    let drawing = Drawing::new(pts)?;
    let stats = length_stats(&g.graph.edges, &drawing)?;
    Ok(DrawReport {
        drawing,
        stats,
        theoretical_bound: k + 1.0 + eps,
    })
}
