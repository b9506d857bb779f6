use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::metrics::{length_stats, verify_proper, LengthStats};
use crate::model::{Drawing, Graph};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smallest-last greedy coloring; colors are 0-based.
pub fn greedy_coloring(g: &Graph) -> Vec<u32> {
    let n = g.n as usize;
    let adj = g.adjacency();
    let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .unwrap();
        removed[v] = true;
        order.push(v);
        for &t in &adj[v] {
            if !removed[t as usize] {
                degree[t as usize] -= 1;
            }
        }
    }
    let mut color = vec![u32::MAX; n];
    for &v in order.iter().rev() {
        let mut used: Vec<u32> = adj[v]
            .iter()
            .map(|&t| color[t as usize])
            .filter(|&c| c != u32::MAX)
            .collect();
        used.sort_unstable();
        used.dedup();
        let mut c = 0;
        for u in used {
            if u == c {
                c += 1;
            } else if u > c {
                break;
            }
        }
        color[v] = c;
    }
    color
}

/// Result of the coloring-based drawer.
#[derive(Clone, Debug)]
pub struct ColoringDraw {
    pub drawing: Drawing,
    pub coloring: Vec<u32>,
    pub colors_used: u32,
    /// None for edgeless graphs (no ratio exists).
    pub stats: Option<LengthStats>,
    /// Open length window every edge is guaranteed to lie in.
    pub window: (f64, f64),
}

/// Proper (possibly nonplanar) drawing of an arbitrary graph: color
/// classes sit in small disks at unit grid points, so every edge length
/// lies in (1 - 2 eps / 3, sqrt(2 k) + 2 eps / 3) for k colors.
pub fn draw_by_coloring(g: &Graph, eps: f64, seed: u64) -> Result<ColoringDraw> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidEpsilon);
    }
    let coloring = greedy_coloring(g);
    let k = coloring.iter().map(|&c| c + 1).max().unwrap_or(0).max(1);
    let grid = (k as f64).sqrt().ceil() as u32;
    let centers: Vec<Point> = (0..k)
        .map(|i| Point::new((i % grid) as f64, (i / grid) as f64))
        .collect();
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); k as usize];
    for (v, &c) in coloring.iter().enumerate() {
        members[c as usize].push(v as u32);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut offsets: Vec<f64> = (0..k)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect();

    // Points on a circle of radius eps/6 inside each disk of radius eps/3;
    // exact properness failures are resolved by nudging a disk's offset.
    for attempt in 0..200 {
        let mut pts = vec![Point::new(0.0, 0.0); g.n as usize];
        for (ci, mem) in members.iter().enumerate() {
            let m = mem.len().max(1) as f64;
            for (j, &v) in mem.iter().enumerate() {
                let ang = std::f64::consts::TAU * j as f64 / m + offsets[ci];
                pts[v as usize] = Point::new(
                    centers[ci].x + eps / 6.0 * ang.cos(),
                    centers[ci].y + eps / 6.0 * ang.sin(),
                );
            }
        }
        let drawing = Drawing::new(pts)?;
        let verdict = verify_proper(&g.edges, &drawing);
        if verdict.ok {
            let stats = length_stats(&g.edges, &drawing).ok();
            let window = (
                1.0 - 2.0 * eps / 3.0,
                (2.0 * k as f64).sqrt() + 2.0 * eps / 3.0,
            );
            return Ok(ColoringDraw {
                drawing,
                coloring,
                colors_used: k,
                stats,
                window,
            });
        }
        // Nudge the disk named in the first violation (golden-angle step).
        let idx = (attempt as usize) % offsets.len();
        offsets[idx] += 2.399963229728653;
    }
    Err(Error::PrecisionExhausted { step: 0 })
}

/// Proper coloring of a graph from any proper drawing with edge-length
/// ratio h: tessellate by big squares of side l = h + 1 + eps split into
/// ceil(sqrt(2) l) rows and columns of small squares; the color is the
/// small-square index. Uses at most ceil(sqrt(2) l)^2 colors.
pub fn color_from_drawing(g: &Graph, gamma: &Drawing, eps: f64) -> Result<(Vec<u32>, u32)> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon);
    }
    let verdict = verify_proper(&g.edges, gamma);
    if !verdict.ok {
        return Err(Error::ImproperInput(format!(
            "{} properness violations",
            verdict.violations.len()
        )));
    }
    let stats = length_stats(&g.edges, gamma)?;
    let scale = 1.0 / stats.min_len;
    let h = stats.ratio;
    let mut eps = eps;
    let mut l = h + 1.0 + eps;
    // sqrt(2) l must not be an integer.
    while ((2.0f64).sqrt() * l).fract().abs() < 1e-12 {
        eps += 1e-6;
        l = h + 1.0 + eps;
    }
    let cells = ((2.0f64).sqrt() * l).ceil() as u32;
    let small = l / cells as f64;
    let color_of = |p: Point| -> u32 {
        let cx = (p.x * scale).rem_euclid(l);
        let cy = (p.y * scale).rem_euclid(l);
        let i = ((cy / small) as u32).min(cells - 1);
        let j = ((cx / small) as u32).min(cells - 1);
        i * cells + j
    };
    let coloring: Vec<u32> = (0..g.n).map(|v| color_of(gamma.point(v))).collect();
    for &(u, v) in &g.edges {
        if coloring[u as usize] == coloring[v as usize] {
            return Err(Error::InvariantViolation(format!(
                "edge ({u}, {v}) received one color"
            )));
        }
    }
    Ok((coloring, cells * cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_sparse_graph;

    #[test]
    fn greedy_is_proper() {
        for seed in 0..10 {
            let g = gen_sparse_graph(40, 80, seed).unwrap();
            let c = greedy_coloring(&g);
            for &(u, v) in &g.edges {
                assert_ne!(c[u as usize], c[v as usize]);
            }
        }
    }

    #[test]
    fn edgeless_graph_flagged() {
        let g = Graph::new(5, vec![]).unwrap();
        let out = draw_by_coloring(&g, 0.3, 0).unwrap();
        assert!(out.stats.is_none());
        assert_eq!(out.colors_used, 1);
    }

    #[test]
    fn single_edge_window() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let out = draw_by_coloring(&g, 0.3, 1).unwrap();
        let stats = out.stats.unwrap();
        assert!(stats.min_len > 1.0 - 0.2);
        assert!(stats.max_len < 1.0 + 0.2);
        assert!(stats.ratio < (1.0 + 0.2) / (1.0 - 0.2));
    }

    #[test]
    fn k4_bound() {
        let g = Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let out = draw_by_coloring(&g, 0.3, 2).unwrap();
        assert_eq!(out.colors_used, 4);
        let stats = out.stats.unwrap();
        let bound = ((8.0f64).sqrt() + 0.2) / (1.0 - 0.2);
        assert!(stats.ratio <= bound);
        // Paper window with k = 4, eps = 0.3.
        assert!(stats.min_len > 1.0 - 0.2);
        assert!(stats.max_len < (8.0f64).sqrt() + 0.2);
    }

    #[test]
    fn grid_coloring_unit_edge() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let d = Drawing::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).unwrap();
        let (coloring, bound) = color_from_drawing(&g, &d, 0.1).unwrap();
        assert_ne!(coloring[0], coloring[1]);
        // h = 1: l = 2.1, ceil(sqrt 2 * 2.1) = 3, at most 9 colors.
        assert_eq!(bound, 9);
    }

    #[test]
    fn grid_coloring_improper_input() {
        let g = Graph::new(3, vec![(0, 1)]).unwrap();
        let d = Drawing::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.0),
        ])
        .unwrap();
        assert!(matches!(
            color_from_drawing(&g, &d, 0.1),
            Err(Error::ImproperInput(_))
        ));
    }

    #[test]
    fn round_trip() {
        let g = gen_sparse_graph(60, 120, 7).unwrap();
        let out = draw_by_coloring(&g, 0.3, 3).unwrap();
        let (coloring, bound) = color_from_drawing(&g, &out.drawing, 0.1).unwrap();
        assert!(coloring.iter().max().unwrap() < &bound);
        for &(u, v) in &g.edges {
            assert_ne!(coloring[u as usize], coloring[v as usize]);
        }
    }
}
