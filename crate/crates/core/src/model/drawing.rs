use crate::error::{Error, Result};
use crate::geometry::Point;

use std::collections::BTreeSet;

/// A plain undirected graph: dense vertex ids 0..n-1 and an edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub n: u32,
    pub edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn new(n: u32, mut edges: Vec<(u32, u32)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if e.0 == e.1 {
                return Err(Error::InvariantViolation(format!("self-loop at {}", e.0)));
            }
            if e.1 >= n {
                return Err(Error::InvariantViolation(format!(
                    "edge ({}, {}) out of range for n = {n}",
                    e.0, e.1
                )));
            }
            if !seen.insert(*e) {
                return Err(Error::InvariantViolation(format!(
                    "duplicate edge ({}, {})",
                    e.0, e.1
                )));
            }
        }
        edges.sort_unstable();
        Ok(Graph { n, edges })
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n as usize];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }
}

/// A straight-line drawing: one point per vertex.
#[derive(Clone, Debug)]
pub struct Drawing {
    pub points: Vec<Point>,
}

impl Drawing {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvariantViolation(format!(
                    "non-finite coordinates for vertex {i}"
                )));
            }
        }
        Ok(Drawing { points })
    }

    pub fn point(&self, v: u32) -> Point {
        self.points[v as usize]
    }

    pub fn edge_len(&self, u: u32, v: u32) -> f64 {
        self.point(u).dist(self.point(v))
    }

    /// Uniformly scale all coordinates.
    pub fn scaled(&self, factor: f64) -> Drawing {
        Drawing {
            points: self
                .points
                .iter()
                .map(|p| Point::new(p.x * factor, p.y * factor))
                .collect(),
        }
    }
}
