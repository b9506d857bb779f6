use crate::error::{Error, Result};
use crate::model::{edge_key, PlaneGraph};

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// One generation step for maximal bipartite plane graphs. The new vertex x
/// becomes adjacent to `u` and `w`, two distinct neighbors of `v`, and takes
/// over the edges of `v` lying strictly between `u` and `w` in clockwise
/// order around `v`. An empty arc is the degree-2 vertex insertion into the
/// quadrilateral face at that corner; a nonempty arc is the path expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitStep {
    pub v: u32,
    pub u: u32,
    pub w: u32,
}

/// Incrementally maintained maximal bipartite plane graph (a simple
/// quadrangulation), starting from the embedded 4-cycle.
#[derive(Clone, Debug)]
pub struct QuadBuilder {
    pub n: u32,
    /// Clockwise rotation per vertex.
    pub rotation: Vec<Vec<u32>>,
    pub outer_face: Vec<u32>,
}

impl QuadBuilder {
    /// The embedded 4-cycle 0-1-2-3 with internal face (0, 1, 2, 3).
    pub fn new() -> Self {
        QuadBuilder {
            n: 4,
            rotation: vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]],
            outer_face: vec![0, 3, 2, 1],
        }
    }

    pub fn degree(&self, v: u32) -> usize {
        self.rotation[v as usize].len()
    }

    /// Clockwise arc strictly between u and w around v.
    pub fn arc(&self, v: u32, u: u32, w: u32) -> Result<Vec<u32>> {
        if v >= self.n || u == w {
            return Err(Error::InvalidOp(format!("bad split ({v}, {u}, {w})")));
        }
        let rot = &self.rotation[v as usize];
        let iu = rot
            .iter()
            .position(|&x| x == u)
            .ok_or_else(|| Error::InvalidOp(format!("{u} not adjacent to {v}")))?;
        if !rot.contains(&w) {
            return Err(Error::InvalidOp(format!("{w} not adjacent to {v}")));
        }
        let d = rot.len();
        let mut ms = Vec::new();
        let mut i = (iu + 1) % d;
        while rot[i] != w {
            ms.push(rot[i]);
            i = (i + 1) % d;
        }
        Ok(ms)
    }

    /// Apply a split; returns the new vertex id.
    pub fn split(&mut self, step: SplitStep) -> Result<u32> {
        let SplitStep { v, u, w } = step;
        let ms = self.arc(v, u, w)?;
        let x = self.n;
        self.n += 1;

        // Rotation at x: cw arc inherited from v.
        let mut rx = Vec::with_capacity(ms.len() + 2);
        rx.push(u);
        rx.extend_from_slice(&ms);
        rx.push(w);
        self.rotation.push(rx);

        // v keeps only its other neighbors; u and w become cw-consecutive.
        let msset: BTreeSet<u32> = ms.iter().copied().collect();
        self.rotation[v as usize].retain(|t| !msset.contains(t));

        // Moved edges now end at x.
        for &m in &ms {
            for t in self.rotation[m as usize].iter_mut() {
                if *t == v {
                    *t = x;
                }
            }
        }

        // x immediately before v around u, immediately after v around w.
        let iu = self.rotation[u as usize]
            .iter()
            .position(|&t| t == v)
            .unwrap();
        self.rotation[u as usize].insert(iu, x);
        let iw = self.rotation[w as usize]
            .iter()
            .position(|&t| t == v)
            .unwrap();
        self.rotation[w as usize].insert(iw + 1, x);

        // Re-trace the outer face from a boundary edge not incident to v.
        let old = self.outer_face.clone();
        let len = old.len();
        let (a, b) = (0..len)
            .map(|i| (old[i], old[(i + 1) % len]))
            .find(|&(a, b)| a != v && b != v)
            .expect("outer walk has an edge avoiding v");
        self.outer_face = self.trace_face(a, b);
        Ok(x)
    }

    fn trace_face(&self, u: u32, v: u32) -> Vec<u32> {
        let mut walk = vec![u];
        let (mut a, mut b) = (u, v);
        loop {
            walk.push(b);
            let rot = &self.rotation[b as usize];
            let i = rot.iter().position(|&x| x == a).unwrap();
            let c = rot[(i + 1) % rot.len()];
            a = b;
            b = c;
            if (a, b) == (u, v) {
                walk.pop();
                return walk;
            }
        }
    }

    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut set = BTreeSet::new();
        for v in 0..self.n {
            for &t in &self.rotation[v as usize] {
                set.insert(edge_key(v, t));
            }
        }
        set.into_iter().collect()
    }

    pub fn to_plane_graph(&self) -> PlaneGraph {
        PlaneGraph {
            n: self.n,
            edges: self.edges(),
            rotation: self.rotation.clone(),
            outer_face: self.outer_face.clone(),
        }
    }

    /// Two-coloring by bipartition side; side of vertex 0 is 0.
    pub fn bipartition(&self) -> Result<Vec<u8>> {
        let mut side = vec![u8::MAX; self.n as usize];
        side[0] = 0;
        let mut queue = std::collections::VecDeque::from([0u32]);
        while let Some(v) = queue.pop_front() {
            for &t in &self.rotation[v as usize] {
                if side[t as usize] == u8::MAX {
                    side[t as usize] = 1 - side[v as usize];
                    queue.push_back(t);
                } else if side[t as usize] == side[v as usize] {
                    return Err(Error::InvariantViolation("graph is not bipartite".into()));
                }
            }
        }
        Ok(side)
    }

    /// Full structural validation: simple, bipartite, every face a
    /// quadrilateral, Euler counts.
    pub fn validate(&self) -> Result<()> {
        let g = self.to_plane_graph();
        for v in 0..self.n as usize {
            let set: BTreeSet<u32> = self.rotation[v].iter().copied().collect();
            if set.len() != self.rotation[v].len() || set.contains(&(v as u32)) {
                return Err(Error::InvariantViolation(format!(
                    "rotation at {v} has repeats or a loop"
                )));
            }
        }
        let m = g.edges.len() as i64;
        if m != 2 * self.n as i64 - 4 {
            return Err(Error::InvariantViolation(format!(
                "edge count {m} != 2n - 4"
            )));
        }
        for f in g.faces() {
            if f.len() != 4 {
                return Err(Error::InvariantViolation(format!(
                    "non-quadrilateral face {f:?}"
                )));
            }
        }
        self.bipartition()?;
        g.validate()
    }
}

impl Default for QuadBuilder {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cycle() {
        let b = QuadBuilder::new();
        b.validate().unwrap();
        assert_eq!(b.edges().len(), 4);
    }

    #[test]
    fn single_insertion_gives_k23() {
        let mut b = QuadBuilder::new();
        // Degree-2 vertex into the inner face at corner 1.
        let x = b.split(SplitStep { v: 1, u: 0, w: 2 }).unwrap();
        assert_eq!(x, 4);
        b.validate().unwrap();
        assert_eq!(b.n, 5);
        assert_eq!(b.edges().len(), 6);
        // 3 faces total (2 internal + outer), all quadrilaterals.
        assert_eq!(b.to_plane_graph().faces().len(), 3);
    }

    #[test]
    fn path_expansion_after_growth() {
        let mut b = QuadBuilder::new();
        b.split(SplitStep { v: 1, u: 0, w: 2 }).unwrap();
        b.split(SplitStep { v: 1, u: 0, w: 2 }).unwrap();
        // Vertex 1 now has degree >= 3 somewhere; expand a nonempty arc.
        let v = (0..b.n).find(|&v| b.degree(v) >= 3).unwrap();
        let rot = b.rotation[v as usize].clone();
        let step = SplitStep {
            v,
            u: rot[0],
            w: rot[2],
        };
        assert_eq!(b.arc(v, rot[0], rot[2]).unwrap(), vec![rot[1]]);
        b.split(step).unwrap();
        b.validate().unwrap();
    }

    #[test]
    fn outer_face_insertion() {
        let mut b = QuadBuilder::new();
        // Corner (3, 1) cw at vertex 0 faces the outer region.
        b.split(SplitStep { v: 0, u: 3, w: 1 }).unwrap();
        b.validate().unwrap();
        assert_eq!(b.outer_face.len(), 4);
    }

    #[test]
    fn invalid_splits_rejected() {
        let mut b = QuadBuilder::new();
        assert!(b.split(SplitStep { v: 0, u: 1, w: 1 }).is_err());
        assert!(b.split(SplitStep { v: 0, u: 2, w: 1 }).is_err());
    }
}
