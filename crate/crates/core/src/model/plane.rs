use crate::error::{Error, Result};
use crate::model::edge_key;

use std::collections::{BTreeMap, BTreeSet};

/// An embedded planar graph: clockwise rotation per vertex plus the outer
/// face boundary walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneGraph {
    pub n: u32,
    pub edges: Vec<(u32, u32)>,
    /// Clockwise neighbor order around each vertex.
    pub rotation: Vec<Vec<u32>>,
    /// Closed boundary walk of the outer face.
    pub outer_face: Vec<u32>,
}

impl PlaneGraph {
    /// Trace the face reached by walking from directed edge (u, v): the next
    /// directed edge leaves v toward the successor of u in v's clockwise
    /// rotation. Returns the vertex cycle.
    pub fn trace_face(&self, u: u32, v: u32) -> Vec<u32> {
        let mut walk = vec![u];
        let (mut a, mut b) = (u, v);
        loop {
            walk.push(b);
            let rot = &self.rotation[b as usize];
            let i = rot.iter().position(|&x| x == a).expect("rotation incidence");
            let c = rot[(i + 1) % rot.len()];
            a = b;
            b = c;
            if (a, b) == (u, v) {
                walk.pop();
                return walk;
            }
        }
    }

    /// All faces, each traced once, as vertex cycles.
    pub fn faces(&self) -> Vec<Vec<u32>> {
        let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
        let mut out = Vec::new();
        for &(u, v) in &self.edges {
            for (a, b) in [(u, v), (v, u)] {
                if seen.contains(&(a, b)) {
                    continue;
                }
                let cycle = self.trace_face(a, b);
                for i in 0..cycle.len() {
                    seen.insert((cycle[i], cycle[(i + 1) % cycle.len()]));
                }
                out.push(cycle);
            }
        }
        out
    }

    /// Structural validation: rotations carry exactly the incident edges,
    /// Euler bounds hold, and the outer face is a traced face.
    pub fn validate(&self) -> Result<()> {
        let m = self.edges.len() as i64;
        let n = self.n as i64;
        if self.rotation.len() != self.n as usize {
            return Err(Error::InvariantViolation("rotation table size".into()));
        }
        if n >= 3 && m > 3 * n - 6 {
            return Err(Error::InvariantViolation(format!(
                "edge count {m} exceeds Euler bound for n = {n}"
            )));
        }
        let mut incident: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); self.n as usize];
        for &(u, v) in &self.edges {
            incident[u as usize].insert(v);
            incident[v as usize].insert(u);
        }
        for v in 0..self.n as usize {
            let from_rot: BTreeSet<u32> = self.rotation[v].iter().copied().collect();
            if from_rot != incident[v] || self.rotation[v].len() != incident[v].len() {
                return Err(Error::InvariantViolation(format!(
                    "rotation at vertex {v} does not match incident edges"
                )));
            }
        }
        let faces = self.faces();
        let f = faces.len() as i64;
        if n - m + f != 2 {
            return Err(Error::InvariantViolation(format!(
                "Euler formula violated: n={n} m={m} f={f}"
            )));
        }
        let norm = |w: &[u32]| -> Vec<u32> {
            let k = w
                .iter()
                .enumerate()
                .min_by_key(|(_, &v)| v)
                .map(|(i, _)| i)
                .unwrap_or(0);
            (0..w.len()).map(|i| w[(k + i) % w.len()]).collect()
        };
        let target = norm(&self.outer_face);
        if !faces.iter().any(|f| norm(f) == target) {
            return Err(Error::InvariantViolation(
                "outer face is not a face of the embedding".into(),
            ));
        }
        Ok(())
    }
}

/// One node of a representative tree: a face triple as it was created, the
/// vertex later inserted into it (for internal nodes), and three children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepNode {
    pub face: (u32, u32, u32),
    pub vertex: Option<u32>,
    pub children: Option<[usize; 3]>,
}

/// A plane 3-tree: a maximal plane graph built by inserting degree-3
/// vertices into internal faces, together with its representative tree.
#[derive(Clone, Debug)]
pub struct Plane3Tree {
    pub graph: PlaneGraph,
    /// nodes[0] is the root (the initial internal face).
    pub nodes: Vec<RepNode>,
    /// Construction witness: the face triple each vertex 3, 4, ... was
    /// inserted into, in normalized form.
    pub insertions: Vec<(u32, u32, u32)>,
}

/// Rotate a face triple so the smallest vertex comes first; the cyclic
/// orientation is preserved.
pub(crate) fn normalize_face(f: (u32, u32, u32)) -> (u32, u32, u32) {
    let (a, b, c) = f;
    if a <= b && a <= c {
        (a, b, c)
    } else if b <= a && b <= c {
        (b, c, a)
    } else {
        (c, a, b)
    }
}

impl Plane3Tree {
    /// Build from a sequence of face choices. The base is the embedded
    /// 3-cycle on vertices 0, 1, 2 with internal face (0, 1, 2); the i-th
    /// insertion creates vertex 3 + i inside the named live internal face.
    pub fn from_insertions(seq: &[(u32, u32, u32)]) -> Result<Self> {
        let mut nodes = vec![RepNode {
            face: (0, 1, 2),
            vertex: None,
            children: None,
        }];
        let mut live: BTreeMap<(u32, u32, u32), usize> = BTreeMap::new();
        live.insert((0, 1, 2), 0);
        let mut insertions = Vec::with_capacity(seq.len());
        for (i, &raw) in seq.iter().enumerate() {
            let v = 3 + i as u32;
            let key = normalize_face(raw);
            let idx = *live.get(&key).ok_or(Error::InvalidFace(key))?;
            live.remove(&key);
            let (a, b, c) = nodes[idx].face;
            let kids_faces = [(a, b, v), (b, c, v), (c, a, v)];
            let mut kids = [0usize; 3];
            for (j, kf) in kids_faces.into_iter().enumerate() {
                let nf = normalize_face(kf);
                kids[j] = nodes.len();
                live.insert(nf, nodes.len());
                nodes.push(RepNode {
                    face: nf,
                    vertex: None,
                    children: None,
                });
            }
            nodes[idx].vertex = Some(v);
            nodes[idx].children = Some(kids);
            insertions.push(key);
        }
        let n = 3 + seq.len() as u32;
        let graph = assemble_plane_graph(n, &nodes)?;
        Ok(Plane3Tree {
            graph,
            nodes,
            insertions,
        })
    }

    /// Depth: maximum number of nodes on any root-to-leaf path.
    pub fn depth(&self) -> u32 {
        let mut best = 0;
        let mut stack = vec![(0usize, 1u32)];
        while let Some((i, d)) = stack.pop() {
            match self.nodes[i].children {
                None => best = best.max(d),
                Some(kids) => {
                    for k in kids {
                        stack.push((k, d + 1));
                    }
                }
            }
        }
        best
    }

    /// Subtree depth per node, same counting as `depth`.
    pub fn subtree_depths(&self) -> Vec<u32> {
        let mut depths = vec![1u32; self.nodes.len()];
        // Children always follow their parent in `nodes`, so one reverse
        // sweep suffices.
        for i in (0..self.nodes.len()).rev() {
            if let Some(kids) = self.nodes[i].children {
                depths[i] = 1 + kids.iter().map(|&k| depths[k]).max().unwrap();
            }
        }
        depths
    }

    pub fn n(&self) -> u32 {
        self.graph.n
    }

    /// Structural invariants of the representative tree.
    pub fn validate(&self) -> Result<()> {
        self.graph.validate()?;
        let n = self.n() as i64;
        let internal = self.nodes.iter().filter(|r| r.children.is_some()).count() as i64;
        let leaves = self.nodes.iter().filter(|r| r.children.is_none()).count() as i64;
        if internal != n - 3 {
            return Err(Error::InvariantViolation(format!(
                "rep tree internal nodes {internal} != n - 3"
            )));
        }
        if n >= 3 && leaves != 2 * n - 5 {
            return Err(Error::InvariantViolation(format!(
                "rep tree leaves {leaves} != 2n - 5"
            )));
        }
        Ok(())
    }
}

/// Rebuild rotations and edges from the set of internal face triples (all
/// stored counterclockwise) of a maximal plane graph whose outer face is
/// the initial triangle 0, 1, 2.
fn assemble_plane_graph(n: u32, nodes: &[RepNode]) -> Result<PlaneGraph> {
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    // ccw_next[v]: out-neighbor -> in-neighbor per internal corner at v.
    let mut ccw_next: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new(); n as usize];
    for node in nodes {
        if node.children.is_some() {
            continue; // only leaves are live internal faces
        }
        let f = [node.face.0, node.face.1, node.face.2];
        for i in 0..3 {
            let prev = f[(i + 2) % 3];
            let at = f[i];
            let next = f[(i + 1) % 3];
            edges.insert(edge_key(at, next));
            ccw_next[at as usize].insert(next, prev);
        }
    }
    let mut rotation = Vec::with_capacity(n as usize);
    for v in 0..n as usize {
        let map = &ccw_next[v];
        if map.is_empty() {
            return Err(Error::InvariantViolation(format!(
                "vertex {v} has no incident faces"
            )));
        }
        // Find a chain start: an out-neighbor that is not any corner's
        // in-neighbor (exists exactly for outer vertices); else any key.
        let values: BTreeSet<u32> = map.values().copied().collect();
        let start = map
            .keys()
            .copied()
            .find(|k| !values.contains(k))
            .unwrap_or_else(|| *map.keys().next().unwrap());
        let mut ccw = vec![start];
        let mut cur = start;
        while let Some(&nxt) = map.get(&cur) {
            if nxt == start {
                break;
            }
            ccw.push(nxt);
            cur = nxt;
        }
        if ccw.len() != map.len() && ccw.len() != map.len() + 1 {
            return Err(Error::InvariantViolation(format!(
                "inconsistent corner structure at vertex {v}"
            )));
        }
        ccw.reverse(); // clockwise
        rotation.push(ccw);
    }
    Ok(PlaneGraph {
        n,
        edges: edges.into_iter().collect(),
        rotation,
        outer_face: vec![0, 2, 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_triangle() {
        let t = Plane3Tree::from_insertions(&[]).unwrap();
        assert_eq!(t.n(), 3);
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.depth(), 1);
        t.validate().unwrap();
    }

    #[test]
    fn k4() {
        let t = Plane3Tree::from_insertions(&[(0, 1, 2)]).unwrap();
        assert_eq!(t.n(), 4);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.graph.edges.len(), 6);
        t.validate().unwrap();
        // Face count from the trace: 4 faces of K4.
        assert_eq!(t.graph.faces().len(), 4);
    }

    #[test]
    fn internal_face_count() {
        // Chain of insertions, always into the first child face.
        let mut seq = vec![(0u32, 1u32, 2u32)];
        let mut prev = (0u32, 1u32, 3u32);
        for v in 4..10u32 {
            seq.push(prev);
            prev = (prev.0, prev.1, v);
        }
        let t = Plane3Tree::from_insertions(&seq).unwrap();
        let n = t.n() as usize;
        let leaves = t.nodes.iter().filter(|r| r.children.is_none()).count();
        assert_eq!(leaves, 2 * n - 5);
        t.validate().unwrap();
    }

    #[test]
    fn unknown_face_rejected() {
        let r = Plane3Tree::from_insertions(&[(0, 1, 2), (0, 1, 2)]);
        assert!(matches!(r, Err(Error::InvalidFace(_))));
    }
}
