use crate::model::TwoTree;

use serde::{Deserialize, Serialize};

/// Class of an edge or component by the classes of its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeClass {
    C12,
    C13,
    C23,
}

impl EdgeClass {
    pub fn of(a: u8, b: u8) -> EdgeClass {
        match (a.min(b), a.max(b)) {
            (1, 2) => EdgeClass::C12,
            (1, 3) => EdgeClass::C13,
            (2, 3) => EdgeClass::C23,
            _ => panic!("invalid class pair ({a}, {b})"),
        }
    }
}

impl std::fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EdgeClass::C12 => write!(f, "1-2"),
            EdgeClass::C13 => write!(f, "1-3"),
            EdgeClass::C23 => write!(f, "2-3"),
        }
    }
}

/// One H-component: the sub-2-tree hanging off a single skeleton edge,
/// including that edge as its root (0, 1).
#[derive(Clone, Debug)]
pub struct Component {
    /// Root edge in the parent 2-tree's ids.
    pub root: (u32, u32),
    pub class: EdgeClass,
    pub tree: TwoTree,
    /// Map from the component's local ids to the parent's ids;
    /// entries 0 and 1 are the root endpoints (min, max).
    pub to_parent: Vec<u32>,
}

/// A linear-2-tree skeleton H of a 2-tree G together with all H-components.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub skeleton: TwoTree,
    /// Skeleton-local id -> parent id. Entries 0, 1 are the shared root.
    pub skeleton_to_parent: Vec<u32>,
    /// Class of each skeleton vertex, indexed by skeleton-local id.
    pub vertex_classes: Vec<u8>,
    pub components: Vec<Component>,
    /// The designated-edge sequence (parent ids) when produced by the
    /// decomposition algorithm; empty when built directly from an edge set.
    pub designated: Vec<(u32, u32)>,
}

impl Decomposition {
    /// Maximum component vertex count minus one, per class; at least 1.
    pub fn class_maxima(&self) -> (u64, u64, u64) {
        let mut x = 1u64;
        let mut y = 1u64;
        let mut z = 1u64;
        for c in &self.components {
            let size = c.tree.n() as u64 - 1;
            match c.class {
                EdgeClass::C13 => x = x.max(size),
                EdgeClass::C23 => y = y.max(size),
                EdgeClass::C12 => z = z.max(size),
            }
        }
        (x, y, z)
    }

    /// Largest component size minus one hosted on edges of `class` whose
    /// component is exactly a triangle (used for frame funding decisions).
    pub fn class_hosts_triangle(&self, class: EdgeClass) -> bool {
        self.components
            .iter()
            .any(|c| c.class == class && c.tree.n() == 3)
    }
}
