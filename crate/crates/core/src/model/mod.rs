//! Combinatorial structures: plain graphs, embedded planar graphs, 2-trees,
//! plane 3-trees and straight-line drawings.

mod decomposition;
mod drawing;
mod plane;
mod quad;
mod two_tree;

pub use decomposition::{Component, Decomposition, EdgeClass};
pub use drawing::{Drawing, Graph};
pub use plane::{Plane3Tree, PlaneGraph, RepNode};
pub use quad::{QuadBuilder, SplitStep};
pub use two_tree::TwoTree;

/// Normalized unordered edge key.
pub fn edge_key(u: u32, v: u32) -> (u32, u32) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}
