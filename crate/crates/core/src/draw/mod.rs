//! The constructive drawing algorithms: plane 3-trees, linear 2-trees,
//! the decomposition-based 2-tree drawer, maximal bipartite plane graphs,
//! and the coloring-based drawings of arbitrary graphs.

mod bipartite;
mod coloring;
mod decompose;
mod l2t;
mod plane3;
mod two_tree;
mod weight;

pub use bipartite::draw_bipartite_maximal;
pub use coloring::{color_from_drawing, draw_by_coloring, greedy_coloring, ColoringDraw};
pub use decompose::decompose_2tree;
pub use l2t::{l2t_draw, L2TParams};
pub use plane3::draw_plane_3tree;
pub use two_tree::draw_2tree;
pub use weight::{f_weight, GoldenWeight, LOG2_PHI, PHI};

use crate::metrics::LengthStats;
use crate::model::Drawing;

/// A drawing together with its measured lengths and the theoretical bound
/// the construction guarantees.
#[derive(Clone, Debug)]
pub struct DrawReport {
    pub drawing: Drawing,
    pub stats: LengthStats,
    pub theoretical_bound: f64,
}
