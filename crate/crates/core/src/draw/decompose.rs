use crate::error::Result;
use crate::model::{edge_key, Decomposition, TwoTree};

use std::collections::{BTreeMap, BTreeSet};

/// Decompose a 2-tree along a greedily grown linear skeleton: starting
/// from the root edge, repeatedly designate the side edge whose hanging
/// branch is largest (ties to the smallest (apex, endpoint) pair) and
/// absorb its apexes and side edges into the skeleton. The resulting
/// component maxima (x, y, z per class, minus one) satisfy z <= n/2 and
/// x <= n/2 with y <= (n - x)/2 or symmetrically, where n is the vertex
/// count minus one.
pub fn decompose_2tree(g: &TwoTree) -> Result<Decomposition> {
    // Branch sizes: sz[e] = number of vertices hanging strictly below e.
    let mut sz: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for w in (2..g.n()).rev() {
        let (p, q) = g.parent_edge(w);
        let below = 1
            + sz.get(&edge_key(p, w)).copied().unwrap_or(0)
            + sz.get(&edge_key(q, w)).copied().unwrap_or(0);
        *sz.entry((p, q)).or_insert(0) += below;
    }

    let mut designated = vec![(0u32, 1u32)];
    let mut h_edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    h_edges.insert((0, 1));
    let mut cur = (0u32, 1u32);
    loop {
        let apexes = g.apexes(cur);
        if apexes.is_empty() {
            break;
        }
        let mut best: Option<((u32, u32), u64, (u32, u32))> = None;
        for &w in apexes {
            for x in [cur.0, cur.1] {
                let r = edge_key(x, w);
                h_edges.insert(r);
                let size = 2 + sz.get(&r).copied().unwrap_or(0);
                let tiebreak = (w, x);
                let better = match &best {
                    None => true,
                    Some((_, s, t)) => size > *s || (size == *s && tiebreak < *t),
                };
                if better {
                    best = Some((r, size, tiebreak));
                }
            }
        }
        let (next, _, _) = best.unwrap();
        designated.push(next);
        cur = next;
    }

    let edges: Vec<(u32, u32)> = h_edges.into_iter().collect();
    let mut d = g.h_components(&edges)?;
    d.designated = designated;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_linear_2tree, gen_random_2tree};
    use crate::metrics::check_decomposition;

    #[test]
    fn linear_input_is_its_own_skeleton() {
        let g = gen_linear_2tree(&[2, 1, 2]).unwrap();
        let d = decompose_2tree(&g).unwrap();
        assert_eq!(d.skeleton.n(), g.n());
        assert!(d.components.iter().all(|c| c.tree.n() == 2));
        assert_eq!(d.class_maxima(), (1, 1, 1));
        let report = check_decomposition(&g, &d);
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn picks_largest_branch() {
        // Root (0,1) with apex 2; a 3-vertex branch on (0,2) and a deeper
        // 5-vertex branch on (1,2): the chain must follow (1,2).
        let g = TwoTree::from_parent_pairs(&[
            (0, 1), // 2
            (0, 2), // 3 small branch
            (1, 2), // 4 big branch root apex
            (1, 4), // 5
            (1, 5), // 6
        ])
        .unwrap();
        let d = decompose_2tree(&g).unwrap();
        assert!(d.designated.contains(&(1, 2)));
        let report = check_decomposition(&g, &d);
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn random_instances_satisfy_lemma() {
        for seed in 0..150u64 {
            let n = 4 + (seed % 60) as u32;
            let g = gen_random_2tree(n, seed).unwrap();
            let d = decompose_2tree(&g).unwrap();
            let report = check_decomposition(&g, &d);
            assert!(
                report.ok,
                "seed {seed}: {:?}",
                report.violations.first()
            );
        }
    }

    #[test]
    fn deterministic() {
        let g = gen_random_2tree(120, 5).unwrap();
        let a = decompose_2tree(&g).unwrap();
        let b = decompose_2tree(&g).unwrap();
        assert_eq!(a.designated, b.designated);
        assert_eq!(a.skeleton_to_parent, b.skeleton_to_parent);
    }

    use crate::model::TwoTree;
}
