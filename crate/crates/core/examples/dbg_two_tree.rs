use elr_core::draw::draw_2tree;
use elr_core::model::TwoTree;

fn rec(pairs: &mut Vec<(u32, u32)>, edges: &mut Vec<(u32, u32)>, n_left: u32) {
    if n_left == 0 {
        let g = TwoTree::from_parent_pairs(pairs).unwrap();
        if let Err(e) = draw_2tree(&g) {
            println!("FAIL {:?}: {e}", pairs);
        }
        return;
    }
    let cur = edges.len();
    for i in 0..cur {
        let (p, q) = edges[i];
        let v = pairs.len() as u32 + 2;
        pairs.push((p, q));
        edges.push((p, v));
        edges.push((q, v));
        rec(pairs, edges, n_left - 1);
        edges.truncate(cur);
        pairs.pop();
    }
}

fn main() {
    for extra in 0..=3u32 {
        rec(&mut Vec::new(), &mut vec![(0, 1)], extra);
    }
    println!("done");
}
