use elr_core::draw::draw_bipartite_maximal;
use elr_core::generators::gen_bipartite_random;
use elr_core::metrics::verify_planar_straightline;
use std::time::Instant;
fn main() {
    let mut fails = 0;
    for (ops, seed) in [(100u32, 1u64), (200, 2), (300, 3), (300, 4), (300, 5), (250, 6), (300, 7)] {
        let (_, witness) = gen_bipartite_random(ops, seed).unwrap();
        let t = Instant::now();
        match draw_bipartite_maximal(&witness, 0.05) {
            Ok((g, r)) => {
                let ok = verify_planar_straightline(&g.edges, &r.drawing).ok;
                println!("ops {ops} seed {seed}: ok={ok} ratio {:.5} ({:.2}s)", r.stats.ratio, t.elapsed().as_secs_f64());
            }
            Err(e) => { fails += 1; println!("ops {ops} seed {seed}: {e} ({:.2}s)", t.elapsed().as_secs_f64()); }
        }
    }
    println!("fails: {fails}");
}
