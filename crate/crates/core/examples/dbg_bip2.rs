use elr_core::draw::draw_bipartite_maximal;
use elr_core::generators::gen_bipartite_random;
use std::time::Instant;
fn main() {
    for (ops, seed) in [(200u32, 2u64), (300, 3), (300, 4), (300, 5)] {
        let (_, witness) = gen_bipartite_random(ops, seed).unwrap();
        let t = Instant::now();
        match draw_bipartite_maximal(&witness, 0.05) {
            Ok((_, r)) => println!("ops {ops} seed {seed}: ok ratio {:.5} min {:.5} ({:.1}s)", r.stats.ratio, r.stats.min_len, t.elapsed().as_secs_f64()),
            Err(e) => println!("ops {ops} seed {seed}: {e} ({:.1}s)", t.elapsed().as_secs_f64()),
        }
    }
}
