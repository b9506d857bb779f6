use elr_core::draw::draw_bipartite_maximal;
use elr_core::generators::gen_bipartite_random;
use std::time::Instant;

fn main() {
    for eps in [0.08f64, 0.05] {
        let mut fails = 0;
        for seed in 0..12u64 {
            let (_, witness) = gen_bipartite_random(40, seed).unwrap();
            let t = Instant::now();
            match draw_bipartite_maximal(&witness, eps) {
                Ok(_) => {}
                Err(e) => { fails += 1; println!("  eps {eps} seed {seed}: {e} ({:.2}s)", t.elapsed().as_secs_f64()); }
            }
        }
        println!("eps {eps}: {}/12 ok", 12 - fails);
    }
}
