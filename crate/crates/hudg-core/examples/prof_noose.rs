use hudg_core::instance::gen_random;
use hudg_core::noose::{dp_max_is, enumerate_candidates, EnumerationBudget};
use std::time::Instant;

fn main() {
    for (n, r, seed) in [(11usize, 1.0f64, 3u64), (11, 2.0, 5), (22, 1.0, 1), (22, 2.0, 1), (22, 3.09, 1)] {
        let inst = gen_random(n, 2.0 * r, r, seed);
        let g = inst.to_graph().unwrap();
        for w in [3usize, 4, 5, 6] {
            let t0 = Instant::now();
            let cands = enumerate_candidates(&g, w, &EnumerationBudget::default());
            let enum_t = t0.elapsed().as_secs_f64();
            match cands {
                Ok(c) => {
                    let t1 = Instant::now();
                    let out = dp_max_is(&g, w, &EnumerationBudget::default());
                    let dp_t = t1.elapsed().as_secs_f64();
                    println!(
                        "n={n} r={r} seed={seed} W={w}: cands={} enum={enum_t:.2}s dp={dp_t:.2}s size={:?}",
                        c.len(),
                        out.map(|o| o.size)
                    );
                }
                Err(e) => println!("n={n} r={r} W={w}: enum error {e} after {enum_t:.2}s"),
            }
        }
    }
}
