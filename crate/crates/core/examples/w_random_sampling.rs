//! W-random graphs from a step graphon and their empirical densities.
//!
//! Run with `cargo run --release --example w_random_sampling`.

use constrained_ergm::sampling::sample_stats;
use constrained_ergm::{edge_density, triangle_density, StepGraphon};

fn main() -> constrained_ergm::Result<()> {
    let h = StepGraphon::symmetric_bipodal(0.47)?;
    let stats = sample_stats(&h, 1000, 0, 10)?;
    for s in &stats {
        println!("seed {:>2}: e = {:.5}, t = {:.5}", s.seed, s.e, s.t);
    }
    let mean =
        |f: fn(&constrained_ergm::sampling::SampleStats) -> f64| stats.iter().map(f).sum::<f64>() / stats.len() as f64;
    println!("mean e = {:.5} (graphon {:.5})", mean(|s| s.e), edge_density(&h));
    println!("mean t = {:.5} (graphon {:.5})", mean(|s| s.t), triangle_density(&h));
    Ok(())
}
