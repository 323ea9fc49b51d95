//! Cut norm of a difference of step graphons and the cut distance bound
//! over block relabellings.
//!
//! Run with `cargo run --example cut_distance`.

use constrained_ergm::{cut_distance_upper, cut_norm, StepGraphon};

fn main() -> constrained_ergm::Result<()> {
    let a = StepGraphon::bipodal(0.5, 0.1, 0.9, 0.4)?;
    let b = a.permuted(&[1, 0]);
    println!("‖a - b‖□            = {:.6}", cut_norm(&a, &b)?);
    println!("δ□(a, b) upper bound = {:.6}", cut_distance_upper(&a, &b)?);

    let half = StepGraphon::constant(0.5)?;
    let bip = StepGraphon::diluted_bipartite(0.5)?;
    println!("‖bipartite - 1/2‖□   = {:.6}", cut_norm(&bip, &half)?);

    // different partitions are compared on their common refinement
    let three =
        StepGraphon::new(vec![0.2, 0.3, 0.5], vec![vec![0.9, 0.1, 0.1], vec![0.1, 0.9, 0.1], vec![0.1, 0.1, 0.9]])?;
    println!("‖three-block - 1/2‖□ = {:.6}", cut_norm(&three, &half)?);
    Ok(())
}
