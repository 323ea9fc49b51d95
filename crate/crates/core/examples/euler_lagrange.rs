//! The Euler–Lagrange fixed point of the edge-triangle model and the
//! recovery of Lagrange multipliers from a candidate maximizer.
//!
//! Run with `cargo run --example euler_lagrange`.

use constrained_ergm::euler_lagrange::{delta_h, el_fixed_point, recover_multipliers, ELConfig};
use constrained_ergm::{SimpleGraph, StepGraphon};

fn main() -> constrained_ergm::Result<()> {
    let k3 = SimpleGraph::triangle();
    let h = StepGraphon::symmetric_bipodal(0.3)?;
    let d = delta_h(&k3, &h)?;
    println!("Δ_K3 of the symmetric bipodal graphon: {:?}", d.values);

    for (b1, b2) in [(0.0, 0.0), (1.0, 0.0), (0.0, -0.5), (0.4, -1.5)] {
        let cfg = ELConfig::triangle(b1, b2, 4);
        let init = StepGraphon::equal_blocks(vec![vec![0.5; 4]; 4])?;
        let sol = el_fixed_point(&cfg, &init)?;
        println!(
            "β = ({b1}, {b2}): h[0][0] = {:.10}, residual {:.1e}, {} iterations, converged {}",
            sol.graphon.value(0, 0),
            sol.residual_sup,
            sol.iterations,
            sol.converged
        );
    }

    let m = recover_multipliers(&StepGraphon::bipodal(0.5, 0.2, 0.8, 0.2)?, &k3)?;
    println!("multipliers of the {{0.2, 0.8}} bipodal graphon: β₁ = {:.6}, β₂ = {:.6}", m.beta1, m.beta2);
    Ok(())
}
