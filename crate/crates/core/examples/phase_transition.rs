//! The first-order transition of the constrained model at fixed edge
//! density: support-line critical point, a β₂ scan and the jump of the
//! maximizing triangle density.
//!
//! Run with `cargo run --release --example phase_transition`.

use constrained_ergm::phase::{critical_curve, detect_jump, EntropyCurve, PhaseOptions};

fn main() -> constrained_ergm::Result<()> {
    let opts = PhaseOptions::default();
    let curve = EntropyCurve::new(0.5, &opts)?;
    let c = curve.critical_point(1e-12, opts.validation_points)?;
    println!("e = 1/2: β₂^c = {:.6}, t_c = {:.6}, ε_c = {:.6}", c.beta2_c, c.t_c, c.eps_c);

    let grid: Vec<f64> = (0..=20).map(|i| -0.25 * i as f64).collect();
    let scan = grid.iter().map(|&b| curve.psi(b)).collect::<constrained_ergm::Result<Vec<_>>>()?;
    for p in &scan {
        println!("β₂ = {:>5.2}  ψ = {:.8}  t* = {:.6}", p.beta2, p.psi, p.t_star);
    }
    if let Some(j) = detect_jump(&scan) {
        println!(
            "largest jump {:.4} between β₂ = {} and {} (first order: {})",
            j.size, j.beta2_left, j.beta2_right, j.first_order
        );
    }

    let coarse = PhaseOptions { curve_points: 64, validation_points: 64, ..PhaseOptions::default() };
    for (e, result) in critical_curve(&[0.3, 0.4, 0.5], 1e-10, &coarse) {
        match result {
            Ok(c) => println!("e = {e}: β₂^c = {:.4}, t^c = {:.5}", c.beta2_c, c.t_c),
            Err(err) => println!("e = {e}: {err}"),
        }
    }
    Ok(())
}
