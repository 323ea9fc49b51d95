//! The constrained entropy s(e, t): closed form at e = 1/2, bipodal search
//! elsewhere, and the attainable region of (e, t).
//!
//! Run with `cargo run --release --example constrained_entropy`.

use constrained_ergm::variational::{region_bounds, rs_lower_bound_check, s_half_closed, s_numeric, SolverOptions};

fn main() -> constrained_ergm::Result<()> {
    for t in [0.0, 0.0212, 0.1, 0.125] {
        let p = s_half_closed(t)?;
        println!("s(1/2, {t:<6}) = {:.9}   eps = {:.6}", p.s, p.maximizer.p12 - 0.5);
    }

    let p = s_numeric(0.5, 0.1, 32, 1e-9)?;
    println!("numeric s(1/2, 0.1) = {:.12}", p.s);

    for (e, t) in [(0.3, 0.0), (0.3, 0.01), (0.4, 0.03)] {
        let p = s_numeric(e, t, 32, 1e-9)?;
        let m = p.maximizer;
        println!("s({e}, {t}) = {:.9}  c = {:.4} p11 = {:.4} p12 = {:.4} p22 = {:.4}", p.s, m.c, m.p11, m.p12, m.p22);
    }

    for e in [0.25, 0.5, 2.0 / 3.0, 0.8] {
        let r = region_bounds(e)?;
        println!("e = {e:.4}: t in [{:.6}, {:.6}]", r.t_min, r.t_max);
    }

    let grid: Vec<f64> = (0..100).map(|i| 0.125 * i as f64 / 100.0).collect();
    let c = rs_lower_bound_check(0.5, &grid, &SolverOptions::default())?;
    println!("min (s(e³) - s(t)) / (e³ - t)^(2/3) on the grid: {c:.6}");
    Ok(())
}
