//! The attainable triangle densities at a given edge density, from the
//! complete multipartite lower boundary to `t = e^{3/2}`.
//!
//! Run with `cargo run --example feasible_region`.

use constrained_ergm::variational::region_bounds;
use constrained_ergm::{edge_density, triangle_density, StepGraphon};

fn main() -> constrained_ergm::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10}", "e", "t_min", "e³", "t_max");
    for i in 1..=10 {
        let e = i as f64 / 10.0;
        let r = region_bounds(e)?;
        println!("{e:>6.2} {:>10.6} {:>10.6} {:>10.6}", r.t_min, e.powi(3), r.t_max);
    }

    // the lower boundary is attained by complete multipartite graphons
    let tri = StepGraphon::complete_multipartite(&[1.0 / 3.0; 3])?;
    let e = edge_density(&tri);
    println!(
        "balanced 3-partite: e = {e:.6}, t = {:.6}, t_min(e) = {:.6}",
        triangle_density(&tri),
        region_bounds(e)?.t_min
    );

    // outside the region the numeric solver refuses
    match constrained_ergm::variational::s_numeric(0.3, 0.2, 8, 1e-9) {
        Ok(p) => println!("unexpected: {p:?}"),
        Err(err) => println!("s(0.3, 0.2): {err}"),
    }
    Ok(())
}
