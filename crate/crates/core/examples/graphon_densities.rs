//! Homomorphism densities and the rate function on step graphons.
//!
//! Run with `cargo run --example graphon_densities`.

use constrained_ergm::{
    edge_density, graph_to_graphon, hom_density, rate_function, rate_function_scalar, triangle_density, SimpleGraph,
    StepGraphon,
};

fn main() -> constrained_ergm::Result<()> {
    let h = StepGraphon::symmetric_bipodal(0.3)?;
    println!("symmetric bipodal, eps = 0.3");
    println!("  e(h)  = {:.6}", edge_density(&h));
    println!("  t(h)  = {:.6}", triangle_density(&h));
    println!("  I(h)  = {:.6}", rate_function(&h));

    // any small pattern works; C4 counts 4-cycles
    let c4 = SimpleGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)])?;
    println!("  t(C4) = {:.6}", hom_density(&c4, &h)?);

    let k4 = graph_to_graphon(&SimpleGraph::complete(4)?);
    println!("graphon of K4: e = {}, t = {}", edge_density(&k4), triangle_density(&k4));

    for u in [0.0, 0.25, 0.5, 0.97, 1.0] {
        println!("I({u}) = {:.12}", rate_function_scalar(u)?);
    }

    let parsed = StepGraphon::from_json(&h.to_json())?;
    assert_eq!(parsed, h);
    println!("JSON round trip: {}", h.to_json());
    Ok(())
}
