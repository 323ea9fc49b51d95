//! W-random graphs from step graphons.
//!
//! Each vertex draws its block from the mass distribution, then every pair
//! becomes an edge independently with the block-pair probability. The
//! generator is ChaCha8 seeded from the 64-bit seed, which is reproducible
//! across platforms.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::graphon::StepGraphon;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub n: usize,
    pub graphon: StepGraphon,
    pub seed: u64,
}

pub fn sample_w_random(spec: &SampleSpec) -> Result<SimpleGraph> {
    if spec.n == 0 {
        return Err(Error::Invalid("sample size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let blocks =
        WeightedIndex::new(spec.graphon.masses()).map_err(|err| Error::Invalid(format!("graphon masses: {err}")))?;
    let label: Vec<usize> = (0..spec.n).map(|_| blocks.sample(&mut rng)).collect();
    let mut edges = Vec::new();
    for i in 0..spec.n {
        for j in i + 1..spec.n {
            let p = spec.graphon.value(label[i], label[j]);
            // gen::<f64>() lies in [0, 1), so p = 0 never and p = 1 always connects
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    SimpleGraph::new(spec.n, edges)
}

/// `(2E/n², 6T/n³)`: homomorphism densities of `K₂` and `K₃` in `g`.
pub fn empirical_densities(g: &SimpleGraph) -> (f64, f64) {
    let n = g.n_vertices() as f64;
    (2.0 * g.n_edges() as f64 / (n * n), 6.0 * g.triangle_count() as f64 / (n * n * n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub seed: u64,
    pub e: f64,
    pub t: f64,
}

/// Densities of independent samples with seeds `first_seed, first_seed + 1, …`,
/// in seed order.
pub fn sample_stats(graphon: &StepGraphon, n: usize, first_seed: u64, reps: usize) -> Result<Vec<SampleStats>> {
    (0..reps as u64)
        .into_par_iter()
        .map(|k| {
            let seed = first_seed.wrapping_add(k);
            let g = sample_w_random(&SampleSpec { n, graphon: graphon.clone(), seed })?;
            let (e, t) = empirical_densities(&g);
            Ok(SampleStats { seed, e, t })
        })
        .collect()
}
