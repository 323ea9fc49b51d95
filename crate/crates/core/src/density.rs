//! Homomorphism densities and the large-deviation rate function on step graphons.

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::graphon::StepGraphon;

/// Largest pattern graph accepted by [`hom_density`].
pub const MAX_PATTERN_VERTICES: usize = 10;

/// `t(H, h)`: the sum over all block assignments `φ: V(H) → blocks` of
/// `Π_v mass(φ(v)) · Π_{ij ∈ E(H)} h(φ(i), φ(j))`. Exact on step graphons.
pub fn hom_density(pattern: &SimpleGraph, h: &StepGraphon) -> Result<f64> {
    if pattern.n_vertices() > MAX_PATTERN_VERTICES {
        return Err(Error::Size(format!(
            "pattern has {} vertices; at most {MAX_PATTERN_VERTICES} supported",
            pattern.n_vertices()
        )));
    }
    let back = back_edges(pattern);
    let mut assignment = vec![0usize; pattern.n_vertices()];
    Ok(assign(h, &back, &mut assignment, 0, 1.0))
}

/// For each vertex `v`, its neighbours `u < v`.
pub(crate) fn back_edges(pattern: &SimpleGraph) -> Vec<Vec<usize>> {
    let mut back = vec![Vec::new(); pattern.n_vertices()];
    for &(a, b) in pattern.edges() {
        back[b].push(a);
    }
    back
}

fn assign(h: &StepGraphon, back: &[Vec<usize>], phi: &mut [usize], depth: usize, weight: f64) -> f64 {
    if depth == phi.len() {
        return weight;
    }
    let mut total = 0.0;
    for block in 0..h.n_blocks() {
        let mut w = weight * h.masses()[block];
        for &u in &back[depth] {
            w *= h.value(phi[u], block);
        }
        if w == 0.0 {
            continue;
        }
        phi[depth] = block;
        total += assign(h, back, phi, depth + 1, w);
    }
    total
}

/// `t(K₂, h)`.
pub fn edge_density(h: &StepGraphon) -> f64 {
    let m = h.masses();
    let mut total = 0.0;
    for a in 0..m.len() {
        for b in 0..m.len() {
            total += m[a] * m[b] * h.value(a, b);
        }
    }
    total
}

/// `t(K₃, h)`.
pub fn triangle_density(h: &StepGraphon) -> f64 {
    let m = h.masses();
    let k = m.len();
    let mut total = 0.0;
    for a in 0..k {
        for b in 0..k {
            let ab = m[a] * m[b] * h.value(a, b);
            if ab == 0.0 {
                continue;
            }
            for c in 0..k {
                total += ab * m[c] * h.value(b, c) * h.value(c, a);
            }
        }
    }
    total
}

/// `I(u) = ½ u log u + ½ (1-u) log(1-u)` with `0 log 0 = 0`.
pub fn rate_function_scalar(u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("I(u) requires u in [0,1], got {u}")));
    }
    Ok(rate_unchecked(u))
}

#[inline]
pub(crate) fn rate_unchecked(u: f64) -> f64 {
    0.5 * (xlogx(u) + xlogx(1.0 - u))
}

#[inline]
fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `I(h) = ∫∫ I(h(x,y)) dx dy`.
pub fn rate_function(h: &StepGraphon) -> f64 {
    let m = h.masses();
    let mut total = 0.0;
    for a in 0..m.len() {
        for b in 0..m.len() {
            total += m[a] * m[b] * rate_unchecked(h.value(a, b));
        }
    }
    total
}
