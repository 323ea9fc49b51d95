//! Euler–Lagrange equations for the exponential random graph variational
//! problem.
//!
//! `Δ_H h(x, y)` sums, over the edges `rs` of `H`, the density of `H` with
//! the edge `rs` removed and `r, s` pinned at `x, y`. Each undirected edge is
//! counted once and symmetrized in `(x, y)`, so `Δ_{K₂} ≡ 1` and
//! `Δ_{K₃} h(x, y) = 3 ∫ h(x, z) h(y, z) dz`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::graphon::StepGraphon;
use crate::optim::logistic;

/// Largest `H` accepted by [`delta_h`].
pub const MAX_DELTA_VERTICES: usize = 8;

/// Largest block count for [`el_fixed_point`].
pub const MAX_EL_BLOCKS: usize = 64;

/// Values of `h` closer than this count as one value in [`recover_multipliers`].
pub const DEGENERATE_TOL: f64 = 1e-9;

/// Symmetric nonnegative kernel on the block partition of a step graphon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockKernel {
    pub masses: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

/// `Δ_H h` on the blocks of `h`; exact.
pub fn delta_h(pattern: &SimpleGraph, h: &StepGraphon) -> Result<BlockKernel> {
    let nv = pattern.n_vertices();
    if nv > MAX_DELTA_VERTICES {
        return Err(Error::Size(format!("Δ_H needs at most {MAX_DELTA_VERTICES} pattern vertices, got {nv}")));
    }
    let k = h.n_blocks();
    let plans: Vec<EdgePlan> = pattern.edges().iter().map(|&e| EdgePlan::new(pattern, e)).collect();
    let raw: Vec<f64> = (0..k * k)
        .into_par_iter()
        .map(|ab| {
            let (a, b) = (ab / k, ab % k);
            plans.iter().map(|p| p.contract(h, a, b)).sum()
        })
        .collect();
    let values = (0..k).map(|a| (0..k).map(|b| 0.5 * (raw[a * k + b] + raw[b * k + a])).collect()).collect();
    Ok(BlockKernel { masses: h.masses().to_vec(), values })
}

/// Contraction order for one removed edge: `r, s` pinned, the remaining
/// vertices placed in `order`, each multiplying in its edges to vertices
/// already placed.
struct EdgePlan {
    r: usize,
    s: usize,
    order: Vec<usize>,
    earlier: Vec<Vec<usize>>,
}

impl EdgePlan {
    fn new(pattern: &SimpleGraph, removed: (usize, usize)) -> Self {
        let (r, s) = removed;
        let order: Vec<usize> = (0..pattern.n_vertices()).filter(|&v| v != r && v != s).collect();
        let mut placed = vec![false; pattern.n_vertices()];
        placed[r] = true;
        placed[s] = true;
        let mut earlier = Vec::with_capacity(order.len());
        for &v in &order {
            let nbrs = (0..pattern.n_vertices()).filter(|&u| placed[u] && pattern.has_edge(u, v)).collect();
            earlier.push(nbrs);
            placed[v] = true;
        }
        Self { r, s, order, earlier }
    }

    fn contract(&self, h: &StepGraphon, a: usize, b: usize) -> f64 {
        // indexed by pattern vertex
        let mut phi = vec![usize::MAX; self.order.len() + 2];
        phi[self.r] = a;
        phi[self.s] = b;
        self.place(h, &mut phi, 0, 1.0)
    }

    fn place(&self, h: &StepGraphon, phi: &mut [usize], depth: usize, weight: f64) -> f64 {
        if depth == self.order.len() {
            return weight;
        }
        let v = self.order[depth];
        let mut total = 0.0;
        for block in 0..h.n_blocks() {
            let mut w = weight * h.masses()[block];
            for &u in &self.earlier[depth] {
                w *= h.value(phi[u], block);
            }
            if w == 0.0 {
                continue;
            }
            phi[v] = block;
            total += self.place(h, phi, depth + 1, w);
        }
        total
    }
}

#[derive(Debug, Clone)]
pub struct ELConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub h2: SimpleGraph,
    pub blocks: usize,
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl ELConfig {
    /// Triangle model with the default iteration settings.
    pub fn triangle(beta1: f64, beta2: f64, blocks: usize) -> Self {
        Self { beta1, beta2, h2: SimpleGraph::triangle(), blocks, damping: 0.5, tol: 1e-10, max_iter: 10_000 }
    }

    fn validate(&self) -> Result<()> {
        if self.blocks == 0 || self.blocks > MAX_EL_BLOCKS {
            return Err(Error::Invalid(format!("blocks must be in 1..={MAX_EL_BLOCKS}, got {}", self.blocks)));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::Invalid(format!("damping must be in (0, 1], got {}", self.damping)));
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::Invalid("tol and max_iter must be positive".into()));
        }
        if !self.beta1.is_finite() || !self.beta2.is_finite() {
            return Err(Error::Invalid("β must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ELSolution {
    pub graphon: StepGraphon,
    pub residual_sup: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `logistic(2β₁ + 2β₂ Δ_{H₂} h)` blockwise.
fn el_map(cfg: &ELConfig, h: &StepGraphon) -> Result<Vec<Vec<f64>>> {
    let delta = delta_h(&cfg.h2, h)?;
    Ok(delta
        .values
        .iter()
        .map(|row| row.iter().map(|&d| logistic(2.0 * cfg.beta1 + 2.0 * cfg.beta2 * d)).collect())
        .collect())
}

fn sup_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Damped fixed-point iteration `h ← (1-λ) h + λ F(h)` for the
/// unconstrained Euler–Lagrange equation `h = F(h)`. Non-convergence is
/// reported through the flag, not as an error.
pub fn el_fixed_point(cfg: &ELConfig, init: &StepGraphon) -> Result<ELSolution> {
    cfg.validate()?;
    let m = cfg.blocks;
    if init.n_blocks() != m || init.masses().iter().any(|&w| (w - 1.0 / m as f64).abs() > 1e-12) {
        return Err(Error::Invalid(format!("initial graphon must have {m} equal blocks")));
    }
    if !init.is_interior() {
        return Err(Error::Boundary("initial graphon must take values in (0, 1)".into()));
    }
    let masses = init.masses().to_vec();
    let mut h = init.clone();
    let mut image = el_map(cfg, &h)?;
    let mut residual = sup_diff(h.values(), &image);
    let mut iterations = 0;
    while residual > cfg.tol && iterations < cfg.max_iter {
        let lambda = cfg.damping;
        let next: Vec<Vec<f64>> = h
            .values()
            .iter()
            .zip(&image)
            .map(|(row, img)| row.iter().zip(img).map(|(x, f)| (1.0 - lambda) * x + lambda * f).collect())
            .collect();
        h = StepGraphon::new(masses.clone(), next)?;
        image = el_map(cfg, &h)?;
        residual = sup_diff(h.values(), &image);
        iterations += 1;
    }
    let converged = residual <= cfg.tol;
    if converged {
        // one undamped step lands exactly on fixed points the map reaches in one step
        let candidate = StepGraphon::new(masses, image)?;
        let cand_residual = sup_diff(candidate.values(), &el_map(cfg, &candidate)?);
        if cand_residual <= residual {
            h = candidate;
            residual = cand_residual;
        }
    }
    Ok(ELSolution { graphon: h, residual_sup: residual, iterations, converged })
}

/// `sup |2β₁ + 2β₂ Δ_{H₂} h - logit h|`: the Euler–Lagrange residual in logit form.
pub fn el_logit_residual(cfg: &ELConfig, h: &StepGraphon) -> Result<f64> {
    require_interior(h)?;
    let delta = delta_h(&cfg.h2, h)?;
    let mut worst: f64 = 0.0;
    for (row, drow) in h.values().iter().zip(&delta.values) {
        for (&x, &d) in row.iter().zip(drow) {
            let lhs = 2.0 * cfg.beta1 + 2.0 * cfg.beta2 * d;
            worst = worst.max((lhs - (x / (1.0 - x)).ln()).abs());
        }
    }
    Ok(worst)
}

fn require_interior(h: &StepGraphon) -> Result<()> {
    if h.is_interior() {
        Ok(())
    } else {
        Err(Error::Boundary("graphon takes the value 0 or 1".into()))
    }
}

/// `max |Δ_{H₂} h - β₁ - (β₂/2) log(1/h - 1)|` over block pairs.
pub fn stationarity_residual(h: &StepGraphon, beta1: f64, beta2: f64, h2: &SimpleGraph) -> Result<f64> {
    require_interior(h)?;
    let delta = delta_h(h2, h)?;
    let mut worst: f64 = 0.0;
    for (row, drow) in h.values().iter().zip(&delta.values) {
        for (&x, &d) in row.iter().zip(drow) {
            worst = worst.max((d - beta1 - 0.5 * beta2 * (1.0 / x - 1.0).ln()).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Multipliers {
    pub beta1: f64,
    pub beta2: f64,
    /// Largest absolute misfit over block pairs.
    pub residual: f64,
    /// `h` takes fewer than two distinct values; `β₂` is then set to 0.
    pub degenerate: bool,
}

/// Mass-weighted least-squares fit of `Δ_{H₂} h ≈ β₁ + (β₂/2) log(1/h - 1)`.
pub fn recover_multipliers(h: &StepGraphon, h2: &SimpleGraph) -> Result<Multipliers> {
    require_interior(h)?;
    let delta = delta_h(h2, h)?;
    let w = h.masses();
    let k = h.n_blocks();
    let (mut sw, mut sx, mut sxx, mut sd, mut sxd) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for a in 0..k {
        for b in 0..k {
            let wt = w[a] * w[b];
            let x = 0.5 * (1.0 / h.value(a, b) - 1.0).ln();
            let d = delta.values[a][b];
            sw += wt;
            sx += wt * x;
            sxx += wt * x * x;
            sd += wt * d;
            sxd += wt * x * d;
        }
    }
    let degenerate = h.distinct_values(DEGENERATE_TOL).len() < 2;
    let (beta1, beta2) = if degenerate {
        (sd / sw, 0.0)
    } else {
        let det = sw * sxx - sx * sx;
        ((sxx * sd - sx * sxd) / det, (sw * sxd - sx * sd) / det)
    };
    let residual = stationarity_residual(h, beta1, beta2, h2)?;
    Ok(Multipliers { beta1, beta2, residual, degenerate })
}
