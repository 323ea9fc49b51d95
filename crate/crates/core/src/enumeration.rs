//! Exact finite-n partition functions by exhaustive enumeration.
//!
//! All `2^{n(n-1)/2}` labelled graphs on `n ≤ 8` vertices are walked in
//! Gray-code order, so each step toggles one edge and updates the edge and
//! triangle counts incrementally. The walk produces an integer histogram over
//! `(edges, triangles)`; every partition function is then a log-sum-exp over
//! histogram cells. Integer counts merge exactly, so results do not depend on
//! the thread count.
//!
//! The Gibbs weight of a graph with `E` edges and `T` triangles is
//! `exp(n² (β₁ 2E/n² + β₂ 6T/n³)) = exp(2β₁E + 6β₂T/n)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cut::cut_distance_upper;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::graphon::{graph_to_graphon, StepGraphon};

pub const MAX_ENUM_N: usize = 8;

/// Largest `n` for [`conditional_concentration`] against a non-constant reference.
pub const MAX_CONCENTRATION_N: usize = 7;

/// A graph is in the shell when `α - |2E/n² - e| > SHELL_MARGIN`.
pub const SHELL_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnumSpec {
    pub n: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub e_target: Option<f64>,
    pub alpha: Option<f64>,
}

impl EnumSpec {
    pub fn unconstrained(n: usize, beta1: f64, beta2: f64) -> Self {
        Self { n, beta1, beta2, e_target: None, alpha: None }
    }

    pub fn conditional(n: usize, beta1: f64, beta2: f64, e: f64, alpha: f64) -> Self {
        Self { n, beta1, beta2, e_target: Some(e), alpha: Some(alpha) }
    }

    fn validate(&self) -> Result<()> {
        if self.n > MAX_ENUM_N {
            return Err(Error::Size(format!("enumeration supports n ≤ {MAX_ENUM_N}, got {}", self.n)));
        }
        if self.n < 2 {
            return Err(Error::Invalid(format!("enumeration needs n ≥ 2, got {}", self.n)));
        }
        if !self.beta1.is_finite() || !self.beta2.is_finite() {
            return Err(Error::Invalid("β must be finite".into()));
        }
        match (self.e_target, self.alpha) {
            (None, None) => Ok(()),
            (Some(e), Some(a)) if (0.0..=1.0).contains(&e) && a > 0.0 => Ok(()),
            (Some(_), Some(_)) => Err(Error::Invalid("need e in [0, 1] and α > 0".into())),
            (None, Some(_)) => Err(Error::Invalid("α given without a target edge density".into())),
            (Some(_), None) => Err(Error::Invalid("target edge density given without α".into())),
        }
    }

    /// Whether a graph with `edges` edges lies in the edge-density shell.
    fn admits(&self, edges: usize) -> bool {
        match (self.e_target, self.alpha) {
            (Some(e), Some(alpha)) => {
                let density = 2.0 * edges as f64 / (self.n * self.n) as f64;
                alpha - (density - e).abs() > SHELL_MARGIN
            }
            _ => true,
        }
    }

    fn log_weight(&self, edges: usize, triangles: usize) -> f64 {
        2.0 * self.beta1 * edges as f64 + 6.0 * self.beta2 * triangles as f64 / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnumResult {
    pub psi: f64,
    pub graph_count: u64,
    pub total_graphs: u64,
    pub log_partition: f64,
}

/// Number of labelled graphs on `n` vertices with each `(edges, triangles)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphHistogram {
    n: usize,
    /// `counts[E][T]`
    counts: Vec<Vec<u64>>,
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn max_triangles(n: usize) -> usize {
    n * (n - 1) * (n - 2) / 6
}

fn edge_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Chunks of the Gray-code walk; fixed so the work split is reproducible.
const CHUNKS: u64 = 64;

/// Walks masks `lo..hi` in Gray-code order, calling `visit(mask, E, T)`.
fn walk<F: FnMut(u64, usize, usize)>(n: usize, pairs: &[(usize, usize)], lo: u64, hi: u64, mut visit: F) {
    if lo >= hi {
        return;
    }
    let mut adj = vec![0u32; n];
    let mut mask = lo ^ (lo >> 1);
    let mut edges = 0usize;
    for (bit, &(i, j)) in pairs.iter().enumerate() {
        if mask >> bit & 1 == 1 {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
            edges += 1;
        }
    }
    let mut triangles = 0usize;
    for &(i, j) in pairs {
        if adj[i] >> j & 1 == 1 {
            triangles += (adj[i] & adj[j]).count_ones() as usize;
        }
    }
    triangles /= 3;
    visit(mask, edges, triangles);
    for k in lo + 1..hi {
        let bit = k.trailing_zeros() as usize;
        let (i, j) = pairs[bit];
        let common = (adj[i] & adj[j]).count_ones() as usize;
        if mask >> bit & 1 == 1 {
            adj[i] &= !(1 << j);
            adj[j] &= !(1 << i);
            edges -= 1;
            triangles -= common;
        } else {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
            edges += 1;
            triangles += common;
        }
        mask ^= 1 << bit;
        visit(mask, edges, triangles);
    }
}

fn chunk_bounds(total: u64) -> Vec<(u64, u64)> {
    let chunks = CHUNKS.min(total);
    (0..chunks).map(|c| (total * c / chunks, total * (c + 1) / chunks)).collect()
}

impl GraphHistogram {
    pub fn new(n: usize) -> Result<Self> {
        EnumSpec::unconstrained(n, 0.0, 0.0).validate()?;
        Ok(Self::filtered(n, |_, _, _| true))
    }

    /// Histogram of graphs whose edge mask passes `keep(mask, E, T)`.
    fn filtered<K: Fn(u64, usize, usize) -> bool + Sync>(n: usize, keep: K) -> Self {
        let pairs = edge_pairs(n);
        let total = 1u64 << pairs.len();
        let blank = || vec![vec![0u64; max_triangles(n) + 1]; pair_count(n) + 1];
        let parts: Vec<Vec<Vec<u64>>> = chunk_bounds(total)
            .into_par_iter()
            .map(|(lo, hi)| {
                let mut local = blank();
                walk(n, &pairs, lo, hi, |mask, e, t| {
                    if keep(mask, e, t) {
                        local[e][t] += 1;
                    }
                });
                local
            })
            .collect();
        let mut counts = blank();
        for part in parts {
            for (row, prow) in counts.iter_mut().zip(part) {
                for (c, p) in row.iter_mut().zip(prow) {
                    *c += p;
                }
            }
        }
        Self { n, counts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, edges: usize, triangles: usize) -> u64 {
        self.counts.get(edges).and_then(|r| r.get(triangles)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Log-sum-exp of the Gibbs weights over the cells admitted by `spec`;
    /// `None` when no graph is admitted. Cells are visited in a fixed order.
    fn log_partition(&self, spec: &EnumSpec) -> Option<(f64, u64)> {
        let cells: Vec<(f64, u64)> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(e, _)| spec.admits(*e))
            .flat_map(|(e, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(move |(t, &c)| (spec.log_weight(e, t) + (c as f64).ln(), c))
            })
            .collect();
        let max = cells.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
        if cells.is_empty() {
            return None;
        }
        let sum: f64 = cells.iter().map(|c| (c.0 - max).exp()).sum();
        Some((max + sum.ln(), cells.iter().map(|c| c.1).sum()))
    }

    /// Weighted mean of `6T/n³` over the cells admitted by `spec`.
    fn mean_triangle_density(&self, spec: &EnumSpec, log_z: f64) -> f64 {
        let n3 = (self.n * self.n * self.n) as f64;
        let mut mean = 0.0;
        for (e, row) in self.counts.iter().enumerate().filter(|(e, _)| spec.admits(*e)) {
            for (t, &c) in row.iter().enumerate().filter(|(_, &c)| c > 0) {
                let p = (spec.log_weight(e, t) + (c as f64).ln() - log_z).exp();
                mean += p * 6.0 * t as f64 / n3;
            }
        }
        mean
    }

    /// Partition function for `spec`, which must have this histogram's `n`.
    pub fn evaluate(&self, spec: &EnumSpec) -> Result<EnumResult> {
        spec.validate()?;
        if spec.n != self.n {
            return Err(Error::Invalid(format!("histogram is for n = {}, spec has n = {}", self.n, spec.n)));
        }
        let (log_z, count) = self.log_partition(spec).ok_or_else(|| empty_shell(spec))?;
        let n2 = (self.n * self.n) as f64;
        Ok(EnumResult {
            psi: log_z / n2,
            graph_count: count,
            total_graphs: 1u64 << pair_count(self.n),
            log_partition: log_z,
        })
    }
}

fn empty_shell(spec: &EnumSpec) -> Error {
    Error::EmptyShell(format!(
        "no graph on {} vertices has edge density within {:?} of {:?}",
        spec.n, spec.alpha, spec.e_target
    ))
}

/// `ψ_n = n⁻² log Σ_G exp(2β₁E + 6β₂T/n)` over all graphs on `n` vertices.
pub fn exact_psi_n(spec: &EnumSpec) -> Result<EnumResult> {
    if spec.e_target.is_some() || spec.alpha.is_some() {
        return Err(Error::Invalid("exact_psi_n takes no edge-density constraint".into()));
    }
    spec.validate()?;
    GraphHistogram::new(spec.n)?.evaluate(spec)
}

/// `ψ^e_{n,α}`: as [`exact_psi_n`] restricted to `|2E/n² - e| < α`.
pub fn exact_conditional_psi(spec: &EnumSpec) -> Result<EnumResult> {
    if spec.e_target.is_none() || spec.alpha.is_none() {
        return Err(Error::Invalid("conditional ψ needs a target edge density and α".into()));
    }
    spec.validate()?;
    GraphHistogram::new(spec.n)?.evaluate(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Concentration {
    /// Conditional probability of `δ_□(h^G, reference) ≥ η`.
    pub mass_far: f64,
    /// Conditional mean triangle density.
    pub mean_t: f64,
    pub graph_count: u64,
}

/// Exact far-mass and mean triangle density under the conditional measure.
///
/// Against a constant reference the cut distance is the cut norm of
/// `h^G - p`, which is evaluated on adjacency bitsets; other references go
/// through [`cut_distance_upper`] graph by graph.
pub fn conditional_concentration(spec: &EnumSpec, reference: &StepGraphon, eta: f64) -> Result<Concentration> {
    spec.validate()?;
    if !(eta >= 0.0) {
        return Err(Error::Invalid(format!("η must be nonnegative, got {eta}")));
    }
    let n = spec.n;
    let constant = reference.distinct_values(0.0);
    if constant.len() != 1 && n > MAX_CONCENTRATION_N {
        return Err(Error::Size(format!(
            "concentration against a non-constant reference supports n ≤ {MAX_CONCENTRATION_N}"
        )));
    }
    let all = GraphHistogram::new(n)?;
    let (log_z, graph_count) = all.log_partition(spec).ok_or_else(|| empty_shell(spec))?;
    let pairs = edge_pairs(n);
    let far = if constant.len() == 1 {
        let p = constant[0];
        GraphHistogram::filtered(n, |mask, e, _| spec.admits(e) && cut_norm_to_constant(n, &pairs, mask, p) >= eta)
    } else {
        GraphHistogram::filtered(n, |mask, e, _| {
            if !spec.admits(e) {
                return false;
            }
            let g =
                SimpleGraph::new(n, pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &ij)| ij))
                    .expect("mask edges are valid");
            cut_distance_upper(&graph_to_graphon(&g), reference).expect("n ≤ 7 blocks") >= eta
        })
    };
    let mass_far = far.log_partition(spec).map_or(0.0, |(log_far, _)| (log_far - log_z).exp());
    Ok(Concentration { mass_far, mean_t: all.mean_triangle_density(spec, log_z), graph_count })
}

/// `‖h^G - p‖_□` from the edge mask: for each row subset `S`, column sums of
/// `A - p` restricted to `S` split into positive and negative parts.
fn cut_norm_to_constant(n: usize, pairs: &[(usize, usize)], mask: u64, p: f64) -> f64 {
    let mut adj = [0u32; MAX_ENUM_N];
    for (bit, &(i, j)) in pairs.iter().enumerate() {
        if mask >> bit & 1 == 1 {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
    }
    let mut best: f64 = 0.0;
    for s in 1u32..(1 << n) {
        let size = s.count_ones() as f64;
        let (mut pos, mut neg) = (0.0, 0.0);
        for col in adj.iter().take(n) {
            let c = (col & s).count_ones() as f64 - p * size;
            if c > 0.0 {
                pos += c;
            } else {
                neg -= c;
            }
        }
        best = best.max(pos).max(neg);
    }
    best / (n * n) as f64
}
