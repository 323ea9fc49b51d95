//! Two-block graphons and the constrained entropy maximization over them.
//!
//! At fixed block mass `c` and diagonal split `w` the two density
//! constraints determine the values up to a choice of root, so the search
//! is a grid scan over `(c, w)`
//! followed by Nelder–Mead refinement of the best grid peaks.

use serde::{Deserialize, Serialize};

use crate::density::rate_unchecked;
use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::optim::{golden_min_closed, nelder_mead};

/// Parameters of the step graphon with blocks `[0,c)` and `[c,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BipodalParams {
    pub c: f64,
    pub p11: f64,
    pub p12: f64,
    pub p22: f64,
}

impl BipodalParams {
    pub fn new(c: f64, p11: f64, p12: f64, p22: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::Invalid(format!("block mass {c} outside (0,1)")));
        }
        for p in [p11, p12, p22] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Invalid(format!("bipodal value {p} outside [0,1]")));
            }
        }
        Ok(Self { c, p11, p12, p22 })
    }

    /// `h ≡ p`, written with two equal blocks.
    pub fn constant(p: f64) -> Self {
        Self { c: 0.5, p11: p, p12: p, p22: p }
    }

    /// Equal halves with `1/2 ∓ eps` on and off the diagonal blocks.
    pub fn symmetric(eps: f64) -> Self {
        Self { c: 0.5, p11: 0.5 - eps, p12: 0.5 + eps, p22: 0.5 - eps }
    }

    pub fn graphon(&self) -> StepGraphon {
        StepGraphon::bipodal(self.c, self.p11, self.p12, self.p22)
            .expect("bipodal parameters are validated on construction")
    }

    pub fn edge_density(&self) -> f64 {
        let (c, d) = (self.c, 1.0 - self.c);
        c * c * self.p11 + 2.0 * c * d * self.p12 + d * d * self.p22
    }

    pub fn triangle_density(&self) -> f64 {
        let (c, d) = (self.c, 1.0 - self.c);
        let q = self.p12 * self.p12;
        c.powi(3) * self.p11.powi(3)
            + 3.0 * c * c * d * self.p11 * q
            + 3.0 * c * d * d * self.p22 * q
            + d.powi(3) * self.p22.powi(3)
    }

    /// `I(h)` of the induced graphon.
    pub fn rate(&self) -> f64 {
        let (c, d) = (self.c, 1.0 - self.c);
        c * c * rate_unchecked(self.p11) + 2.0 * c * d * rate_unchecked(self.p12) + d * d * rate_unchecked(self.p22)
    }

    /// Swaps the blocks if needed so that `c ≤ 1/2` (and `p11 ≤ p22` at `c = 1/2`).
    pub fn canonical(self) -> Self {
        let swapped = Self { c: 1.0 - self.c, p11: self.p22, p12: self.p12, p22: self.p11 };
        if self.c > 0.5 || (self.c == 0.5 && self.p11 > self.p22) {
            swapped
        } else {
            self
        }
    }

    fn as_array(&self) -> [f64; 4] {
        [self.c, self.p11, self.p12, self.p22]
    }
}

/// Tuning for the bipodal solver.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Number of grid local maxima refined by Nelder–Mead; 0 skips the grid
    /// and refines only the seeds.
    pub starts: usize,
    /// Maximum violation of each density constraint in an accepted solution.
    pub constraint_tol: f64,
    /// Grid points per axis in the `(c, p12)` scan.
    pub grid: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { starts: 32, constraint_tol: 1e-9, grid: 64 }
    }
}

const ROOT_SCAN: usize = 48;

/// Solves the two constraints for `(p12, p11, p22)` at fixed `(c, w)`.
///
/// With `a = c p11`, `b = (1-c) p22` and `w = a / (a + b)`, the edge
/// constraint makes `a + b` affine in `p12` and the triangle constraint a
/// cubic in `p12` on an explicit interval. `branch` counts its roots from
/// the largest `p12` down.
pub(crate) fn complete(e: f64, t: f64, c: f64, w: f64, branch: usize) -> Option<BipodalParams> {
    if !(c > 0.0 && c < 1.0) || !(0.0..=1.0).contains(&w) {
        return None;
    }
    let d = 1.0 - c;
    let cd = c * d;
    let k = c * w + d * (1.0 - w);
    let m = w.powi(3) + (1.0 - w).powi(3);
    let mass_of = |p: f64| ((e - 2.0 * cd * p) / k).max(0.0);
    let g = |p: f64| {
        let s = mass_of(p);
        m * s * s * s + 3.0 * cd * p * p * s - t
    };
    let p_hi = (e / (2.0 * cd)).min(1.0);
    let cap_a = if w > 0.0 { c / w } else { f64::INFINITY };
    let cap_b = if w < 1.0 { d / (1.0 - w) } else { f64::INFINITY };
    let p_lo = ((e - k * cap_a.min(cap_b)) / (2.0 * cd)).max(0.0);
    if !(p_lo <= p_hi) {
        return None;
    }
    let mut found = 0;
    let mut prev = (p_hi, g(p_hi));
    for i in 1..=ROOT_SCAN {
        let p = p_hi - (p_hi - p_lo) * i as f64 / ROOT_SCAN as f64;
        let cur = (p, g(p));
        if (prev.1 < 0.0) != (cur.1 < 0.0) {
            if found == branch {
                let root = bisect(&g, prev, cur);
                let s = mass_of(root);
                return Some(BipodalParams {
                    c,
                    p11: (w * s / c).clamp(0.0, 1.0),
                    p12: root,
                    p22: ((1.0 - w) * s / d).clamp(0.0, 1.0),
                });
            }
            found += 1;
        }
        prev = cur;
    }
    None
}

fn bisect(g: &impl Fn(f64) -> f64, mut x0: (f64, f64), mut x1: (f64, f64)) -> f64 {
    loop {
        let mid = 0.5 * (x0.0 + x1.0);
        if mid == x0.0 || mid == x1.0 {
            break;
        }
        let gm = g(mid);
        if (gm < 0.0) == (x0.1 < 0.0) {
            x0 = (mid, gm);
        } else {
            x1 = (mid, gm);
        }
    }
    if x0.1.abs() <= x1.1.abs() {
        x0.0
    } else {
        x1.0
    }
}

/// Branches tracked by the solver; the cubic has at most three roots.
const BRANCHES: usize = 3;

fn chart(p: &BipodalParams) -> [f64; 2] {
    let (a, b) = (p.c * p.p11, (1.0 - p.c) * p.p22);
    [p.c, if a + b > 0.0 { a / (a + b) } else { 0.5 }]
}

fn reduced_entropy(e: f64, t: f64, c: f64, w: f64, branch: usize) -> f64 {
    complete(e, t, c, w, branch).map_or(f64::NEG_INFINITY, |p| -p.rate())
}

/// Maximizes `-I` over bipodal graphons with edge density `e` and triangle
/// density `t`, also refining from `seeds` (typically maximizers at nearby
/// `(e, t)`). The caller validates `(e, t)` and handles `t` near zero and on
/// the Erdős–Rényi curve.
pub(crate) fn maximize_entropy_seeded(
    e: f64,
    t: f64,
    opts: &SolverOptions,
    seeds: &[BipodalParams],
) -> Result<BipodalParams> {
    let n = opts.grid.max(4);
    // c over (0, 1/2], w over [0, 1]; swapping blocks covers c > 1/2
    let cs: Vec<f64> = (1..=n).map(|i| 0.5 * i as f64 / n as f64).collect();
    let ps: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
    let mut starts: Vec<(f64, [f64; 2], usize)> = Vec::new();
    for branch in (0..BRANCHES).filter(|_| opts.starts > 0) {
        let vals: Vec<Vec<f64>> =
            cs.iter().map(|&c| ps.iter().map(|&p| reduced_entropy(e, t, c, p, branch)).collect()).collect();
        for i in 0..cs.len() {
            for j in 0..ps.len() {
                let v = vals[i][j];
                if !v.is_finite() {
                    continue;
                }
                let mut peak = true;
                for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        let (ii, jj) = (i as i64 + di, j as i64 + dj);
                        if (di, dj) == (0, 0) || ii < 0 || jj < 0 {
                            continue;
                        }
                        if let Some(w) = vals.get(ii as usize).and_then(|r| r.get(jj as usize)) {
                            if *w > v {
                                peak = false;
                            }
                        }
                    }
                }
                if peak {
                    starts.push((v, [cs[i], ps[j]], branch));
                }
            }
        }
    }
    starts.sort_by(|a, b| b.0.total_cmp(&a.0));
    starts.truncate(opts.starts);
    for seed in seeds {
        let x = chart(&seed.canonical());
        for branch in 0..BRANCHES {
            let v = reduced_entropy(e, t, x[0], x[1], branch);
            if v.is_finite() {
                starts.push((v, x, branch));
            }
        }
    }

    let mut best: Option<(f64, BipodalParams)> = None;
    let mut best_residual = f64::INFINITY;
    let step = 0.5 / n as f64;
    for (_, x0, branch) in starts {
        let (x, _) = nelder_mead(|x: &[f64]| -reduced_entropy(e, t, x[0], x[1], branch), &x0, step, 1e-13, 2000);
        let Some(cand) = complete(e, t, x[0], x[1], branch) else { continue };
        let cand = cand.canonical();
        let residual = (cand.edge_density() - e).abs().max((cand.triangle_density() - t).abs());
        best_residual = best_residual.min(residual);
        if residual > opts.constraint_tol {
            continue;
        }
        let s = -cand.rate();
        best = Some(match best {
            None => (s, cand),
            Some((bs, bp)) => {
                if s > bs + 1e-12 || ((s - bs).abs() <= 1e-12 && lex_less(&cand, &bp)) {
                    (s, cand)
                } else {
                    (bs, bp)
                }
            }
        });
    }
    best.map(|(_, p)| p)
        .ok_or_else(|| Error::convergence(format!("no bipodal graphon found at e = {e}, t = {t}"), best_residual))
}

fn lex_less(a: &BipodalParams, b: &BipodalParams) -> bool {
    a.as_array().iter().zip(b.as_array()).find(|(x, y)| *x != y).is_some_and(|(x, y)| *x < y)
}

/// Triangle-free case: `t = 0` forces both diagonal values to zero, leaving
/// a one-dimensional search over the block mass.
pub(crate) fn maximize_triangle_free(e: f64) -> BipodalParams {
    // with u = 2c(1-c) the crossing value is e/u ≤ 1, so u ∈ [e, 1/2]
    let neg_entropy = |u: f64| u * rate_unchecked((e / u).min(1.0));
    let (u, _) = golden_min_closed(neg_entropy, e, 0.5, 1e-13);
    let c = 0.5 * (1.0 - (1.0 - 2.0 * u).max(0.0).sqrt());
    BipodalParams { c, p11: 0.0, p12: (e / u).min(1.0), p22: 0.0 }.canonical()
}
