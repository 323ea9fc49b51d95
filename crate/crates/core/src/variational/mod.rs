//! Constrained entropy `s(e,t) = max{ -I(h) : e(h) = e, t(h) = t }`.
//!
//! On the segment `e = 1/2, t ≤ 1/8` the maximizer is the symmetric bipodal
//! graphon and `s` has a closed form. Elsewhere the maximum is taken over
//! two-block graphons numerically; those values rest on the bipodal ansatz
//! and are flagged `conjectural`.

mod bipodal;
mod region;

pub use bipodal::{BipodalParams, SolverOptions};
pub use region::{region_bounds, RegionBounds};

use serde::{Deserialize, Serialize};

use crate::density::rate_unchecked;
use crate::error::{Error, Result};

/// Slack allowed when checking `t` against the attainable region.
pub const REGION_SLACK: f64 = 1e-9;

/// One evaluation of `s(e, t)` with the graphon attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyPoint {
    pub e: f64,
    pub t: f64,
    pub s: f64,
    pub maximizer: BipodalParams,
    /// Set when the value depends on the unproven bipodal ansatz.
    pub conjectural: bool,
}

/// `s(1/2, t)` for `0 ≤ t ≤ 1/8`, attained by the symmetric bipodal
/// graphon with `eps = (1/8 - t)^{1/3}`.
pub fn s_half_closed(t: f64) -> Result<EntropyPoint> {
    if !(0.0..=0.125).contains(&t) {
        return Err(Error::Domain(format!("closed-form s(1/2, t) needs t in [0, 1/8], got {t}")));
    }
    let eps = half_eps(t);
    Ok(EntropyPoint {
        e: 0.5,
        t,
        s: 0.0 - rate_unchecked(0.5 + eps),
        maximizer: BipodalParams::symmetric(eps),
        conjectural: false,
    })
}

/// `(e³ - t)^{1/3}`: the distance of `t` below the Erdős–Rényi curve on the
/// cube-root scale. For the symmetric bipodal family it is the off-diagonal
/// excess `eps`.
pub fn eps_of(e: f64, t: f64) -> f64 {
    (e.powi(3) - t).max(0.0).cbrt()
}

fn half_eps(t: f64) -> f64 {
    eps_of(0.5, t).min(0.5)
}

/// Numeric `s(e, t)` over bipodal graphons, for `0 < e ≤ 1/2`.
///
/// `constraint_tol` bounds the violation of both density constraints in the
/// returned maximizer. Points on the Erdős–Rényi curve return the constant
/// graphon (optimal by Jensen); `t = 0` reduces to a search over the block
/// mass because both diagonal blocks must then be empty.
pub fn s_numeric(e: f64, t: f64, starts: usize, constraint_tol: f64) -> Result<EntropyPoint> {
    let opts = SolverOptions { starts, constraint_tol, ..SolverOptions::default() };
    s_numeric_with(e, t, &opts)
}

pub fn s_numeric_with(e: f64, t: f64, opts: &SolverOptions) -> Result<EntropyPoint> {
    s_numeric_seeded(e, t, opts, &[])
}

/// As [`s_numeric_with`], also refining from `seeds` (maximizers at nearby
/// points), which keeps a scan on one branch of maximizers. With
/// `opts.starts == 0` only the seeds are refined.
pub fn s_numeric_seeded(e: f64, t: f64, opts: &SolverOptions, seeds: &[BipodalParams]) -> Result<EntropyPoint> {
    if !(e > 0.0 && e <= 0.5) {
        return Err(Error::Domain(format!("numeric entropy is offered for 0 < e ≤ 1/2, got e = {e}")));
    }
    if opts.starts == 0 && seeds.is_empty() {
        return Err(Error::Invalid("at least one start or seed is required".into()));
    }
    let region = region_bounds(e)?;
    if !region.contains(t, REGION_SLACK) {
        return Err(Error::Region(format!("t = {t} outside [{}, {}] at e = {e}", region.t_min, region.t_max)));
    }
    let t = t.clamp(region.t_min, region.t_max);
    let er = e.powi(3);
    let maximizer = if (t - er).abs() <= 1e-15 {
        BipodalParams::constant(e)
    } else if t < 1e-12 {
        bipodal::maximize_triangle_free(e)
    } else {
        bipodal::maximize_entropy_seeded(e, t, opts, seeds)?
    };
    Ok(EntropyPoint { e, t, s: 0.0 - maximizer.rate(), maximizer, conjectural: e != 0.5 })
}

/// `s(e, t)`: closed form on `e = 1/2`, numeric bipodal otherwise.
pub fn entropy(e: f64, t: f64, opts: &SolverOptions) -> Result<EntropyPoint> {
    if e == 0.5 && (0.0..=0.125).contains(&t) {
        s_half_closed(t)
    } else {
        s_numeric_with(e, t, opts)
    }
}

/// Smallest ratio `(s(e,e³) - s(e,t)) / (e³ - t)^{2/3}` over `grid`; a
/// positive value is an empirical constant in the lower bound
/// `s(e,e³) - s(e,t) ≥ c (e³ - t)^{2/3}`.
pub fn rs_lower_bound_check(e: f64, grid: &[f64], opts: &SolverOptions) -> Result<f64> {
    if !(e > 0.0 && e <= 0.5) {
        return Err(Error::Domain(format!("e = {e} outside (0, 1/2]")));
    }
    if grid.is_empty() {
        return Err(Error::Invalid("empty t grid".into()));
    }
    let er = e.powi(3);
    let top = -rate_unchecked(e);
    let mut worst = f64::INFINITY;
    for &t in grid {
        if !(t >= 0.0 && t < er) {
            return Err(Error::Region(format!("grid point t = {t} not in [0, e³)")));
        }
        let s = entropy(e, t, opts)?.s;
        worst = worst.min((top - s) / (er - t).powf(2.0 / 3.0));
    }
    Ok(worst)
}
