//! Constrained free energy `ψ(e, β₂) = sup_t (β₂ t + s(e, t))` at fixed edge
//! density, the support-line critical point `β₂^c(e)` and β₂-scans.
//!
//! Everything is computed from an [`EntropyCurve`]: `s(e, ·)` tabulated on a
//! grid uniform in `ε = (e³ - t)^{1/3}`, which resolves the steep approach to
//! the Erdős–Rényi point `t = e³`. Grid maxima are refined by golden section
//! against fresh evaluations of `s`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::rate_unchecked;
use crate::error::{Error, Result};
use crate::optim::golden_min_closed;
use crate::variational::{
    eps_of, region_bounds, s_half_closed, s_numeric_seeded, BipodalParams, EntropyPoint, SolverOptions,
};

/// Two local maxima of `β₂ t + s` closer than this are reported as a tie.
pub const TIE_TOL: f64 = 1e-9;

/// Slack in the support-line dominance check.
pub const SUPPORT_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub beta2: f64,
    pub psi: f64,
    pub t_star: f64,
    pub eps_star: f64,
    pub maximizer: BipodalParams,
    /// A second maximizing `t` when two local maxima tie within [`TIE_TOL`].
    pub coexisting_t: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub e: f64,
    pub beta2_c: f64,
    pub t_c: f64,
    pub eps_c: f64,
    /// Set when `s` came from the numeric bipodal solver.
    pub conjectural: bool,
}

/// Largest jump of `t_star` between adjacent scan points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpReport {
    pub size: f64,
    /// Index `i` such that the jump lies between scan points `i` and `i + 1`.
    pub index: usize,
    pub beta2_left: f64,
    pub beta2_right: f64,
    /// Jump exceeds ten times the median adjacent change.
    pub first_order: bool,
}

#[derive(Debug, Clone)]
pub struct PhaseOptions {
    /// Tabulation points of `s(e, ·)`; the closed form at `e = 1/2` always
    /// uses at least 2048.
    pub curve_points: usize,
    /// Points of the support-line validation grid.
    pub validation_points: usize,
    pub solver: SolverOptions,
}

impl Default for PhaseOptions {
    fn default() -> Self {
        Self {
            curve_points: 256,
            validation_points: 1000,
            solver: SolverOptions { grid: 12, ..SolverOptions::default() },
        }
    }
}

/// `s(e, ·)` on `[t_min, e³]`, ordered by increasing `ε` (decreasing `t`).
#[derive(Debug, Clone)]
pub struct EntropyCurve {
    e: f64,
    closed: bool,
    solver: SolverOptions,
    points: Vec<EntropyPoint>,
}

impl EntropyCurve {
    pub fn new(e: f64, opts: &PhaseOptions) -> Result<Self> {
        if !(e > 0.0 && e <= 0.5) {
            return Err(Error::Domain(format!("phase analysis needs 0 < e ≤ 1/2, got e = {e}")));
        }
        let closed = e == 0.5;
        let n = if closed { opts.curve_points.max(2048) } else { opts.curve_points.max(8) };
        let eps_max = eps_of(e, region_bounds(e)?.t_min);
        let ts: Vec<f64> = (0..=n)
            .map(|i| {
                let eps = eps_max * i as f64 / n as f64;
                (e.powi(3) - eps.powi(3)).max(0.0)
            })
            .collect();
        let mut curve = Self { e, closed, solver: opts.solver.clone(), points: Vec::with_capacity(n + 1) };
        if closed {
            curve.points = ts.iter().map(|&t| s_half_closed(t)).collect::<Result<_>>()?;
        } else {
            // sweep from the ER point downwards, seeding each solve with the last
            let mut prev: Option<BipodalParams> = None;
            for &t in &ts {
                let seeds: Vec<BipodalParams> = prev.into_iter().collect();
                let p = s_numeric_seeded(e, t, &curve.solver, &seeds)?;
                prev = Some(p.maximizer);
                curve.points.push(p);
            }
        }
        Ok(curve)
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn is_conjectural(&self) -> bool {
        !self.closed
    }

    pub fn points(&self) -> &[EntropyPoint] {
        &self.points
    }

    /// Evaluation of `s(e, t)` refined locally from the nearest tabulated
    /// maximizers.
    pub fn eval(&self, t: f64) -> Result<EntropyPoint> {
        if self.closed {
            return s_half_closed(t.clamp(0.0, 0.125));
        }
        let i = self.points.partition_point(|p| p.t > t);
        let seeds: Vec<BipodalParams> = [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .filter_map(|k| self.points.get(k).map(|p| p.maximizer))
            .collect();
        let local = SolverOptions { starts: 0, ..self.solver.clone() };
        s_numeric_seeded(self.e, t, &local, &seeds)
    }

    fn s_er(&self) -> f64 {
        -rate_unchecked(self.e)
    }

    /// Maximizes `β₂ t + s(e, t)` over the curve.
    pub fn psi(&self, beta2: f64) -> Result<PhasePoint> {
        if !(beta2 <= 0.0) {
            return Err(Error::Domain(format!("β₂ = {beta2} is outside the repulsive range β₂ ≤ 0")));
        }
        let f: Vec<f64> = self.points.iter().map(|p| beta2 * p.t + p.s).collect();
        let n = f.len();
        // local maxima of the tabulated objective, best first
        let mut peaks: Vec<usize> =
            (0..n).filter(|&i| (i == 0 || f[i] >= f[i - 1]) && (i + 1 == n || f[i] >= f[i + 1])).collect();
        peaks.sort_by(|&a, &b| f[b].total_cmp(&f[a]).then(a.cmp(&b)));
        peaks.truncate(2);
        let mut refined = Vec::with_capacity(peaks.len());
        for &i in &peaks {
            refined.push(self.refine_peak(beta2, i)?);
        }
        refined.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.t.total_cmp(&a.1.t)));
        let (psi, best) = refined[0];
        let coexisting_t = refined.get(1).and_then(|&(v, p)| {
            let apart = (p.t - best.t).abs() > 1e-6;
            (apart && psi - v <= TIE_TOL).then_some(p.t)
        });
        Ok(PhasePoint {
            beta2,
            psi,
            t_star: best.t,
            eps_star: eps_of(self.e, best.t),
            maximizer: best.maximizer,
            coexisting_t,
        })
    }

    fn refine_peak(&self, beta2: f64, i: usize) -> Result<(f64, EntropyPoint)> {
        let hi = self.points[i.saturating_sub(1)].t;
        let lo = self.points[(i + 1).min(self.points.len() - 1)].t;
        let mut failure = None;
        let (t, _) = golden_min_closed(
            |t| match self.eval(t) {
                Ok(p) => -(beta2 * t + p.s),
                Err(err) => {
                    failure.get_or_insert(err);
                    f64::INFINITY
                }
            },
            lo,
            hi,
            1e-13,
        );
        if let Some(err) = failure {
            return Err(err);
        }
        let tabulated = self.points[i];
        let p = self.eval(t)?;
        let (v, v_tab) = (beta2 * p.t + p.s, beta2 * tabulated.t + tabulated.s);
        Ok(if v_tab > v { (v_tab, tabulated) } else { (v, p) })
    }

    /// Support-line critical point: minimizes the slope
    /// `(s(e³) - s(t)) / (e³ - t)` over `t < e³`.
    pub fn critical_point(&self, tol: f64, validation_points: usize) -> Result<CriticalPoint> {
        let e3 = self.e.powi(3);
        let top = self.s_er();
        let ratio = |p: &EntropyPoint| (top - p.s) / (e3 - p.t);
        let n = self.points.len();
        let (k, _) = (1..n)
            .map(|i| (i, ratio(&self.points[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::convergence("entropy curve too short", f64::NAN))?;
        if k == 1 {
            return Err(Error::convergence(
                format!("slope minimum sits at the Erdős–Rényi end of the grid at e = {}", self.e),
                f64::NAN,
            ));
        }
        let hi = self.points[k - 1].t;
        let lo = self.points[(k + 1).min(n - 1)].t;
        let mut failure = None;
        let (t_c, m_c) = golden_min_closed(
            |t| match self.eval(t) {
                Ok(p) => ratio(&p),
                Err(err) => {
                    failure.get_or_insert(err);
                    f64::INFINITY
                }
            },
            lo,
            hi,
            tol,
        );
        if let Some(err) = failure {
            return Err(err);
        }
        self.validate_support(m_c, validation_points)?;
        Ok(CriticalPoint { e: self.e, beta2_c: -m_c, t_c, eps_c: eps_of(self.e, t_c), conjectural: !self.closed })
    }

    fn validate_support(&self, slope: f64, points: usize) -> Result<()> {
        let e3 = self.e.powi(3);
        let top = self.s_er();
        let t_min = self.points.last().map_or(0.0, |p| p.t);
        let points = points.max(2);
        let worst = (0..points)
            .into_par_iter()
            .map(|i| -> Result<f64> {
                let t = t_min + (e3 - t_min) * i as f64 / (points - 1) as f64;
                let s = self.eval(t)?.s;
                Ok(top + slope * (t - e3) - s)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if worst < -SUPPORT_SLACK {
            return Err(Error::convergence(
                format!("support line crosses s(e, ·) at e = {} by {}", self.e, -worst),
                -worst,
            ));
        }
        Ok(())
    }
}

/// `ψ(e, β₂)` with its maximizing triangle density.
pub fn psi_constrained(e: f64, beta2: f64, opts: &PhaseOptions) -> Result<PhasePoint> {
    if !(beta2 <= 0.0) {
        return Err(Error::Domain(format!("β₂ = {beta2} is outside the repulsive range β₂ ≤ 0")));
    }
    EntropyCurve::new(e, opts)?.psi(beta2)
}

pub fn critical_point(e: f64, tol: f64, opts: &PhaseOptions) -> Result<CriticalPoint> {
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    EntropyCurve::new(e, opts)?.critical_point(tol, opts.validation_points)
}

/// One [`PhasePoint`] per grid value; the grid must descend from at most 0.
pub fn phase_scan(e: f64, beta2_grid: &[f64], opts: &PhaseOptions) -> Result<Vec<PhasePoint>> {
    if beta2_grid.first().is_some_and(|&b| b > 0.0) {
        return Err(Error::Domain("β₂ grid must start at or below 0".into()));
    }
    if beta2_grid.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Invalid("β₂ grid must be strictly descending".into()));
    }
    let curve = EntropyCurve::new(e, opts)?;
    beta2_grid.par_iter().map(|&b| curve.psi(b)).collect()
}

/// Largest adjacent change of `t_star` in a scan, or `None` for fewer than
/// two points.
pub fn detect_jump(scan: &[PhasePoint]) -> Option<JumpReport> {
    let diffs: Vec<f64> = scan.windows(2).map(|w| (w[1].t_star - w[0].t_star).abs()).collect();
    let (index, size) = diffs.iter().copied().enumerate().max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))?;
    let mut sorted = diffs.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    Some(JumpReport {
        size,
        index,
        beta2_left: scan[index].beta2,
        beta2_right: scan[index + 1].beta2,
        first_order: size > 10.0 * median,
    })
}

/// Critical point per `e`; failures are kept per entry.
pub fn critical_curve(e_grid: &[f64], tol: f64, opts: &PhaseOptions) -> Vec<(f64, Result<CriticalPoint>)> {
    e_grid.par_iter().map(|&e| (e, critical_point(e, tol, opts))).collect()
}
