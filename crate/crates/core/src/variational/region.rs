//! The attainable region of (edge, triangle) densities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionBounds {
    pub t_min: f64,
    pub t_max: f64,
}

impl RegionBounds {
    /// True when `t` lies within `slack` of `[t_min, t_max]`.
    pub fn contains(&self, t: f64, slack: f64) -> bool {
        t >= self.t_min - slack && t <= self.t_max + slack
    }
}

/// Triangle-density range over graphons with edge density `e`.
///
/// The upper boundary is `e^{3/2}`. Below `e = 1/2` the lower boundary is 0;
/// above, it is evaluated on complete `k`-partite graphons with `k-1` equal
/// parts and one smaller part, `k = ⌈1/(1-e)⌉`, which meet the Turán points
/// `e = 1 - 1/k`, `t = (k-1)(k-2)/k²`.
pub fn region_bounds(e: f64) -> Result<RegionBounds> {
    if !(0.0..=1.0).contains(&e) {
        return Err(Error::Domain(format!("edge density {e} outside [0,1]")));
    }
    let t_max = e.powf(1.5);
    let t_min = if e <= 0.5 { 0.0 } else { multipartite_min_triangles(e) };
    Ok(RegionBounds { t_min, t_max })
}

fn multipartite_min_triangles(e: f64) -> f64 {
    if e >= 1.0 {
        return 1.0;
    }
    let k = (1.0 / (1.0 - e) - 1e-9).ceil().max(3.0);
    let (c, d) = multipartite_parts(e, k);
    let a = k - 1.0;
    a * (a - 1.0) * (a - 2.0) * c.powi(3) + 3.0 * a * (a - 1.0) * c * c * d
}

/// Part masses `(c, d)` of the `k`-partite graphon with `k-1` parts of mass
/// `c ≥ d` and edge density `e`.
pub(crate) fn multipartite_parts(e: f64, k: f64) -> (f64, f64) {
    let a = k - 1.0;
    // 2ac - a(a+1)c² = e, larger root
    let disc = (a * a - a * (a + 1.0) * e).max(0.0);
    let c = (a + disc.sqrt()) / (a * (a + 1.0));
    (c, (1.0 - a * c).max(0.0))
}
