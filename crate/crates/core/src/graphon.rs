//! Step graphons: piecewise-constant symmetric kernels on `[0,1]²`.
//!
//! A step graphon is a partition of `[0,1]` into consecutive intervals of
//! the given masses together with a symmetric matrix of values in `[0,1]`.
//! The JSON file format is `{"masses":[...], "values":[[...],...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

const MASS_SUM_TOL: f64 = 1e-12;
/// Blocks lighter than this are dropped when refining two partitions.
pub const SLIVER_MASS: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraphon")]
pub struct StepGraphon {
    masses: Vec<f64>,
    values: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawGraphon {
    masses: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl TryFrom<RawGraphon> for StepGraphon {
    type Error = Error;

    fn try_from(raw: RawGraphon) -> Result<Self> {
        StepGraphon::new(raw.masses, raw.values)
    }
}

impl StepGraphon {
    /// Validates masses (positive, summing to one) and values (square,
    /// symmetric, inside `[0,1]`).
    pub fn new(masses: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let k = masses.len();
        if k == 0 {
            return Err(Error::Invalid("graphon needs at least one block".into()));
        }
        if masses.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(Error::Invalid("block masses must be positive".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_SUM_TOL {
            return Err(Error::Invalid(format!("block masses sum to {total}, not 1")));
        }
        if values.len() != k || values.iter().any(|row| row.len() != k) {
            return Err(Error::Invalid(format!("value matrix must be {k}x{k}")));
        }
        for i in 0..k {
            for j in 0..k {
                let v = values[i][j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Invalid(format!("value {v} at ({i},{j}) outside [0,1]")));
                }
                if v != values[j][i] {
                    return Err(Error::Invalid(format!("values not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self { masses, values })
    }

    /// Equal-mass blocks with the given symmetric value matrix.
    pub fn equal_blocks(values: Vec<Vec<f64>>) -> Result<Self> {
        let k = values.len();
        Self::new(vec![1.0 / k as f64; k], values)
    }

    /// The Erdős–Rényi graphon `h ≡ p`.
    pub fn constant(p: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![vec![p]])
    }

    /// Two blocks of masses `c` and `1-c`.
    pub fn bipodal(c: f64, p11: f64, p12: f64, p22: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::Domain(format!("bipodal block mass {c} outside (0,1)")));
        }
        Self::new(vec![c, 1.0 - c], vec![vec![p11, p12], vec![p12, p22]])
    }

    /// Symmetric bipodal graphon: equal halves, `1/2 - eps` inside each
    /// half and `1/2 + eps` across.
    pub fn symmetric_bipodal(eps: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&eps) {
            return Err(Error::Domain(format!("eps = {eps} outside [0, 1/2]")));
        }
        Self::bipodal(0.5, 0.5 - eps, 0.5 + eps, 0.5 - eps)
    }

    /// Triangle-free graphon of edge density `e ≤ 1/2`: complete bipartite
    /// with each crossing edge kept with probability `2e`.
    pub fn diluted_bipartite(e: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&e) {
            return Err(Error::Domain(format!("edge density {e} outside [0, 1/2]")));
        }
        Self::bipodal(0.5, 0.0, 2.0 * e, 0.0)
    }

    /// Complete multipartite graphon with the given part masses.
    pub fn complete_multipartite(parts: &[f64]) -> Result<Self> {
        let k = parts.len();
        let values = (0..k).map(|i| (0..k).map(|j| if i == j { 0.0 } else { 1.0 }).collect()).collect();
        Self::new(parts.to_vec(), values)
    }

    pub fn n_blocks(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    #[inline]
    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.values[a][b]
    }

    /// Right endpoints of the blocks along `[0,1]`.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.masses
            .iter()
            .map(|m| {
                acc += m;
                acc
            })
            .collect()
    }

    /// Index of the block containing `x ∈ [0,1]`.
    pub fn block_of(&self, x: f64) -> usize {
        let mut acc = 0.0;
        for (i, m) in self.masses.iter().enumerate() {
            acc += m;
            if x < acc {
                return i;
            }
        }
        self.masses.len() - 1
    }

    /// Evaluates `h(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.values[self.block_of(x)][self.block_of(y)]
    }

    /// Reorders the blocks: block `i` of the result is block `perm[i]` of `self`.
    /// This is a measure-preserving rearrangement of `[0,1]`.
    pub fn permuted(&self, perm: &[usize]) -> StepGraphon {
        assert_eq!(perm.len(), self.n_blocks());
        StepGraphon {
            masses: perm.iter().map(|&p| self.masses[p]).collect(),
            values: perm.iter().map(|&p| perm.iter().map(|&q| self.values[p][q]).collect()).collect(),
        }
    }

    /// Distinct values taken by the kernel, up to `tol`.
    pub fn distinct_values(&self, tol: f64) -> Vec<f64> {
        let mut vals: Vec<f64> = self.values.iter().flatten().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup_by(|a, b| (*a - *b).abs() <= tol);
        vals
    }

    /// True if every value lies strictly inside `(0,1)`.
    pub fn is_interior(&self) -> bool {
        self.values.iter().flatten().all(|&v| v > 0.0 && v < 1.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graphon serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Two graphons expressed on a shared partition of `[0,1]`.
#[derive(Debug, Clone)]
pub struct CommonRefinement {
    pub masses: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
}

impl CommonRefinement {
    pub fn n_blocks(&self) -> usize {
        self.masses.len()
    }

    /// Block-wise difference `a - b`.
    pub fn difference(&self) -> Vec<Vec<f64>> {
        self.a.iter().zip(&self.b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect()).collect()
    }
}

/// Intersects the block boundaries of `a` and `b`; pieces lighter than
/// [`SLIVER_MASS`] are dropped.
pub fn common_refinement(a: &StepGraphon, b: &StepGraphon) -> CommonRefinement {
    let mut cuts: Vec<f64> = a.boundaries().into_iter().chain(b.boundaries()).collect();
    cuts.sort_by(f64::total_cmp);
    // both partitions end at (numerically) 1; treat the last cut as exactly 1
    let mut masses = Vec::new();
    let mut mids = Vec::new();
    let mut left = 0.0;
    for &cut in &cuts {
        let cut = cut.min(1.0);
        if cut - left >= SLIVER_MASS {
            masses.push(cut - left);
            mids.push(0.5 * (left + cut));
            left = cut;
        }
    }
    if 1.0 - left >= SLIVER_MASS {
        masses.push(1.0 - left);
        mids.push(0.5 * (left + 1.0));
    }
    let ia: Vec<usize> = mids.iter().map(|&x| a.block_of(x)).collect();
    let ib: Vec<usize> = mids.iter().map(|&x| b.block_of(x)).collect();
    let lift = |g: &StepGraphon, idx: &[usize]| -> Vec<Vec<f64>> {
        idx.iter().map(|&p| idx.iter().map(|&q| g.value(p, q)).collect()).collect()
    };
    CommonRefinement { a: lift(a, &ia), b: lift(b, &ib), masses }
}

/// The graphon `h^G`: `n` blocks of mass `1/n`, value 1 on edges, 0 elsewhere.
pub fn graph_to_graphon(g: &SimpleGraph) -> StepGraphon {
    let n = g.n_vertices();
    let mut values = vec![vec![0.0; n]; n];
    for &(a, b) in g.edges() {
        values[a][b] = 1.0;
        values[b][a] = 1.0;
    }
    StepGraphon { masses: vec![1.0 / n as f64; n], values }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_graphon() {
        let h = graph_to_graphon(&SimpleGraph::triangle());
        assert_eq!(h.masses(), &[1.0 / 3.0; 3]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h.value(i, j), if i == j { 0.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn empty_and_path_graphons() {
        let h = graph_to_graphon(&SimpleGraph::empty(2).unwrap());
        assert_eq!(h.values(), &[vec![0.0, 0.0], vec![0.0, 0.0]]);
        let p = graph_to_graphon(&SimpleGraph::path(3).unwrap());
        let ones: Vec<(usize, usize)> =
            (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|&(i, j)| p.value(i, j) == 1.0).collect();
        assert_eq!(ones, vec![(0, 1), (1, 0), (1, 2), (2, 1)]);
    }

    #[test]
    fn validation() {
        assert!(StepGraphon::new(vec![0.5, 0.6], vec![vec![0.0; 2]; 2]).is_err());
        assert!(StepGraphon::new(vec![1.0, 0.0], vec![vec![0.0; 2]; 2]).is_err());
        assert!(StepGraphon::new(vec![0.5, 0.5], vec![vec![0.0, 0.1], vec![0.2, 0.0]]).is_err());
        assert!(StepGraphon::new(vec![1.0], vec![vec![1.5]]).is_err());
        assert!(StepGraphon::new(vec![0.5, 0.5], vec![vec![0.0; 2]; 3]).is_err());
        assert!(StepGraphon::from_json(r#"{"masses":[1.0],"values":[[2.0]]}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let h = StepGraphon::bipodal(0.3, 0.1, 0.7, 0.2).unwrap();
        let back = StepGraphon::from_json(&h.to_json()).unwrap();
        assert_eq!(h, back);
    }

    #[test]
    fn refinement_merges_boundaries() {
        let a = StepGraphon::equal_blocks(vec![vec![0.1; 3]; 3]).unwrap();
        let b = StepGraphon::bipodal(0.5, 0.2, 0.4, 0.6).unwrap();
        let r = common_refinement(&a, &b);
        assert_eq!(r.n_blocks(), 4);
        let expect = [1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0];
        for (m, e) in r.masses.iter().zip(expect) {
            assert!((m - e).abs() < 1e-15);
        }
        assert_eq!(r.b[0][3], 0.4);
        assert_eq!(r.b[2][3], 0.6);
        assert_eq!(r.b[0][1], 0.2);
    }

    #[test]
    fn refinement_drops_slivers() {
        let a = StepGraphon::bipodal(0.5, 0.0, 1.0, 0.0).unwrap();
        let b = StepGraphon::bipodal(0.5 + 1e-16, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(common_refinement(&a, &b).n_blocks(), 2);
    }

    #[test]
    fn permutation_swaps_blocks() {
        let h = StepGraphon::bipodal(0.3, 0.1, 0.7, 0.2).unwrap();
        let p = h.permuted(&[1, 0]);
        assert_eq!(p.masses(), &[0.7, 0.3]);
        assert_eq!(p.value(0, 0), 0.2);
        assert_eq!(p.value(1, 1), 0.1);
        assert_eq!(p.value(0, 1), 0.7);
    }
}
