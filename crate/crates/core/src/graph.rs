//! Small finite simple graphs and their edge-list text format.
//!
//! The text format is a header line `n m` followed by `m` lines `i j`
//! (zero-based vertex indices, any order within a pair).

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Undirected simple graph; edges are stored as sorted `(i, j)` pairs with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Builds a graph, normalizing each pair to `i < j` and sorting the edge list.
    /// Loops, duplicates and out-of-range indices are rejected.
    pub fn new(n_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::Invalid("graph must have at least one vertex".into()));
        }
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Invalid(format!("loop at vertex {a}")));
            }
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::Invalid(format!("edge ({a},{b}) out of range for {n_vertices} vertices")));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("duplicate edge".into()));
        }
        Ok(Self { n_vertices, edges: normalized })
    }

    pub fn empty(n_vertices: usize) -> Result<Self> {
        Self::new(n_vertices, [])
    }

    pub fn complete(n_vertices: usize) -> Result<Self> {
        let edges = (0..n_vertices).flat_map(|i| (i + 1..n_vertices).map(move |j| (i, j)));
        Self::new(n_vertices, edges)
    }

    /// Path on `n_vertices` vertices, `0 - 1 - ... - (n-1)`.
    pub fn path(n_vertices: usize) -> Result<Self> {
        Self::new(n_vertices, (1..n_vertices).map(|i| (i - 1, i)))
    }

    /// The single edge K₂.
    pub fn edge() -> Self {
        Self::complete(2).expect("K2 is valid")
    }

    /// The triangle K₃.
    pub fn triangle() -> Self {
        Self::complete(3).expect("K3 is valid")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    /// Disjoint union, with `other`'s vertices shifted past this graph's.
    pub fn disjoint_union(&self, other: &SimpleGraph) -> SimpleGraph {
        let shift = self.n_vertices;
        let edges =
            self.edges.iter().copied().chain(other.edges.iter().map(|&(a, b)| (a + shift, b + shift))).collect();
        SimpleGraph { n_vertices: self.n_vertices + other.n_vertices, edges }
    }

    /// Adjacency rows as bitsets, one `Vec<u64>` per vertex.
    pub fn adjacency_bits(&self) -> Vec<Vec<u64>> {
        let words = self.n_vertices.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; self.n_vertices];
        for &(a, b) in &self.edges {
            rows[a][b / 64] |= 1 << (b % 64);
            rows[b][a / 64] |= 1 << (a % 64);
        }
        rows
    }

    /// Number of triangles, by intersecting adjacency bitsets above each edge.
    pub fn triangle_count(&self) -> u64 {
        let rows = self.adjacency_bits();
        let mut count = 0u64;
        for &(a, b) in &self.edges {
            // only third vertices k > b, so each triangle a < b < k is counted once
            let (ra, rb) = (&rows[a], &rows[b]);
            let start_word = (b + 1) / 64;
            for w in start_word..ra.len() {
                let mut common = ra[w] & rb[w];
                if w == start_word {
                    let shift = (b + 1) % 64;
                    common &= u64::MAX.checked_shl(shift as u32).unwrap_or(0);
                }
                count += u64::from(common.count_ones());
            }
        }
        count
    }

    /// Serializes to the `n m` / `i j` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n_vertices, self.edges.len()).unwrap();
        for &(a, b) in &self.edges {
            writeln!(out, "{a} {b}").unwrap();
        }
        out
    }
}

impl FromStr for SimpleGraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header line `n m`".into()))?;
        let (n, m) = parse_pair(header)?;
        let edges = lines.map(parse_pair).collect::<Result<Vec<_>>>()?;
        if edges.len() != m {
            return Err(Error::Parse(format!("header declares {m} edges, found {}", edges.len())));
        }
        SimpleGraph::new(n, edges)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut parts = line.split_whitespace();
    let mut next = || -> Result<usize> {
        parts
            .next()
            .ok_or_else(|| Error::Parse(format!("expected two integers in `{line}`")))?
            .parse()
            .map_err(|e| Error::Parse(format!("`{line}`: {e}")))
    };
    let pair = (next()?, next()?);
    if parts.next().is_some() {
        return Err(Error::Parse(format!("trailing tokens in `{line}`")));
    }
    Ok(pair)
}
