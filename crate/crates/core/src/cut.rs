//! Cut norm and a block-permutation upper bound on the cut distance.
//!
//! For step kernels the objective `|∫_{S×T} (f-h)|` is bilinear in the
//! block-membership fractions of `S` and `T`, so the supremum is attained
//! with every block entirely in or out of each set. For a fixed row set the
//! best column set takes all positive (or all negative) column sums, which
//! reduces the `2^k × 2^k` scan to `2^k` row sets.

use crate::error::{Error, Result};
use crate::graphon::{common_refinement, StepGraphon};

/// Largest common refinement accepted by the subset scan.
pub const MAX_CUT_BLOCKS: usize = 16;
/// Largest block count for which block rearrangements are enumerated.
pub const MAX_PERMUTED_BLOCKS: usize = 9;

const EQUAL_MASS_TOL: f64 = 1e-12;

/// `d_□(f, h)`, computed exactly on the common refinement of the two partitions.
pub fn cut_norm(f: &StepGraphon, h: &StepGraphon) -> Result<f64> {
    let r = common_refinement(f, h);
    cut_norm_blocks(&r.masses, &r.difference())
}

/// `max_{S,T} |Σ_{i∈S, j∈T} w_i w_j d_ij|` over block subsets.
///
/// Column sums are accumulated in ascending row order and the chosen column
/// sums are added in ascending column order, so the result is reproducible
/// bit for bit by a naive scan that sums in the same order.
pub fn cut_norm_blocks(masses: &[f64], diff: &[Vec<f64>]) -> Result<f64> {
    let k = masses.len();
    if k > MAX_CUT_BLOCKS {
        return Err(Error::Size(format!("cut norm over {k} blocks; at most {MAX_CUT_BLOCKS} supported")));
    }
    let mut best = 0.0f64;
    let mut col = vec![0.0f64; k];
    for rows in 1u32..(1u32 << k) {
        col.iter_mut().for_each(|c| *c = 0.0);
        for i in (0..k).filter(|i| rows >> i & 1 == 1) {
            for j in 0..k {
                col[j] += masses[i] * masses[j] * diff[i][j];
            }
        }
        let mut pos = 0.0;
        let mut neg = 0.0;
        for &c in &col {
            if c > 0.0 {
                pos += c;
            } else if c < 0.0 {
                neg += c;
            }
        }
        best = best.max(pos).max(-neg);
    }
    // + 0.0 turns a negative zero into +0
    Ok(best + 0.0)
}

/// Upper bound on `δ_□(f, h)` by minimizing `d_□` over block rearrangements.
///
/// When the common refinement has equal-mass blocks (at most
/// [`MAX_PERMUTED_BLOCKS`] of them), every arrangement of the refined blocks
/// of `f` against those of `h` is scanned; arrangements that only shuffle
/// identical blocks are visited once. Otherwise each graphon's own blocks are
/// reordered against the other and the smaller value is kept. Both are
/// measure-preserving rearrangements, so the result is always an upper bound,
/// and it is exact whenever an optimal relabeling permutes whole blocks.
pub fn cut_distance_upper(f: &StepGraphon, h: &StepGraphon) -> Result<f64> {
    let r = common_refinement(f, h);
    let k = r.n_blocks();
    let w0 = r.masses[0];
    let equal_mass = r.masses.iter().all(|&m| (m - w0).abs() <= EQUAL_MASS_TOL);
    if equal_mass && k <= MAX_PERMUTED_BLOCKS {
        return equal_mass_scan(&r.masses, &r.a, &r.b);
    }
    if f.n_blocks() > MAX_PERMUTED_BLOCKS || h.n_blocks() > MAX_PERMUTED_BLOCKS {
        return Err(Error::Size(format!(
            "cut distance needs at most {MAX_PERMUTED_BLOCKS} blocks per graphon, got {} and {}",
            f.n_blocks(),
            h.n_blocks()
        )));
    }
    let forward = reorder_scan(f, h)?;
    let backward = reorder_scan(h, f)?;
    Ok(forward.min(backward))
}

/// Reorders the blocks of `moving` in every distinct way and compares with `fixed`.
fn reorder_scan(moving: &StepGraphon, fixed: &StepGraphon) -> Result<f64> {
    let n = moving.n_blocks();
    // blocks with equal mass and identical rows are interchangeable
    let mut labels = vec![0usize; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        let same = reps
            .iter()
            .position(|&r| moving.masses()[r] == moving.masses()[i] && moving.values()[r] == moving.values()[i]);
        labels[i] = match same {
            Some(l) => l,
            None => {
                reps.push(i);
                reps.len() - 1
            }
        };
    }
    let block_label = labels.clone();
    labels.sort_unstable();
    let mut best = f64::INFINITY;
    loop {
        let mut used = vec![false; n];
        let perm: Vec<usize> = labels
            .iter()
            .map(|&l| {
                let idx = (0..n).find(|&i| !used[i] && block_label[i] == l).expect("label multiset matches blocks");
                used[idx] = true;
                idx
            })
            .collect();
        best = best.min(cut_norm(&moving.permuted(&perm), fixed)?);
        if !next_permutation(&mut labels) {
            break;
        }
    }
    Ok(best)
}

/// Scans arrangements of `a`'s refined blocks against `b`'s, one per
/// contingency table between the identical-row classes of `a` and of `b`.
fn equal_mass_scan(masses: &[f64], a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    let k = masses.len();
    let (a_class, a_count) = row_classes(a);
    let (b_class, b_count) = row_classes(b);
    let a_rep: Vec<usize> = (0..a_count.len()).map(|c| a_class.iter().position(|&x| x == c).unwrap()).collect();
    let groups: Vec<Vec<usize>> = (0..b_count.len()).map(|g| (0..k).filter(|&i| b_class[i] == g).collect()).collect();

    let mut best = f64::INFINITY;
    let mut remaining = a_count.clone();
    let mut labels = vec![0usize; k];
    let mut diff = vec![vec![0.0; k]; k];
    fill_group(0, &groups, &mut remaining, &mut labels, &mut |labels: &[usize]| {
        for i in 0..k {
            for j in 0..k {
                diff[i][j] = a[a_rep[labels[i]]][a_rep[labels[j]]] - b[i][j];
            }
        }
        let d = cut_norm_blocks(masses, &diff)?;
        best = best.min(d);
        Ok(())
    })?;
    Ok(best)
}

/// Assigns class labels to the positions of B-group `g` and onward, one
/// sorted multiset per group.
fn fill_group(
    g: usize,
    groups: &[Vec<usize>],
    remaining: &mut [usize],
    labels: &mut [usize],
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if g == groups.len() {
        return visit(labels);
    }
    fill_slot(g, 0, 0, groups, remaining, labels, visit)
}

fn fill_slot(
    g: usize,
    slot: usize,
    min_label: usize,
    groups: &[Vec<usize>],
    remaining: &mut [usize],
    labels: &mut [usize],
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if slot == groups[g].len() {
        return fill_group(g + 1, groups, remaining, labels, visit);
    }
    for label in min_label..remaining.len() {
        if remaining[label] == 0 {
            continue;
        }
        remaining[label] -= 1;
        labels[groups[g][slot]] = label;
        fill_slot(g, slot + 1, label, groups, remaining, labels, visit)?;
        remaining[label] += 1;
    }
    Ok(())
}

/// Groups indices with identical rows; returns per-index class and class sizes.
fn row_classes(m: &[Vec<f64>]) -> (Vec<usize>, Vec<usize>) {
    let mut class = vec![0usize; m.len()];
    let mut reps: Vec<usize> = Vec::new();
    let mut counts = Vec::new();
    for i in 0..m.len() {
        match reps.iter().position(|&r| m[r] == m[i]) {
            Some(c) => {
                class[i] = c;
                counts[c] += 1;
            }
            None => {
                class[i] = reps.len();
                reps.push(i);
                counts.push(1);
            }
        }
    }
    (class, counts)
}

/// Lexicographic next permutation; false once the sequence is non-increasing.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
