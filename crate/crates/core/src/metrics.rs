//! Bottleneck distance between persistence diagrams and Hausdorff distance
//! between point clouds.

use std::collections::VecDeque;

use crate::error::{FloodError, Result};
use crate::geometry::PointCloud;
use crate::persistence::PersistenceDiagram;
use crate::spatial::KdTree;

/// ℓ∞ distance between diagram points, with `∞ - ∞ = 0`.
pub fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    let diff = |x: f64, y: f64| if x == y { 0.0 } else { (x - y).abs() };
    diff(a.0, b.0).max(diff(a.1, b.1))
}

/// Cost of matching a point to the diagonal.
pub fn diagonal_cost(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

/// Perfect matching test on a square bipartite graph (Hopcroft–Karp).
fn has_perfect_matching(adj: &[Vec<u32>], n: usize) -> bool {
    const FREE: u32 = u32::MAX;
    let mut match_l = vec![FREE; n];
    let mut match_r = vec![FREE; n];
    let mut dist = vec![0u32; n];
    let mut matched = 0;
    loop {
        let mut queue = VecDeque::new();
        for u in 0..n {
            if match_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v as usize];
                if w == FREE {
                    found = true;
                } else if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u] + 1;
                    queue.push_back(w as usize);
                }
            }
        }
        if !found {
            return matched == n;
        }
        fn augment(u: usize, adj: &[Vec<u32>], ml: &mut [u32], mr: &mut [u32], dist: &mut [u32]) -> bool {
            for &v in &adj[u] {
                let w = mr[v as usize];
                if w == u32::MAX || (dist[w as usize] == dist[u] + 1 && augment(w as usize, adj, ml, mr, dist)) {
                    ml[u] = v;
                    mr[v as usize] = u as u32;
                    return true;
                }
            }
            dist[u] = u32::MAX;
            false
        }
        for u in 0..n {
            if match_l[u] == FREE && augment(u, adj, &mut match_l, &mut match_r, &mut dist) {
                matched += 1;
            }
        }
    }
}

/// Smallest `t` such that the square cost matrix has a perfect matching
/// using only entries `≤ t`; `∞` if none exists.
fn bottleneck_assignment(n: usize, cost: &dyn Fn(usize, usize) -> f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut candidates: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| cost(i, j))
        .filter(|c| c.is_finite())
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let feasible = |t: f64| {
        let adj: Vec<Vec<u32>> = (0..n)
            .map(|i| (0..n).filter(|&j| cost(i, j) <= t).map(|j| j as u32).collect())
            .collect();
        has_perfect_matching(&adj, n)
    };
    match candidates.last() {
        Some(&max) if feasible(max) => {}
        _ => return f64::INFINITY,
    }
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Bottleneck distance between two multisets of finite points, each of
/// which may also be matched to the diagonal.
pub fn bottleneck_finite(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (na, nb) = (a.len(), b.len());
    // Rows: A then diagonal copies of B. Columns: B then diagonal copies of A.
    let cost = |i: usize, j: usize| -> f64 {
        match (i < na, j < nb) {
            (true, true) => linf(a[i], b[j]),
            (true, false) => {
                if j - nb == i {
                    diagonal_cost(a[i])
                } else {
                    f64::INFINITY
                }
            }
            (false, true) => {
                if i - na == j {
                    diagonal_cost(b[j])
                } else {
                    f64::INFINITY
                }
            }
            (false, false) => 0.0,
        }
    };
    bottleneck_assignment(na + nb, &cost)
}

/// Bottleneck distance between essential classes, compared by birth only.
pub fn bottleneck_essential(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let cost = |i: usize, j: usize| if a[i] == b[j] { 0.0 } else { (a[i] - b[j]).abs() };
    bottleneck_assignment(a.len(), &cost)
}

/// Bottleneck distance between the dimension-`k` parts of two diagrams.
pub fn bottleneck_distance(a: &PersistenceDiagram, b: &PersistenceDiagram, k: usize) -> f64 {
    let fa: Vec<_> = a.finite(k).collect();
    let fb: Vec<_> = b.finite(k).collect();
    let ea: Vec<f64> = a.essential(k).map(|p| p.0).collect();
    let eb: Vec<f64> = b.essential(k).map(|p| p.0).collect();
    bottleneck_essential(&ea, &eb).max(bottleneck_finite(&fa, &fb))
}

/// Maximum of [`bottleneck_distance`] over the listed dimensions.
pub fn bottleneck_max(a: &PersistenceDiagram, b: &PersistenceDiagram, dims: impl IntoIterator<Item = usize>) -> f64 {
    dims.into_iter()
        .map(|k| bottleneck_distance(a, b, k))
        .fold(0.0, f64::max)
}

/// `max_{a ∈ A} min_{b ∈ B} |a - b|` using a k-d tree on `B`.
pub fn directed_hausdorff_cloud(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(FloodError::arg("point clouds have different dimensions"));
    }
    let tree = KdTree::new(b);
    Ok(a.iter().map(|p| tree.nearest(p).1).fold(0.0, f64::max))
}

pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    Ok(directed_hausdorff_cloud(a, b)?.max(directed_hausdorff_cloud(b, a)?))
}
