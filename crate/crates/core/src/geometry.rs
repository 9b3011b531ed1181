//! Geometric primitives: point clouds, landmark selection, enclosing balls,
//! barycentric grids and Hausdorff distances.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{FloodError, Result};

/// A finite set of points in R^2 or R^3, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    /// Wraps row-major coordinates. Every coordinate must be finite and the
    /// cloud must hold at least one point.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(FloodError::arg(format!("dimension must be 2 or 3, got {dim}")));
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(FloodError::arg(format!(
                "expected a non-empty multiple of {dim} coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(FloodError::arg(format!(
                "non-finite coordinate in point {}",
                i / dim
            )));
        }
        Ok(PointCloud { dim, coords })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = points
            .first()
            .map(|p| p.as_ref().len())
            .ok_or_else(|| FloodError::arg("point cloud must not be empty"))?;
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(FloodError::arg(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        PointCloud::new(dim, coords)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false: a cloud holds at least one point.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn points(&self) -> Vec<&[f64]> {
        self.iter().collect()
    }

    /// The sub-cloud formed by `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<PointCloud> {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.len() {
                return Err(FloodError::arg(format!("index {i} out of range")));
            }
            coords.extend_from_slice(self.point(i));
        }
        PointCloud::new(self.dim, coords)
    }

    /// Per-axis `(min, max)`.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        let mut b = vec![(f64::INFINITY, f64::NEG_INFINITY); self.dim];
        for p in self.iter() {
            for (k, &c) in p.iter().enumerate() {
                b[k].0 = b[k].0.min(c);
                b[k].1 = b[k].1.max(c);
            }
        }
        b
    }
}

#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        s += d * d;
    }
    s
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

const FPS_CHUNK: usize = 4096;

/// Greedy farthest point sampling.
///
/// Returns `k` distinct indices starting with `start`; every later index
/// maximises the distance to the already selected prefix, ties going to the
/// smallest index. Runs in `O(n k)` with an incremental min-distance array.
pub fn farthest_point_sampling(cloud: &PointCloud, k: usize, start: usize) -> Result<Vec<usize>> {
    farthest_point_sampling_with_radii(cloud, k, start).map(|(idx, _)| idx)
}

/// Like [`farthest_point_sampling`], also returning each pick's insertion
/// distance (the first one is `+inf`).
pub fn farthest_point_sampling_with_radii(
    cloud: &PointCloud,
    k: usize,
    start: usize,
) -> Result<(Vec<usize>, Vec<f64>)> {
    let n = cloud.len();
    if k == 0 {
        return Err(FloodError::arg("farthest point sampling needs k >= 1"));
    }
    if k > n {
        return Err(FloodError::arg(format!("cannot pick {k} landmarks from {n} points")));
    }
    if start >= n {
        return Err(FloodError::arg(format!("start index {start} out of range for {n} points")));
    }
    let dim = cloud.dim();
    let coords = cloud.coords();
    let mut min_d = vec![f64::INFINITY; n];
    let mut picks = Vec::with_capacity(k);
    let mut radii = Vec::with_capacity(k);
    let mut current = start;
    radii.push(f64::INFINITY);
    picks.push(start);
    while picks.len() < k {
        let c = cloud.point(current).to_vec();
        // (squared distance, index) of the chunk-local farthest point.
        let best = min_d
            .par_chunks_mut(FPS_CHUNK)
            .zip(coords.par_chunks(FPS_CHUNK * dim))
            .enumerate()
            .map(|(chunk, (md, pts))| {
                let base = chunk * FPS_CHUNK;
                let mut best = (f64::NEG_INFINITY, usize::MAX);
                for (j, (m, p)) in md.iter_mut().zip(pts.chunks_exact(dim)).enumerate() {
                    let d = dist_sq(p, &c);
                    if d < *m {
                        *m = d;
                    }
                    if *m > best.0 {
                        best = (*m, base + j);
                    }
                }
                best
            })
            .reduce(
                || (f64::NEG_INFINITY, usize::MAX),
                |a, b| {
                    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                        b
                    } else {
                        a
                    }
                },
            );
        current = best.1;
        picks.push(current);
        radii.push(best.0.sqrt());
    }
    Ok((picks, radii))
}

/// A closed ball `B_radius(center)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnclosingBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl EnclosingBall {
    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        dist(&self.center, p) <= self.radius + tol
    }
}

/// Ritter-style enclosing ball: centre at the midpoint of the longest edge,
/// radius the largest vertex distance from that centre.
///
/// Ties between equally long edges go to the lexicographically smallest
/// `(i, j)` vertex pair.
pub fn ritter_enclosing_ball<P: AsRef<[f64]>>(vertices: &[P]) -> Result<EnclosingBall> {
    if vertices.len() < 2 {
        return Err(FloodError::arg("enclosing ball needs at least two vertices"));
    }
    let (mut bi, mut bj, mut best) = (0, 1, f64::NEG_INFINITY);
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let d = dist_sq(vertices[i].as_ref(), vertices[j].as_ref());
            if d > best {
                (bi, bj, best) = (i, j, d);
            }
        }
    }
    let center: Vec<f64> = vertices[bi]
        .as_ref()
        .iter()
        .zip(vertices[bj].as_ref())
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let radius = vertices
        .iter()
        .map(|v| dist(&center, v.as_ref()))
        .fold(0.0, f64::max);
    Ok(EnclosingBall { center, radius })
}

/// Evenly spaced barycentric coordinates on the standard `k`-simplex:
/// every tuple `λ` with `Σ λ_i = 1` and `m λ_i` a non-negative integer.
///
/// Weights are enumerated in lexicographic order of their integer numerators,
/// so the rows supported on a face, with off-face coordinates dropped, are the
/// face's own template in the same order.
#[derive(Clone, Debug)]
pub struct BarycentricGridTemplate {
    simplex_dim: usize,
    resolution: usize,
    numerators: Vec<u32>,
    weights: Vec<f64>,
    /// `face_index_map[mask]`: rows vanishing outside the local face `mask`.
    face_index_map: Vec<Vec<u32>>,
    /// `support_groups[mask]`: rows whose support is exactly `mask`.
    support_groups: Vec<Vec<u32>>,
}

impl BarycentricGridTemplate {
    pub fn new(simplex_dim: usize, resolution: usize) -> Result<Self> {
        if simplex_dim > 3 {
            return Err(FloodError::arg("grid templates support simplices up to dimension 3"));
        }
        if resolution == 0 {
            return Err(FloodError::arg("grid resolution must be >= 1"));
        }
        let k1 = simplex_dim + 1;
        let mut numerators = Vec::new();
        let mut tuple = vec![0u32; k1];
        enumerate_compositions(resolution as u32, 0, &mut tuple, &mut numerators);
        let rows = numerators.len() / k1;
        let m = resolution as f64;
        let weights = numerators.iter().map(|&a| a as f64 / m).collect();
        let nmasks = 1usize << k1;
        let mut face_index_map = vec![Vec::new(); nmasks];
        let mut support_groups = vec![Vec::new(); nmasks];
        for r in 0..rows {
            let row = &numerators[r * k1..(r + 1) * k1];
            let support = row
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .fold(0usize, |acc, (i, _)| acc | (1 << i));
            support_groups[support].push(r as u32);
            for (mask, list) in face_index_map.iter_mut().enumerate() {
                if support & !mask == 0 {
                    list.push(r as u32);
                }
            }
        }
        Ok(BarycentricGridTemplate {
            simplex_dim,
            resolution,
            numerators,
            weights,
            face_index_map,
            support_groups,
        })
    }

    pub fn simplex_dim(&self) -> usize {
        self.simplex_dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Number of grid points, `C(m + k, k)`.
    pub fn len(&self) -> usize {
        self.weights.len() / (self.simplex_dim + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, row: usize) -> &[f64] {
        let k1 = self.simplex_dim + 1;
        &self.weights[row * k1..(row + 1) * k1]
    }

    /// Integer numerators `m λ` of a row.
    pub fn numerators(&self, row: usize) -> &[u32] {
        let k1 = self.simplex_dim + 1;
        &self.numerators[row * k1..(row + 1) * k1]
    }

    pub fn weights(&self) -> impl Iterator<Item = &[f64]> {
        self.weights.chunks_exact(self.simplex_dim + 1)
    }

    /// Rows supported on the face given by a bitmask of local vertex positions.
    pub fn face_indices(&self, mask: usize) -> &[u32] {
        &self.face_index_map[mask]
    }

    /// Rows whose support is exactly the face `mask`.
    pub fn support_group(&self, mask: usize) -> &[u32] {
        &self.support_groups[mask]
    }

    /// Writes the grid points of a simplex, row-major, into `out`.
    pub fn grid_points_into<P: AsRef<[f64]>>(&self, vertices: &[P], out: &mut Vec<f64>) {
        let dim = vertices[0].as_ref().len();
        out.clear();
        out.reserve(self.len() * dim);
        for w in self.weights() {
            for axis in 0..dim {
                let mut s = 0.0;
                for (wj, v) in w.iter().zip(vertices) {
                    s += wj * v.as_ref()[axis];
                }
                out.push(s);
            }
        }
    }
}

fn enumerate_compositions(remaining: u32, pos: usize, tuple: &mut [u32], out: &mut Vec<u32>) {
    if pos + 1 == tuple.len() {
        tuple[pos] = remaining;
        out.extend_from_slice(tuple);
        return;
    }
    for a in 0..=remaining {
        tuple[pos] = a;
        enumerate_compositions(remaining - a, pos + 1, tuple, out);
    }
}

/// Grid points `Σ_j λ_j v_j` of a simplex for every template row.
pub fn barycentric_grid<P: AsRef<[f64]>>(
    template: &BarycentricGridTemplate,
    vertices: &[P],
) -> Result<Vec<Vec<f64>>> {
    if vertices.len() != template.simplex_dim() + 1 {
        return Err(FloodError::arg(format!(
            "template is for {}-simplices, got {} vertices",
            template.simplex_dim(),
            vertices.len()
        )));
    }
    let dim = vertices[0].as_ref().len();
    let mut flat = Vec::new();
    template.grid_points_into(vertices, &mut flat);
    Ok(flat.chunks_exact(dim).map(<[f64]>::to_vec).collect())
}

/// Covering radius bound of the resolution-`m` grid on a simplex:
/// `(1/m) sqrt(Σ_{i<j} |v_i - v_j|^2)`.
pub fn grid_covering_bound<P: AsRef<[f64]>>(vertices: &[P], m: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            s += dist_sq(vertices[i].as_ref(), vertices[j].as_ref());
        }
    }
    s.sqrt() / m as f64
}

/// Sample size for uniform random points on a `k`-simplex so that, with
/// probability at least `1 - delta`, every hull point lies within
/// `eps * diam` of the sample: `(4/eps)^k (k ln(4/eps) + ln(1/delta))`.
pub fn random_covering_count(eps: f64, delta: f64, k: usize) -> Result<usize> {
    if !(eps > 0.0 && eps < 4.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(FloodError::arg("need 0 < eps < 4 and 0 < delta < 1"));
    }
    let q = 4.0 / eps;
    let n = q.powi(k as i32) * (k as f64 * q.ln() + (1.0 / delta).ln());
    Ok(n.ceil().max(1.0) as usize)
}

/// Uniform (flat Dirichlet) barycentric weights on the standard `k`-simplex.
pub fn uniform_simplex_weights<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = (0..=k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = w.iter().sum();
    if s > 0.0 {
        w.iter_mut().for_each(|x| *x /= s);
    } else {
        w.iter_mut().for_each(|x| *x = 1.0 / (k + 1) as f64);
    }
    w
}

/// `max_{a in A} min_{b in B} |a - b|`.
pub fn directed_hausdorff<P: AsRef<[f64]>, Q: AsRef<[f64]>>(a: &[P], b: &[Q]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(FloodError::arg("directed Hausdorff distance of an empty set"));
    }
    let mut worst = 0.0f64;
    for p in a {
        let p = p.as_ref();
        let mut best = f64::INFINITY;
        for q in b {
            let d = dist_sq(p, q.as_ref());
            if d < best {
                best = d;
                if best <= worst {
                    break;
                }
            }
        }
        worst = worst.max(best);
    }
    Ok(worst.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_cloud(n: usize, dim: usize, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PointCloud::new(dim, (0..n * dim).map(|_| rng.gen::<f64>()).collect()).unwrap()
    }

    #[test]
    fn cloud_rejects_bad_input() {
        assert!(PointCloud::new(2, vec![]).is_err());
        assert!(PointCloud::new(2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(PointCloud::new(3, vec![1.0, f64::NAN, 0.0]).is_err());
        assert!(PointCloud::new(4, vec![0.0; 4]).is_err());
        assert!(PointCloud::from_points(&[vec![0.0, 1.0], vec![1.0]]).is_err());
    }

    #[test]
    fn fps_circle_stages() {
        let n = 4096;
        let pts: Vec<[f64; 2]> = (0..n)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / n as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        let cloud = PointCloud::from_points(&pts).unwrap();
        let mut got = farthest_point_sampling(&cloud, 4, 0).unwrap();
        assert_eq!(got[0], 0);
        assert_eq!(got[1], 2048);
        got.sort();
        assert_eq!(got, vec![0, 1024, 2048, 3072]);
    }

    #[test]
    fn fps_prefix_only() {
        let cloud = random_cloud(20, 2, 1);
        assert_eq!(farthest_point_sampling(&cloud, 1, 7).unwrap(), vec![7]);
        assert!(farthest_point_sampling(&cloud, 0, 0).is_err());
        assert!(farthest_point_sampling(&cloud, 21, 0).is_err());
        assert!(farthest_point_sampling(&cloud, 2, 20).is_err());
    }

    #[test]
    fn fps_matches_bruteforce_greedy() {
        let cloud = random_cloud(10, 3, 3);
        let (got, radii) = farthest_point_sampling_with_radii(&cloud, 10, 0).unwrap();
        // Recompute each greedy step from scratch.
        let mut chosen = vec![0usize];
        while chosen.len() < 10 {
            let mut best = (f64::NEG_INFINITY, 0);
            for i in 0..10 {
                let d = chosen
                    .iter()
                    .map(|&c| dist(cloud.point(i), cloud.point(c)))
                    .fold(f64::INFINITY, f64::min);
                if d > best.0 {
                    best = (d, i);
                }
            }
            chosen.push(best.1);
        }
        assert_eq!(got, chosen);
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(sorted, (0..10).collect::<Vec<_>>());
        assert!(radii.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn fps_tie_goes_to_smallest_index() {
        let cloud = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(farthest_point_sampling(&cloud, 2, 0).unwrap(), vec![0, 1]);
    }

    #[test]
    fn ritter_examples() {
        let b = ritter_enclosing_ball(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        assert_eq!(b.center, vec![1.0, 0.0]);
        assert_eq!(b.radius, 1.0);

        let b = ritter_enclosing_ball(&[[0.0, 0.0], [4.0, 0.0], [2.0, 1.0]]).unwrap();
        assert_eq!(b.center, vec![2.0, 0.0]);
        // Vertex distances from (2, 0) are 2, 2 and 1.
        assert_eq!(b.radius, 2.0);

        let s = 1.0 / 2f64.sqrt();
        let tet = [[s, 0.0, -0.5], [-s, 0.0, -0.5], [0.0, s, 0.5], [0.0, -s, 0.5]];
        // Scale so the edge length is 1.
        let e = dist(&tet[0], &tet[1]);
        let tet: Vec<Vec<f64>> = tet.iter().map(|p| p.iter().map(|c| c / e).collect()).collect();
        let b = ritter_enclosing_ball(&tet).unwrap();
        assert!((b.radius - 3f64.sqrt() / 2.0).abs() < 1e-12);
        for v in &tet {
            assert!(b.contains(v, 1e-12));
        }

        assert!(ritter_enclosing_ball(&[[0.0, 0.0]]).is_err());
    }

    #[test]
    fn ritter_tie_uses_first_pair() {
        // Equilateral triangle: all edges tie, so edge (0, 1) wins.
        let h = 3f64.sqrt() / 2.0;
        let b = ritter_enclosing_ball(&[[0.0, 0.0], [1.0, 0.0], [0.5, h]]).unwrap();
        assert_eq!(b.center, vec![0.5, 0.0]);
    }

    #[test]
    fn grid_counts_and_examples() {
        let t = BarycentricGridTemplate::new(1, 2).unwrap();
        let g = barycentric_grid(&t, &[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(g, vec![vec![1.0, 0.0], vec![0.5, 0.0], vec![0.0, 0.0]]);

        assert_eq!(BarycentricGridTemplate::new(2, 20).unwrap().len(), 231);
        assert_eq!(BarycentricGridTemplate::new(2, 19).unwrap().len(), 210);
        assert_eq!(BarycentricGridTemplate::new(3, 19).unwrap().len(), 1540);
        assert_eq!(BarycentricGridTemplate::new(3, 20).unwrap().len(), 1771);

        let tri = [[0.0, 0.0], [3.0, 0.5], [1.0, 2.0]];
        let t1 = BarycentricGridTemplate::new(2, 1).unwrap();
        let mut g = barycentric_grid(&t1, &tri).unwrap();
        g.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut v: Vec<Vec<f64>> = tri.iter().map(|p| p.to_vec()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(g, v);

        assert!(barycentric_grid(&t1, &[[0.0, 0.0], [1.0, 0.0]]).is_err());
        assert!(BarycentricGridTemplate::new(2, 0).is_err());
    }

    #[test]
    fn template_weights_sum_to_one_and_faces_nest() {
        for k in 0..=3 {
            for m in [1, 2, 5, 7] {
                let t = BarycentricGridTemplate::new(k, m).unwrap();
                for w in t.weights() {
                    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                    assert!(w.iter().all(|&x| x >= 0.0));
                }
                for mask in 1usize..(1 << (k + 1)) {
                    let face_k = mask.count_ones() as usize - 1;
                    let own = BarycentricGridTemplate::new(face_k, m).unwrap();
                    let reindexed: Vec<Vec<u32>> = t
                        .face_indices(mask)
                        .iter()
                        .map(|&r| {
                            t.numerators(r as usize)
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| mask & (1 << i) != 0)
                                .map(|(_, &a)| a)
                                .collect()
                        })
                        .collect();
                    let expected: Vec<Vec<u32>> =
                        (0..own.len()).map(|r| own.numerators(r).to_vec()).collect();
                    assert_eq!(reindexed, expected, "k={k} m={m} mask={mask:b}");
                    // Off-face coordinates vanish.
                    for &r in t.face_indices(mask) {
                        for (i, &a) in t.numerators(r as usize).iter().enumerate() {
                            if mask & (1 << i) == 0 {
                                assert_eq!(a, 0);
                            }
                        }
                    }
                }
                let total: usize = (1usize..(1 << (k + 1))).map(|s| t.support_group(s).len()).sum();
                assert_eq!(total, t.len());
            }
        }
    }

    #[test]
    fn covering_bound_examples() {
        assert_eq!(grid_covering_bound(&[[0.0, 0.0], [1.0, 0.0]], 2), 0.5);
        let h = 3f64.sqrt() / 2.0;
        let b = grid_covering_bound(&[[0.0, 0.0], [1.0, 0.0], [0.5, h]], 10);
        assert!((b - 3f64.sqrt() / 10.0).abs() < 1e-12);
        assert_eq!(grid_covering_bound(&[[1.0, 1.0], [1.0, 1.0]], 3), 0.0);

        // Unit edge at m = 2: farthest segment point from {0, 0.5, 1} is 0.25 away.
        let t = BarycentricGridTemplate::new(1, 2).unwrap();
        let g = barycentric_grid(&t, &[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let seg: Vec<[f64; 2]> = (0..=10_000).map(|i| [i as f64 / 10_000.0, 0.0]).collect();
        let dh = directed_hausdorff(&seg, &g).unwrap();
        assert!((dh - 0.25).abs() < 1e-12);
    }

    #[test]
    fn grid_covers_random_simplices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let templates: Vec<_> = (1..=3).map(|k| BarycentricGridTemplate::new(k, 6).unwrap()).collect();
        for trial in 0..1000 {
            let k = 1 + trial % 3;
            let verts: Vec<Vec<f64>> =
                (0..=k).map(|_| (0..3).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect()).collect();
            let grid = barycentric_grid(&templates[k - 1], &verts).unwrap();
            let bound = grid_covering_bound(&verts, 6);
            for _ in 0..100 {
                let w = uniform_simplex_weights(k, &mut rng);
                let p: Vec<f64> = (0..3)
                    .map(|a| w.iter().zip(&verts).map(|(wj, v)| wj * v[a]).sum())
                    .collect();
                let d = directed_hausdorff(&[p], &grid).unwrap();
                assert!(d <= bound + 1e-9, "d={d} bound={bound}");
            }
        }
    }

    #[test]
    fn random_sampler_covers_with_high_probability() {
        // eps = 0.5 on triangles, delta = 0.05.
        let (eps, delta) = (0.5, 0.05);
        let count = random_covering_count(eps, delta, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dense = BarycentricGridTemplate::new(2, 60).unwrap();
        let trials = 60;
        let mut ok = 0;
        for _ in 0..trials {
            let verts: Vec<Vec<f64>> =
                (0..3).map(|_| (0..2).map(|_| rng.gen::<f64>()).collect()).collect();
            let diam = (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .map(|(i, j)| dist(&verts[i], &verts[j]))
                .fold(0.0, f64::max);
            let sample: Vec<Vec<f64>> = (0..count)
                .map(|_| {
                    let w = uniform_simplex_weights(2, &mut rng);
                    (0..2).map(|a| w.iter().zip(&verts).map(|(wj, v)| wj * v[a]).sum()).collect()
                })
                .collect();
            let hull = barycentric_grid(&dense, &verts).unwrap();
            if directed_hausdorff(&hull, &sample).unwrap() <= eps * diam {
                ok += 1;
            }
        }
        assert!(ok as f64 >= 0.95 * trials as f64, "{ok}/{trials}");
    }

    #[test]
    fn directed_hausdorff_examples() {
        assert_eq!(directed_hausdorff(&[[0.0, 0.0]], &[[3.0, 4.0]]).unwrap(), 5.0);
        let b = [[0.0, 0.0], [1.0, 0.0], [5.0, 5.0]];
        assert_eq!(directed_hausdorff(&b[..2], &b).unwrap(), 0.0);
        let d = directed_hausdorff(&[[0.0, 0.0], [1.0, 0.0]], &[[0.0, 1.0]]).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        let empty: [[f64; 2]; 0] = [];
        assert!(directed_hausdorff(&empty, &b).is_err());
        assert!(directed_hausdorff(&b, &empty).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pts(max: usize) -> impl Strategy<Value = Vec<[f64; 2]>> {
            prop::collection::vec(prop::array::uniform2(-10.0f64..10.0), 1..max)
        }

        proptest! {
            #[test]
            fn hausdorff_triangle_inequality(a in pts(12), b in pts(12), c in pts(12)) {
                let ab = directed_hausdorff(&a, &b).unwrap();
                let bc = directed_hausdorff(&b, &c).unwrap();
                let ac = directed_hausdorff(&a, &c).unwrap();
                prop_assert!(ac <= ab + bc + 1e-9);
            }

            #[test]
            fn ritter_contains_vertices(v in prop::collection::vec(prop::array::uniform3(-5.0f64..5.0), 2..5)) {
                let b = ritter_enclosing_ball(&v).unwrap();
                for p in &v {
                    prop_assert!(b.contains(p, 1e-9));
                }
            }

            #[test]
            fn fps_coverage_is_monotone(seed in 0u64..1000) {
                let cloud = random_cloud(60, 2, seed);
                let picks = farthest_point_sampling(&cloud, 20, 0).unwrap();
                let pts = cloud.points();
                let mut last = f64::INFINITY;
                for k in 1..=20 {
                    let l: Vec<&[f64]> = picks[..k].iter().map(|&i| cloud.point(i)).collect();
                    let d = directed_hausdorff(&pts, &l).unwrap();
                    prop_assert!(d <= last);
                    last = d;
                }
            }

            #[test]
            fn fps_is_deterministic(seed in 0u64..1000, start in 0usize..50) {
                let cloud = random_cloud(50, 3, seed);
                let a = farthest_point_sampling(&cloud, 25, start).unwrap();
                let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
                let b = pool.install(|| farthest_point_sampling(&cloud, 25, start).unwrap());
                prop_assert_eq!(a, b);
            }
        }
    }
}
