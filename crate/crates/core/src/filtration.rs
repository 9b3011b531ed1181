//! Flood filtration values on the Delaunay triangulation of the landmarks.
//!
//! A simplex `σ` enters the filtration at `max_{p ∈ P_σ} min_{x ∈ X} |p - x|`,
//! where `P_σ ⊂ conv(σ)` is a finite sample (a barycentric grid by default).
//! Samples nest along faces, `P_τ ⊂ P_σ` for `τ ⊂ σ`, so only the maximal
//! simplices are evaluated and every face value is read off the same
//! per-point minima.
//!
//! When the landmarks are points of `X`, the nearest point of `X` to any
//! `p ∈ conv(σ)` lies in `B_{√2 r}(c)` for every enclosing ball `B_r(c)` of
//! `σ`. The masked backend therefore only looks at those candidates, selected
//! per batch of simplices from a common slab of `X` presorted along one axis.
//! The k-d tree backend queries all of `X` and is used for external landmarks.

use std::collections::HashMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::delaunay::{self, Triangulation};
use crate::error::{FloodError, Result};
use crate::geometry::{
    dist_sq, grid_covering_bound, ritter_enclosing_ball, uniform_simplex_weights,
    BarycentricGridTemplate, EnclosingBall, PointCloud,
};
use crate::simplex::Simplex;
use crate::spatial::{AxisSortedCloud, KdTree};

/// Multiplier on the enclosing-ball radius that makes masking exact.
pub const MASK_FACTOR: f64 = std::f64::consts::SQRT_2;

/// Relative inflation of the mask radius absorbing rounding in `|x - c|`.
const MASK_SLACK: f64 = 1e-9;

/// How the point sets `P_σ` are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampler {
    /// Evenly spaced barycentric grid of resolution `grid_resolution`.
    Grid,
    /// `count` uniform random points in the relative interior of every
    /// simplex of positive dimension, seeded per simplex.
    UniformRandom { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    MaskedBatch,
    KdTree,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloodConfig {
    pub grid_resolution: usize,
    pub batch_size: usize,
    pub sampler: Sampler,
    pub backend: Backend,
    /// Disables early termination of the per-point minimum search.
    pub strict: bool,
    /// Slab axis; `None` picks the axis with the largest extent.
    pub sort_axis: Option<usize>,
    pub delaunay_seed: u64,
}

impl Default for FloodConfig {
    fn default() -> Self {
        FloodConfig {
            grid_resolution: 20,
            batch_size: 256,
            sampler: Sampler::Grid,
            backend: Backend::MaskedBatch,
            strict: false,
            sort_axis: None,
            delaunay_seed: delaunay::DEFAULT_SEED,
        }
    }
}

impl FloodConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_resolution == 0 {
            return Err(FloodError::arg("grid resolution must be >= 1"));
        }
        if self.batch_size == 0 {
            return Err(FloodError::arg("batch size must be >= 1"));
        }
        if let Sampler::UniformRandom { count: 0, .. } = self.sampler {
            return Err(FloodError::arg("random sampler needs a positive point count"));
        }
        Ok(())
    }
}

/// Where the landmark set comes from.
#[derive(Clone, Debug)]
pub enum LandmarkSpec {
    /// Farthest point sampling of `X`.
    Fps { count: usize, start: usize },
    /// Explicit indices into `X`.
    Indices(Vec<usize>),
    /// A point set unrelated to `X`; the masked backend is unsound here.
    External(PointCloud),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilteredSimplex {
    pub simplex: Simplex,
    pub value: f64,
}

/// Simplices with filtration values, sorted by `(value, dim, vertices)`.
#[derive(Clone, Debug, Default)]
pub struct FilteredComplex {
    simplices: Vec<FilteredSimplex>,
}

impl FilteredComplex {
    /// Sorts the simplices and checks that values are finite, non-negative,
    /// closed under faces and monotone.
    pub fn new(mut simplices: Vec<FilteredSimplex>) -> Result<Self> {
        for s in &simplices {
            if !(s.value.is_finite() && s.value >= 0.0) {
                return Err(FloodError::Integrity(format!(
                    "simplex {:?} has invalid value {}",
                    s.simplex, s.value
                )));
            }
        }
        simplices.sort_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then_with(|| a.simplex.cmp(&b.simplex))
        });
        let fc = FilteredComplex { simplices };
        let lookup = fc.index_map();
        if lookup.len() != fc.len() {
            return Err(FloodError::Integrity("repeated simplex".into()));
        }
        for s in &fc.simplices {
            for f in s.simplex.facets() {
                match lookup.get(&f) {
                    None => {
                        return Err(FloodError::Integrity(format!(
                            "face {f:?} of {:?} is missing",
                            s.simplex
                        )))
                    }
                    Some(&i) if fc.simplices[i].value > s.value => {
                        return Err(FloodError::Integrity(format!(
                            "face {f:?} enters after {:?}",
                            s.simplex
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(fc)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[FilteredSimplex] {
        &self.simplices
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FilteredSimplex> {
        self.simplices.iter()
    }

    /// Position of each simplex in the filtration order.
    pub fn index_map(&self) -> HashMap<Simplex, usize> {
        self.simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.simplex, i))
            .collect()
    }

    pub fn value_of(&self, s: &Simplex) -> Option<f64> {
        self.simplices
            .iter()
            .find(|f| f.simplex == *s)
            .map(|f| f.value)
    }

    pub fn max_dim(&self) -> usize {
        self.simplices.iter().map(|s| s.simplex.dim()).max().unwrap_or(0)
    }

    pub fn count_dim(&self, k: usize) -> usize {
        self.simplices.iter().filter(|s| s.simplex.dim() == k).count()
    }
}

/// Candidate points of `X` for each maximal simplex of a batch.
///
/// Lists hold indices into `X` in slab (axis-sorted) order and contain every
/// point within `√2 r` of the simplex's Ritter centre.
#[derive(Clone, Debug, Default)]
pub struct CandidateMask {
    pub lists: Vec<Vec<u32>>,
}

fn mask_radius(ball: &EnclosingBall) -> f64 {
    MASK_FACTOR * ball.radius * (1.0 + MASK_SLACK)
}

fn cell_ball(tri: &Triangulation, cell: &Simplex) -> EnclosingBall {
    ritter_enclosing_ball(&tri.vertex_coords(cell)).expect("cells have at least two vertices")
}

/// Masks for a batch of top cells (indices into `tri.top_cells()`), drawing
/// candidates from the batch's common slab of `sorted`.
pub fn compute_mask(
    tri: &Triangulation,
    x: &PointCloud,
    sorted: &AxisSortedCloud<'_>,
    batch: &[usize],
) -> Result<CandidateMask> {
    if x.dim() != tri.dim() {
        return Err(FloodError::arg("point cloud and triangulation dimensions differ"));
    }
    let cells = tri.top_cells();
    if let Some(&bad) = batch.iter().find(|&&c| c >= cells.len()) {
        return Err(FloodError::arg(format!("cell index {bad} out of range")));
    }
    let balls: Vec<EnclosingBall> = batch.iter().map(|&c| cell_ball(tri, &cells[c])).collect();
    Ok(CandidateMask {
        lists: mask_batch(x, sorted, &balls),
    })
}

fn mask_batch(x: &PointCloud, sorted: &AxisSortedCloud<'_>, balls: &[EnclosingBall]) -> Vec<Vec<u32>> {
    let axis = sorted.axis();
    let (lo, hi) = balls.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), b| {
        let r = mask_radius(b);
        (lo.min(b.center[axis] - r), hi.max(b.center[axis] + r))
    });
    let range = sorted.slab_indices(lo, hi);
    let slab = SlabBins::new(x, sorted, range.start, &sorted.order()[range], balls);
    balls.par_iter().map(|b| slab.ball(b)).collect()
}

/// A batch slab bucketed on the axes other than the sort axis, so that each
/// ball only scans the slab points near its centre.
struct SlabBins<'s> {
    ids: &'s [u32],
    axis: usize,
    axis_coords: &'s [f64],
    cross: [usize; 2],
    ncross: usize,
    origin: [f64; 2],
    inv_h: f64,
    nb: [usize; 2],
    starts: Vec<u32>,
    /// Slab positions grouped by bin, ascending within each bin.
    positions: Vec<u32>,
    /// Sort-axis coordinate and full coordinates, in `positions` order.
    binned_axis: Vec<f64>,
    binned_coords: Vec<f64>,
    dim: usize,
}

const MAX_SLAB_BINS: usize = 256;

impl<'s> SlabBins<'s> {
    fn new(
        x: &PointCloud,
        sorted: &'s AxisSortedCloud<'_>,
        offset: usize,
        ids: &'s [u32],
        balls: &[EnclosingBall],
    ) -> Self {
        let axis = sorted.axis();
        let cross_axes: Vec<usize> = (0..x.dim()).filter(|&a| a != axis).collect();
        let mut cross = [0usize; 2];
        cross[..cross_axes.len()].copy_from_slice(&cross_axes);
        let ncross = cross_axes.len();
        let mean_r = balls.iter().map(mask_radius).sum::<f64>() / balls.len().max(1) as f64;
        let mut origin = [0.0; 2];
        let mut nb = [1usize; 2];
        let mut h = mean_r.max(1e-300);
        for (j, &a) in cross[..ncross].iter().enumerate() {
            let (lo, hi) = ids.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                let c = x.point(i as usize)[a];
                (lo.min(c), hi.max(c))
            });
            origin[j] = if lo.is_finite() { lo } else { 0.0 };
            h = h.max((hi - lo).max(0.0) / MAX_SLAB_BINS as f64);
        }
        let inv_h = 1.0 / h;
        let mut bins = SlabBins {
            ids,
            axis,
            axis_coords: &sorted.sorted_coords()[offset..offset + ids.len()],
            cross,
            ncross,
            origin,
            inv_h,
            nb,
            starts: Vec::new(),
            positions: Vec::new(),
            binned_axis: Vec::new(),
            binned_coords: Vec::new(),
            dim: x.dim(),
        };
        for j in 0..ncross {
            let hi = ids
                .iter()
                .map(|&i| x.point(i as usize)[cross[j]])
                .fold(f64::NEG_INFINITY, f64::max);
            nb[j] = if hi.is_finite() { bins.coord(hi, j) + 1 } else { 1 };
            nb[j] = nb[j].min(MAX_SLAB_BINS + 1);
        }
        bins.nb = nb;
        let nbins = nb[0] * nb[1];
        let bin_of: Vec<usize> = ids
            .iter()
            .map(|&i| {
                let p = x.point(i as usize);
                let b0 = bins.coord(p[cross[0]], 0).min(nb[0] - 1);
                let b1 = if ncross > 1 { bins.coord(p[cross[1]], 1).min(nb[1] - 1) } else { 0 };
                b1 * nb[0] + b0
            })
            .collect();
        let mut starts = vec![0u32; nbins + 1];
        for &b in &bin_of {
            starts[b + 1] += 1;
        }
        for b in 0..nbins {
            starts[b + 1] += starts[b];
        }
        let mut fill = starts.clone();
        let mut positions = vec![0u32; ids.len()];
        for (pos, &b) in bin_of.iter().enumerate() {
            positions[fill[b] as usize] = pos as u32;
            fill[b] += 1;
        }
        bins.binned_axis = positions.iter().map(|&p| bins.axis_coords[p as usize]).collect();
        bins.binned_coords = Vec::with_capacity(positions.len() * x.dim());
        for &p in &positions {
            bins.binned_coords.extend_from_slice(x.point(ids[p as usize] as usize));
        }
        bins.starts = starts;
        bins.positions = positions;
        bins
    }

    fn coord(&self, c: f64, j: usize) -> usize {
        let v = ((c - self.origin[j]) * self.inv_h).floor();
        if v <= 0.0 {
            0
        } else {
            v as usize
        }
    }

    fn ball(&self, b: &EnclosingBall) -> Vec<u32> {
        let r = mask_radius(b);
        let r2 = r * r;
        let mut range = [(0usize, 0usize); 2];
        for j in 0..2 {
            range[j] = if j < self.ncross {
                let c = b.center[self.cross[j]];
                (
                    self.coord(c - r, j).min(self.nb[j] - 1),
                    self.coord(c + r, j).min(self.nb[j] - 1),
                )
            } else {
                (0, 0)
            };
        }
        let (alo, ahi) = (b.center[self.axis] - r, b.center[self.axis] + r);
        let mut hits = Vec::new();
        for b1 in range[1].0..=range[1].1 {
            for b0 in range[0].0..=range[0].1 {
                let bin = b1 * self.nb[0] + b0;
                // Slab positions are in axis order, so each bin is sorted along the axis.
                let (start, end) = (self.starts[bin] as usize, self.starts[bin + 1] as usize);
                let first = start + self.binned_axis[start..end].partition_point(|&a| a < alo);
                for k in first..end {
                    if self.binned_axis[k] > ahi {
                        break;
                    }
                    if dist_sq(&self.binned_coords[k * self.dim..(k + 1) * self.dim], &b.center) <= r2 {
                        hits.push(self.positions[k]);
                    }
                }
            }
        }
        hits.sort_unstable();
        hits.into_iter().map(|pos| self.ids[pos as usize]).collect()
    }
}

/// `max_p min_{x ∈ candidates} |p - x|` by a plain double loop.
pub fn simplex_filtration<P: AsRef<[f64]>>(grid_points: &[P], candidates: &[u32], x: &PointCloud) -> Result<f64> {
    if candidates.is_empty() {
        return Err(FloodError::Integrity("empty candidate list".into()));
    }
    let mut worst = 0.0f64;
    for p in grid_points {
        let p = p.as_ref();
        let best = candidates
            .iter()
            .map(|&i| dist_sq(p, x.point(i as usize)))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    Ok(worst.sqrt())
}

/// Discrete flood value of a simplex at resolution `m` over all of `X`,
/// paired with that value plus the grid covering bound. The exact
/// continuous value lies in between.
pub fn flood_value_exact_gap<P: AsRef<[f64]>>(vertices: &[P], m: usize, x: &PointCloud) -> Result<(f64, f64)> {
    if vertices.is_empty() {
        return Err(FloodError::arg("simplex needs at least one vertex"));
    }
    let template = BarycentricGridTemplate::new(vertices.len() - 1, m)?;
    let mut pts = Vec::new();
    template.grid_points_into(vertices, &mut pts);
    let tree = KdTree::new(x);
    let worst = pts
        .chunks_exact(x.dim())
        .map(|p| tree.nearest_sq(p, -1.0).1)
        .fold(0.0f64, f64::max)
        .sqrt();
    Ok((worst, worst + grid_covering_bound(vertices, m)))
}

/// Exact nearest-distance queries over one simplex's candidate set, bucketed
/// on a uniform grid.
struct CandidateIndex {
    dim: usize,
    origin: [f64; 3],
    inv_h: f64,
    h: f64,
    nb: [usize; 3],
    starts: Vec<u32>,
    coords: Vec<f64>,
}

const TARGET_PER_BIN: f64 = 3.0;
const MAX_BINS_PER_AXIS: usize = 128;

impl CandidateIndex {
    fn new(x: &PointCloud, ids: &[u32]) -> Self {
        let dim = x.dim();
        let mut lo = [0.0f64; 3];
        let mut hi = [0.0f64; 3];
        for k in 0..dim {
            lo[k] = f64::INFINITY;
            hi[k] = f64::NEG_INFINITY;
        }
        for &i in ids {
            for (k, &c) in x.point(i as usize).iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        let ext: Vec<f64> = (0..dim).map(|k| (hi[k] - lo[k]).max(0.0)).collect();
        let max_ext = ext.iter().cloned().fold(0.0, f64::max);
        let floor = (max_ext / MAX_BINS_PER_AXIS as f64).max(1e-300);
        let vol: f64 = ext.iter().map(|e| e.max(floor)).product();
        let mut h = (vol * TARGET_PER_BIN / ids.len().max(1) as f64).powf(1.0 / dim as f64);
        h = h.max(floor);
        let mut nb = [1usize; 3];
        for k in 0..dim {
            nb[k] = ((ext[k] / h).floor() as usize + 1).min(MAX_BINS_PER_AXIS + 1);
        }
        let inv_h = 1.0 / h;
        let mut idx = CandidateIndex {
            dim,
            origin: lo,
            inv_h,
            h,
            nb,
            starts: Vec::new(),
            coords: Vec::with_capacity(ids.len() * dim),
        };
        let nbins = nb[0] * nb[1] * nb[2];
        let bins: Vec<usize> = ids.iter().map(|&i| idx.bin_of(x.point(i as usize))).collect();
        let mut counts = vec![0u32; nbins + 1];
        for &b in &bins {
            counts[b + 1] += 1;
        }
        for b in 0..nbins {
            counts[b + 1] += counts[b];
        }
        let mut fill = counts.clone();
        let mut slots = vec![0u32; ids.len()];
        for (pos, &b) in bins.iter().enumerate() {
            slots[fill[b] as usize] = pos as u32;
            fill[b] += 1;
        }
        for &pos in &slots {
            idx.coords.extend_from_slice(x.point(ids[pos as usize] as usize));
        }
        idx.starts = counts;
        idx
    }

    #[inline]
    fn cell_coord(&self, p: &[f64], k: usize) -> usize {
        let c = ((p[k] - self.origin[k]) * self.inv_h).floor();
        if c <= 0.0 {
            0
        } else {
            (c as usize).min(self.nb[k] - 1)
        }
    }

    #[inline]
    fn bin_of(&self, p: &[f64]) -> usize {
        let mut b = 0;
        for k in (0..self.dim).rev() {
            b = b * self.nb[k] + self.cell_coord(p, k);
        }
        b
    }

    #[inline]
    fn scan_bin(&self, bin: usize, p: &[f64], best: &mut f64) {
        let (s, e) = (self.starts[bin] as usize, self.starts[bin + 1] as usize);
        for q in self.coords[s * self.dim..e * self.dim].chunks_exact(self.dim) {
            let d = dist_sq(p, q);
            if d < *best {
                *best = d;
            }
        }
    }

    /// Squared distance to the nearest candidate; may stop early once a
    /// candidate within `stop_sq` is seen.
    fn nearest_sq(&self, p: &[f64], stop_sq: f64) -> f64 {
        let mut best = f64::INFINITY;
        let mut c = [0isize; 3];
        for k in 0..self.dim {
            c[k] = self.cell_coord(p, k) as isize;
        }
        let max_ring = (0..self.dim)
            .map(|k| c[k].max(self.nb[k] as isize - 1 - c[k]))
            .max()
            .unwrap_or(0);
        for r in 0..=max_ring {
            if r >= 1 {
                let lb = (r - 1) as f64 * self.h;
                if lb * lb >= best {
                    break;
                }
            }
            let range = |k: usize| {
                if k < self.dim {
                    ((c[k] - r).max(0), (c[k] + r).min(self.nb[k] as isize - 1))
                } else {
                    (0, 0)
                }
            };
            let (z0, z1) = range(2);
            let (y0, y1) = range(1);
            let (x0, x1) = range(0);
            for z in z0..=z1 {
                let dz = (z - c[2]).abs();
                for y in y0..=y1 {
                    let dy = (y - c[1]).abs();
                    let row = (z as usize * self.nb[1] + y as usize) * self.nb[0];
                    if dz == r || dy == r {
                        for xx in x0..=x1 {
                            self.scan_bin(row + xx as usize, p, &mut best);
                        }
                    } else {
                        if c[0] - r >= 0 {
                            self.scan_bin(row + (c[0] - r) as usize, p, &mut best);
                        }
                        if r > 0 && c[0] + r < self.nb[0] as isize {
                            self.scan_bin(row + (c[0] + r) as usize, p, &mut best);
                        }
                    }
                }
            }
            if best <= stop_sq {
                break;
            }
        }
        best
    }
}

/// The point samples of a maximal simplex, grouped by exact support.
enum CellSamples<'t> {
    Grid(&'t BarycentricGridTemplate),
    /// Flattened weights per support mask.
    Random(Vec<Vec<f64>>),
}

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn random_samples(cell: &Simplex, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let k1 = cell.len();
    let mut groups = vec![Vec::new(); 1 << k1];
    for mask in 1usize..(1 << k1) {
        let face = cell.face(mask as u32);
        let local: Vec<usize> = (0..k1).filter(|i| mask & (1 << i) != 0).collect();
        if local.len() == 1 {
            let mut w = vec![0.0; k1];
            w[local[0]] = 1.0;
            groups[mask] = w;
            continue;
        }
        let face_seed = face
            .vertices()
            .iter()
            .fold(mix64(seed), |h, &v| mix64(h ^ v as u64));
        let mut rng = ChaCha8Rng::seed_from_u64(face_seed);
        let mut flat = Vec::with_capacity(count * k1);
        for _ in 0..count {
            let w = uniform_simplex_weights(face.dim(), &mut rng);
            let mut full = vec![0.0; k1];
            for (j, &pos) in local.iter().enumerate() {
                full[pos] = w[j];
            }
            flat.extend_from_slice(&full);
        }
        groups[mask] = flat;
    }
    groups
}

/// Face masks of a `k1`-vertex simplex ordered by size, then numerically.
fn masks_by_size(k1: usize) -> Vec<usize> {
    let mut m: Vec<usize> = (1..(1usize << k1)).collect();
    m.sort_by_key(|&x| (x.count_ones(), x));
    m
}

/// Squared flood values of every face of one maximal simplex, indexed by
/// local face mask.
///
/// Faces are visited by increasing size; a face's running maximum starts at
/// the maximum over its facets, and a sample point whose distance search
/// already found something within that running maximum cannot raise any
/// containing face's value, so the search may stop there.
fn cell_face_values(
    verts: &[&[f64]],
    samples: &CellSamples<'_>,
    strict: bool,
    nearest_sq: &dyn Fn(&[f64], f64) -> f64,
) -> Vec<f64> {
    let k1 = verts.len();
    let dim = verts[0].len();
    let mut values = vec![f64::NEG_INFINITY; 1 << k1];
    let mut p = [0.0f64; 3];
    let mut eval = |w: &[f64], running: &mut f64| {
        for (axis, slot) in p.iter_mut().enumerate().take(dim) {
            let mut s = 0.0;
            for (wj, v) in w.iter().zip(verts) {
                s += wj * v[axis];
            }
            *slot = s;
        }
        let stop = if strict { -1.0 } else { running.max(0.0) };
        let d = nearest_sq(&p[..dim], stop);
        if d > *running {
            *running = d;
        }
    };
    for mask in masks_by_size(k1) {
        let mut running = f64::NEG_INFINITY;
        for i in 0..k1 {
            let sub = mask & !(1 << i);
            if sub != mask && sub != 0 {
                running = running.max(values[sub]);
            }
        }
        match samples {
            CellSamples::Grid(t) => {
                for &row in t.support_group(mask) {
                    eval(t.weight(row as usize), &mut running);
                }
            }
            CellSamples::Random(groups) => {
                for w in groups[mask].chunks_exact(k1) {
                    eval(w, &mut running);
                }
            }
        }
        values[mask] = running;
    }
    values
}

/// Wall-clock seconds spent masking and evaluating distances.
#[derive(Clone, Copy, Debug, Default)]
pub struct FiltrationTimings {
    pub masking: f64,
    pub filtration: f64,
}

/// Flood values for every simplex of `tri` (which must be built on `L ⊂ X`
/// for the masked backend), in the layout of `tri.simplices(k)`.
pub fn flood_values(
    tri: &Triangulation,
    x: &PointCloud,
    config: &FloodConfig,
    landmarks_in_x: bool,
) -> Result<(Vec<Vec<f64>>, FiltrationTimings)> {
    config.validate()?;
    if x.dim() != tri.dim() {
        return Err(FloodError::arg("point cloud and landmark dimensions differ"));
    }
    let d = tri.dim();
    let cells = tri.top_cells();
    let backend = if landmarks_in_x { config.backend } else { Backend::KdTree };

    // Each simplex takes its value from the first top cell containing it.
    let mut owner: Vec<Vec<u32>> = (0..=d).map(|k| vec![u32::MAX; tri.simplices(k).len()]).collect();
    let masks = masks_by_size(d + 1);
    let mut owned: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cells.len()];
    for (ci, cell) in cells.iter().enumerate() {
        for &mask in &masks {
            let f = cell.face(mask as u32);
            let fi = tri.index_of(&f).expect("face closure");
            if owner[f.dim()][fi] == u32::MAX {
                owner[f.dim()][fi] = ci as u32;
                owned[ci].push((mask, fi));
            }
        }
    }

    let template = match config.sampler {
        Sampler::Grid => Some(BarycentricGridTemplate::new(d, config.grid_resolution)?),
        Sampler::UniformRandom { .. } => None,
    };
    let samples_for = |cell: &Simplex| match (&template, config.sampler) {
        (Some(t), _) => CellSamples::Grid(t),
        (None, Sampler::UniformRandom { count, seed }) => CellSamples::Random(random_samples(cell, count, seed)),
        (None, Sampler::Grid) => unreachable!(),
    };
    let strict = config.strict;
    let mut values: Vec<Vec<f64>> = (0..=d).map(|k| vec![f64::NAN; tri.simplices(k).len()]).collect();
    let mut timings = FiltrationTimings::default();
    let mut store = |ci: usize, face_sq: Vec<f64>| {
        for &(mask, fi) in &owned[ci] {
            values[mask.count_ones() as usize - 1][fi] = face_sq[mask].sqrt();
        }
    };

    match backend {
        Backend::KdTree => {
            let t0 = Instant::now();
            let tree = KdTree::new(x);
            let query = |p: &[f64], stop: f64| tree.nearest_sq(p, stop).1;
            let results: Vec<Vec<f64>> = (0..cells.len())
                .into_par_iter()
                .map(|ci| {
                    let verts = tri.vertex_coords(&cells[ci]);
                    cell_face_values(&verts, &samples_for(&cells[ci]), strict, &query)
                })
                .collect();
            for (ci, r) in results.into_iter().enumerate() {
                store(ci, r);
            }
            timings.filtration += t0.elapsed().as_secs_f64();
        }
        Backend::MaskedBatch => {
            let t0 = Instant::now();
            let sorted = match config.sort_axis {
                Some(a) => AxisSortedCloud::new(x, a)?,
                None => AxisSortedCloud::widest(x),
            };
            let axis = sorted.axis();
            let balls: Vec<EnclosingBall> = cells.iter().map(|c| cell_ball(tri, c)).collect();
            let mut by_center: Vec<usize> = (0..cells.len()).collect();
            by_center.sort_by(|&a, &b| balls[a].center[axis].total_cmp(&balls[b].center[axis]).then(a.cmp(&b)));
            timings.masking += t0.elapsed().as_secs_f64();

            for batch in by_center.chunks(config.batch_size) {
                let t0 = Instant::now();
                let batch_balls: Vec<EnclosingBall> = batch.iter().map(|&c| balls[c].clone()).collect();
                let lists = mask_batch(x, &sorted, &batch_balls);
                let t1 = Instant::now();
                timings.masking += (t1 - t0).as_secs_f64();

                let results: Vec<Result<Vec<f64>>> = batch
                    .par_iter()
                    .zip(lists.par_iter())
                    .map(|(&ci, ids)| {
                        if ids.is_empty() {
                            return Err(FloodError::Integrity(format!(
                                "mask of cell {:?} is empty",
                                cells[ci]
                            )));
                        }
                        let index = CandidateIndex::new(x, ids);
                        let query = |p: &[f64], stop: f64| index.nearest_sq(p, stop);
                        let verts = tri.vertex_coords(&cells[ci]);
                        Ok(cell_face_values(&verts, &samples_for(&cells[ci]), strict, &query))
                    })
                    .collect();
                for (&ci, r) in batch.iter().zip(results) {
                    store(ci, r?);
                }
                timings.filtration += t1.elapsed().as_secs_f64();
            }
        }
    }

    for k in 1..=d {
        for (i, &v) in values[k].iter().enumerate() {
            for &f in tri.facets_of(k, i) {
                if values[k - 1][f as usize] > v {
                    return Err(FloodError::Integrity(format!(
                        "face of {:?} has a larger flood value",
                        tri.simplices(k)[i]
                    )));
                }
            }
        }
    }
    Ok((values, timings))
}

/// Assembles the sorted filtered complex from per-dimension values.
pub fn filtered_complex(tri: &Triangulation, values: &[Vec<f64>]) -> Result<FilteredComplex> {
    let mut out = Vec::with_capacity(tri.num_simplices());
    for (k, vals) in values.iter().enumerate() {
        for (s, &value) in tri.simplices(k).iter().zip(vals) {
            out.push(FilteredSimplex { simplex: *s, value });
        }
    }
    FilteredComplex::new(out)
}

/// Largest grid covering bound over the cells of `tri` at resolution `m`.
/// Faces never exceed the bound of a cell that contains them.
pub fn max_grid_bound(tri: &Triangulation, m: usize) -> f64 {
    tri.top_cells()
        .iter()
        .map(|c| grid_covering_bound(&tri.vertex_coords(c), m))
        .fold(0.0, f64::max)
}

/// Delaunay triangulation of the landmarks plus flood values, as a sorted
/// filtered complex.
pub fn build_flood_filtration(x: &PointCloud, landmarks: &LandmarkSpec, config: &FloodConfig) -> Result<FilteredComplex> {
    let (l, in_x) = resolve_landmarks(x, landmarks)?;
    let tri = delaunay::delaunay_with_seed(&l, config.delaunay_seed)?;
    let (values, _) = flood_values(&tri, x, config, in_x)?;
    filtered_complex(&tri, &values)
}

/// Materialises the landmark cloud; the flag tells whether `L ⊂ X`.
pub fn resolve_landmarks(x: &PointCloud, landmarks: &LandmarkSpec) -> Result<(PointCloud, bool)> {
    match landmarks {
        LandmarkSpec::Fps { count, start } => {
            let idx = crate::geometry::farthest_point_sampling(x, *count, *start)?;
            Ok((x.select(&idx)?, true))
        }
        LandmarkSpec::Indices(idx) => Ok((x.select(idx)?, true)),
        LandmarkSpec::External(l) => {
            if l.dim() != x.dim() {
                return Err(FloodError::arg("landmarks and point cloud dimensions differ"));
            }
            Ok((l.clone(), false))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::barycentric_grid;
    use rand::Rng;

    fn random_cloud(n: usize, dim: usize, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PointCloud::new(dim, (0..n * dim).map(|_| rng.gen::<f64>()).collect()).unwrap()
    }

    /// Per-simplex values by brute force: own grid of each simplex, all of X.
    fn naive_values(tri: &Triangulation, x: &PointCloud, m: usize) -> Vec<Vec<f64>> {
        (0..=tri.dim())
            .map(|k| {
                let t = BarycentricGridTemplate::new(k, m).unwrap();
                tri.simplices(k)
                    .iter()
                    .map(|s| {
                        let g = barycentric_grid(&t, &tri.vertex_coords(s)).unwrap();
                        g.iter()
                            .map(|p| x.iter().map(|q| dist_sq(p, q)).fold(f64::INFINITY, f64::min))
                            .fold(0.0, f64::max)
                            .sqrt()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn candidate_index_is_exact() {
        let x = random_cloud(3000, 3, 1);
        let ids: Vec<u32> = (0..3000).step_by(3).collect();
        let idx = CandidateIndex::new(&x, &ids);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let p: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 1.4 - 0.2).collect();
            let want = ids
                .iter()
                .map(|&i| dist_sq(&p, x.point(i as usize)))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(idx.nearest_sq(&p, -1.0), want);
            let early = idx.nearest_sq(&p, 0.01);
            assert!(early >= want && (early <= 0.01 || early == want));
        }
        // Degenerate extents: all candidates on a line.
        let line = PointCloud::new(2, (0..50).flat_map(|i| [i as f64, 0.0]).collect()).unwrap();
        let ids: Vec<u32> = (0..50).collect();
        let idx = CandidateIndex::new(&line, &ids);
        assert_eq!(idx.nearest_sq(&[10.2, 3.0], -1.0), dist_sq(&[10.2, 3.0], &[10.0, 0.0]));
    }

    #[test]
    fn mask_of_vertex_only_cloud_is_the_vertices() {
        let x = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0], [0.2, 0.9]]).unwrap();
        let tri = delaunay::delaunay(&x).unwrap();
        let sorted = AxisSortedCloud::widest(&x);
        let m = compute_mask(&tri, &x, &sorted, &[0]).unwrap();
        let mut l = m.lists[0].clone();
        l.sort();
        assert_eq!(l, vec![0, 1, 2]);
    }

    #[test]
    fn mask_matches_linear_ball_filter() {
        let x = random_cloud(1000, 2, 3);
        let l = x.select(&[0, 1, 2]).unwrap();
        let tri = delaunay::delaunay(&l).unwrap();
        let sorted = AxisSortedCloud::new(&x, 1).unwrap();
        // Mask over X, landmarks indexed into L: use L's ball on X.
        let ball = cell_ball(&tri, &tri.top_cells()[0]);
        let r = MASK_FACTOR * ball.radius;
        let lists = mask_batch(&x, &sorted, &[ball.clone()]);
        let mut got = lists[0].clone();
        got.sort();
        let want: Vec<u32> = (0..1000u32)
            .filter(|&i| crate::geometry::dist(x.point(i as usize), &ball.center) <= r)
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn mask_boundary_is_closed() {
        // Edge (0,0)-(2,0) in a triangle with apex near the edge: the Ritter
        // ball is centred at (1,0) with radius 1, mask radius √2.
        let pts = [[0.0, 0.0], [2.0, 0.0], [1.0, 0.5], [1.0, 2f64.sqrt()], [1.0, 1.5]];
        let x = PointCloud::from_points(&pts).unwrap();
        let l = x.select(&[0, 1, 2]).unwrap();
        let tri = delaunay::delaunay(&l).unwrap();
        let sorted = AxisSortedCloud::widest(&x);
        let m = compute_mask(&tri, &x, &sorted, &[0]).unwrap();
        assert!(m.lists[0].contains(&3));
        assert!(!m.lists[0].contains(&4));
    }

    #[test]
    fn edge_between_two_points() {
        let x = PointCloud::from_points(&[[0.0, 0.0], [3.0, 0.0], [1.5, 10.0]]).unwrap();
        let grid: Vec<[f64; 2]> = (0..=30).map(|i| [0.1 * i as f64, 0.0]).collect();
        let f = simplex_filtration(&grid, &[0, 1, 2], &x).unwrap();
        assert!((f - 1.5).abs() < 1e-12);
        assert!(simplex_filtration(&grid, &[], &x).is_err());
    }

    #[test]
    fn sagitta_of_a_chord() {
        let n = 4096;
        let x = PointCloud::new(
            2,
            (0..n)
                .flat_map(|j| {
                    let t = std::f64::consts::TAU * j as f64 / n as f64;
                    [t.cos(), t.sin()]
                })
                .collect(),
        )
        .unwrap();
        // Chord over an arc of pi/4 from index 0 to 512.
        let t = BarycentricGridTemplate::new(1, 64).unwrap();
        let g = barycentric_grid(&t, &[x.point(0), x.point(512)]).unwrap();
        let all: Vec<u32> = (0..n as u32).collect();
        let f = simplex_filtration(&g, &all, &x).unwrap();
        let sagitta = 1.0 - (std::f64::consts::PI / 8.0).cos();
        assert!((f - sagitta).abs() < 1e-12);
    }

    #[test]
    fn masked_equals_naive_on_random_triangle() {
        let x = random_cloud(50, 2, 4);
        let l = x.select(&[0, 1, 2]).unwrap();
        let tri = delaunay::delaunay(&l).unwrap();
        let t = BarycentricGridTemplate::new(2, 12).unwrap();
        let g = barycentric_grid(&t, &tri.vertex_coords(&tri.top_cells()[0])).unwrap();
        let all: Vec<u32> = (0..50).collect();
        let naive = g
            .iter()
            .map(|p| x.iter().map(|q| dist_sq(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
            .sqrt();
        assert_eq!(simplex_filtration(&g, &all, &x).unwrap(), naive);
        let sorted = AxisSortedCloud::widest(&x);
        let m = compute_mask(&tri, &x, &sorted, &[0]).unwrap();
        assert_eq!(simplex_filtration(&g, &m.lists[0], &x).unwrap(), naive);
    }

    #[test]
    fn exact_gap_brackets() {
        let x = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let (lo, hi) = flood_value_exact_gap(&[[0.0, 0.0], [1.0, 0.0]], 1, &x).unwrap();
        assert_eq!((lo, hi), (0.0, 1.0));
        assert!(lo <= 0.5 && 0.5 <= hi);

        let x = random_cloud(400, 2, 8);
        let tri_pts = [[0.1, 0.2], [0.9, 0.3], [0.4, 0.95]];
        let (fine, _) = flood_value_exact_gap(&tri_pts, 512, &x).unwrap();
        let (lo, hi) = flood_value_exact_gap(&tri_pts, 16, &x).unwrap();
        assert!(lo <= fine && fine <= hi, "{lo} {fine} {hi}");

        let mut prev = f64::INFINITY;
        for m in [1, 2, 4, 8, 16, 32] {
            let (lo, hi) = flood_value_exact_gap(&tri_pts, m, &x).unwrap();
            assert!(hi - lo < prev);
            prev = hi - lo;
        }
    }

    #[test]
    fn backends_and_naive_agree() {
        for (dim, seed) in [(2, 1u64), (3, 2), (3, 3)] {
            let x = random_cloud(600, dim, seed);
            let lm = LandmarkSpec::Fps { count: 25, start: 0 };
            let (l, _) = resolve_landmarks(&x, &lm).unwrap();
            let tri = delaunay::delaunay(&l).unwrap();
            let m = 5;
            let naive = naive_values(&tri, &x, m);
            for backend in [Backend::MaskedBatch, Backend::KdTree] {
                for strict in [true, false] {
                    for batch_size in [1, 17, 256] {
                        let cfg = FloodConfig {
                            grid_resolution: m,
                            batch_size,
                            backend,
                            strict,
                            ..FloodConfig::default()
                        };
                        let (v, _) = flood_values(&tri, &x, &cfg, true).unwrap();
                        assert_eq!(v, naive, "{backend:?} strict={strict} batch={batch_size}");
                    }
                }
            }
        }
    }

    #[test]
    fn subset_vertices_are_zero_and_external_vertices_are_distances() {
        let x = random_cloud(300, 2, 5);
        let fc = build_flood_filtration(&x, &LandmarkSpec::Fps { count: 10, start: 3 }, &FloodConfig::default())
            .unwrap();
        assert!(fc.iter().filter(|s| s.simplex.dim() == 0).all(|s| s.value == 0.0));

        let ext = PointCloud::from_points(&[[0.5, 0.5], [1.5, 0.5], [0.5, 1.5], [-0.3, -0.2]]).unwrap();
        let cfg = FloodConfig {
            grid_resolution: 8,
            ..FloodConfig::default()
        };
        let fc = build_flood_filtration(&x, &LandmarkSpec::External(ext.clone()), &cfg).unwrap();
        let tree = KdTree::new(&x);
        for s in fc.iter().filter(|s| s.simplex.dim() == 0) {
            let v = s.simplex.vertices()[0] as usize;
            assert_eq!(s.value, tree.nearest(ext.point(v)).1);
        }
    }

    #[test]
    fn random_sampler_is_monotone_and_seeded() {
        let x = random_cloud(500, 3, 6);
        let cfg = FloodConfig {
            sampler: Sampler::UniformRandom { count: 30, seed: 9 },
            ..FloodConfig::default()
        };
        let lm = LandmarkSpec::Fps { count: 20, start: 0 };
        let a = build_flood_filtration(&x, &lm, &cfg).unwrap();
        let b = build_flood_filtration(&x, &lm, &cfg).unwrap();
        assert_eq!(a.simplices(), b.simplices());
        let kd = FloodConfig {
            backend: Backend::KdTree,
            ..cfg.clone()
        };
        assert_eq!(build_flood_filtration(&x, &lm, &kd).unwrap().simplices(), a.simplices());
    }

    #[test]
    fn three_point_closed_form() {
        let pts = [[0.0, 0.0], [4.0, 0.0], [1.0, 3.0]];
        let x = PointCloud::from_points(&pts).unwrap();
        let cfg = FloodConfig {
            grid_resolution: 240,
            ..FloodConfig::default()
        };
        let fc = build_flood_filtration(&x, &LandmarkSpec::Indices(vec![0, 1, 2]), &cfg).unwrap();
        let edges: Vec<f64> = fc.iter().filter(|s| s.simplex.dim() == 1).map(|s| s.value).collect();
        let mut lens = [4.0, 10f64.sqrt(), 18f64.sqrt()];
        lens.sort_by(f64::total_cmp);
        for (e, l) in edges.iter().zip(lens) {
            assert!((e - l / 2.0).abs() < 1e-12);
        }
        // Acute triangle: the farthest hull point from the vertices is the circumcenter.
        let verts: Vec<&[f64]> = pts.iter().map(|p| &p[..]).collect();
        let cc = delaunay::circumcenter(&verts).unwrap();
        let r = crate::geometry::dist(&cc, &pts[0]);
        let tri_val = fc.iter().find(|s| s.simplex.dim() == 2).unwrap().value;
        let bound = grid_covering_bound(&pts, 240);
        assert!(tri_val <= r + 1e-12 && tri_val >= r - bound);
    }

    #[test]
    fn config_validation() {
        let bad = FloodConfig {
            grid_resolution: 0,
            ..FloodConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = FloodConfig {
            batch_size: 0,
            ..FloodConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = FloodConfig {
            sampler: Sampler::UniformRandom { count: 0, seed: 1 },
            ..FloodConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn filtered_complex_rejects_non_monotone() {
        let s = |v: &[u32], value| FilteredSimplex {
            simplex: Simplex::new(v),
            value,
        };
        assert!(FilteredComplex::new(vec![s(&[0], 0.0), s(&[1], 2.0), s(&[0, 1], 1.0)]).is_err());
        assert!(FilteredComplex::new(vec![s(&[0], 0.0), s(&[0, 1], 1.0)]).is_err());
        assert!(FilteredComplex::new(vec![s(&[0], -1.0)]).is_err());
        let ok = FilteredComplex::new(vec![s(&[0, 1], 1.0), s(&[1], 0.0), s(&[0], 0.0)]).unwrap();
        assert_eq!(ok.simplices()[0].simplex, Simplex::vertex(0));
        assert_eq!(ok.simplices()[2].simplex, Simplex::new(&[0, 1]));
    }
}
