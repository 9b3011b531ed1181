//! Spatial indices for the flooding inner loop: coordinate-sorted slabs and
//! an exact k-d tree.

use crate::error::{FloodError, Result};
use crate::geometry::{dist_sq, PointCloud};

/// A point cloud presorted along one coordinate axis.
#[derive(Clone, Debug)]
pub struct AxisSortedCloud<'a> {
    base: &'a PointCloud,
    axis: usize,
    order: Vec<u32>,
    sorted_coords: Vec<f64>,
}

impl<'a> AxisSortedCloud<'a> {
    /// Stable sort of the point indices by their `axis` coordinate.
    pub fn new(base: &'a PointCloud, axis: usize) -> Result<Self> {
        if axis >= base.dim() {
            return Err(FloodError::arg(format!(
                "sort axis {axis} out of range for dimension {}",
                base.dim()
            )));
        }
        let mut order: Vec<u32> = (0..base.len() as u32).collect();
        order.sort_by(|&a, &b| {
            base.point(a as usize)[axis].total_cmp(&base.point(b as usize)[axis])
        });
        let sorted_coords = order.iter().map(|&i| base.point(i as usize)[axis]).collect();
        Ok(AxisSortedCloud {
            base,
            axis,
            order,
            sorted_coords,
        })
    }

    /// Sorts along the axis with the largest extent.
    pub fn widest(base: &'a PointCloud) -> Self {
        let axis = widest_axis(base);
        AxisSortedCloud::new(base, axis).expect("widest axis is in range")
    }

    pub fn base(&self) -> &'a PointCloud {
        self.base
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn sorted_coords(&self) -> &[f64] {
        &self.sorted_coords
    }

    /// Positions (into [`order`](Self::order)) of the points whose sort-axis
    /// coordinate lies in the closed interval `[lo, hi]`.
    pub fn slab_indices(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        if !(lo <= hi) {
            return 0..0;
        }
        let start = self.sorted_coords.partition_point(|&c| c < lo);
        let end = self.sorted_coords.partition_point(|&c| c <= hi);
        start..end.max(start)
    }
}

pub fn widest_axis(cloud: &PointCloud) -> usize {
    cloud
        .bounds()
        .iter()
        .enumerate()
        .map(|(k, (lo, hi))| (k, hi - lo))
        .fold((0, f64::NEG_INFINITY), |best, (k, w)| if w > best.1 { (k, w) } else { best })
        .0
}

/// Leaf bucket size of [`KdTree`].
pub const KD_LEAF_SIZE: usize = 16;

#[derive(Clone, Debug)]
enum KdNode {
    Leaf { start: u32, end: u32 },
    Split { axis: u8, value: f64, left: u32, right: u32 },
}

/// Balanced k-d tree with median splits on the widest axis.
#[derive(Clone, Debug)]
pub struct KdTree {
    dim: usize,
    nodes: Vec<KdNode>,
    /// Original point index for each tree slot.
    index: Vec<u32>,
    /// Coordinates in tree order.
    coords: Vec<f64>,
}

impl KdTree {
    pub fn new(cloud: &PointCloud) -> Self {
        let dim = cloud.dim();
        let mut index: Vec<u32> = (0..cloud.len() as u32).collect();
        let mut nodes = Vec::with_capacity(2 * cloud.len() / KD_LEAF_SIZE + 1);
        build(cloud, &mut index, 0, &mut nodes);
        let mut coords = Vec::with_capacity(cloud.coords().len());
        for &i in &index {
            coords.extend_from_slice(cloud.point(i as usize));
        }
        KdTree {
            dim,
            nodes,
            index,
            coords,
        }
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Exact nearest neighbour `(index, distance)`; ties go to the smallest index.
    pub fn nearest(&self, query: &[f64]) -> (usize, f64) {
        let (i, d2) = self.nearest_sq(query, -1.0);
        (i, d2.sqrt())
    }

    /// Nearest-neighbour search returning `(index, squared distance)` that
    /// stops as soon as a point within squared distance `stop_sq` is found.
    ///
    /// With a negative `stop_sq` the result is the exact nearest neighbour.
    /// Otherwise the returned distance is either exact or `<= stop_sq`.
    pub fn nearest_sq(&self, query: &[f64], stop_sq: f64) -> (usize, f64) {
        debug_assert_eq!(query.len(), self.dim);
        let mut best = (u32::MAX, f64::INFINITY);
        self.search(0, query, stop_sq, &mut best);
        (best.0 as usize, best.1)
    }

    fn search(&self, node: usize, q: &[f64], stop_sq: f64, best: &mut (u32, f64)) -> bool {
        match self.nodes[node] {
            KdNode::Leaf { start, end } => {
                for slot in start as usize..end as usize {
                    let d = dist_sq(q, &self.coords[slot * self.dim..(slot + 1) * self.dim]);
                    let id = self.index[slot];
                    if d < best.1 || (d == best.1 && id < best.0) {
                        *best = (id, d);
                        if d <= stop_sq {
                            return true;
                        }
                    }
                }
                false
            }
            KdNode::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = q[axis as usize] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                if self.search(near as usize, q, stop_sq, best) {
                    return true;
                }
                if diff * diff <= best.1 {
                    return self.search(far as usize, q, stop_sq, best);
                }
                false
            }
        }
    }
}

fn build(cloud: &PointCloud, index: &mut [u32], offset: usize, nodes: &mut Vec<KdNode>) -> u32 {
    let id = nodes.len() as u32;
    if index.len() <= KD_LEAF_SIZE {
        nodes.push(KdNode::Leaf {
            start: offset as u32,
            end: (offset + index.len()) as u32,
        });
        return id;
    }
    let dim = cloud.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for &i in index.iter() {
        for (k, &c) in cloud.point(i as usize).iter().enumerate() {
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    let axis = (0..dim)
        .fold((0, f64::NEG_INFINITY), |b, k| if hi[k] - lo[k] > b.1 { (k, hi[k] - lo[k]) } else { b })
        .0;
    let mid = index.len() / 2;
    index.select_nth_unstable_by(mid, |&a, &b| {
        cloud.point(a as usize)[axis]
            .total_cmp(&cloud.point(b as usize)[axis])
            .then(a.cmp(&b))
    });
    let value = cloud.point(index[mid] as usize)[axis];
    nodes.push(KdNode::Leaf { start: 0, end: 0 });
    let (l, r) = index.split_at_mut(mid);
    let left = build(cloud, l, offset, nodes);
    let right = build(cloud, r, offset + mid, nodes);
    nodes[id as usize] = KdNode::Split {
        axis: axis as u8,
        value,
        left,
        right,
    };
    id
}
