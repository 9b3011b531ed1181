//! Persistence diagrams by column reduction over Z/2 with clearing.

use std::collections::BTreeMap;

use crate::error::{FloodError, Result};
use crate::filtration::FilteredComplex;

/// Sparse boundary columns over the filtration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundaryMatrix {
    columns: Vec<Vec<u32>>,
    dims: Vec<u8>,
}

impl BoundaryMatrix {
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    pub fn dim(&self, j: usize) -> usize {
        self.dims[j] as usize
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0) as usize
    }
}

pub fn boundary_matrix(fc: &FilteredComplex) -> Result<BoundaryMatrix> {
    let index = fc.index_map();
    let mut columns = Vec::with_capacity(fc.len());
    let mut dims = Vec::with_capacity(fc.len());
    for (j, s) in fc.iter().enumerate() {
        let mut col = Vec::with_capacity(s.simplex.len());
        for f in s.simplex.facets() {
            match index.get(&f) {
                Some(&i) if i < j => col.push(i as u32),
                _ => {
                    return Err(FloodError::Integrity(format!(
                        "facet {f:?} of {:?} does not precede it",
                        s.simplex
                    )))
                }
            }
        }
        col.sort_unstable();
        columns.push(col);
        dims.push(s.simplex.dim() as u8);
    }
    Ok(BoundaryMatrix { columns, dims })
}

/// Index pairs `(birth, death)` and unpaired creators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub essential: Vec<usize>,
}

fn add_into(target: &mut Vec<u32>, other: &[u32], scratch: &mut Vec<u32>) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&target[i..]);
    scratch.extend_from_slice(&other[j..]);
    std::mem::swap(target, scratch);
}

/// Standard column reduction. With `clearing`, dimensions are processed
/// top-down and columns of simplices that are already known to kill a
/// class are zeroed without reduction.
pub fn reduce(bm: &BoundaryMatrix, clearing: bool) -> Pairing {
    let n = bm.len();
    let mut cols = bm.columns.clone();
    let mut pivot_col = vec![u32::MAX; n];
    let mut cleared = vec![false; n];
    let mut scratch = Vec::new();
    let order: Vec<usize> = if clearing {
        let mut o: Vec<usize> = (0..n).collect();
        o.sort_by_key(|&j| (std::cmp::Reverse(bm.dims[j]), j));
        o
    } else {
        (0..n).collect()
    };
    for j in order {
        if cleared[j] {
            cols[j].clear();
            continue;
        }
        let mut col = std::mem::take(&mut cols[j]);
        while let Some(&low) = col.last() {
            let k = pivot_col[low as usize];
            if k == u32::MAX {
                break;
            }
            add_into(&mut col, &cols[k as usize], &mut scratch);
        }
        if let Some(&low) = col.last() {
            pivot_col[low as usize] = j as u32;
            if clearing {
                cleared[low as usize] = true;
            }
        }
        cols[j] = col;
    }
    let mut pairing = Pairing::default();
    for (row, &col) in pivot_col.iter().enumerate() {
        if col != u32::MAX {
            pairing.pairs.push((row, col as usize));
        }
    }
    let killed: Vec<bool> = {
        let mut k = vec![false; n];
        for &(_, d) in &pairing.pairs {
            k[d] = true;
        }
        k
    };
    for j in 0..n {
        if cols[j].is_empty() && pivot_col[j] == u32::MAX && !killed[j] {
            pairing.essential.push(j);
        }
    }
    pairing
}

/// Multiset of `(birth, death)` per homology dimension, `death = ∞` for
/// essential classes. Bars are kept sorted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PersistenceDiagram {
    dims: BTreeMap<usize, Vec<(f64, f64)>>,
}

fn cmp_bar(a: &(f64, f64), b: &(f64, f64)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

impl PersistenceDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bars(bars: impl IntoIterator<Item = (usize, f64, f64)>) -> Self {
        let mut d = Self::new();
        for (k, b, e) in bars {
            d.dims.entry(k).or_default().push((b, e));
        }
        d.sort();
        d
    }

    fn sort(&mut self) {
        for v in self.dims.values_mut() {
            v.sort_by(cmp_bar);
        }
    }

    pub fn push(&mut self, k: usize, birth: f64, death: f64) {
        let v = self.dims.entry(k).or_default();
        let at = v.partition_point(|x| cmp_bar(x, &(birth, death)).is_le());
        v.insert(at, (birth, death));
    }

    pub fn bars(&self, k: usize) -> &[(f64, f64)] {
        self.dims.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn finite(&self, k: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.bars(k).iter().copied().filter(|b| b.1.is_finite())
    }

    pub fn essential(&self, k: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.bars(k).iter().copied().filter(|b| b.1.is_infinite())
    }

    /// Dimensions that have at least one bar.
    pub fn dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.dims.iter().filter(|(_, v)| !v.is_empty()).map(|(k, _)| *k)
    }

    pub fn len(&self) -> usize {
        self.dims.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionOptions {
    pub clearing: bool,
    pub include_zero_persistence: bool,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            clearing: true,
            include_zero_persistence: false,
        }
    }
}

pub fn reduce_and_extract(bm: &BoundaryMatrix, fc: &FilteredComplex) -> PersistenceDiagram {
    reduce_and_extract_with(bm, fc, ReductionOptions::default())
}

pub fn reduce_and_extract_with(
    bm: &BoundaryMatrix,
    fc: &FilteredComplex,
    opts: ReductionOptions,
) -> PersistenceDiagram {
    let pairing = reduce(bm, opts.clearing);
    diagram_from_pairing(&pairing, bm, fc, opts.include_zero_persistence)
}

pub fn diagram_from_pairing(
    pairing: &Pairing,
    bm: &BoundaryMatrix,
    fc: &FilteredComplex,
    include_zero_persistence: bool,
) -> PersistenceDiagram {
    let s = fc.simplices();
    let mut bars = Vec::with_capacity(pairing.pairs.len() + pairing.essential.len());
    for &(i, j) in &pairing.pairs {
        let (b, d) = (s[i].value, s[j].value);
        if include_zero_persistence || b < d {
            bars.push((bm.dim(i), b, d));
        }
    }
    for &i in &pairing.essential {
        bars.push((bm.dim(i), s[i].value, f64::INFINITY));
    }
    PersistenceDiagram::from_bars(bars)
}

/// Diagram of a filtered complex with default options.
pub fn persistence_diagram(fc: &FilteredComplex) -> Result<PersistenceDiagram> {
    let bm = boundary_matrix(fc)?;
    Ok(reduce_and_extract(&bm, fc))
}

/// Rank of `H_k` at radius `r`: bars with `birth ≤ r < death`.
pub fn betti_at(dgm: &PersistenceDiagram, r: f64, k: usize) -> usize {
    dgm.bars(k).iter().filter(|&&(b, d)| b <= r && r < d).count()
}
