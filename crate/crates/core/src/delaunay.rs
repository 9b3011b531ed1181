//! Delaunay triangulation of landmark sets in R^2 and R^3.
//!
//! Incremental Bowyer–Watson insertion over a ghost-cell representation of
//! the convex hull. Orientation and in-sphere tests use adaptive exact
//! predicates. If a predicate reports an exact degeneracy (cocircular or
//! coplanar input) the construction is restarted on a copy of the
//! coordinates with a seeded jitter of relative size `1e-12`; the returned
//! triangulation records that this happened and always refers to the
//! original, unjittered coordinates.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust::{Coord, Coord3D};

use crate::error::{FloodError, Result};
use crate::geometry::{dist, PointCloud};
use crate::simplex::Simplex;

/// Default seed for the insertion order and the degeneracy jitter.
pub const DEFAULT_SEED: u64 = 0x5eed_f100d;

/// Relative magnitude of the degeneracy jitter on the first retry.
pub const JITTER_RELATIVE: f64 = 1e-12;

const MAX_JITTER_ATTEMPTS: u32 = 6;

/// A Delaunay triangulation with every face of every cell.
#[derive(Clone, Debug)]
pub struct Triangulation {
    points: PointCloud,
    vertices: Vec<u32>,
    simplices: Vec<Vec<Simplex>>,
    facet_links: Vec<Vec<Vec<u32>>>,
    jittered: bool,
    duplicates: Vec<(u32, u32)>,
}

impl Triangulation {
    /// Builds the face lattice of a set of top-dimensional cells without any
    /// Delaunay check. Vertex ids index into `points`.
    pub fn from_cells(points: PointCloud, cells: &[Simplex]) -> Result<Self> {
        let dim = points.dim();
        if cells.is_empty() {
            return Err(FloodError::arg("a triangulation needs at least one cell"));
        }
        for c in cells {
            if c.dim() != dim {
                return Err(FloodError::arg(format!("cell {c:?} is not {dim}-dimensional")));
            }
            if c.vertices().iter().any(|&v| v as usize >= points.len()) {
                return Err(FloodError::arg(format!("cell {c:?} references a missing point")));
            }
        }
        let mut by_dim: Vec<HashSet<Simplex>> = vec![HashSet::new(); dim + 1];
        for c in cells {
            for mask in 1u32..(1 << (dim + 1)) {
                let f = c.face(mask);
                by_dim[f.dim()].insert(f);
            }
        }
        let simplices: Vec<Vec<Simplex>> = by_dim
            .into_iter()
            .map(|s| {
                let mut v: Vec<Simplex> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        let mut facet_links = vec![Vec::new()];
        for k in 1..=dim {
            let links = simplices[k]
                .iter()
                .map(|s| {
                    s.facets()
                        .map(|f| simplices[k - 1].binary_search(&f).expect("face closure") as u32)
                        .collect()
                })
                .collect();
            facet_links.push(links);
        }
        let vertices = simplices[0].iter().map(|s| s.vertices()[0]).collect();
        Ok(Triangulation {
            points,
            vertices,
            simplices,
            facet_links,
            jittered: false,
            duplicates: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    /// The landmark coordinates the vertex ids refer to.
    pub fn points(&self) -> &PointCloud {
        &self.points
    }

    /// Landmark indices used as vertices, ascending.
    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// All `k`-simplices, sorted lexicographically.
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.simplices.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn top_cells(&self) -> &[Simplex] {
        self.simplices(self.dim())
    }

    /// Indices into `simplices(k - 1)` of the facets of `simplices(k)[i]`.
    pub fn facets_of(&self, k: usize, i: usize) -> &[u32] {
        &self.facet_links[k][i]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.simplices(s.dim()).binary_search(s).ok()
    }

    pub fn num_simplices(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    /// Whether a degeneracy jitter was needed to finish the construction.
    pub fn jittered(&self) -> bool {
        self.jittered
    }

    /// `(dropped, kept)` landmark index pairs for exact duplicate points.
    pub fn duplicates(&self) -> &[(u32, u32)] {
        &self.duplicates
    }

    pub fn vertex_coords(&self, s: &Simplex) -> Vec<&[f64]> {
        s.vertices().iter().map(|&v| self.points.point(v as usize)).collect()
    }

    /// Alternating simplex count `V - E + F - T`.
    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(k, s)| if k % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }
}

/// Delaunay triangulation with the default seed.
pub fn delaunay(landmarks: &PointCloud) -> Result<Triangulation> {
    delaunay_with_seed(landmarks, DEFAULT_SEED)
}

/// Delaunay triangulation; `seed` fixes the insertion order and any jitter.
pub fn delaunay_with_seed(landmarks: &PointCloud, seed: u64) -> Result<Triangulation> {
    let dim = landmarks.dim();
    let (unique, duplicates) = dedup(landmarks);
    if unique.len() < dim + 1 {
        return Err(FloodError::Degenerate(format!(
            "{} distinct points cannot span R^{dim}",
            unique.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = unique.clone();
    order.shuffle(&mut rng);

    let scale = landmarks
        .bounds()
        .iter()
        .map(|(lo, hi)| hi - lo)
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut coords: Vec<[f64; 3]> = landmarks
        .iter()
        .map(|p| [p[0], p[1], if dim == 3 { p[2] } else { 0.0 }])
        .collect();
    if initial_simplex(&coords, &order, dim).is_none() {
        return Err(FloodError::Degenerate(format!(
            "all {} points are affinely dependent in R^{dim}",
            unique.len()
        )));
    }

    let mut jittered = false;
    let mut magnitude = JITTER_RELATIVE * scale;
    let mut attempt = 0;
    let cells = loop {
        let built = match dim {
            2 => Mesh::<3>::build(&coords, &order, seed).map(|m| m.finite_cells()),
            _ => Mesh::<4>::build(&coords, &order, seed).map(|m| m.finite_cells()),
        };
        match built {
            Ok(cells) => break cells,
            Err(Degenerate) if attempt < MAX_JITTER_ATTEMPTS => {
                attempt += 1;
                jittered = true;
                coords = landmarks
                    .iter()
                    .map(|p| {
                        let mut q = [0.0; 3];
                        for k in 0..dim {
                            q[k] = p[k] + magnitude * (2.0 * rng.gen::<f64>() - 1.0);
                        }
                        q
                    })
                    .collect();
                magnitude *= 100.0;
            }
            Err(Degenerate) => {
                return Err(FloodError::Degenerate(
                    "predicates stayed degenerate after jittering".into(),
                ))
            }
        }
    };
    let mut tri = Triangulation::from_cells(landmarks.clone(), &cells)?;
    tri.jittered = jittered;
    tri.duplicates = duplicates;
    Ok(tri)
}

/// A top cell whose circumsphere strictly contains another landmark.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Violation {
    pub cell: usize,
    pub point: u32,
    /// How far inside the circumsphere the point lies.
    pub depth: f64,
}

/// Lists `(cell, point)` pairs where a vertex lies inside a top cell's
/// circumsphere by more than `tolerance`.
pub fn circumsphere_check(tri: &Triangulation, tolerance: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for (ci, cell) in tri.top_cells().iter().enumerate() {
        let verts = tri.vertex_coords(cell);
        let Some(center) = circumcenter(&verts) else { continue };
        let radius = dist(&center, verts[0]);
        for &v in tri.vertices() {
            if cell.contains(v) {
                continue;
            }
            let depth = radius - dist(&center, tri.points().point(v as usize));
            if depth > tolerance {
                out.push(Violation {
                    cell: ci,
                    point: v,
                    depth,
                });
            }
        }
    }
    out
}

/// Circumcenter of a full-dimensional simplex, `None` if it is flat.
pub fn circumcenter(verts: &[&[f64]]) -> Option<Vec<f64>> {
    let d = verts[0].len();
    if verts.len() != d + 1 {
        return None;
    }
    // 2 (v_i - v_0) . x = |v_i - v_0|^2 with x = c - v_0.
    let mut a = vec![vec![0.0; d + 1]; d];
    for i in 0..d {
        let mut rhs = 0.0;
        for k in 0..d {
            let e = verts[i + 1][k] - verts[0][k];
            a[i][k] = 2.0 * e;
            rhs += e * e;
        }
        a[i][d] = rhs;
    }
    for col in 0..d {
        let piv = (col..d).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        for row in 0..d {
            if row != col {
                let f = a[row][col] / a[col][col];
                for k in col..=d {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    Some((0..d).map(|k| verts[0][k] + a[k][d] / a[k][k]).collect())
}

fn dedup(cloud: &PointCloud) -> (Vec<u32>, Vec<(u32, u32)>) {
    let mut idx: Vec<u32> = (0..cloud.len() as u32).collect();
    idx.sort_by(|&a, &b| {
        let (pa, pb) = (cloud.point(a as usize), cloud.point(b as usize));
        pa.iter()
            .zip(pb)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut unique = Vec::with_capacity(idx.len());
    let mut duplicates = Vec::new();
    let mut kept = idx[0];
    unique.push(kept);
    for &i in &idx[1..] {
        if cloud.point(i as usize) == cloud.point(kept as usize) {
            duplicates.push((i, kept));
        } else {
            kept = i;
            unique.push(i);
        }
    }
    unique.sort_unstable();
    (unique, duplicates)
}

fn c2(p: &[f64; 3]) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

fn c3(p: &[f64; 3]) -> Coord3D<f64> {
    Coord3D {
        x: p[0],
        y: p[1],
        z: p[2],
    }
}

/// Positions in `order` of `dim + 1` affinely independent points.
fn initial_simplex(pts: &[[f64; 3]], order: &[u32], dim: usize) -> Option<Vec<usize>> {
    let p = |i: usize| &pts[order[i] as usize];
    let mut chosen = vec![0usize, 1];
    let collinear = |a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]| {
        let xy = robust::orient2d(c2(a), c2(b), c2(c));
        if dim == 2 {
            return xy == 0.0;
        }
        let yz = |q: &[f64; 3]| Coord { x: q[1], y: q[2] };
        let xz = |q: &[f64; 3]| Coord { x: q[0], y: q[2] };
        xy == 0.0
            && robust::orient2d(yz(a), yz(b), yz(c)) == 0.0
            && robust::orient2d(xz(a), xz(b), xz(c)) == 0.0
    };
    let third = (2..order.len()).find(|&i| !collinear(p(0), p(1), p(i)))?;
    chosen.push(third);
    if dim == 3 {
        let fourth = (2..order.len())
            .find(|&i| i != third && robust::orient3d(c3(p(0)), c3(p(1)), c3(p(third)), c3(p(i))) != 0.0)?;
        chosen.push(fourth);
    }
    Some(chosen)
}

const GHOST: u32 = u32::MAX;
const NONE: u32 = u32::MAX;

/// Marker for an exact predicate degeneracy encountered during insertion.
#[derive(Debug)]
struct Degenerate;

type Ins<T> = std::result::Result<T, Degenerate>;

/// Cells with `N` vertices (`N = dim + 1`), each positively oriented.
/// Ghost cells carry [`GHOST`] for the point at infinity and are oriented so
/// that substituting a point strictly outside the hull yields a positive sign.
struct Mesh<'a, const N: usize> {
    pts: &'a [[f64; 3]],
    cells: Vec<[u32; N]>,
    nbr: Vec<[u32; N]>,
    alive: Vec<bool>,
    free: Vec<u32>,
    mark: Vec<u32>,
    epoch: u32,
    last: u32,
    walk_state: u64,
}

impl<'a, const N: usize> Mesh<'a, N> {
    fn build(pts: &'a [[f64; 3]], order: &[u32], seed: u64) -> Ins<Self> {
        let dim = N - 1;
        let init = initial_simplex(pts, order, dim).ok_or(Degenerate)?;
        let mut mesh = Mesh {
            pts,
            cells: Vec::new(),
            nbr: Vec::new(),
            alive: Vec::new(),
            free: Vec::new(),
            mark: Vec::new(),
            epoch: 0,
            last: 0,
            walk_state: seed | 1,
        };
        let mut first = [0u32; N];
        for (k, &pos) in init.iter().enumerate() {
            first[k] = order[pos];
        }
        let o = mesh.orient(&first);
        if o == 0.0 {
            return Err(Degenerate);
        }
        if o < 0.0 {
            first.swap(0, 1);
        }
        let mut init_cells = vec![first];
        for i in 0..N {
            let mut g = first;
            g[i] = GHOST;
            let (a, b) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            g.swap(a, b);
            init_cells.push(g);
        }
        for c in init_cells {
            mesh.alloc(c);
        }
        mesh.link_all();
        mesh.last = 0;
        for (pos, &v) in order.iter().enumerate() {
            if init.contains(&pos) {
                continue;
            }
            mesh.insert(v)?;
        }
        Ok(mesh)
    }

    fn finite_cells(&self) -> Vec<Simplex> {
        self.cells
            .iter()
            .zip(&self.alive)
            .filter(|(c, &a)| a && !c.contains(&GHOST))
            .map(|(c, _)| Simplex::new(c))
            .collect()
    }

    fn alloc(&mut self, cell: [u32; N]) -> u32 {
        if let Some(id) = self.free.pop() {
            self.cells[id as usize] = cell;
            self.nbr[id as usize] = [NONE; N];
            self.alive[id as usize] = true;
            self.mark[id as usize] = 0;
            id
        } else {
            self.cells.push(cell);
            self.nbr.push([NONE; N]);
            self.alive.push(true);
            self.mark.push(0);
            (self.cells.len() - 1) as u32
        }
    }

    /// Pairs up all facets of the initial cells.
    fn link_all(&mut self) {
        let mut open: HashMap<Vec<u32>, (u32, usize)> = HashMap::new();
        for c in 0..self.cells.len() {
            for i in 0..N {
                let mut key: Vec<u32> = (0..N).filter(|&j| j != i).map(|j| self.cells[c][j]).collect();
                key.sort_unstable();
                if let Some((o, oi)) = open.remove(&key) {
                    self.nbr[c][i] = o;
                    self.nbr[o as usize][oi] = c as u32;
                } else {
                    open.insert(key, (c as u32, i));
                }
            }
        }
        debug_assert!(open.is_empty());
    }

    fn orient(&self, v: &[u32; N]) -> f64 {
        let p = |i: usize| &self.pts[v[i] as usize];
        if N == 3 {
            robust::orient2d(c2(p(0)), c2(p(1)), c2(p(2)))
        } else {
            robust::orient3d(c3(p(0)), c3(p(1)), c3(p(2)), c3(p(3)))
        }
    }

    fn in_sphere(&self, v: &[u32; N], q: u32) -> f64 {
        let p = |i: usize| &self.pts[v[i] as usize];
        let q = &self.pts[q as usize];
        if N == 3 {
            robust::incircle(c2(p(0)), c2(p(1)), c2(p(2)), c2(q))
        } else {
            robust::insphere(c3(p(0)), c3(p(1)), c3(p(2)), c3(p(3)), c3(q))
        }
    }

    fn conflicts(&self, c: u32, q: u32) -> Ins<bool> {
        let cell = self.cells[c as usize];
        let s = match cell.iter().position(|&v| v == GHOST) {
            Some(g) => {
                let mut t = cell;
                t[g] = q;
                self.orient(&t)
            }
            None => self.in_sphere(&cell, q),
        };
        if s == 0.0 {
            Err(Degenerate)
        } else {
            Ok(s > 0.0)
        }
    }

    fn next_rand(&mut self) -> usize {
        // xorshift64
        let mut x = self.walk_state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.walk_state = x;
        x as usize
    }

    /// A cell in conflict with `q`, found by a stochastic visibility walk.
    fn locate(&mut self, q: u32) -> Ins<u32> {
        let mut c = self.last;
        let budget = 4 * self.cells.len() + 64;
        'walk: for _ in 0..budget {
            let cell = self.cells[c as usize];
            if cell.contains(&GHOST) {
                return Ok(c);
            }
            let off = self.next_rand() % N;
            for k in 0..N {
                let i = (k + off) % N;
                let mut t = cell;
                t[i] = q;
                if self.orient(&t) < 0.0 {
                    c = self.nbr[c as usize][i];
                    continue 'walk;
                }
            }
            return Ok(c);
        }
        // The walk did not settle; fall back to a scan.
        for c in 0..self.cells.len() as u32 {
            if self.alive[c as usize] && self.conflicts(c, q)? {
                return Ok(c);
            }
        }
        Err(Degenerate)
    }

    fn insert(&mut self, q: u32) -> Ins<()> {
        let start = self.locate(q)?;
        if !self.conflicts(start, q)? {
            return Err(Degenerate);
        }
        self.epoch += 2;
        let (inside, outside) = (self.epoch, self.epoch + 1);
        let mut cavity = vec![start];
        self.mark[start as usize] = inside;
        let mut boundary: Vec<(u32, usize, u32)> = Vec::new();
        let mut head = 0;
        while head < cavity.len() {
            let c = cavity[head];
            head += 1;
            for i in 0..N {
                let n = self.nbr[c as usize][i];
                let m = self.mark[n as usize];
                if m == inside {
                    continue;
                }
                if m != outside && self.conflicts(n, q)? {
                    self.mark[n as usize] = inside;
                    cavity.push(n);
                } else {
                    self.mark[n as usize] = outside;
                    boundary.push((c, i, n));
                }
            }
        }

        let mut open: HashMap<[u32; 2], (u32, usize)> = HashMap::with_capacity(boundary.len() * N);
        let mut new_cells = Vec::with_capacity(boundary.len());
        for &(c, i, n) in &boundary {
            let mut cell = self.cells[c as usize];
            cell[i] = q;
            if !cell.contains(&GHOST) && self.orient(&cell) <= 0.0 {
                return Err(Degenerate);
            }
            new_cells.push((cell, i, c, n));
        }
        let mut last_finite = None;
        for (cell, i, c, n) in new_cells {
            let id = self.alloc(cell);
            self.nbr[id as usize][i] = n;
            let back = self.nbr[n as usize]
                .iter()
                .position(|&x| x == c)
                .ok_or(Degenerate)?;
            self.nbr[n as usize][back] = id;
            for j in 0..N {
                if j == i {
                    continue;
                }
                let mut key = [0u32; 2];
                let mut k = 0;
                for (pos, &v) in cell.iter().enumerate() {
                    if pos != i && pos != j {
                        key[k] = v;
                        k += 1;
                    }
                }
                key[..k].sort_unstable();
                if let Some((o, oj)) = open.remove(&key) {
                    self.nbr[id as usize][j] = o;
                    self.nbr[o as usize][oj] = id;
                } else {
                    open.insert(key, (id, j));
                }
            }
            if !cell.contains(&GHOST) {
                last_finite = Some(id);
            }
        }
        if !open.is_empty() {
            return Err(Degenerate);
        }
        for c in cavity {
            self.alive[c as usize] = false;
            self.free.push(c);
        }
        self.last = last_finite.ok_or(Degenerate)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_cloud(n: usize, dim: usize, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PointCloud::new(dim, (0..n * dim).map(|_| rng.gen::<f64>()).collect()).unwrap()
    }

    fn orient_sign(tri: &Triangulation, s: &Simplex) -> f64 {
        let v = tri.vertex_coords(s);
        if tri.dim() == 2 {
            (v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[1][1] - v[0][1]) * (v[2][0] - v[0][0])
        } else {
            let e = |i: usize| [v[i][0] - v[0][0], v[i][1] - v[0][1], v[i][2] - v[0][2]];
            let (a, b, c) = (e(1), e(2), e(3));
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0])
        }
    }

    /// Each (d-1)-face lies in one or two cells; hull facets have every
    /// vertex on their inner side.
    fn check_manifold_and_hull(tri: &Triangulation) {
        let d = tri.dim();
        let mut count = vec![0u32; tri.simplices(d - 1).len()];
        for i in 0..tri.top_cells().len() {
            for &f in tri.facets_of(d, i) {
                count[f as usize] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 1 || c == 2));
        let volume: f64 = tri.top_cells().iter().map(|c| orient_sign(tri, c).abs()).sum();
        assert!(volume > 0.0);
        for (fi, &c) in count.iter().enumerate() {
            if c != 1 {
                continue;
            }
            let f = tri.simplices(d - 1)[fi];
            let fv = tri.vertex_coords(&f);
            let mut sides = (0, 0);
            for &v in tri.vertices() {
                if f.contains(v) {
                    continue;
                }
                let p = tri.points().point(v as usize);
                let s = if d == 2 {
                    robust::orient2d(
                        Coord { x: fv[0][0], y: fv[0][1] },
                        Coord { x: fv[1][0], y: fv[1][1] },
                        Coord { x: p[0], y: p[1] },
                    )
                } else {
                    let q = |x: &[f64]| Coord3D { x: x[0], y: x[1], z: x[2] };
                    robust::orient3d(q(fv[0]), q(fv[1]), q(fv[2]), q(p))
                };
                if s > 0.0 {
                    sides.0 += 1;
                } else if s < 0.0 {
                    sides.1 += 1;
                }
            }
            assert!(sides.0 == 0 || sides.1 == 0, "hull facet {f:?} splits the points");
        }
    }

    #[test]
    fn square_gives_two_triangles() {
        let c = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let t = delaunay(&c).unwrap();
        assert_eq!(t.simplices(0).len(), 4);
        assert_eq!(t.simplices(1).len(), 5);
        assert_eq!(t.simplices(2).len(), 2);
        assert!(t.jittered(), "cocircular square needs the jitter");
        let again = delaunay(&c).unwrap();
        assert_eq!(t.top_cells(), again.top_cells());
    }

    #[test]
    fn single_tetrahedron() {
        let c = PointCloud::from_points(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
            .unwrap();
        let t = delaunay(&c).unwrap();
        assert_eq!(
            (0..=3).map(|k| t.simplices(k).len()).collect::<Vec<_>>(),
            vec![4, 6, 4, 1]
        );
        assert!(circumsphere_check(&t, 0.0).is_empty());
    }

    #[test]
    fn random_planar_disk() {
        let c = random_cloud(100, 2, 1);
        let t = delaunay(&c).unwrap();
        assert_eq!(t.euler_characteristic(), 1);
        let (v, e) = (t.simplices(0).len(), t.simplices(1).len());
        assert!(e <= 3 * v - 6);
        assert!(circumsphere_check(&t, 1e-7).is_empty());
        check_manifold_and_hull(&t);
    }

    #[test]
    fn random_spatial_ball() {
        for seed in 0..5 {
            let c = random_cloud(300, 3, seed);
            let t = delaunay(&c).unwrap();
            assert_eq!(t.euler_characteristic(), 1);
            assert!(circumsphere_check(&t, 1e-7).is_empty());
            check_manifold_and_hull(&t);
            for s in t.top_cells() {
                assert!(orient_sign(&t, s).abs() > 0.0);
            }
        }
    }

    #[test]
    fn same_seed_same_complex() {
        let c = random_cloud(200, 3, 7);
        let a = delaunay_with_seed(&c, 3).unwrap();
        let b = delaunay_with_seed(&c, 3).unwrap();
        for k in 0..=3 {
            assert_eq!(a.simplices(k), b.simplices(k));
        }
    }

    #[test]
    fn grid_input_is_jittered_and_valid() {
        let mut pts = Vec::new();
        for i in 0..6 {
            for j in 0..5 {
                for k in 0..4 {
                    pts.push([i as f64, j as f64, k as f64]);
                }
            }
        }
        let c = PointCloud::from_points(&pts).unwrap();
        let t = delaunay(&c).unwrap();
        assert!(t.jittered());
        assert_eq!(t.vertices().len(), 120);
        assert_eq!(t.euler_characteristic(), 1);
        assert!(circumsphere_check(&t, 1e-7).is_empty());
        check_manifold_and_hull(&t);
        let total: f64 = t.top_cells().iter().map(|s| orient_sign(&t, s).abs() / 6.0).sum();
        assert!((total - 5.0 * 4.0 * 3.0).abs() < 1e-6);
    }

    #[test]
    fn duplicates_are_dropped() {
        let c = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.3, 0.3]]).unwrap();
        let t = delaunay(&c).unwrap();
        assert_eq!(t.duplicates(), &[(3, 1)]);
        assert_eq!(t.vertices(), &[0, 1, 2, 4]);
    }

    #[test]
    fn affinely_dependent_input_is_rejected() {
        let line = PointCloud::from_points(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]).unwrap();
        assert!(matches!(delaunay(&line), Err(FloodError::Degenerate(_))));
        let plane = PointCloud::from_points(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]])
            .unwrap();
        assert!(matches!(delaunay(&plane), Err(FloodError::Degenerate(_))));
        let few = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]).unwrap();
        assert!(matches!(delaunay(&few), Err(FloodError::Degenerate(_))));
    }

    #[test]
    fn flipped_diagonal_is_reported() {
        // Not cocircular: the Delaunay diagonal is (1, 3).
        let c = PointCloud::from_points(&[[0.0, 0.0], [2.0, 0.0], [2.2, 1.0], [0.0, 1.0]]).unwrap();
        let good = delaunay(&c).unwrap();
        assert!(good.index_of(&Simplex::new(&[1, 3])).is_some());
        assert!(circumsphere_check(&good, 1e-9).is_empty());
        let bad = Triangulation::from_cells(c, &[Simplex::new(&[0, 1, 2]), Simplex::new(&[0, 2, 3])]).unwrap();
        let v = circumsphere_check(&bad, 1e-9);
        // The flip puts the opposite vertex inside the circumcircle of both triangles.
        assert_eq!(v.len(), 2);
        assert_eq!(
            v.iter().map(|x| (x.cell, x.point)).collect::<Vec<_>>(),
            vec![(0, 3), (1, 1)]
        );
    }

    #[test]
    fn facet_links_point_at_faces() {
        let c = random_cloud(40, 3, 3);
        let t = delaunay(&c).unwrap();
        for k in 1..=3 {
            for (i, s) in t.simplices(k).iter().enumerate() {
                let faces: Vec<Simplex> = t.facets_of(k, i).iter().map(|&f| t.simplices(k - 1)[f as usize]).collect();
                assert_eq!(faces, s.facets().collect::<Vec<_>>());
            }
        }
    }
}
