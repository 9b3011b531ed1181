//! Compact simplex keys shared by the triangulation, filtration and reduction code.

use std::fmt;

/// Largest number of vertices a stored simplex may have (a tetrahedron).
pub const MAX_VERTICES: usize = 4;

/// A simplex of dimension at most 3, stored as a sorted vertex tuple.
///
/// The derived order compares the vertex count first and then the vertices
/// lexicographically, which is the tie-break used in filtration order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    len: u8,
    verts: [u32; MAX_VERTICES],
}

impl Simplex {
    /// Builds a simplex from distinct vertex ids in any order.
    ///
    /// Panics if the slice is empty, too long, or has repeated ids.
    pub fn new(vertices: &[u32]) -> Self {
        assert!(
            !vertices.is_empty() && vertices.len() <= MAX_VERTICES,
            "simplex must have 1..={MAX_VERTICES} vertices"
        );
        let mut verts = [u32::MAX; MAX_VERTICES];
        verts[..vertices.len()].copy_from_slice(vertices);
        verts[..vertices.len()].sort_unstable();
        assert!(
            verts[..vertices.len()].windows(2).all(|w| w[0] < w[1]),
            "simplex vertices must be distinct"
        );
        Simplex {
            len: vertices.len() as u8,
            verts,
        }
    }

    pub fn vertex(v: u32) -> Self {
        Simplex::new(&[v])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.len as usize - 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn vertices(&self) -> &[u32] {
        &self.verts[..self.len as usize]
    }

    /// Codimension-one faces, the `i`-th one omitting the `i`-th vertex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.len();
        (0..if n > 1 { n } else { 0 }).map(move |skip| {
            let mut verts = [u32::MAX; MAX_VERTICES];
            let mut k = 0;
            for (i, &v) in self.vertices().iter().enumerate() {
                if i != skip {
                    verts[k] = v;
                    k += 1;
                }
            }
            Simplex {
                len: (n - 1) as u8,
                verts,
            }
        })
    }

    /// The face spanned by the local vertex positions set in `mask`.
    pub fn face(&self, mask: u32) -> Simplex {
        let mut verts = [u32::MAX; MAX_VERTICES];
        let mut k = 0;
        for (i, &v) in self.vertices().iter().enumerate() {
            if mask & (1 << i) != 0 {
                verts[k] = v;
                k += 1;
            }
        }
        assert!(k > 0, "empty face mask");
        Simplex { len: k as u8, verts }
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vertices().binary_search(&v).is_ok()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.vertices())
    }
}
