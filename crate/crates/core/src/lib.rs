//! Persistent homology of large Euclidean point clouds through the Flood complex.
//!
//! The Flood complex is a filtration on the Delaunay triangulation of a small
//! landmark set `L`. A simplex enters at the smallest radius `r` for which its
//! convex hull is covered by the union of radius-`r` balls around the full
//! point cloud `X`, i.e. at the directed Hausdorff distance from the hull to `X`.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: point clouds, farthest point sampling, enclosing balls,
//!   barycentric grids and Hausdorff distances.
//! * [`spatial`]: axis-sorted slabs and an exact k-d tree.
//! * [`delaunay`]: Bowyer–Watson triangulation in the plane and in space.
//! * [`filtration`]: masked, batched evaluation of flood filtration values.
//! * [`persistence`]: boundary-matrix reduction over Z/2 with clearing.
//! * [`metrics`]: bottleneck and Hausdorff distances.
//! * [`oracles`]: brute-force Čech filtration for small inputs.
//! * [`datagen`]: seeded synthetic point clouds.
//! * [`pipeline`]: the end-to-end run with a per-stage runtime breakdown.
//!
//! ```
//! use flood_core::datagen::{gen_circle, CircleMode};
//! use flood_core::filtration::FloodConfig;
//! use flood_core::pipeline::{flood_persistence, LandmarkSpec};
//!
//! let x = gen_circle(512, CircleMode::UniformAngle, 0).unwrap();
//! let cfg = FloodConfig { grid_resolution: 16, ..FloodConfig::default() };
//! let run = flood_persistence(&x, &LandmarkSpec::Fps { count: 12, start: 0 }, &cfg).unwrap();
//! assert_eq!(run.diagram.essential(1).count(), 0);
//! assert_eq!(run.diagram.finite(1).count(), 1);
//! ```

pub mod datagen;
pub mod delaunay;
pub mod error;
pub mod filtration;
pub mod geometry;
pub mod metrics;
pub mod oracles;
pub mod persistence;
pub mod pipeline;
pub mod simplex;
pub mod spatial;

pub use error::{FloodError, Result};
pub use geometry::PointCloud;
