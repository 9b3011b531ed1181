//! End-to-end Flood persistent homology with a per-stage runtime breakdown.

use std::time::Instant;

use crate::delaunay::{self, Triangulation};
use crate::error::Result;
use crate::filtration::{self, FilteredComplex, FloodConfig};
use crate::geometry::{farthest_point_sampling, PointCloud};
use crate::persistence::{boundary_matrix, reduce_and_extract_with, PersistenceDiagram, ReductionOptions};

pub use crate::filtration::LandmarkSpec;

/// Stage names in reporting order.
pub const STAGES: [&str; 6] = [
    "Landmark select.",
    "Delaunay triang.",
    "Masking",
    "Filtration",
    "PH computation",
    "Other",
];

/// Wall-clock seconds per stage; `other` is the remainder of the total.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimings {
    pub landmarks: f64,
    pub delaunay: f64,
    pub masking: f64,
    pub filtration: f64,
    pub persistence: f64,
    pub other: f64,
}

impl StageTimings {
    pub fn total(&self) -> f64 {
        self.seconds().iter().sum()
    }

    pub fn seconds(&self) -> [f64; 6] {
        [
            self.landmarks,
            self.delaunay,
            self.masking,
            self.filtration,
            self.persistence,
            self.other,
        ]
    }

    /// `(stage, seconds, percent of total)` rows.
    pub fn rows(&self) -> Vec<(&'static str, f64, f64)> {
        let total = self.total();
        STAGES
            .iter()
            .zip(self.seconds())
            .map(|(&name, s)| (name, s, if total > 0.0 { 100.0 * s / total } else { 0.0 }))
            .collect()
    }

    pub fn add(&mut self, other: &StageTimings) {
        self.landmarks += other.landmarks;
        self.delaunay += other.delaunay;
        self.masking += other.masking;
        self.filtration += other.filtration;
        self.persistence += other.persistence;
        self.other += other.other;
    }
}

pub struct FloodRun {
    pub diagram: PersistenceDiagram,
    pub complex: FilteredComplex,
    pub triangulation: Triangulation,
    /// Indices of the landmarks in `X`, unless they were given externally.
    pub landmark_indices: Option<Vec<usize>>,
    /// Largest grid covering bound over the maximal simplices (0 for random samplers).
    pub grid_bound: f64,
    pub timings: StageTimings,
}

pub fn flood_persistence(x: &PointCloud, landmarks: &LandmarkSpec, config: &FloodConfig) -> Result<FloodRun> {
    flood_persistence_with(x, landmarks, config, ReductionOptions::default())
}

pub fn flood_persistence_with(
    x: &PointCloud,
    landmarks: &LandmarkSpec,
    config: &FloodConfig,
    opts: ReductionOptions,
) -> Result<FloodRun> {
    config.validate()?;
    let start = Instant::now();
    let mut t = StageTimings::default();

    let t0 = Instant::now();
    let (l, indices, in_x) = match landmarks {
        LandmarkSpec::Fps { count, start } => {
            let idx = farthest_point_sampling(x, *count, *start)?;
            (x.select(&idx)?, Some(idx), true)
        }
        LandmarkSpec::Indices(idx) => (x.select(idx)?, Some(idx.clone()), true),
        LandmarkSpec::External(_) => {
            let (l, in_x) = filtration::resolve_landmarks(x, landmarks)?;
            (l, None, in_x)
        }
    };
    t.landmarks = t0.elapsed().as_secs_f64();

    let t0 = Instant::now();
    let tri = delaunay::delaunay_with_seed(&l, config.delaunay_seed)?;
    t.delaunay = t0.elapsed().as_secs_f64();

    let (values, ft) = filtration::flood_values(&tri, x, config, in_x)?;
    t.masking = ft.masking;
    t.filtration = ft.filtration;
    let complex = filtration::filtered_complex(&tri, &values)?;

    let t0 = Instant::now();
    let bm = boundary_matrix(&complex)?;
    let diagram = reduce_and_extract_with(&bm, &complex, opts);
    t.persistence = t0.elapsed().as_secs_f64();

    let grid_bound = match config.sampler {
        filtration::Sampler::Grid => filtration::max_grid_bound(&tri, config.grid_resolution),
        filtration::Sampler::UniformRandom { .. } => 0.0,
    };
    let total = start.elapsed().as_secs_f64();
    let accounted = t.landmarks + t.delaunay + t.masking + t.filtration + t.persistence;
    t.other = (total - accounted).max(0.0);

    Ok(FloodRun {
        diagram,
        complex,
        triangulation: tri,
        landmark_indices: indices,
        grid_bound,
        timings: t,
    })
}
