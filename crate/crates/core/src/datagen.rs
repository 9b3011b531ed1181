//! Seeded synthetic point clouds. All generators draw from `ChaCha8Rng`,
//! whose output stream is fixed across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FloodError, Result};
use crate::geometry::{dist_sq, PointCloud};

/// Minimum gap between planted voids, and between a void and the box.
pub const VOID_MARGIN: f64 = 1e-3;
const MAX_PLACEMENT_TRIES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircleMode {
    /// Angles `2πj/n`.
    UniformAngle,
    /// Independent uniform angles.
    Random,
}

/// `n` points on the unit circle.
pub fn gen_circle(n: usize, mode: CircleMode, seed: u64) -> Result<PointCloud> {
    if n < 3 {
        return Err(FloodError::arg("circle needs at least 3 points"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n)
        .flat_map(|j| {
            let t = match mode {
                CircleMode::UniformAngle => std::f64::consts::TAU * j as f64 / n as f64,
                CircleMode::Random => rng.gen_range(0.0..std::f64::consts::TAU),
            };
            [t.cos(), t.sin()]
        })
        .collect();
    PointCloud::new(2, coords)
}

/// A ball removed from the swiss-cheese box.
#[derive(Clone, Debug, PartialEq)]
pub struct Void {
    pub center: [f64; 3],
    pub radius: f64,
}

impl Void {
    pub fn contains(&self, p: &[f64]) -> bool {
        dist_sq(p, &self.center) < self.radius * self.radius
    }
}

/// `n` uniform points in `[0, side]³` with `k` disjoint balls removed.
/// Radii are uniform in `radius_range`; every ball lies inside the box.
pub fn gen_swisscheese(
    n: usize,
    k: usize,
    side: f64,
    radius_range: (f64, f64),
    seed: u64,
) -> Result<(PointCloud, Vec<Void>)> {
    let (rmin, rmax) = radius_range;
    if n == 0 {
        return Err(FloodError::arg("swiss cheese needs at least one point"));
    }
    if !(side > 0.0 && rmin > 0.0 && rmin <= rmax && 2.0 * (rmax + VOID_MARGIN) < side) {
        return Err(FloodError::arg(format!(
            "invalid swiss cheese box {side} or radius range [{rmin}, {rmax}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut voids: Vec<Void> = Vec::with_capacity(k);
    let mut tries = 0;
    while voids.len() < k {
        tries += 1;
        if tries > MAX_PLACEMENT_TRIES {
            return Err(FloodError::Generation(format!(
                "placed {} of {k} disjoint voids after {MAX_PLACEMENT_TRIES} tries",
                voids.len()
            )));
        }
        let radius = if rmin == rmax { rmin } else { rng.gen_range(rmin..=rmax) };
        let lo = radius + VOID_MARGIN;
        let center = [(); 3].map(|_| rng.gen_range(lo..=side - lo));
        let clear = voids.iter().all(|v| {
            let gap = v.radius + radius + VOID_MARGIN;
            dist_sq(&v.center, &center) > gap * gap
        });
        if clear {
            voids.push(Void { center, radius });
        }
    }
    let mut coords = Vec::with_capacity(3 * n);
    let mut accepted = 0;
    while accepted < n {
        let p = [(); 3].map(|_| rng.gen_range(0.0..side));
        if !voids.iter().any(|v| v.contains(&p)) {
            coords.extend_from_slice(&p);
            accepted += 1;
        }
    }
    Ok((PointCloud::new(3, coords)?, voids))
}

/// `n` points uniform by area on the torus with radii `major > minor > 0`
/// around the z axis.
pub fn gen_torus(n: usize, major: f64, minor: f64, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(FloodError::arg("torus needs at least one point"));
    }
    if !(minor > 0.0 && minor < major) {
        return Err(FloodError::arg("torus needs 0 < minor < major"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(3 * n);
    while coords.len() < 3 * n {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let w = (major + minor * theta.cos()) / (major + minor);
        if rng.gen::<f64>() < w {
            let ring = major + minor * theta.cos();
            coords.extend_from_slice(&[ring * phi.cos(), ring * phi.sin(), minor * theta.sin()]);
        }
    }
    PointCloud::new(3, coords)
}

/// Uniform points in `[0, 1]^dim`.
pub fn gen_uniform_cube(n: usize, dim: usize, seed: u64) -> Result<PointCloud> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointCloud::new(dim, (0..n * dim).map(|_| rng.gen::<f64>()).collect())
}

/// FNV-1a over the coordinate bits; a stable fingerprint for generated data.
pub fn checksum(cloud: &PointCloud) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in cloud.coords() {
        for b in c.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_four_points() {
        let c = gen_circle(4, CircleMode::UniformAngle, 0).unwrap();
        let want = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        for (p, w) in c.iter().zip(want) {
            assert!(dist_sq(p, &w) < 1e-30);
        }
        assert!(gen_circle(2, CircleMode::UniformAngle, 0).is_err());
    }

    #[test]
    fn circle_norms_and_seeding() {
        let c = gen_circle(4096, CircleMode::UniformAngle, 0).unwrap();
        assert!(c.iter().all(|p| (dist_sq(p, &[0.0, 0.0]).sqrt() - 1.0).abs() < 1e-12));
        let a = gen_circle(100, CircleMode::Random, 5).unwrap();
        let b = gen_circle(100, CircleMode::Random, 5).unwrap();
        assert_eq!(checksum(&a), checksum(&b));
        assert_ne!(checksum(&a), checksum(&gen_circle(100, CircleMode::Random, 6).unwrap()));
    }

    #[test]
    fn swisscheese_voids_are_empty_and_disjoint() {
        let (x, voids) = gen_swisscheese(200_000, 10, 5.0, (0.1, 0.5), 7).unwrap();
        assert_eq!(x.len(), 200_000);
        assert_eq!(voids.len(), 10);
        for (i, v) in voids.iter().enumerate() {
            assert!((0.1..=0.5).contains(&v.radius));
            assert!(v.center.iter().all(|&c| c - v.radius > 0.0 && c + v.radius < 5.0));
            for w in &voids[i + 1..] {
                assert!(dist_sq(&v.center, &w.center).sqrt() > v.radius + w.radius);
            }
        }
        assert!(x.iter().all(|p| voids.iter().all(|v| !v.contains(p))));
        assert!(x.iter().all(|p| p.iter().all(|&c| (0.0..5.0).contains(&c))));
    }

    #[test]
    fn swisscheese_without_voids_and_impossible_packing() {
        let (x, voids) = gen_swisscheese(1000, 0, 5.0, (0.1, 0.5), 1).unwrap();
        assert_eq!((x.len(), voids.len()), (1000, 0));
        let err = gen_swisscheese(10, 50, 1.0, (0.4, 0.45), 1).unwrap_err();
        assert!(matches!(err, FloodError::Generation(_)));
    }

    #[test]
    fn torus_surface() {
        let t = gen_torus(5000, 2.0, 0.5, 3).unwrap();
        for p in t.iter() {
            let ring = (p[0] * p[0] + p[1] * p[1]).sqrt() - 2.0;
            assert!((ring * ring + p[2] * p[2] - 0.25).abs() < 1e-9);
        }
        assert_eq!(checksum(&t), checksum(&gen_torus(5000, 2.0, 0.5, 3).unwrap()));
        assert!(gen_torus(10, 0.5, 2.0, 0).is_err());
    }
}
