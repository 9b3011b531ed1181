//! Brute-force Čech filtration for small point sets.
//!
//! A subset enters at the radius of its minimum enclosing ball. By the nerve
//! theorem its persistent homology is that of the union of balls around `X`,
//! which is what the flood filtration on `Del(X)` reproduces.

use crate::error::{FloodError, Result};
use crate::filtration::{FilteredComplex, FilteredSimplex};
use crate::geometry::{dist, EnclosingBall, PointCloud};
use crate::simplex::{Simplex, MAX_VERTICES};

/// Largest point cloud accepted by [`cech_filtration`].
pub const CECH_MAX_POINTS: usize = 24;
pub const CECH_MAX_DIM: usize = 3;

const CONTAIN_TOL: f64 = 1e-12;

/// Smallest ball with all of `boundary` on its sphere, centred in their
/// affine hull. `None` if the points are affinely dependent.
fn circumball(boundary: &[&[f64]]) -> Option<EnclosingBall> {
    let p0 = *boundary.first()?;
    let k = boundary.len() - 1;
    if k == 0 {
        return Some(EnclosingBall {
            center: p0.to_vec(),
            radius: 0.0,
        });
    }
    // Centre c = p0 + Σ λ_i u_i with u_i = p_i - p0 and u_i·(c - p0) = |u_i|²/2.
    let u: Vec<Vec<f64>> = boundary[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut m: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row: Vec<f64> = (0..k).map(|j| dot(&u[i], &u[j])).collect();
            row.push(dot(&u[i], &u[i]) / 2.0);
            row
        })
        .collect();
    let scale = m.iter().map(|r| r[..k].iter().fold(0.0f64, |a, &b| a.max(b.abs()))).fold(0.0, f64::max);
    for col in 0..k {
        let piv = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, piv);
        for r in 0..k {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=k {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    let mut center = p0.to_vec();
    for i in 0..k {
        let lambda = m[i][k] / m[i][i];
        for (c, ui) in center.iter_mut().zip(&u[i]) {
            *c += lambda * ui;
        }
    }
    let radius = boundary.iter().map(|p| dist(p, &center)).fold(0.0, f64::max);
    Some(EnclosingBall { center, radius })
}

fn welzl<'a>(points: &[&'a [f64]], boundary: &mut Vec<&'a [f64]>, dim: usize) -> EnclosingBall {
    if points.is_empty() || boundary.len() == dim + 1 {
        return match boundary.len() {
            0 => EnclosingBall {
                center: vec![0.0; dim],
                radius: -1.0,
            },
            _ => circumball(boundary).unwrap_or_else(|| farthest_pair_ball(boundary)),
        };
    }
    let (p, rest) = points.split_last().expect("non-empty");
    let ball = welzl(rest, boundary, dim);
    if ball.radius >= 0.0 && dist(p, &ball.center) <= ball.radius * (1.0 + CONTAIN_TOL) + CONTAIN_TOL {
        return ball;
    }
    boundary.push(p);
    let ball = welzl(rest, boundary, dim);
    boundary.pop();
    ball
}

fn farthest_pair_ball(points: &[&[f64]]) -> EnclosingBall {
    let mut best = (0, 0, -1.0);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = dist(points[i], points[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let (a, b) = (points[best.0], points[best.1]);
    EnclosingBall {
        center: a.iter().zip(b).map(|(x, y)| (x + y) / 2.0).collect(),
        radius: best.2.max(0.0) / 2.0,
    }
}

/// Exact minimum enclosing ball of a small point set.
pub fn min_enclosing_ball<P: AsRef<[f64]>>(points: &[P]) -> Result<EnclosingBall> {
    let pts: Vec<&[f64]> = points.iter().map(AsRef::as_ref).collect();
    let dim = pts
        .first()
        .ok_or_else(|| FloodError::arg("enclosing ball of an empty set"))?
        .len();
    if pts.iter().any(|p| p.len() != dim) {
        return Err(FloodError::arg("points have different dimensions"));
    }
    Ok(welzl(&pts, &mut Vec::with_capacity(dim + 1), dim))
}

/// Čech filtration of `x` up to dimension `max_dim`, refusing inputs with
/// more than [`CECH_MAX_POINTS`] points.
pub fn cech_filtration(x: &PointCloud, max_dim: usize) -> Result<FilteredComplex> {
    cech_filtration_with_limit(x, max_dim, CECH_MAX_POINTS)
}

/// As [`cech_filtration`] with an explicit size guard.
pub fn cech_filtration_with_limit(x: &PointCloud, max_dim: usize, limit: usize) -> Result<FilteredComplex> {
    if x.len() > limit {
        return Err(FloodError::Guard(format!(
            "Čech oracle refuses {} points (limit {limit})",
            x.len()
        )));
    }
    if max_dim > CECH_MAX_DIM {
        return Err(FloodError::Guard(format!(
            "Čech oracle refuses max_dim {max_dim} (limit {CECH_MAX_DIM})"
        )));
    }
    let n = x.len() as u32;
    let mut out: Vec<FilteredSimplex> = (0..n)
        .map(|v| FilteredSimplex {
            simplex: Simplex::vertex(v),
            value: 0.0,
        })
        .collect();
    let mut prev: std::collections::HashMap<Simplex, f64> = out.iter().map(|s| (s.simplex, 0.0)).collect();
    let mut level: Vec<Vec<u32>> = (0..n).map(|v| vec![v]).collect();
    for _ in 1..=max_dim.min(MAX_VERTICES - 1) {
        let mut next_level = Vec::new();
        let mut next = std::collections::HashMap::new();
        for s in &level {
            for v in s.last().unwrap() + 1..n {
                let mut t = s.clone();
                t.push(v);
                let simplex = Simplex::new(&t);
                let pts: Vec<&[f64]> = t.iter().map(|&i| x.point(i as usize)).collect();
                let meb = min_enclosing_ball(&pts)?.radius;
                // Rounding can put a coface a hair below a face; clamp to keep
                // the filtration monotone.
                let value = simplex.facets().map(|f| prev[&f]).fold(meb, f64::max);
                next.insert(simplex, value);
                out.push(FilteredSimplex { simplex, value });
                next_level.push(t);
            }
        }
        level = next_level;
        prev = next;
    }
    FilteredComplex::new(out)
}
