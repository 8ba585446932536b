use serde::{Deserialize, Serialize};

use super::front::FrontMatrix;
use crate::pareto::nondominated_indices;
use crate::{Error, Objectives, Result};

/// Per-objective bounds of a min-max normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min: Objectives,
    pub max: Objectives,
}

impl Bounds {
    pub fn of(points: &[Objectives]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("front union"));
        }
        let mut b = Bounds { min: [f64::INFINITY; 3], max: [f64::NEG_INFINITY; 3] };
        for p in points {
            for k in 0..3 {
                b.min[k] = b.min[k].min(p[k]);
                b.max[k] = b.max[k].max(p[k]);
            }
        }
        Ok(b)
    }

    /// Maps into [0, 1] per objective; a degenerate objective maps to 0.5.
    pub fn apply(&self, p: &Objectives) -> Objectives {
        [0, 1, 2].map(|k| {
            let span = self.max[k] - self.min[k];
            if span > 0.0 {
                (p[k] - self.min[k]) / span
            } else {
                0.5
            }
        })
    }

    pub fn apply_front(&self, f: &FrontMatrix) -> FrontMatrix {
        FrontMatrix { points: f.points.iter().map(|p| self.apply(p)).collect(), ..f.clone() }
    }
}

/// Min-max normalizes every front with bounds taken over their union.
pub fn normalize_fronts(fronts: &[FrontMatrix]) -> Result<(Vec<FrontMatrix>, Bounds)> {
    let all: Vec<Objectives> = fronts.iter().flat_map(|f| f.points.iter().copied()).collect();
    let b = Bounds::of(&all)?;
    Ok((fronts.iter().map(|f| b.apply_front(f)).collect(), b))
}

fn dist(a: &Objectives, b: &Objectives) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Mean distance from each reference point to its nearest approximation point.
pub fn igd(f_true: &FrontMatrix, f_app: &FrontMatrix) -> Result<f64> {
    if f_true.is_empty() || f_app.is_empty() {
        return Err(Error::Empty("front"));
    }
    let total: f64 = f_true
        .points
        .iter()
        .map(|v| f_app.points.iter().map(|a| dist(v, a)).fold(f64::INFINITY, f64::min))
        .sum();
    Ok(total / f_true.len() as f64)
}

/// Area dominated by `pts` (maximization) above the reference corner.
fn hv2(pts: &mut [[f64; 2]], r: [f64; 2]) -> f64 {
    pts.sort_by(|a, b| b[0].total_cmp(&a[0]));
    let mut best_y = r[1];
    let mut area = 0.0;
    for p in pts.iter() {
        if p[1] > best_y {
            area += (p[0] - r[0]) * (p[1] - best_y);
            best_y = p[1];
        }
    }
    area
}

/// Exact hypervolume of the region dominated by `points` and bounded below
/// by `z_ref` (all objectives maximized). Points not strictly above `z_ref`
/// in every objective contribute nothing.
pub fn hv3(points: &[Objectives], z_ref: Objectives) -> f64 {
    let mut pts: Vec<Objectives> = points
        .iter()
        .filter(|p| (0..3).all(|k| p[k] > z_ref[k]))
        .copied()
        .collect();
    if pts.is_empty() {
        return 0.0;
    }
    pts.sort_by(|a, b| b[2].total_cmp(&a[2]));
    let mut volume = 0.0;
    let mut slab: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    let mut i = 0;
    while i < pts.len() {
        let level = pts[i][2];
        while i < pts.len() && pts[i][2] == level {
            slab.push([pts[i][0], pts[i][1]]);
            i += 1;
        }
        let next = if i < pts.len() { pts[i][2] } else { z_ref[2] };
        volume += hv2(&mut slab, [z_ref[0], z_ref[1]]) * (level - next);
    }
    volume
}

/// Nondominated filter over the union of all fronts.
pub fn build_reference_front(fronts: &[FrontMatrix]) -> Result<FrontMatrix> {
    let union = FrontMatrix::union(fronts);
    if union.is_empty() {
        return Err(Error::Empty("front union"));
    }
    Ok(union.select(&nondominated_indices(&union.points)))
}
