//! Seeded dataset and query generators. Every function is a pure function
//! of its seed, so benchmark runs and test scenarios reproduce exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aabb::Aabb;
use crate::boundary::{BoundaryCondition, CuboidCell};
use crate::error::GeometryError;

/// One object of a dataset file: an id plus a center-radius box, stored as
/// one JSON object per line in JSONL files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: u64,
    pub center: Vec<f64>,
    pub radius: Vec<f64>,
}

impl DatasetRecord {
    pub fn to_aabb(&self, boundary: &BoundaryCondition) -> Result<Aabb, GeometryError> {
        Aabb::new(self.center.clone(), self.radius.clone(), boundary)
    }
}

/// Boxes with centers uniform in the cell and radii uniform in
/// `[0, max_radius_fraction * L_k]` per axis. Ids run from 0.
pub fn uniform_records(
    seed: u64,
    count: usize,
    cell: &CuboidCell,
    max_radius_fraction: f64,
) -> Vec<DatasetRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = cell.dimension();
    (0..count as u64)
        .map(|id| {
            let center = (0..dim)
                .map(|k| rng.gen_range(cell.lower()[k]..cell.upper()[k]))
                .collect();
            let radius = (0..dim)
                .map(|k| rng.gen_range(0.0..max_radius_fraction * cell.period(k)))
                .collect();
            DatasetRecord { id, center, radius }
        })
        .collect()
}

/// Query boxes for a cell, `straddle_fraction` of which are guaranteed to
/// cross a cell face (their unwrapped extent pokes past a seam on one axis).
/// Returned as raw `(center, radius)` pairs so callers can canonicalize
/// them under either boundary mode.
pub fn query_boxes(
    seed: u64,
    count: usize,
    cell: &CuboidCell,
    straddle_fraction: f64,
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = cell.dimension();
    let straddlers = (count as f64 * straddle_fraction).ceil() as usize;
    (0..count)
        .map(|i| {
            let radius: Vec<f64> = (0..dim)
                .map(|k| rng.gen_range(0.02..0.2) * cell.period(k))
                .collect();
            let mut center: Vec<f64> = (0..dim)
                .map(|k| rng.gen_range(cell.lower()[k]..cell.upper()[k]))
                .collect();
            if i < straddlers {
                // park the center within one radius of a seam so the box
                // crosses it
                let axis = rng.gen_range(0..dim);
                let offset = rng.gen_range(-0.9..0.9) * radius[axis];
                center[axis] = cell.wrap_coordinate(axis, cell.lower()[axis] + offset);
            }
            (center, radius)
        })
        .collect()
}

/// The 2-D unit cell `[0, 10)^2` used by the demo scenarios.
pub fn demo_cell() -> CuboidCell {
    CuboidCell::new(vec![0.0, 0.0], vec![10.0, 10.0]).expect("static cell is valid")
}

/// Demo dataset: 20 boxes of radius at most 0.4 clustered within distance
/// 1.5 of the cell corner, ten on each side of the seam. Under the periodic
/// boundary this cluster is compact; treated as unbounded data it spans
/// nearly the whole cell, which is what makes the cover-volume comparison
/// interesting.
pub fn corner_cluster_records(seed: u64) -> Vec<DatasetRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cell = demo_cell();
    (0..20u64)
        .map(|id| {
            let radius: Vec<f64> = (0..2).map(|_| rng.gen_range(0.1..0.4)).collect();
            let near_lower_corner = id % 2 == 0;
            let center = (0..2)
                .map(|k| {
                    let offset = rng.gen_range(0.05f64..1.4);
                    let raw = if near_lower_corner {
                        cell.lower()[k] + offset
                    } else {
                        cell.upper()[k] - offset
                    };
                    cell.wrap_coordinate(k, raw)
                })
                .collect();
            DatasetRecord { id, center, radius }
        })
        .collect()
}
