//! Simulation-domain boundaries: either unbounded space or a periodic cuboid
//! unit cell, together with the position-wrapping and minimum-image-vector
//! primitives everything else is built on.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// A position: one coordinate per axis.
pub type Point = Vec<f64>;
/// A displacement: one component per axis.
pub type Vector = Vec<f64>;

/// A cuboid periodic unit cell `[lower, upper)` with per-axis period
/// `L_k = upper_k - lower_k`.
///
/// The lower corner does not have to be the origin. Only axis-aligned cuboids
/// are supported; triclinic cells are out of scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCell")]
pub struct CuboidCell {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Deserialize)]
struct RawCell {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TryFrom<RawCell> for CuboidCell {
    type Error = GeometryError;

    fn try_from(raw: RawCell) -> Result<Self, Self::Error> {
        CuboidCell::new(raw.lower, raw.upper)
    }
}

impl CuboidCell {
    /// Creates a cell spanning `[lower_k, upper_k)` on every axis.
    ///
    /// Fails if the corners differ in dimension, contain non-finite values,
    /// or any axis has `upper_k <= lower_k`.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, GeometryError> {
        if lower.is_empty() {
            return Err(GeometryError::EmptyDimension);
        }
        if lower.len() != upper.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if !all_finite(&lower) || !all_finite(&upper) {
            return Err(GeometryError::NonFinite { what: "cell corner" });
        }
        for (axis, (lo, up)) in lower.iter().zip(&upper).enumerate() {
            if up <= lo || !(up - lo).is_finite() {
                return Err(GeometryError::DegenerateCell { axis });
            }
        }
        Ok(CuboidCell { lower, upper })
    }

    /// A cube `[lower, upper)` replicated over `dimension` axes.
    pub fn cube(lower: f64, upper: f64, dimension: usize) -> Result<Self, GeometryError> {
        CuboidCell::new(vec![lower; dimension], vec![upper; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Period `L_k` of the given axis.
    #[inline]
    pub fn period(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    /// Half the period of the given axis; a box radius of exactly this value
    /// covers the whole axis.
    #[inline]
    pub fn half_period(&self, axis: usize) -> f64 {
        0.5 * self.period(axis)
    }

    /// Wraps a single coordinate into `[lower_k, upper_k)`.
    #[inline]
    pub fn wrap_coordinate(&self, axis: usize, x: f64) -> f64 {
        let lower = self.lower[axis];
        let r = (x - lower).rem_euclid(self.period(axis)) + lower;
        // rem_euclid may land exactly on the period after rounding; the cell
        // is half-open, so the upper edge maps to the lower one.
        if r >= self.upper[axis] {
            lower
        } else {
            r
        }
    }

    /// Minimum-image representative of a single displacement component,
    /// in `[-L_k/2, +L_k/2)`.
    #[inline]
    pub fn min_image(&self, axis: usize, d: f64) -> f64 {
        let half = self.half_period(axis);
        let r = (d + half).rem_euclid(self.period(axis)) - half;
        if r >= half {
            -half
        } else {
            r
        }
    }
}

/// The boundary condition of the indexed domain.
///
/// `Unbounded` leaves all coordinates untouched, so every operation built on
/// top degenerates to its plain textbook form. `Periodic` wraps positions
/// into the unit cell and maps displacements to their minimum image. Mixed
/// per-axis conditions are not supported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundaryCondition {
    Unbounded,
    Periodic(CuboidCell),
}

impl BoundaryCondition {
    /// Convenience constructor for a periodic cuboid boundary.
    pub fn periodic(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, GeometryError> {
        Ok(BoundaryCondition::Periodic(CuboidCell::new(lower, upper)?))
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, BoundaryCondition::Periodic(_))
    }

    /// The unit cell, if periodic.
    pub fn cell(&self) -> Option<&CuboidCell> {
        match self {
            BoundaryCondition::Unbounded => None,
            BoundaryCondition::Periodic(cell) => Some(cell),
        }
    }

    /// Dimension constrained by this boundary; `None` when unbounded
    /// (compatible with any dimension).
    pub fn dimension(&self) -> Option<usize> {
        self.cell().map(CuboidCell::dimension)
    }

    pub(crate) fn check_dimension(&self, dim: usize) -> Result<(), GeometryError> {
        match self.dimension() {
            Some(expected) if expected != dim => {
                Err(GeometryError::DimensionMismatch { expected, got: dim })
            }
            _ => Ok(()),
        }
    }

    /// Half-period of an axis, or `None` when unbounded.
    #[inline]
    pub fn half_period(&self, axis: usize) -> Option<f64> {
        self.cell().map(|c| c.half_period(axis))
    }

    /// Wraps one coordinate into the cell; identity when unbounded.
    #[inline]
    pub fn wrap_axis(&self, axis: usize, x: f64) -> f64 {
        match self {
            BoundaryCondition::Unbounded => x,
            BoundaryCondition::Periodic(cell) => cell.wrap_coordinate(axis, x),
        }
    }

    /// Minimum-image component of a displacement; identity when unbounded.
    #[inline]
    pub fn min_image_axis(&self, axis: usize, d: f64) -> f64 {
        match self {
            BoundaryCondition::Unbounded => d,
            BoundaryCondition::Periodic(cell) => cell.min_image(axis, d),
        }
    }

    /// Wraps a position into the unit cell: the unique image with
    /// `p'_k` in `[lower_k, upper_k)` on every axis. Identity when unbounded.
    pub fn restrict_position(&self, p: &[f64]) -> Result<Point, GeometryError> {
        self.check_vector(p, "position")?;
        Ok((0..p.len()).map(|k| self.wrap_axis(k, p[k])).collect())
    }

    /// Minimum-image convention: maps each displacement component to its
    /// periodic representative in `[-L_k/2, +L_k/2)`. Identity when unbounded.
    pub fn restrict_vector(&self, v: &[f64]) -> Result<Vector, GeometryError> {
        self.check_vector(v, "displacement")?;
        Ok((0..v.len()).map(|k| self.min_image_axis(k, v[k])).collect())
    }

    fn check_vector(&self, v: &[f64], what: &'static str) -> Result<(), GeometryError> {
        if v.is_empty() {
            return Err(GeometryError::EmptyDimension);
        }
        if !all_finite(v) {
            return Err(GeometryError::NonFinite { what });
        }
        self.check_dimension(v.len())
    }
}

pub(crate) fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}
