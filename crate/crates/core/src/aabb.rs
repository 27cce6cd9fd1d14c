//! Center-radius axis-aligned bounding boxes and the periodic-aware
//! geometric operations on them: expansion to contain another box or a
//! point, intersection and containment predicates, and the volume metric
//! the tree's split heuristics use.
//!
//! Boxes are stored as a canonical center (wrapped into the unit cell when
//! the boundary is periodic) plus per-axis half-widths. A half-width equal
//! to half the cell period means the box covers that whole axis. All
//! operations act per axis: boxes relate on the whole iff they relate on
//! every axis.

use crate::boundary::{all_finite, BoundaryCondition};
use crate::error::GeometryError;

/// An axis-aligned box in center-radius form.
///
/// Invariants (enforced on construction): all components finite, radii
/// non-negative, and under a periodic boundary the center lies inside the
/// unit cell and each radius is at most half the axis period.
#[derive(Debug, Clone, PartialEq)]
pub struct Aabb {
    center: Vec<f64>,
    radius: Vec<f64>,
}

/// Corner (min/max) form of a box; interchange format only.
///
/// `min` and `max` are raw, unwrapped coordinates with `min_k <= max_k`;
/// under a periodic boundary they may lie outside the cell (e.g. a box from
/// 9 to 12 in a `[0, 10)` cell straddles the seam).
#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxBox {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl Aabb {
    /// Builds a box from a center and per-axis half-widths.
    ///
    /// The center is wrapped into the unit cell. A radius larger than half
    /// the axis period is clamped to exactly half (full-axis coverage) with
    /// a logged warning; a negative or non-finite component is an error.
    pub fn new(
        center: Vec<f64>,
        radius: Vec<f64>,
        boundary: &BoundaryCondition,
    ) -> Result<Self, GeometryError> {
        if center.is_empty() {
            return Err(GeometryError::EmptyDimension);
        }
        if center.len() != radius.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: center.len(),
                got: radius.len(),
            });
        }
        if !all_finite(&center) || !all_finite(&radius) {
            return Err(GeometryError::NonFinite { what: "box" });
        }
        boundary.check_dimension(center.len())?;
        for (axis, r) in radius.iter().enumerate() {
            if *r < 0.0 {
                return Err(GeometryError::NegativeExtent { axis });
            }
        }
        let mut aabb = Aabb { center, radius };
        aabb.canonicalize(boundary);
        Ok(aabb)
    }

    /// A zero-radius box at `p`.
    pub fn point(p: Vec<f64>, boundary: &BoundaryCondition) -> Result<Self, GeometryError> {
        let radius = vec![0.0; p.len()];
        Aabb::new(p, radius, boundary)
    }

    fn canonicalize(&mut self, boundary: &BoundaryCondition) {
        for k in 0..self.center.len() {
            self.center[k] = boundary.wrap_axis(k, self.center[k]);
            if let Some(half) = boundary.half_period(k) {
                if self.radius[k] > half {
                    log::warn!(
                        "box radius {} on axis {k} exceeds half the cell period; \
                         clamped to full-axis coverage ({half})",
                        self.radius[k]
                    );
                    self.radius[k] = half;
                }
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> &[f64] {
        &self.radius
    }

    /// Corner form of this box, *without* wrapping: `min = center - radius`
    /// may lie below the cell's lower corner for a seam-straddling box.
    /// Round-trips through [`MinMaxBox::to_aabb`] up to floating tolerance.
    pub fn min_max(&self) -> MinMaxBox {
        let min = (0..self.dimension())
            .map(|k| self.center[k] - self.radius[k])
            .collect();
        let max = (0..self.dimension())
            .map(|k| self.center[k] + self.radius[k])
            .collect();
        MinMaxBox { min, max }
    }

    /// Expands this box just enough to contain `other`, transposing `other`
    /// to its nearest periodic image first.
    ///
    /// Per axis: with `dc` the minimum-image offset between the centers, the
    /// union interval runs from `min(c1-r1, (c1+dc)-r2)` to
    /// `max(c1+r1, (c1+dc)+r2)`; its midpoint (wrapped) and half-width
    /// (clamped to half the period) give the result. The result contains
    /// both inputs in the sense of [`Aabb::contains_aabb`].
    pub fn expand_to_contain(&self, other: &Aabb, boundary: &BoundaryCondition) -> Aabb {
        debug_assert_eq!(self.dimension(), other.dimension());
        let dim = self.dimension();
        let mut center = Vec::with_capacity(dim);
        let mut radius = Vec::with_capacity(dim);
        for k in 0..dim {
            let dc = boundary.min_image_axis(k, other.center[k] - self.center[k]);
            let transposed = self.center[k] + dc;
            let lo = (self.center[k] - self.radius[k]).min(transposed - other.radius[k]);
            let hi = (self.center[k] + self.radius[k]).max(transposed + other.radius[k]);
            center.push(boundary.wrap_axis(k, 0.5 * (lo + hi)));
            radius.push(clamp_radius(0.5 * (hi - lo), boundary.half_period(k)));
        }
        let mut out = Aabb { center, radius };
        ensure_contains_aabb(&mut out, self, boundary);
        ensure_contains_aabb(&mut out, other, boundary);
        out
    }

    /// Expands this box just enough to contain the point `p` (transposed to
    /// its nearest periodic image). The result contains `p` in the sense of
    /// [`Aabb::contains_point`] and still contains this box.
    pub fn expand_to_contain_point(&self, p: &[f64], boundary: &BoundaryCondition) -> Aabb {
        debug_assert_eq!(self.dimension(), p.len());
        let dim = self.dimension();
        let mut center = Vec::with_capacity(dim);
        let mut radius = Vec::with_capacity(dim);
        for (k, pk) in p.iter().enumerate() {
            let dc = boundary.min_image_axis(k, pk - self.center[k]);
            let transposed = self.center[k] + dc;
            let lo = (self.center[k] - self.radius[k]).min(transposed);
            let hi = (self.center[k] + self.radius[k]).max(transposed);
            center.push(boundary.wrap_axis(k, 0.5 * (lo + hi)));
            radius.push(clamp_radius(0.5 * (hi - lo), boundary.half_period(k)));
        }
        let mut out = Aabb { center, radius };
        ensure_contains_aabb(&mut out, self, boundary);
        ensure_contains_point(&mut out, p, boundary);
        out
    }

    /// True iff the boxes overlap on every axis:
    /// `|min_image(c1_k - c2_k)| <= r1_k + r2_k` (inclusive; touching counts).
    pub fn intersects(&self, other: &Aabb, boundary: &BoundaryCondition) -> bool {
        debug_assert_eq!(self.dimension(), other.dimension());
        (0..self.dimension()).all(|k| {
            let dc = boundary.min_image_axis(k, self.center[k] - other.center[k]);
            dc.abs() <= self.radius[k] + other.radius[k]
        })
    }

    /// True iff `inner` lies inside this box on every axis:
    /// `|min_image(c_out_k - c_in_k)| <= r_out_k - r_in_k` (inclusive).
    /// An axis fully covered by this box (radius = half period) passes
    /// regardless of `inner`.
    pub fn contains_aabb(&self, inner: &Aabb, boundary: &BoundaryCondition) -> bool {
        debug_assert_eq!(self.dimension(), inner.dimension());
        (0..self.dimension()).all(|k| self.contains_aabb_axis(inner, boundary, k))
    }

    #[inline]
    fn contains_aabb_axis(&self, inner: &Aabb, boundary: &BoundaryCondition, k: usize) -> bool {
        if let Some(half) = boundary.half_period(k) {
            if self.radius[k] >= half {
                return true;
            }
        }
        let dc = boundary.min_image_axis(k, self.center[k] - inner.center[k]);
        dc.abs() <= self.radius[k] - inner.radius[k]
    }

    /// True iff the point lies inside this box:
    /// `|min_image(c_k - p_k)| <= r_k` per axis (inclusive).
    pub fn contains_point(&self, p: &[f64], boundary: &BoundaryCondition) -> bool {
        debug_assert_eq!(self.dimension(), p.len());
        (0..self.dimension()).all(|k| self.contains_point_axis(p, boundary, k))
    }

    #[inline]
    fn contains_point_axis(&self, p: &[f64], boundary: &BoundaryCondition, k: usize) -> bool {
        let dc = boundary.min_image_axis(k, self.center[k] - p[k]);
        dc.abs() <= self.radius[k]
    }

    /// Product of edge lengths; under a periodic boundary each edge is
    /// capped at the axis period.
    pub fn volume(&self, boundary: &BoundaryCondition) -> f64 {
        (0..self.dimension())
            .map(|k| {
                let edge = 2.0 * self.radius[k];
                match boundary.cell() {
                    Some(cell) => edge.min(cell.period(k)),
                    None => edge,
                }
            })
            .product()
    }

    /// Volume growth needed to also cover `add`; never negative.
    pub fn enlargement(&self, add: &Aabb, boundary: &BoundaryCondition) -> f64 {
        let expanded = self.expand_to_contain(add, boundary);
        (expanded.volume(boundary) - self.volume(boundary)).max(0.0)
    }

    /// Componentwise approximate equality, comparing centers through the
    /// minimum image so that near-seam canonical forms still match.
    pub fn approx_eq(&self, other: &Aabb, boundary: &BoundaryCondition, tol: f64) -> bool {
        if self.dimension() != other.dimension() {
            return false;
        }
        (0..self.dimension()).all(|k| {
            let dc = boundary.min_image_axis(k, self.center[k] - other.center[k]);
            dc.abs() <= tol && (self.radius[k] - other.radius[k]).abs() <= tol
        })
    }

    /// Snapshot loading keeps stored components verbatim; callers are
    /// responsible for validating them.
    pub(crate) fn from_raw_parts(center: Vec<f64>, radius: Vec<f64>) -> Aabb {
        Aabb { center, radius }
    }

    /// Whether this box satisfies the canonical-form invariants under the
    /// given boundary (finite, radii in range, center inside the cell).
    pub(crate) fn is_canonical_under(&self, boundary: &BoundaryCondition) -> Option<usize> {
        for k in 0..self.dimension() {
            if !self.center[k].is_finite() || !self.radius[k].is_finite() || self.radius[k] < 0.0 {
                return Some(k);
            }
            if let Some(cell) = boundary.cell() {
                if self.center[k] < cell.lower()[k]
                    || self.center[k] >= cell.upper()[k]
                    || self.radius[k] > cell.half_period(k)
                {
                    return Some(k);
                }
            }
        }
        None
    }
}

impl MinMaxBox {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Self {
        MinMaxBox { min, max }
    }

    /// Converts to the canonical center-radius form: the midpoint is wrapped
    /// into the cell, the half-extent becomes the radius. A negative extent
    /// is an error; an extent longer than the axis period is clamped to
    /// full-axis coverage with a logged warning.
    pub fn to_aabb(&self, boundary: &BoundaryCondition) -> Result<Aabb, GeometryError> {
        if self.min.len() != self.max.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.min.len(),
                got: self.max.len(),
            });
        }
        if !all_finite(&self.min) || !all_finite(&self.max) {
            return Err(GeometryError::NonFinite { what: "corner box" });
        }
        for (axis, (lo, hi)) in self.min.iter().zip(&self.max).enumerate() {
            if hi < lo {
                return Err(GeometryError::NegativeExtent { axis });
            }
        }
        let center = (0..self.min.len())
            .map(|k| 0.5 * (self.min[k] + self.max[k]))
            .collect();
        let radius = (0..self.min.len())
            .map(|k| 0.5 * (self.max[k] - self.min[k]))
            .collect();
        Aabb::new(center, radius, boundary)
    }
}

#[inline]
fn clamp_radius(r: f64, half_period: Option<f64>) -> f64 {
    match half_period {
        Some(half) if r > half => half,
        _ => r,
    }
}

/// Grows `out`'s radii by the minimum number of ulps needed so that
/// `out.contains_aabb(inner)` holds under the exact inclusive predicate.
/// Midpoint/half-width rounding can otherwise lose containment by one ulp
/// for the entry that defines an edge of the union.
pub(crate) fn ensure_contains_aabb(out: &mut Aabb, inner: &Aabb, boundary: &BoundaryCondition) {
    for k in 0..out.dimension() {
        let half = boundary.half_period(k);
        let mut steps = 0u64;
        while !out.contains_aabb_axis(inner, boundary, k) {
            steps += 1;
            if steps > 10_000 {
                panic!(
                    "guard spin: axis {k} out={:?}/{:?} inner={:?}/{:?} half={half:?}",
                    out.center, out.radius, inner.center, inner.radius
                );
            }
            if !grow_axis(&mut out.radius[k], half) {
                break;
            }
        }
    }
}

/// Point counterpart of [`ensure_contains_aabb`].
pub(crate) fn ensure_contains_point(out: &mut Aabb, p: &[f64], boundary: &BoundaryCondition) {
    for k in 0..out.dimension() {
        let half = boundary.half_period(k);
        while !out.contains_point_axis(p, boundary, k) {
            if !grow_axis(&mut out.radius[k], half) {
                break;
            }
        }
    }
}

/// One ulp step up, saturating at half the period (full-axis coverage).
/// Returns false once the radius cannot grow further.
#[inline]
fn grow_axis(r: &mut f64, half_period: Option<f64>) -> bool {
    let next = r.next_up();
    match half_period {
        Some(half) => {
            if *r >= half {
                return false;
            }
            *r = next.min(half);
            true
        }
        None => {
            *r = next;
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryCondition;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn periodic_1d() -> BoundaryCondition {
        BoundaryCondition::periodic(vec![0.0], vec![10.0]).unwrap()
    }

    fn aabb(c: f64, r: f64, b: &BoundaryCondition) -> Aabb {
        Aabb::new(vec![c], vec![r], b).unwrap()
    }

    #[test]
    fn corner_form_to_center_radius() {
        let b = periodic_1d();
        let a = MinMaxBox::new(vec![2.0], vec![4.0]).to_aabb(&b).unwrap();
        assert_eq!(a.center(), &[3.0]);
        assert_eq!(a.radius(), &[1.0]);

        // straddles the seam: midpoint 10.5 wraps to 0.5
        let a = MinMaxBox::new(vec![9.0], vec![12.0]).to_aabb(&b).unwrap();
        assert_eq!(a.center(), &[0.5]);
        assert_eq!(a.radius(), &[1.5]);

        let a = MinMaxBox::new(vec![0.0], vec![0.0]).to_aabb(&b).unwrap();
        assert_eq!(a.center(), &[0.0]);
        assert_eq!(a.radius(), &[0.0]);
    }

    #[test]
    fn corner_form_negative_extent_is_rejected() {
        let b = periodic_1d();
        assert!(matches!(
            MinMaxBox::new(vec![4.0], vec![2.0]).to_aabb(&b),
            Err(GeometryError::NegativeExtent { axis: 0 })
        ));
    }

    #[test]
    fn oversized_extent_clamps_to_full_axis() {
        let b = periodic_1d();
        let a = MinMaxBox::new(vec![0.0], vec![13.0]).to_aabb(&b).unwrap();
        assert_eq!(a.radius(), &[5.0]);
    }

    #[test]
    fn min_max_is_unwrapped() {
        let b = periodic_1d();
        let mm = aabb(3.0, 1.0, &b).min_max();
        assert_eq!((mm.min[0], mm.max[0]), (2.0, 4.0));
        let mm = aabb(0.5, 1.5, &b).min_max();
        assert_eq!((mm.min[0], mm.max[0]), (-1.0, 2.0));
        let mm = aabb(0.0, 0.0, &b).min_max();
        assert_eq!((mm.min[0], mm.max[0]), (0.0, 0.0));
    }

    #[test]
    fn expand_is_identity_on_self() {
        let b = periodic_1d();
        let r = aabb(1.0, 1.0, &b);
        let e = r.expand_to_contain(&r, &b);
        assert_eq!(e, r);
    }

    #[test]
    fn expand_crosses_the_seam() {
        let b = periodic_1d();
        let r1 = aabb(1.0, 1.0, &b);
        let r2 = aabb(9.0, 0.5, &b);
        let e = r1.expand_to_contain(&r2, &b);
        assert_abs_diff_eq!(e.center()[0], 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(e.radius()[0], 1.75, epsilon = 1e-12);
        assert!(e.contains_aabb(&r1, &b));
        assert!(e.contains_aabb(&r2, &b));
    }

    #[test]
    fn expand_clamps_to_full_axis_when_union_wraps_around() {
        let b = periodic_1d();
        let r1 = aabb(1.0, 3.0, &b);
        let r2 = aabb(6.0, 3.0, &b);
        let e = r1.expand_to_contain(&r2, &b);
        assert_eq!(e.radius(), &[5.0]);
        assert!(e.contains_aabb(&r1, &b));
        assert!(e.contains_aabb(&r2, &b));
    }

    #[test]
    fn expand_unbounded_takes_plain_union() {
        let b = BoundaryCondition::Unbounded;
        let r1 = aabb(1.0, 1.0, &b);
        let r2 = aabb(9.0, 0.5, &b);
        let e = r1.expand_to_contain(&r2, &b);
        assert_abs_diff_eq!(e.center()[0], 4.75, epsilon = 1e-12);
        assert_abs_diff_eq!(e.radius()[0], 4.75, epsilon = 1e-12);
    }

    #[test]
    fn expand_to_contain_point_cases() {
        let b = periodic_1d();
        let r = aabb(1.0, 1.0, &b);
        // point already inside: unchanged
        let e = r.expand_to_contain_point(&[1.5], &b);
        assert_eq!(e, r);
        // point across the seam
        let e = r.expand_to_contain_point(&[9.0], &b);
        assert_abs_diff_eq!(e.center()[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(e.radius()[0], 1.5, epsilon = 1e-12);
        assert!(e.contains_point(&[9.0], &b));
        // zero-size identity
        let r0 = aabb(5.0, 0.0, &b);
        let e = r0.expand_to_contain_point(&[5.0], &b);
        assert_eq!(e, r0);
    }

    #[test]
    fn intersects_across_the_seam() {
        let b = periodic_1d();
        let r = aabb(2.0, 1.0, &b);
        assert!(r.intersects(&r, &b));
        assert!(aabb(0.5, 0.5, &b).intersects(&aabb(9.5, 0.6, &b), &b));
        assert!(!aabb(0.5, 0.5, &b).intersects(&aabb(9.5, 0.4, &b), &b));
        // touching boxes count (inclusive comparison)
        assert!(aabb(2.0, 1.0, &b).intersects(&aabb(4.0, 1.0, &b), &b));
    }

    #[test]
    fn containment_across_the_seam() {
        let b = periodic_1d();
        let r = aabb(3.0, 1.0, &b);
        assert!(r.contains_aabb(&r, &b));
        assert!(aabb(0.0, 2.0, &b).contains_aabb(&aabb(9.0, 0.5, &b), &b));
        assert!(!aabb(0.0, 2.0, &b).contains_aabb(&aabb(9.0, 1.5, &b), &b));
    }

    #[test]
    fn full_axis_outer_contains_anything() {
        let b = periodic_1d();
        let outer = aabb(0.0, 5.0, &b);
        assert!(outer.contains_aabb(&aabb(5.0, 1.0, &b), &b));
        assert!(outer.contains_aabb(&aabb(9.9, 4.0, &b), &b));
    }

    #[test]
    fn point_membership_across_the_seam() {
        let b = periodic_1d();
        let r = aabb(0.5, 1.0, &b);
        assert!(r.contains_point(&[0.5], &b));
        assert!(r.contains_point(&[9.8], &b));
        assert!(!r.contains_point(&[9.2], &b));
    }

    #[test]
    fn volume_cases() {
        let b2 = BoundaryCondition::Unbounded;
        let a = Aabb::new(vec![0.0, 0.0], vec![1.0, 2.0], &b2).unwrap();
        assert_eq!(a.volume(&b2), 8.0);

        let b = periodic_1d();
        assert_eq!(aabb(2.0, 5.0, &b).volume(&b), 10.0);
        assert_eq!(aabb(2.0, 0.0, &b).volume(&b), 0.0);
    }

    #[test]
    fn enlargement_cases() {
        let b = periodic_1d();
        let r = aabb(1.0, 1.0, &b);
        assert_eq!(r.enlargement(&r, &b), 0.0);
        let add = aabb(9.0, 0.5, &b);
        assert_abs_diff_eq!(r.enlargement(&add, &b), 1.5, epsilon = 1e-12);
        // a full-axis box cannot grow
        let full = aabb(0.0, 5.0, &b);
        assert_eq!(full.enlargement(&add, &b), 0.0);
    }

    #[test]
    fn invalid_boxes_are_rejected() {
        let b = periodic_1d();
        assert!(Aabb::new(vec![1.0], vec![-0.1], &b).is_err());
        assert!(Aabb::new(vec![f64::NAN], vec![1.0], &b).is_err());
        assert!(Aabb::new(vec![1.0, 2.0], vec![1.0], &b).is_err());
        assert!(Aabb::new(vec![], vec![], &b).is_err());
        // dimension mismatch against the boundary
        assert!(Aabb::new(vec![1.0, 1.0], vec![0.5, 0.5], &b).is_err());
    }

    #[test]
    fn centers_are_canonicalized() {
        let b = periodic_1d();
        let a = Aabb::new(vec![12.5], vec![1.0], &b).unwrap();
        assert_eq!(a.center(), &[2.5]);
        let a = Aabb::new(vec![-0.5], vec![7.0], &b).unwrap();
        assert_eq!(a.center(), &[9.5]);
        assert_eq!(a.radius(), &[5.0]); // clamped
    }

    #[test]
    fn approx_eq_matches_across_the_seam() {
        let b = periodic_1d();
        let a1 = aabb(0.0, 1.0, &b);
        let a2 = Aabb::new(vec![10.0 - 1e-12], vec![1.0], &b).unwrap();
        assert!(a1.approx_eq(&a2, &b, 1e-9));
        assert!(!a1.approx_eq(&aabb(0.1, 1.0, &b), &b, 1e-9));
    }

    // ---- randomized invariants ----------------------------------------

    fn arb_boundary(dim: usize) -> impl Strategy<Value = BoundaryCondition> {
        prop_oneof![
            Just(BoundaryCondition::Unbounded),
            (
                proptest::collection::vec(-10.0f64..10.0, dim),
                proptest::collection::vec(1.0f64..25.0, dim),
            )
                .prop_map(|(lower, len)| {
                    let upper = lower.iter().zip(&len).map(|(l, s)| l + s).collect();
                    BoundaryCondition::periodic(lower, upper).unwrap()
                }),
        ]
    }

    fn arb_aabb(dim: usize, b: BoundaryCondition) -> impl Strategy<Value = (Aabb, BoundaryCondition)> {
        (
            proptest::collection::vec(-40.0f64..40.0, dim),
            proptest::collection::vec(0.0f64..8.0, dim),
        )
            .prop_map(move |(c, r)| (Aabb::new(c, r, &b).unwrap(), b.clone()))
    }

    fn arb_pair(dim: usize) -> impl Strategy<Value = (Aabb, Aabb, BoundaryCondition)> {
        arb_boundary(dim).prop_flat_map(move |b| {
            (arb_aabb(dim, b.clone()), arb_aabb(dim, b))
                .prop_map(|((a1, b), (a2, _))| (a1, a2, b))
        })
    }

    proptest! {
        #[test]
        fn expansion_contains_both_inputs((r1, r2, b) in arb_pair(2)) {
            let e = r1.expand_to_contain(&r2, &b);
            prop_assert!(e.contains_aabb(&r1, &b));
            prop_assert!(e.contains_aabb(&r2, &b));
        }

        #[test]
        fn point_expansion_contains_both((r, other, b) in arb_pair(2)) {
            let p = other.center().to_vec();
            let e = r.expand_to_contain_point(&p, &b);
            prop_assert!(e.contains_aabb(&r, &b));
            prop_assert!(e.contains_point(&p, &b));
        }

        #[test]
        fn intersection_is_symmetric((r1, r2, b) in arb_pair(3)) {
            prop_assert_eq!(r1.intersects(&r2, &b), r2.intersects(&r1, &b));
        }

        #[test]
        fn containment_implies_intersection((r1, r2, b) in arb_pair(2)) {
            let e = r1.expand_to_contain(&r2, &b);
            // e contains r1 by construction, and r1 has some extent
            prop_assert!(e.intersects(&r1, &b));
            prop_assert!(e.intersects(&r2, &b));
        }

        #[test]
        fn point_and_zero_box_agree((r, other, b) in arb_pair(3)) {
            let p = other.center().to_vec();
            let as_box = Aabb::point(p.clone(), &b).unwrap();
            prop_assert_eq!(r.contains_point(&p, &b), r.intersects(&as_box, &b));
        }

        #[test]
        fn expansion_never_shrinks_volume((r1, r2, b) in arb_pair(2)) {
            let e = r1.expand_to_contain(&r2, &b);
            let ev = e.volume(&b);
            let tol = 1e-9 * ev.max(1.0);
            prop_assert!(ev >= r1.volume(&b) - tol);
            prop_assert!(ev >= r2.volume(&b) - tol);
        }

        #[test]
        fn predicates_are_translation_equivariant(
            (r1, r2, b) in arb_pair(2),
            shift in proptest::collection::vec(-15.0f64..15.0, 2),
        ) {
            let translate = |a: &Aabb| {
                let c = (0..2).map(|k| a.center()[k] + shift[k]).collect();
                Aabb::new(c, a.radius().to_vec(), &b).unwrap()
            };
            let (t1, t2) = (translate(&r1), translate(&r2));
            if b.is_periodic() {
                prop_assert_eq!(r1.intersects(&r2, &b), t1.intersects(&t2, &b));
                prop_assert_eq!(r1.contains_aabb(&r2, &b), t1.contains_aabb(&t2, &b));
            }
        }

        #[test]
        fn containment_is_transitive_for_small_boxes(
            lower in proptest::collection::vec(-5.0f64..5.0, 2),
            len in proptest::collection::vec(4.0f64..20.0, 2),
            c in proptest::collection::vec(-20.0f64..20.0, 2),
            r_inner in proptest::collection::vec(0.0f64..0.5, 2),
            grow1 in proptest::collection::vec(0.0f64..0.5, 2),
            grow2 in proptest::collection::vec(0.0f64..0.5, 2),
            off1 in proptest::collection::vec(-0.5f64..0.5, 2),
            off2 in proptest::collection::vec(-0.5f64..0.5, 2),
        ) {
            // nested boxes with all radii < L/4 (the unclamped regime)
            let upper = lower.iter().zip(&len).map(|(l, s)| l + s).collect();
            let b = BoundaryCondition::periodic(lower, upper).unwrap();
            let inner = Aabb::new(c.clone(), r_inner.clone(), &b).unwrap();
            let mid_c: Vec<f64> = (0..2).map(|k| c[k] + off1[k] * grow1[k]).collect();
            let mid_r: Vec<f64> = (0..2).map(|k| r_inner[k] + grow1[k].abs() + off1[k].abs() * grow1[k]).collect();
            let mid = Aabb::new(mid_c.clone(), mid_r.clone(), &b).unwrap();
            let outer_c: Vec<f64> = (0..2).map(|k| mid_c[k] + off2[k] * grow2[k]).collect();
            let outer_r: Vec<f64> = (0..2).map(|k| mid_r[k] + grow2[k].abs() + off2[k].abs() * grow2[k]).collect();
            let outer = Aabb::new(outer_c, outer_r, &b).unwrap();
            if mid.contains_aabb(&inner, &b) && outer.contains_aabb(&mid, &b) {
                prop_assert!(outer.contains_aabb(&inner, &b));
            }
        }
    }
}
