//! Ground-truth query answering by exhaustive linear scan, plus an
//! image-replication overlap test that is independent of the minimum-image
//! code path. The scan uses the same predicates as the tree, so agreement
//! checks isolate the tree's descent logic; `image_overlap` instead
//! enumerates translated copies of one box and tests plain interval
//! overlap, validating the predicates themselves.

use crate::aabb::Aabb;
use crate::boundary::{BoundaryCondition, CuboidCell};
use crate::error::RTreeError;
use crate::rtree::ObjectId;

/// A flat list of `(id, box)` pairs answering queries in O(N).
#[derive(Debug, Clone)]
pub struct FlatStore {
    boundary: BoundaryCondition,
    items: Vec<(ObjectId, Aabb)>,
}

impl FlatStore {
    pub fn new(boundary: BoundaryCondition) -> Self {
        FlatStore {
            boundary,
            items: Vec::new(),
        }
    }

    pub fn boundary(&self) -> &BoundaryCondition {
        &self.boundary
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn insert(&mut self, id: ObjectId, aabb: Aabb) -> Result<(), RTreeError> {
        if self.items.iter().any(|(existing, _)| *existing == id) {
            return Err(RTreeError::DuplicateId(id.0));
        }
        self.items.push((id, aabb));
        Ok(())
    }

    /// Ids of all stored boxes intersecting `q`, ascending.
    pub fn scan_intersects(&self, q: &Aabb) -> Vec<ObjectId> {
        let mut out: Vec<ObjectId> = self
            .items
            .iter()
            .filter(|(_, aabb)| q.intersects(aabb, &self.boundary))
            .map(|(id, _)| *id)
            .collect();
        out.sort_unstable();
        out
    }

    /// Ids of all stored boxes lying inside `q`, ascending.
    pub fn scan_within(&self, q: &Aabb) -> Vec<ObjectId> {
        let mut out: Vec<ObjectId> = self
            .items
            .iter()
            .filter(|(_, aabb)| q.contains_aabb(aabb, &self.boundary))
            .map(|(id, _)| *id)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn scan_intersects_batch(&self, queries: &[Aabb]) -> Vec<Vec<ObjectId>> {
        crate::map_batch(queries, |q| self.scan_intersects(q))
    }

    pub fn scan_within_batch(&self, queries: &[Aabb]) -> Vec<Vec<ObjectId>> {
        crate::map_batch(queries, |q| self.scan_within(q))
    }
}

/// Overlap test by explicit image replication: translates `r2` by every
/// offset in `{-L, 0, +L}` per axis (3^D images) and checks plain min/max
/// interval overlap against `r1`'s unwrapped interval.
///
/// Deliberately avoids the minimum-image arithmetic so it can serve as an
/// independent oracle for [`Aabb::intersects`]. Intended for small `D`.
pub fn image_overlap(r1: &Aabb, r2: &Aabb, cell: &CuboidCell) -> bool {
    let dim = r1.dimension();
    debug_assert_eq!(dim, r2.dimension());
    debug_assert!(dim <= 16, "image enumeration grows as 3^D");
    let images = 3usize.pow(dim as u32);
    'image: for code in 0..images {
        let mut digits = code;
        for k in 0..dim {
            let offset = ((digits % 3) as f64 - 1.0) * cell.period(k);
            digits /= 3;
            let lo1 = r1.center()[k] - r1.radius()[k];
            let hi1 = r1.center()[k] + r1.radius()[k];
            let lo2 = r2.center()[k] + offset - r2.radius()[k];
            let hi2 = r2.center()[k] + offset + r2.radius()[k];
            if lo2 > hi1 || hi2 < lo1 {
                continue 'image;
            }
        }
        return true;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic_1d() -> BoundaryCondition {
        BoundaryCondition::periodic(vec![0.0], vec![10.0]).unwrap()
    }

    fn aabb(c: f64, r: f64, b: &BoundaryCondition) -> Aabb {
        Aabb::new(vec![c], vec![r], b).unwrap()
    }

    #[test]
    fn empty_store_returns_nothing() {
        let store = FlatStore::new(periodic_1d());
        let q = aabb(5.0, 1.0, store.boundary());
        assert!(store.scan_intersects(&q).is_empty());
        assert!(store.scan_within(&q).is_empty());
    }

    #[test]
    fn single_matching_object() {
        let b = periodic_1d();
        let mut store = FlatStore::new(b.clone());
        let q = aabb(5.0, 1.0, &b);
        store.insert(ObjectId(7), q.clone()).unwrap();
        assert_eq!(store.scan_intersects(&q), vec![ObjectId(7)]);
        assert_eq!(store.scan_within(&q), vec![ObjectId(7)]);
    }

    #[test]
    fn boundary_straddling_query_hits_both_sides() {
        let b = periodic_1d();
        let mut store = FlatStore::new(b.clone());
        store.insert(ObjectId(1), aabb(0.5, 0.4, &b)).unwrap();
        store.insert(ObjectId(2), aabb(9.5, 0.4, &b)).unwrap();
        store.insert(ObjectId(3), aabb(5.0, 0.4, &b)).unwrap();
        let q = aabb(0.0, 1.0, &b);
        assert_eq!(store.scan_intersects(&q), vec![ObjectId(1), ObjectId(2)]);
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let b = periodic_1d();
        let mut store = FlatStore::new(b.clone());
        store.insert(ObjectId(1), aabb(1.0, 0.1, &b)).unwrap();
        assert!(matches!(
            store.insert(ObjectId(1), aabb(2.0, 0.1, &b)),
            Err(RTreeError::DuplicateId(1))
        ));
    }

    #[test]
    fn image_overlap_examples() {
        let b = periodic_1d();
        let cell = b.cell().unwrap();
        let r = aabb(3.0, 1.0, &b);
        assert!(image_overlap(&r, &r, cell));
        // cross-seam hit through the image at -0.5
        assert!(image_overlap(
            &aabb(0.5, 0.5, &b),
            &aabb(9.5, 0.6, &b),
            cell
        ));
        assert!(!image_overlap(
            &aabb(0.5, 0.5, &b),
            &aabb(9.5, 0.4, &b),
            cell
        ));
    }

    #[test]
    fn image_overlap_agrees_with_intersects_in_2d() {
        let b = BoundaryCondition::periodic(vec![0.0, 0.0], vec![8.0, 12.0]).unwrap();
        let cell = b.cell().unwrap();
        let mk = |c: [f64; 2], r: [f64; 2]| Aabb::new(c.to_vec(), r.to_vec(), &b).unwrap();
        let cases = [
            (mk([0.2, 0.3], [0.5, 0.5]), mk([7.9, 11.9], [0.5, 0.5])),
            (mk([0.2, 6.0], [0.5, 0.5]), mk([7.9, 6.2], [0.5, 0.5])),
            (mk([4.0, 6.0], [1.0, 1.0]), mk([6.5, 6.0], [1.0, 1.0])),
            (mk([4.0, 6.0], [1.0, 1.0]), mk([6.5, 9.0], [1.0, 1.0])),
        ];
        for (r1, r2) in &cases {
            assert_eq!(r1.intersects(r2, &b), image_overlap(r1, r2, cell));
        }
    }
}
