//! # periodic-rtree
//!
//! A spatial index for domains with periodic boundary conditions. The tree
//! is a classic Guttman R-tree with quadratic splits; what changes is the
//! box arithmetic: covers are expanded and overlap is detected through
//! minimum-image displacements, so finite-sized objects and queries that
//! straddle the unit-cell seam are indexed and found without replicating
//! any object or query. With an unbounded boundary the same code is a plain
//! R-tree.
//!
//! The crate also ships an exhaustive linear-scan oracle ([`FlatStore`])
//! answering the same queries with the same predicates, plus an
//! image-replication overlap check ([`oracle::image_overlap`]) that is
//! independent of the minimum-image code path; together they back the
//! randomized equivalence tests.
//!
//! ## Example
//!
//! ```
//! use periodic_rtree::{Aabb, BoundaryCondition, ObjectId, RTree};
//!
//! let boundary = BoundaryCondition::periodic(vec![0.0], vec![10.0])?;
//! let mut tree = RTree::new(1, boundary, 2, 4)?;
//! tree.insert(ObjectId(1), tree.aabb(vec![0.5], vec![0.4])?)?;
//! tree.insert(ObjectId(2), tree.aabb(vec![9.5], vec![0.4])?)?;
//! tree.insert(ObjectId(3), tree.aabb(vec![5.0], vec![0.4])?)?;
//!
//! // a query across the seam finds the objects on both sides
//! let q = tree.aabb(vec![0.0], vec![1.0])?;
//! assert_eq!(tree.query_intersects(&q)?, vec![ObjectId(1), ObjectId(2)]);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! ## Feature flags
//!
//! * `parallel` (default): batch queries (`query_*_batch`, `scan_*_batch`)
//!   fan out over the rayon thread pool. Disable it for a fully sequential
//!   build; the API is identical.

pub mod aabb;
pub mod boundary;
pub mod dataset;
mod error;
pub mod oracle;
pub mod rtree;
pub mod snapshot;

pub use aabb::{Aabb, MinMaxBox};
pub use boundary::{BoundaryCondition, CuboidCell, Point, Vector};
pub use error::{GeometryError, RTreeError, SnapshotError};
pub use oracle::FlatStore;
pub use rtree::{ObjectId, QueryStats, RTree, Violation};
pub use snapshot::TreeSnapshot;

/// Maps a function over a slice, in parallel when the `parallel` feature is
/// enabled. Output order always matches input order.
#[cfg(feature = "parallel")]
pub(crate) fn map_batch<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_batch<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
