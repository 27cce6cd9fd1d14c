//! Guttman R-tree with quadratic node splitting, parameterized by a
//! [`BoundaryCondition`]. Every cover expansion, enlargement metric, and
//! overlap decision goes through the periodic-aware box operations, which is
//! the only difference from the textbook structure: under an unbounded
//! boundary this degenerates to a plain R-tree.

use std::collections::HashSet;
use std::fmt;
use std::mem;

use serde::{Deserialize, Serialize};

use crate::aabb::{ensure_contains_aabb, Aabb};
use crate::boundary::BoundaryCondition;
use crate::error::RTreeError;

/// Component tolerance used when matching the box given to `remove`
/// against stored entries.
pub const BOX_MATCH_TOLERANCE: f64 = 1e-9;

/// Opaque caller-supplied object identifier, unique within one tree.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct ObjectId(pub u64);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub(crate) aabb: Aabb,
    pub(crate) payload: Payload,
}

#[derive(Debug, Clone)]
pub(crate) enum Payload {
    Object(ObjectId),
    Node(Box<Node>),
}

impl Entry {
    fn child_entries(&self) -> Option<&[Entry]> {
        match &self.payload {
            Payload::Object(_) => None,
            Payload::Node(node) => Some(&node.entries),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    /// 0 for leaves; every child of a level-`l` node sits at level `l - 1`.
    pub(crate) level: u32,
    pub(crate) entries: Vec<Entry>,
}

/// Counters filled in by the `*_with_stats` query variants.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct QueryStats {
    pub nodes_visited: usize,
    pub entries_tested: usize,
}

/// One broken structural invariant, reported by [`RTree::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Node path from the root, e.g. `root.2.0`.
    pub path: String,
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.rule, self.path, self.message)
    }
}

/// R-tree over axis-aligned boxes with native periodic-boundary support.
#[derive(Debug, Clone)]
pub struct RTree {
    dimension: usize,
    min_entries: usize,
    max_entries: usize,
    boundary: BoundaryCondition,
    root: Node,
    count: usize,
    ids: HashSet<ObjectId>,
}

impl RTree {
    /// Creates an empty tree.
    ///
    /// Occupancy bounds follow Guttman: `2 <= min_entries` and
    /// `min_entries <= ceil(max_entries / 2)`. The boundary's dimension, if
    /// it has one, must match `dimension`.
    pub fn new(
        dimension: usize,
        boundary: BoundaryCondition,
        min_entries: usize,
        max_entries: usize,
    ) -> Result<Self, RTreeError> {
        if min_entries < 2 || min_entries > max_entries.div_ceil(2) {
            return Err(RTreeError::InvalidOccupancy {
                min: min_entries,
                max: max_entries,
            });
        }
        if dimension == 0 {
            return Err(RTreeError::Geometry(
                crate::error::GeometryError::EmptyDimension,
            ));
        }
        boundary.check_dimension(dimension)?;
        Ok(RTree {
            dimension,
            min_entries,
            max_entries,
            boundary,
            root: Node {
                level: 0,
                entries: Vec::new(),
            },
            count: 0,
            ids: HashSet::new(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn boundary(&self) -> &BoundaryCondition {
        &self.boundary
    }

    pub fn min_entries(&self) -> usize {
        self.min_entries
    }

    pub fn max_entries(&self) -> usize {
        self.max_entries
    }

    /// Number of stored objects.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Number of levels; 1 for a tree that is a single leaf.
    pub fn depth(&self) -> usize {
        self.root.level as usize + 1
    }

    pub fn contains_id(&self, id: ObjectId) -> bool {
        self.ids.contains(&id)
    }

    /// Convenience: builds a box canonical under this tree's boundary.
    pub fn aabb(&self, center: Vec<f64>, radius: Vec<f64>) -> Result<Aabb, RTreeError> {
        Ok(Aabb::new(center, radius, &self.boundary)?)
    }

    /// Inserts `(id, aabb)`. The id must be new and the box canonical under
    /// the tree's boundary (any box built against the same boundary is).
    pub fn insert(&mut self, id: ObjectId, aabb: Aabb) -> Result<(), RTreeError> {
        self.check_canonical(&aabb)?;
        if self.ids.contains(&id) {
            return Err(RTreeError::DuplicateId(id.0));
        }
        let entry = Entry {
            aabb,
            payload: Payload::Object(id),
        };
        self.insert_entry_at_level(entry, 0);
        self.ids.insert(id);
        self.count += 1;
        Ok(())
    }

    /// Removes the entry matching `id` whose stored box equals `aabb` within
    /// [`BOX_MATCH_TOLERANCE`] per component. Returns whether anything was
    /// removed; a miss (unknown id, different box, wrong dimension) is not
    /// an error.
    pub fn remove(&mut self, id: ObjectId, aabb: &Aabb) -> bool {
        if aabb.dimension() != self.dimension || !self.ids.contains(&id) {
            return false;
        }
        let mut orphans = Vec::new();
        let removed = remove_rec(
            &self.boundary,
            self.min_entries,
            &mut self.root,
            id,
            aabb,
            &mut orphans,
        );
        if !removed {
            debug_assert!(orphans.is_empty());
            return false;
        }
        self.ids.remove(&id);
        self.count -= 1;
        // reinsert entries of eliminated nodes at their original level
        for (level, entry) in orphans {
            self.insert_entry_at_level(entry, level);
        }
        // the root loses a level when it is internal with a single child
        while self.root.level > 0 && self.root.entries.len() == 1 {
            match self.root.entries.pop().map(|e| e.payload) {
                Some(Payload::Node(child)) => self.root = *child,
                _ => unreachable!("internal nodes hold child payloads"),
            }
        }
        true
    }

    /// Ids of all stored boxes intersecting `q`, ascending.
    pub fn query_intersects(&self, q: &Aabb) -> Result<Vec<ObjectId>, RTreeError> {
        Ok(self.query_intersects_with_stats(q)?.0)
    }

    /// Ids of all stored boxes contained in `q`, ascending.
    pub fn query_within(&self, q: &Aabb) -> Result<Vec<ObjectId>, RTreeError> {
        Ok(self.query_within_with_stats(q)?.0)
    }

    pub fn query_intersects_with_stats(
        &self,
        q: &Aabb,
    ) -> Result<(Vec<ObjectId>, QueryStats), RTreeError> {
        self.check_query_dimension(q)?;
        let mut out = Vec::new();
        let mut stats = QueryStats::default();
        self.search(
            &self.root,
            q,
            &|aabb| q.intersects(aabb, &self.boundary),
            &mut out,
            &mut stats,
        );
        out.sort_unstable();
        Ok((out, stats))
    }

    pub fn query_within_with_stats(
        &self,
        q: &Aabb,
    ) -> Result<(Vec<ObjectId>, QueryStats), RTreeError> {
        self.check_query_dimension(q)?;
        let mut out = Vec::new();
        let mut stats = QueryStats::default();
        self.search(
            &self.root,
            q,
            &|aabb| q.contains_aabb(aabb, &self.boundary),
            &mut out,
            &mut stats,
        );
        out.sort_unstable();
        Ok((out, stats))
    }

    /// Runs one intersection query per input box. With the `parallel`
    /// feature (default) the batch is spread across the rayon thread pool;
    /// results keep the order of `queries` either way.
    pub fn query_intersects_batch(&self, queries: &[Aabb]) -> Result<Vec<Vec<ObjectId>>, RTreeError> {
        for q in queries {
            self.check_query_dimension(q)?;
        }
        Ok(crate::map_batch(queries, |q| {
            self.query_intersects(q).expect("dimension checked above")
        }))
    }

    /// Batch counterpart of [`RTree::query_within`].
    pub fn query_within_batch(&self, queries: &[Aabb]) -> Result<Vec<Vec<ObjectId>>, RTreeError> {
        for q in queries {
            self.check_query_dimension(q)?;
        }
        Ok(crate::map_batch(queries, |q| {
            self.query_within(q).expect("dimension checked above")
        }))
    }

    /// Checks every structural invariant: occupancy bounds, uniform leaf
    /// depth, entry payload kinds, parent covers containing every child
    /// entry, canonical boxes, and the stored object count. Returns an empty
    /// list when the tree is sound.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let leaf_entries = self.validate_node(&self.root, "root", true, &mut violations);
        if leaf_entries != self.count {
            violations.push(Violation {
                path: "root".to_string(),
                rule: "count",
                message: format!(
                    "tree reports {} objects but holds {} leaf entries",
                    self.count, leaf_entries
                ),
            });
        }
        violations
    }

    /// Smallest box covering everything stored, or `None` for an empty tree.
    pub fn root_cover(&self) -> Option<Aabb> {
        if self.root.entries.is_empty() {
            None
        } else {
            Some(cover_of(&self.root.entries, &self.boundary))
        }
    }

    /// Total cover volume of the nodes at each level, root level first.
    /// The root's own cover is included at its level.
    pub fn cover_volume_by_level(&self) -> Vec<(u32, f64)> {
        let mut totals = vec![0.0; self.depth()];
        if let Some(cover) = self.root_cover() {
            totals[self.root.level as usize] += cover.volume(&self.boundary);
        }
        self.accumulate_cover_volumes(&self.root, &mut totals);
        (0..=self.root.level)
            .rev()
            .map(|level| (level, totals[level as usize]))
            .collect()
    }

    fn accumulate_cover_volumes(&self, node: &Node, totals: &mut [f64]) {
        if node.level == 0 {
            return;
        }
        for entry in &node.entries {
            if let Payload::Node(child) = &entry.payload {
                totals[child.level as usize] += entry.aabb.volume(&self.boundary);
                self.accumulate_cover_volumes(child, totals);
            }
        }
    }

    pub(crate) fn root(&self) -> &Node {
        &self.root
    }

    pub(crate) fn from_parts(
        dimension: usize,
        boundary: BoundaryCondition,
        min_entries: usize,
        max_entries: usize,
        root: Node,
        count: usize,
        ids: HashSet<ObjectId>,
    ) -> Self {
        RTree {
            dimension,
            min_entries,
            max_entries,
            boundary,
            root,
            count,
            ids,
        }
    }

    fn check_canonical(&self, aabb: &Aabb) -> Result<(), RTreeError> {
        if aabb.dimension() != self.dimension {
            return Err(RTreeError::DimensionMismatch {
                expected: self.dimension,
                got: aabb.dimension(),
            });
        }
        if let Some(axis) = aabb.is_canonical_under(&self.boundary) {
            return Err(RTreeError::NonCanonicalBox { axis });
        }
        Ok(())
    }

    fn check_query_dimension(&self, q: &Aabb) -> Result<(), RTreeError> {
        if q.dimension() != self.dimension {
            return Err(RTreeError::DimensionMismatch {
                expected: self.dimension,
                got: q.dimension(),
            });
        }
        Ok(())
    }

    fn search<F>(
        &self,
        node: &Node,
        q: &Aabb,
        leaf_pred: &F,
        out: &mut Vec<ObjectId>,
        stats: &mut QueryStats,
    ) where
        F: Fn(&Aabb) -> bool,
    {
        stats.nodes_visited += 1;
        for entry in &node.entries {
            stats.entries_tested += 1;
            match &entry.payload {
                Payload::Object(id) => {
                    if leaf_pred(&entry.aabb) {
                        out.push(*id);
                    }
                }
                Payload::Node(child) => {
                    // a contained or intersecting object's box necessarily
                    // intersects the child's cover, so this prunes safely
                    // for both query modes
                    if q.intersects(&entry.aabb, &self.boundary) {
                        self.search(child, q, leaf_pred, out, stats);
                    }
                }
            }
        }
    }

    fn insert_entry_at_level(&mut self, entry: Entry, level: u32) {
        debug_assert!(level <= self.root.level);
        if let Some(sibling) = insert_rec(
            &self.boundary,
            self.min_entries,
            self.max_entries,
            &mut self.root,
            entry,
            level,
        ) {
            self.grow_root(sibling);
        }
    }

    fn grow_root(&mut self, sibling: Node) {
        let old_root = mem::replace(
            &mut self.root,
            Node {
                level: 0,
                entries: Vec::new(),
            },
        );
        let new_level = old_root.level + 1;
        let left = Entry {
            aabb: cover_of(&old_root.entries, &self.boundary),
            payload: Payload::Node(Box::new(old_root)),
        };
        let right = Entry {
            aabb: cover_of(&sibling.entries, &self.boundary),
            payload: Payload::Node(Box::new(sibling)),
        };
        self.root = Node {
            level: new_level,
            entries: vec![left, right],
        };
    }

    fn validate_node(
        &self,
        node: &Node,
        path: &str,
        is_root: bool,
        violations: &mut Vec<Violation>,
    ) -> usize {
        let len = node.entries.len();
        let occupancy_ok = if is_root {
            if node.level > 0 {
                (2..=self.max_entries).contains(&len)
            } else {
                len <= self.max_entries
            }
        } else {
            (self.min_entries..=self.max_entries).contains(&len)
        };
        if !occupancy_ok {
            violations.push(Violation {
                path: path.to_string(),
                rule: "occupancy",
                message: format!(
                    "node at level {} holds {} entries (bounds m={}, M={})",
                    node.level, len, self.min_entries, self.max_entries
                ),
            });
        }

        let mut leaf_entries = 0;
        for (i, entry) in node.entries.iter().enumerate() {
            let entry_path = format!("{path}.{i}");
            if let Some(axis) = entry.aabb.is_canonical_under(&self.boundary) {
                violations.push(Violation {
                    path: entry_path.clone(),
                    rule: "box-canonical",
                    message: format!("box violates canonical form on axis {axis}"),
                });
            }
            match &entry.payload {
                Payload::Object(_) => {
                    if node.level != 0 {
                        violations.push(Violation {
                            path: entry_path,
                            rule: "entry-kind",
                            message: "object entry in an internal node".to_string(),
                        });
                    } else {
                        leaf_entries += 1;
                    }
                }
                Payload::Node(child) => {
                    if node.level == 0 {
                        violations.push(Violation {
                            path: entry_path,
                            rule: "entry-kind",
                            message: "child entry in a leaf node".to_string(),
                        });
                        continue;
                    }
                    if child.level + 1 != node.level {
                        violations.push(Violation {
                            path: entry_path.clone(),
                            rule: "uniform-depth",
                            message: format!(
                                "child at level {} under a node at level {}",
                                child.level, node.level
                            ),
                        });
                    }
                    for (j, child_entry) in child.entries.iter().enumerate() {
                        if !entry.aabb.contains_aabb(&child_entry.aabb, &self.boundary) {
                            violations.push(Violation {
                                path: format!("{entry_path}.{j}"),
                                rule: "parent-containment",
                                message: "parent cover does not contain child entry".to_string(),
                            });
                        }
                    }
                    leaf_entries += self.validate_node(child, &entry_path, false, violations);
                }
            }
        }
        leaf_entries
    }
}

/// Cover of a non-empty entry list: fold of expansion in entry order, then
/// radii nudged up so the exact containment predicate holds for every entry.
pub(crate) fn cover_of(entries: &[Entry], boundary: &BoundaryCondition) -> Aabb {
    debug_assert!(!entries.is_empty());
    let mut cover = entries[0].aabb.clone();
    for entry in &entries[1..] {
        cover = cover.expand_to_contain(&entry.aabb, boundary);
    }
    for entry in entries {
        ensure_contains_aabb(&mut cover, &entry.aabb, boundary);
    }
    cover
}

/// Inserts `entry` into a node at `target_level`, splitting on overflow.
/// Returns the new sibling when this node split.
fn insert_rec(
    boundary: &BoundaryCondition,
    min_entries: usize,
    max_entries: usize,
    node: &mut Node,
    entry: Entry,
    target_level: u32,
) -> Option<Node> {
    if node.level == target_level {
        node.entries.push(entry);
        if node.entries.len() > max_entries {
            return Some(split_node(node, min_entries, boundary));
        }
        return None;
    }

    let idx = choose_subtree(node, &entry.aabb, boundary);
    let inserted_box = entry.aabb.clone();
    let sibling = {
        let child = match &mut node.entries[idx].payload {
            Payload::Node(child) => child,
            Payload::Object(_) => unreachable!("descent stops at target level"),
        };
        insert_rec(boundary, min_entries, max_entries, child, entry, target_level)
    };

    match sibling {
        None => {
            // grow the cover along the path; the nudge keeps every child
            // entry contained under the exact predicate
            let Entry { aabb, payload } = &mut node.entries[idx];
            let Payload::Node(child) = payload else {
                unreachable!()
            };
            let mut grown = aabb.expand_to_contain(&inserted_box, boundary);
            for child_entry in &child.entries {
                ensure_contains_aabb(&mut grown, &child_entry.aabb, boundary);
            }
            *aabb = grown;
            None
        }
        Some(new_node) => {
            // recompute both covers from scratch after a split
            {
                let Entry { aabb, payload } = &mut node.entries[idx];
                let Payload::Node(child) = payload else {
                    unreachable!()
                };
                *aabb = cover_of(&child.entries, boundary);
            }
            let new_entry = Entry {
                aabb: cover_of(&new_node.entries, boundary),
                payload: Payload::Node(Box::new(new_node)),
            };
            node.entries.push(new_entry);
            if node.entries.len() > max_entries {
                Some(split_node(node, min_entries, boundary))
            } else {
                None
            }
        }
    }
}

/// Guttman ChooseLeaf criterion: least enlargement, ties broken by smaller
/// volume, then by lower entry index.
fn choose_subtree(node: &Node, aabb: &Aabb, boundary: &BoundaryCondition) -> usize {
    let mut best = 0;
    let mut best_enlargement = f64::INFINITY;
    let mut best_volume = f64::INFINITY;
    for (i, entry) in node.entries.iter().enumerate() {
        let enlargement = entry.aabb.enlargement(aabb, boundary);
        let volume = entry.aabb.volume(boundary);
        if enlargement < best_enlargement
            || (enlargement == best_enlargement && volume < best_volume)
        {
            best = i;
            best_enlargement = enlargement;
            best_volume = volume;
        }
    }
    best
}

fn split_node(node: &mut Node, min_entries: usize, boundary: &BoundaryCondition) -> Node {
    let entries = mem::take(&mut node.entries);
    let (first, second) = quadratic_split(entries, min_entries, boundary);
    node.entries = first;
    Node {
        level: node.level,
        entries: second,
    }
}

/// Guttman's quadratic split.
///
/// PickSeeds maximizes the dead space `volume(cover) - v1 - v2` over all
/// pairs; PickNext repeatedly assigns the entry with the largest preference
/// `|d1 - d2|` to the group needing less enlargement. All ties resolve to
/// the lower entry index, then to the group with smaller cover volume, then
/// fewer entries, then the first group. When a group must absorb the entire
/// remainder to reach the minimum occupancy it takes it wholesale.
fn quadratic_split(
    entries: Vec<Entry>,
    min_entries: usize,
    boundary: &BoundaryCondition,
) -> (Vec<Entry>, Vec<Entry>) {
    debug_assert!(entries.len() >= 2 * min_entries);
    let volumes: Vec<f64> = entries.iter().map(|e| e.aabb.volume(boundary)).collect();

    let (mut seed1, mut seed2) = (0, 1);
    let mut worst_dead_space = f64::NEG_INFINITY;
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            let cover = entries[i].aabb.expand_to_contain(&entries[j].aabb, boundary);
            let dead_space = cover.volume(boundary) - volumes[i] - volumes[j];
            if dead_space > worst_dead_space {
                worst_dead_space = dead_space;
                seed1 = i;
                seed2 = j;
            }
        }
    }

    let mut group1 = Vec::new();
    let mut group2 = Vec::new();
    let mut rest = Vec::new();
    for (i, entry) in entries.into_iter().enumerate() {
        if i == seed1 {
            group1.push(entry);
        } else if i == seed2 {
            group2.push(entry);
        } else {
            rest.push(entry);
        }
    }
    let mut cover1 = group1[0].aabb.clone();
    let mut cover2 = group2[0].aabb.clone();

    while !rest.is_empty() {
        if group1.len() + rest.len() <= min_entries {
            group1.append(&mut rest);
            break;
        }
        if group2.len() + rest.len() <= min_entries {
            group2.append(&mut rest);
            break;
        }

        let mut pick = 0;
        let mut pick_pref = f64::NEG_INFINITY;
        let mut pick_d = (0.0, 0.0);
        for (i, entry) in rest.iter().enumerate() {
            let d1 = cover1.enlargement(&entry.aabb, boundary);
            let d2 = cover2.enlargement(&entry.aabb, boundary);
            let preference = (d1 - d2).abs();
            if preference > pick_pref {
                pick_pref = preference;
                pick = i;
                pick_d = (d1, d2);
            }
        }

        let entry = rest.remove(pick);
        let to_first = if pick_d.0 < pick_d.1 {
            true
        } else if pick_d.0 > pick_d.1 {
            false
        } else {
            let (v1, v2) = (cover1.volume(boundary), cover2.volume(boundary));
            if v1 != v2 {
                v1 < v2
            } else {
                group1.len() <= group2.len()
            }
        };
        if to_first {
            cover1 = cover1.expand_to_contain(&entry.aabb, boundary);
            group1.push(entry);
        } else {
            cover2 = cover2.expand_to_contain(&entry.aabb, boundary);
            group2.push(entry);
        }
    }

    (group1, group2)
}

/// Removal descent. On success, underfull nodes along the path are
/// eliminated and their entries queued (with their home level) for
/// reinsertion; surviving covers on the path are recomputed.
fn remove_rec(
    boundary: &BoundaryCondition,
    min_entries: usize,
    node: &mut Node,
    id: ObjectId,
    target: &Aabb,
    orphans: &mut Vec<(u32, Entry)>,
) -> bool {
    if node.level == 0 {
        let position = node.entries.iter().position(|e| {
            matches!(e.payload, Payload::Object(existing) if existing == id)
                && e.aabb.approx_eq(target, boundary, BOX_MATCH_TOLERANCE)
        });
        if let Some(position) = position {
            node.entries.remove(position);
            return true;
        }
        return false;
    }

    for i in 0..node.entries.len() {
        if !node.entries[i].aabb.intersects(target, boundary) {
            continue;
        }
        let removed = {
            let child = match &mut node.entries[i].payload {
                Payload::Node(child) => child,
                Payload::Object(_) => continue,
            };
            remove_rec(boundary, min_entries, child, id, target, orphans)
        };
        if !removed {
            continue;
        }
        let underfull = node.entries[i]
            .child_entries()
            .is_some_and(|entries| entries.len() < min_entries);
        if underfull {
            let eliminated = node.entries.remove(i);
            if let Payload::Node(child) = eliminated.payload {
                let level = child.level;
                orphans.extend(child.entries.into_iter().map(|e| (level, e)));
            }
        } else {
            let Entry { aabb, payload } = &mut node.entries[i];
            if let Payload::Node(child) = payload {
                *aabb = cover_of(&child.entries, boundary);
            }
        }
        return true;
    }
    false
}
