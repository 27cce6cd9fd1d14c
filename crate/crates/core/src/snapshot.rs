//! Versioned JSON snapshots of a tree: nodes nested, boxes as
//! `{center, radius}`, the boundary and occupancy parameters embedded.
//! Writing the same tree twice produces byte-identical output.
//!
//! Loading is deliberately lenient about *structural* invariants
//! (occupancy, depth, containment, count) so that a damaged snapshot can
//! still be loaded and inspected with [`RTree::validate`]; only defects
//! that would make the data meaningless (bad version, dimension mixups,
//! non-finite values, negative radii, duplicate ids, payload kinds not
//! matching levels) are rejected.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::aabb::Aabb;
use crate::boundary::BoundaryCondition;
use crate::error::SnapshotError;
use crate::rtree::{Entry, Node, ObjectId, Payload, RTree};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeSnapshot {
    pub format_version: u32,
    pub dimension: usize,
    pub min_entries: usize,
    pub max_entries: usize,
    pub boundary: BoundaryCondition,
    pub count: usize,
    pub root: NodeSnapshot,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeSnapshot {
    pub level: u32,
    pub entries: Vec<EntrySnapshot>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxSnapshot {
    pub center: Vec<f64>,
    pub radius: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntrySnapshot {
    Leaf { aabb: BoxSnapshot, id: u64 },
    Internal { aabb: BoxSnapshot, child: NodeSnapshot },
}

impl TreeSnapshot {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("snapshot serializes");
        out.push('\n');
        out
    }

    pub fn from_json(json: &str) -> Result<TreeSnapshot, SnapshotError> {
        Ok(serde_json::from_str(json)?)
    }
}

impl RTree {
    pub fn to_snapshot(&self) -> TreeSnapshot {
        TreeSnapshot {
            format_version: FORMAT_VERSION,
            dimension: self.dimension(),
            min_entries: self.min_entries(),
            max_entries: self.max_entries(),
            boundary: self.boundary().clone(),
            count: self.len(),
            root: snapshot_node(self.root()),
        }
    }

    pub fn from_snapshot(snapshot: TreeSnapshot) -> Result<RTree, SnapshotError> {
        if snapshot.format_version != FORMAT_VERSION {
            return Err(SnapshotError::UnsupportedVersion(snapshot.format_version));
        }
        if snapshot.dimension == 0 {
            return Err(SnapshotError::Malformed("dimension must be positive".into()));
        }
        if snapshot.min_entries < 2
            || snapshot.min_entries > snapshot.max_entries.div_ceil(2)
        {
            return Err(SnapshotError::Tree(
                crate::error::RTreeError::InvalidOccupancy {
                    min: snapshot.min_entries,
                    max: snapshot.max_entries,
                },
            ));
        }
        if let Some(expected) = snapshot.boundary.dimension() {
            if expected != snapshot.dimension {
                return Err(SnapshotError::Malformed(format!(
                    "boundary is {expected}-dimensional but the tree claims {}",
                    snapshot.dimension
                )));
            }
        }
        let mut ids = HashSet::new();
        let root = restore_node(snapshot.root, snapshot.dimension, "root", &mut ids)?;
        Ok(RTree::from_parts(
            snapshot.dimension,
            snapshot.boundary,
            snapshot.min_entries,
            snapshot.max_entries,
            root,
            snapshot.count,
            ids,
        ))
    }

    /// Serializes this tree as a pretty-printed JSON document (deterministic
    /// for a given tree).
    pub fn to_json(&self) -> String {
        self.to_snapshot().to_json()
    }

    pub fn from_json(json: &str) -> Result<RTree, SnapshotError> {
        RTree::from_snapshot(TreeSnapshot::from_json(json)?)
    }
}

fn snapshot_node(node: &Node) -> NodeSnapshot {
    NodeSnapshot {
        level: node.level,
        entries: node
            .entries
            .iter()
            .map(|entry| {
                let aabb = BoxSnapshot {
                    center: entry.aabb.center().to_vec(),
                    radius: entry.aabb.radius().to_vec(),
                };
                match &entry.payload {
                    Payload::Object(id) => EntrySnapshot::Leaf { aabb, id: id.0 },
                    Payload::Node(child) => EntrySnapshot::Internal {
                        aabb,
                        child: snapshot_node(child),
                    },
                }
            })
            .collect(),
    }
}

fn restore_node(
    snapshot: NodeSnapshot,
    dimension: usize,
    path: &str,
    ids: &mut HashSet<ObjectId>,
) -> Result<Node, SnapshotError> {
    let level = snapshot.level;
    let mut entries = Vec::with_capacity(snapshot.entries.len());
    for (i, entry) in snapshot.entries.into_iter().enumerate() {
        let entry_path = format!("{path}.{i}");
        let (aabb, payload) = match entry {
            EntrySnapshot::Leaf { aabb, id } => {
                if level != 0 {
                    return Err(SnapshotError::Malformed(format!(
                        "object entry at {entry_path} inside an internal node"
                    )));
                }
                let id = ObjectId(id);
                if !ids.insert(id) {
                    return Err(SnapshotError::Tree(
                        crate::error::RTreeError::DuplicateId(id.0),
                    ));
                }
                (aabb, Payload::Object(id))
            }
            EntrySnapshot::Internal { aabb, child } => {
                if level == 0 {
                    return Err(SnapshotError::Malformed(format!(
                        "child entry at {entry_path} inside a leaf node"
                    )));
                }
                let child = restore_node(child, dimension, &entry_path, ids)?;
                (aabb, Payload::Node(Box::new(child)))
            }
        };
        let aabb = restore_box(aabb, dimension, &entry_path)?;
        entries.push(Entry { aabb, payload });
    }
    Ok(Node { level, entries })
}

fn restore_box(
    snapshot: BoxSnapshot,
    dimension: usize,
    path: &str,
) -> Result<Aabb, SnapshotError> {
    if snapshot.center.len() != dimension || snapshot.radius.len() != dimension {
        return Err(SnapshotError::Malformed(format!(
            "box at {path} has the wrong dimension"
        )));
    }
    let finite = snapshot.center.iter().chain(&snapshot.radius).all(|x| x.is_finite());
    if !finite {
        return Err(SnapshotError::Malformed(format!(
            "box at {path} has non-finite components"
        )));
    }
    if snapshot.radius.iter().any(|r| *r < 0.0) {
        return Err(SnapshotError::Malformed(format!(
            "box at {path} has a negative radius"
        )));
    }
    Ok(Aabb::from_raw_parts(snapshot.center, snapshot.radius))
}
