//! Singular points of the cover over the singular points of the branch
//! locus: inertia, number of preimages, type upstairs, and the numbered node
//! inventory.

use std::fmt;

use thiserror::Error;

use crate::cover::BuildingData;
use crate::group::{subgroup_generated, GroupElement, GroupError, Subgroup};
use crate::plane::{Arrangement, ArrangementPoint, LocalType, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("unsupported branch point {point}: {reason}")]
    Unsupported { point: String, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UpstairsType {
    A1,
    Smooth,
}

impl fmt::Display for UpstairsType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UpstairsType::A1 => "A1",
            UpstairsType::Smooth => "smooth",
        })
    }
}

/// Where a node of the cover comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeClass {
    /// Over a tangency of two branch curves with different `sigma`.
    Tacnodal,
    /// Over a node of a single branch curve.
    InternalNode,
}

impl NodeClass {
    pub fn name(self) -> &'static str {
        match self {
            NodeClass::Tacnodal => "tacnodal",
            NodeClass::InternalNode => "internal-node",
        }
    }
}

/// One singular point of the branch locus and its fibre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointTransport {
    pub point: ArrangementPoint,
    /// `sigma` of the branch curves through the point, in branch order.
    pub sigmas: Vec<GroupElement>,
    pub inertia: Subgroup,
    pub preimage_count: usize,
    /// Smallest element of each coset of the inertia.
    pub sheets: Vec<GroupElement>,
    pub upstairs: UpstairsType,
}

impl PointTransport {
    pub fn class(&self) -> Option<NodeClass> {
        match (self.upstairs, self.point.local_type) {
            (UpstairsType::A1, LocalType::Tacnode) => Some(NodeClass::Tacnodal),
            (UpstairsType::A1, _) => Some(NodeClass::InternalNode),
            _ => None,
        }
    }
}

/// A node `p_i` of the cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRecord {
    /// 1-based.
    pub index: usize,
    pub class: NodeClass,
    pub plane_point: ProjPoint,
    pub local_type: LocalType,
    /// Labels of the two branch components through the plane point.
    pub components: [String; 2],
    pub inertia: Subgroup,
    pub preimage_count: usize,
    pub sheet: GroupElement,
}

impl NodeRecord {
    pub fn lies_over_component(&self, label: &str) -> bool {
        self.components.iter().any(|c| c == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeInventory {
    pub points: Vec<PointTransport>,
    pub nodes: Vec<NodeRecord>,
}

impl NodeInventory {
    pub fn count(&self, class: NodeClass) -> usize {
        self.nodes.iter().filter(|n| n.class == class).count()
    }

    pub fn indices_where(&self, pred: impl Fn(&NodeRecord) -> bool) -> Vec<usize> {
        self.nodes.iter().filter(|n| pred(n)).map(|n| n.index).collect()
    }

    /// The plane points carrying nodes, each once, in node order.
    pub fn node_points(&self) -> Vec<&PointTransport> {
        let mut out: Vec<&PointTransport> = Vec::new();
        for n in &self.nodes {
            if !out.iter().any(|p| p.point.location == n.plane_point) {
                let pt = self.points.iter().find(|p| p.point.location == n.plane_point).expect("node over a point");
                out.push(pt);
            }
        }
        out
    }
}

fn sigmas_at(point: &ArrangementPoint, bd: &BuildingData) -> Vec<GroupElement> {
    let mut curves: Vec<usize> = point.branches.iter().map(|b| b.curve).collect();
    curves.sort();
    curves.dedup();
    curves.iter().map(|&c| bd.branches()[c].0).collect()
}

/// Subgroup generated by the `sigma` of the branch curves through the point.
pub fn inertia(point: &ArrangementPoint, bd: &BuildingData) -> Result<Subgroup, TransportError> {
    Ok(subgroup_generated(bd.rank(), &sigmas_at(point, bd))?)
}

pub fn preimage_count(inertia: &Subgroup, rank: u8) -> usize {
    (1usize << rank) / inertia.order()
}

pub fn upstairs_type(point: &ArrangementPoint, bd: &BuildingData) -> Result<UpstairsType, TransportError> {
    let distinct = sigmas_at(point, bd).len() == 2;
    match (point.local_type, distinct) {
        (LocalType::TransversePair, true) => Ok(UpstairsType::Smooth),
        (LocalType::Tacnode, true) => Ok(UpstairsType::A1),
        (LocalType::Node, false) => Ok(UpstairsType::A1),
        (t, _) => Err(TransportError::Unsupported {
            point: point.location.to_string(),
            reason: format!("{} inside a single branch curve", t.name()),
        }),
    }
}

/// All nodes of the cover, numbered by class (tacnodal first), then plane
/// point, then sheet.
pub fn node_inventory(bd: &BuildingData, arrangement: &Arrangement) -> Result<NodeInventory, TransportError> {
    let mut points = Vec::new();
    for p in &arrangement.points {
        let h = inertia(p, bd)?;
        let count = preimage_count(&h, bd.rank());
        let sheets = h.coset_representatives();
        debug_assert_eq!(sheets.len(), count);
        points.push(PointTransport {
            point: p.clone(),
            sigmas: sigmas_at(p, bd),
            upstairs: upstairs_type(p, bd)?,
            inertia: h,
            preimage_count: count,
            sheets,
        });
    }
    let mut nodes = Vec::new();
    for pt in &points {
        let Some(class) = pt.class() else { continue };
        for sheet in &pt.sheets {
            nodes.push(NodeRecord {
                index: 0,
                class,
                plane_point: pt.point.location.clone(),
                local_type: pt.point.local_type,
                components: [pt.point.branches[0].label.clone(), pt.point.branches[1].label.clone()],
                inertia: pt.inertia.clone(),
                preimage_count: pt.preimage_count,
                sheet: *sheet,
            });
        }
    }
    nodes.sort_by(|a, b| (a.class, &a.plane_point, a.sheet).cmp(&(b.class, &b.plane_point, b.sheet)));
    for (i, n) in nodes.iter_mut().enumerate() {
        n.index = i + 1;
    }
    Ok(NodeInventory { points, nodes })
}
