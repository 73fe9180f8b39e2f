//! Roadmap construction: Voronoi skeleton, filtering, terminal insertion,
//! degree reduction and edge cost evaluation.

mod cost;
mod degree;
mod filter;
mod skeleton;
mod terminal;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cost::{edge_cost, evaluate_edge_costs};
pub use degree::reduce_degree;
pub use filter::{contract_chains, filter_edges, prune_tails, select_component};
pub use skeleton::{build_skeleton, ClearanceField};
pub use terminal::insert_terminal;

use crate::geometry::Point;
use crate::model::{ModelError, PolygonMap, Roadmap, VertexId};

#[derive(Debug, Error)]
pub enum RoadmapError {
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("map has no free space")]
    NoFreeSpace,
    #[error("roadmap is empty")]
    EmptyGraph,
    #[error("point lies inside obstacle {obstacle}")]
    PointInObstacle { obstacle: usize },
    #[error("point lies outside the border")]
    PointOutsideBorder,
    #[error("edge {edge} has zero clearance; it should have been filtered")]
    ZeroClearance { edge: usize },
    #[error("start and goal end up in different components")]
    TerminalsDisconnected,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RoadmapBuildParams {
    /// Boundary discretization pitch, meters.
    pub sampling_step: f64,
    /// Edges with smaller clearance are dropped, meters.
    pub min_clearance: f64,
    /// Weight α of the inverse-clearance term in the edge cost.
    pub clearance_weight: f64,
    /// Formation control coefficient k.
    pub coefficient: f64,
    pub robots: usize,
    /// Collapse degree-2 chains into single edges.
    pub contract: bool,
}

impl Default for RoadmapBuildParams {
    fn default() -> Self {
        RoadmapBuildParams {
            sampling_step: 1.0,
            min_clearance: 1.0,
            clearance_weight: 1.0,
            coefficient: 100.0,
            robots: 1,
            contract: true,
        }
    }
}

impl RoadmapBuildParams {
    pub fn validate(&self) -> Result<(), RoadmapError> {
        if !(self.sampling_step.is_finite() && self.sampling_step > 0.0) {
            return Err(RoadmapError::InvalidParams(
                "sampling_step must be positive",
            ));
        }
        if !(self.min_clearance.is_finite() && self.min_clearance >= 0.0) {
            return Err(RoadmapError::InvalidParams(
                "min_clearance must be non-negative",
            ));
        }
        if !(self.clearance_weight.is_finite() && self.clearance_weight >= 0.0) {
            return Err(RoadmapError::InvalidParams(
                "clearance_weight must be non-negative",
            ));
        }
        if !(self.coefficient.is_finite() && self.coefficient >= 0.0) {
            return Err(RoadmapError::InvalidParams("k must be non-negative"));
        }
        if self.robots == 0 {
            return Err(RoadmapError::InvalidParams(
                "robot count must be at least 1",
            ));
        }
        Ok(())
    }
}

/// Result of the full construction pipeline.
#[derive(Clone, Debug)]
pub struct BuiltRoadmap {
    pub roadmap: Roadmap,
    /// Ids of the inserted start and goal, when terminals were supplied.
    pub terminals: Option<(VertexId, VertexId)>,
}

/// Full pipeline: skeleton, clearance filter, optional terminal insertion,
/// single component, tail pruning, chain contraction, degree reduction and
/// cost evaluation.
pub fn build_roadmap(
    map: &PolygonMap,
    params: &RoadmapBuildParams,
    terminals: Option<(Point, Point)>,
) -> Result<BuiltRoadmap, RoadmapError> {
    params.validate()?;
    let skeleton = build_skeleton(map, params)?;
    let mut graph = filter_edges(&skeleton, map, params.min_clearance)?;

    let mut ends = None;
    if let Some((start, goal)) = terminals {
        let (g, s) = insert_terminal(&graph, map, start)?;
        let (g, t) = insert_terminal(&g, map, goal)?;
        graph = g;
        ends = Some((s, t));
    }

    let (graph, remap) = select_component(&graph, ends.map(|(s, _)| s));
    let ends = match ends {
        Some((s, t)) => {
            let s = remap.get(s).ok_or(RoadmapError::TerminalsDisconnected)?;
            let t = remap.get(t).ok_or(RoadmapError::TerminalsDisconnected)?;
            Some((s, t))
        }
        None => None,
    };
    let keep: BTreeSet<VertexId> = ends.iter().flat_map(|&(s, t)| [s, t]).collect();

    let (graph, remap) = prune_tails(&graph, &keep);
    let mut ends = ends.map(|(s, t)| (remap.get(s).unwrap(), remap.get(t).unwrap()));
    let keep: BTreeSet<VertexId> = ends.iter().flat_map(|&(s, t)| [s, t]).collect();

    let graph = if params.contract {
        let (g, remap) = contract_chains(&graph, &keep);
        ends = ends.map(|(s, t)| (remap.get(s).unwrap(), remap.get(t).unwrap()));
        g
    } else {
        graph
    };
    if graph.edge_count() == 0 {
        return Err(RoadmapError::EmptyGraph);
    }
    let graph = reduce_degree(&graph);
    let roadmap = evaluate_edge_costs(
        &graph,
        params.robots,
        params.coefficient,
        params.clearance_weight,
    )?;
    Ok(BuiltRoadmap {
        roadmap,
        terminals: ends,
    })
}

/// Default terminals: the lexicographically smallest `(x, y)` vertex as the
/// start and the largest as the goal; smaller id wins on exact ties.
pub fn corner_terminals(roadmap: &Roadmap) -> Option<(VertexId, VertexId)> {
    let key = |id: &VertexId| {
        let p = roadmap.vertex(*id).position;
        (p.x, p.y)
    };
    let ids = (0..roadmap.vertex_count()).map(VertexId);
    let start = ids.clone().min_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.total_cmp(&kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then(a.cmp(b))
    })?;
    let goal = ids.max_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.total_cmp(&kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then(b.cmp(a))
    })?;
    (start != goal).then_some((start, goal))
}
