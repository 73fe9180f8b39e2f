//! Sequential multi-robot planning on a roadmap.
//!
//! Robots are planned one at a time. Each search prices an edge by the
//! formation size it would join, given the robots already planned, and never
//! enters an edge someone already uses in the opposite direction. Final
//! per-robot costs are always recomputed at the final occupancy.

mod schedule;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use schedule::{check_constraints, make_schedule, Schedule, ScheduleConflict, Violation};
pub use search::{
    dijkstra_single, robots_in_segment, Direction, Occupancy, SearchState, SegmentLoad,
};

use crate::model::{EdgeId, PlanQuery, QueryError, Roadmap, VertexId};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum PlanError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("goal {goal} unreachable from {start}: every route is blocked by opposite traffic")]
    Blocked { start: VertexId, goal: VertexId },
    #[error("goal {goal} unreachable from {start}: graph disconnected")]
    Disconnected { start: VertexId, goal: VertexId },
    #[error("robot {robot}: {source}")]
    Robot {
        robot: usize,
        #[source]
        source: Box<PlanError>,
    },
    #[error("robot {robot} steps {from} -> {to}, which is not an edge")]
    NotAnEdge {
        robot: usize,
        from: VertexId,
        to: VertexId,
    },
    #[error("edge {edge} needs cost entry {needed} but its vector has capacity {capacity}")]
    CapacityExceeded {
        edge: EdgeId,
        needed: usize,
        capacity: usize,
    },
    #[error("path set is empty")]
    EmptyPathSet,
}

impl PlanError {
    /// Unwraps the per-robot wrapper.
    pub fn root(&self) -> &PlanError {
        match self {
            PlanError::Robot { source, .. } => source.root(),
            other => other,
        }
    }
}

/// One path per robot plus their final costs.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSet {
    pub paths: Vec<Vec<VertexId>>,
    pub robot_costs: Vec<f64>,
    pub occupancy: Occupancy,
    /// Formation cost: the most expensive robot.
    pub objective: f64,
}

impl PathSet {
    /// Prices `paths` at their joint occupancy.
    pub fn evaluate(roadmap: &Roadmap, paths: Vec<Vec<VertexId>>) -> Result<Self, PlanError> {
        let occupancy = Occupancy::from_paths(roadmap, &paths)?;
        let robot_costs = price(roadmap, &paths, &occupancy)?;
        let objective = robot_costs.iter().copied().fold(0.0, f64::max);
        Ok(PathSet {
            paths,
            robot_costs,
            occupancy,
            objective,
        })
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn total_cost(&self) -> f64 {
        self.robot_costs.iter().sum()
    }

    pub fn to_json(&self) -> String {
        let file = PathSetFile {
            paths: self.paths.clone(),
            costs: self.robot_costs.clone(),
            objective: self.objective,
        };
        serde_json::to_string_pretty(&file).expect("path set serialization is infallible")
    }

    /// Reads a path set file and re-prices it on `roadmap`; stored costs are
    /// informational only.
    pub fn from_json(bytes: &[u8], roadmap: &Roadmap) -> Result<Self, PathSetLoadError> {
        let file: PathSetFile = serde_json::from_slice(bytes)?;
        for (robot, path) in file.paths.iter().enumerate() {
            if let Some(v) = path.iter().find(|v| !roadmap.contains(**v)) {
                return Err(PathSetLoadError::UnknownVertex { robot, vertex: *v });
            }
        }
        Ok(PathSet::evaluate(roadmap, file.paths)?)
    }
}

#[derive(Debug, Error)]
pub enum PathSetLoadError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("robot {robot} references unknown vertex {vertex}")]
    UnknownVertex { robot: usize, vertex: VertexId },
    #[error(transparent)]
    Plan(#[from] PlanError),
}

#[derive(Serialize, Deserialize)]
struct PathSetFile {
    paths: Vec<Vec<VertexId>>,
    costs: Vec<f64>,
    objective: f64,
}

fn price(
    roadmap: &Roadmap,
    paths: &[Vec<VertexId>],
    occ: &Occupancy,
) -> Result<Vec<f64>, PlanError> {
    paths
        .iter()
        .enumerate()
        .map(|(robot, path)| {
            let mut total = 0.0;
            for w in path.windows(2) {
                let edge = roadmap
                    .edge_between(w[0], w[1])
                    .ok_or(PlanError::NotAnEdge {
                        robot,
                        from: w[0],
                        to: w[1],
                    })?;
                let n = occ.total(edge);
                let costs = &roadmap.edge(edge).costs;
                total += costs.get(n).ok_or(PlanError::CapacityExceeded {
                    edge,
                    needed: n,
                    capacity: costs.capacity(),
                })?;
            }
            Ok(total)
        })
        .collect()
}

/// Final per-robot costs `C_i = Σ_{e ∈ p_i} c^e_{n_e}` and the objective
/// `max_i C_i`, where `n_e` counts every robot whose path uses `e`.
pub fn evaluate_plan(
    roadmap: &Roadmap,
    paths: &[Vec<VertexId>],
) -> Result<(Vec<f64>, f64), PlanError> {
    let occ = Occupancy::from_paths(roadmap, paths)?;
    let costs = price(roadmap, paths, &occ)?;
    let objective = costs.iter().copied().fold(0.0, f64::max);
    Ok((costs, objective))
}

/// Plans robots `1..=R` in order, each against the occupancy of those before
/// it, and prices the result. No improvement pass.
pub fn plan_sequential(roadmap: &Roadmap, query: &PlanQuery) -> Result<PathSet, PlanError> {
    query.validate(roadmap)?;
    let mut paths: Vec<Vec<VertexId>> = Vec::with_capacity(query.robots);
    let mut occupancy = Occupancy::empty(roadmap);
    for robot in 0..query.robots {
        let path = dijkstra_single(roadmap, &occupancy, query.start, query.goal).map_err(|e| {
            PlanError::Robot {
                robot,
                source: Box::new(e),
            }
        })?;
        paths.push(path);
        occupancy = Occupancy::from_paths(roadmap, &paths)?;
    }
    PathSet::evaluate(roadmap, paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::model::{CostVector, EdgeSpec};

    fn ids(v: &[usize]) -> Vec<VertexId> {
        v.iter().copied().map(VertexId).collect()
    }

    /// s=0, a=1, b=2, g=3; lengths 10, 10, 12, 12 priced with c_r = r·length.
    pub(crate) fn diamond(robots: usize) -> Roadmap {
        let pts = [(0., 0.), (1., 1.), (1., -1.), (2., 0.)];
        let edges = [(0, 1, 10.0), (1, 3, 10.0), (0, 2, 12.0), (2, 3, 12.0)];
        Roadmap::from_parts(
            pts.iter().map(|&(x, y)| (Point::new(x, y), 1.0)),
            edges.iter().map(|&(u, v, len)| EdgeSpec {
                costs: CostVector::new((1..=robots).map(|r| len * r as f64).collect()),
                ..EdgeSpec::real(VertexId(u), VertexId(v), len, 1.0)
            }),
        )
        .unwrap()
    }

    fn query(robots: usize) -> PlanQuery {
        PlanQuery {
            start: VertexId(0),
            goal: VertexId(3),
            robots,
            coefficient: 100.0,
        }
    }

    #[test]
    fn segment_counts() {
        let g = diamond(3);
        let empty = Occupancy::empty(&g);
        assert_eq!(
            robots_in_segment(&empty, EdgeId(0), Direction::Forward),
            SegmentLoad::Shared(1)
        );
        let two = Occupancy::from_paths(&g, &[ids(&[0, 1, 3]), ids(&[0, 1, 3])]).unwrap();
        assert_eq!(
            robots_in_segment(&two, EdgeId(0), Direction::Forward),
            SegmentLoad::Shared(3)
        );
        let one = Occupancy::from_paths(&g, &[ids(&[0, 1])]).unwrap();
        assert_eq!(
            robots_in_segment(&one, EdgeId(0), Direction::Backward),
            SegmentLoad::Blocked
        );
    }

    #[test]
    fn second_robot_avoids_the_shared_branch() {
        let g = diamond(2);
        let occ = Occupancy::from_paths(&g, &[ids(&[0, 1, 3])]).unwrap();
        assert_eq!(
            dijkstra_single(&g, &occ, VertexId(0), VertexId(3)).unwrap(),
            ids(&[0, 2, 3])
        );
    }

    #[test]
    fn blocked_goal_is_distinct_from_disconnected() {
        let g = diamond(2);
        let occ = Occupancy::from_paths(&g, &[ids(&[3, 1]), ids(&[3, 2])]).unwrap();
        assert_eq!(
            dijkstra_single(&g, &occ, VertexId(0), VertexId(3)),
            Err(PlanError::Blocked {
                start: VertexId(0),
                goal: VertexId(3)
            })
        );
        let lonely = Roadmap::from_parts(
            [(Point::new(0., 0.), 1.0), (Point::new(1., 0.), 1.0)],
            std::iter::empty(),
        )
        .unwrap();
        assert!(matches!(
            dijkstra_single(
                &lonely,
                &Occupancy::empty(&lonely),
                VertexId(0),
                VertexId(1)
            ),
            Err(PlanError::Disconnected { .. })
        ));
    }

    #[test]
    fn diamond_two_robots() {
        let set = plan_sequential(&diamond(2), &query(2)).unwrap();
        assert_eq!(set.paths, vec![ids(&[0, 1, 3]), ids(&[0, 2, 3])]);
        assert_eq!(set.robot_costs, vec![20.0, 24.0]);
        assert_eq!(set.objective, 24.0);
    }

    #[test]
    fn single_robot_is_plain_shortest_path() {
        let set = plan_sequential(&diamond(1), &query(1)).unwrap();
        assert_eq!(set.paths, vec![ids(&[0, 1, 3])]);
        assert_eq!(set.objective, 20.0);
    }

    #[test]
    fn evaluation_examples() {
        let g = diamond(2);
        let (costs, obj) = evaluate_plan(&g, &[ids(&[0, 1, 3]), ids(&[0, 1, 3])]).unwrap();
        assert_eq!(costs, vec![40.0, 40.0]);
        assert_eq!(obj, 40.0);
        assert!(matches!(
            evaluate_plan(&g, &[ids(&[0, 3])]),
            Err(PlanError::NotAnEdge { robot: 0, .. })
        ));
        assert!(matches!(
            evaluate_plan(&diamond(1), &[ids(&[0, 1, 3]), ids(&[0, 1, 3])]),
            Err(PlanError::CapacityExceeded { needed: 2, .. })
        ));
    }

    #[test]
    fn path_set_file_round_trip() {
        let g = diamond(2);
        let set = plan_sequential(&g, &query(2)).unwrap();
        let back = PathSet::from_json(set.to_json().as_bytes(), &g).unwrap();
        assert_eq!(back, set);
        let bad = br#"{"paths":[[0,9]],"costs":[1],"objective":1}"#;
        assert!(matches!(
            PathSet::from_json(bad, &g),
            Err(PathSetLoadError::UnknownVertex { robot: 0, .. })
        ));
    }
}
