//! Path-improvement pass: re-plan each robot against all the others and keep
//! the change only when the formation cost strictly drops.

use crate::model::{PlanQuery, Roadmap, VertexId};
use crate::planner::{dijkstra_single, Occupancy, PathSet, PlanError};

/// Improvements smaller than this are treated as ties (incumbent wins).
pub const IMPROVEMENT_EPS: f64 = 1e-9;

pub fn max_cost(set: &PathSet) -> Result<f64, PlanError> {
    if set.robot_costs.is_empty() {
        return Err(PlanError::EmptyPathSet);
    }
    Ok(set
        .robot_costs
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max))
}

/// A re-plan that found no route; the original path was kept.
#[derive(Clone, Debug, PartialEq)]
pub struct SkippedReplan {
    pub robot: usize,
    pub reason: PlanError,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Optimized {
    pub set: PathSet,
    /// Robots whose re-planned path was adopted, in sweep order.
    pub improved: Vec<usize>,
    pub skipped: Vec<SkippedReplan>,
}

/// One sweep over robots `0..R`. Robot `i` is taken out, re-planned against
/// the occupancy of the other `R − 1` paths and put back at index `i`; the
/// candidate replaces the incumbent only if its max cost is lower by more
/// than [`IMPROVEMENT_EPS`].
pub fn optimize_paths(
    roadmap: &Roadmap,
    set: &PathSet,
    query: &PlanQuery,
) -> Result<Optimized, PlanError> {
    let mut best = set.clone();
    let mut best_cost = max_cost(&best)?;
    let mut improved = Vec::new();
    let mut skipped = Vec::new();
    for i in 0..best.len() {
        let others: Vec<&Vec<VertexId>> = best
            .paths
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p)
            .collect();
        let occupancy = Occupancy::from_paths(roadmap, others)?;
        let path = match dijkstra_single(roadmap, &occupancy, query.start, query.goal) {
            Ok(p) => p,
            Err(e @ (PlanError::Blocked { .. } | PlanError::Disconnected { .. })) => {
                skipped.push(SkippedReplan {
                    robot: i,
                    reason: e,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        if path == best.paths[i] {
            continue;
        }
        let mut paths = best.paths.clone();
        paths[i] = path;
        let candidate = PathSet::evaluate(roadmap, paths)?;
        let cost = max_cost(&candidate)?;
        if cost < best_cost - IMPROVEMENT_EPS {
            best = candidate;
            best_cost = cost;
            improved.push(i);
        }
    }
    Ok(Optimized {
        set: best,
        improved,
        skipped,
    })
}

/// Sequential planning with an improvement pass after each new robot:
/// robot `r` is planned against robots `1..r−1`, then the partial set of `r`
/// paths gets `rounds` optimization sweeps.
pub fn plan_optimized(
    roadmap: &Roadmap,
    query: &PlanQuery,
    rounds: usize,
) -> Result<PathSet, PlanError> {
    query.validate(roadmap)?;
    let mut set = PathSet::evaluate(roadmap, Vec::new())?;
    for robot in 0..query.robots {
        let path =
            dijkstra_single(roadmap, &set.occupancy, query.start, query.goal).map_err(|e| {
                PlanError::Robot {
                    robot,
                    source: Box::new(e),
                }
            })?;
        let mut paths = set.paths;
        paths.push(path);
        set = PathSet::evaluate(roadmap, paths)?;
        for _ in 0..rounds {
            let out = optimize_paths(roadmap, &set, query)?;
            let stalled = out.improved.is_empty();
            set = out.set;
            if stalled {
                break;
            }
        }
    }
    Ok(set)
}
