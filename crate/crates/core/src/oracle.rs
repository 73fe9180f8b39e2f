//! Exhaustive-search optimum over tuples of simple paths, and the gap metric.
//!
//! Pricing, feasibility and the objective are identical for every
//! permutation of a tuple, so only nondecreasing index tuples (multisets)
//! are priced; each is the lexicographically smallest of its permutations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{PlanQuery, QueryError, Roadmap, VertexId};
use crate::planner::{make_schedule, PathSet, PlanError};

/// Objectives and totals within this distance are ties.
pub const TIE_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimits {
    pub max_simple_paths: usize,
    pub max_combinations: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_simple_paths: 10_000,
            max_combinations: 20_000_000,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("invalid limits: both must be positive")]
    InvalidLimits,
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("more than {limit} simple paths (stopped at {reached})")]
    PathLimitExceeded { limit: usize, reached: usize },
    #[error("{paths} paths for {robots} robots need {needed} combinations, budget is {limit}")]
    CombinationBudgetExceeded {
        paths: usize,
        robots: usize,
        needed: u128,
        limit: u64,
    },
    #[error("no feasible tuple of paths")]
    Infeasible,
    #[error(transparent)]
    Plan(#[from] PlanError),
}

/// All simple `start → goal` paths in lexicographic vertex-id order.
pub fn enumerate_simple_paths(
    roadmap: &Roadmap,
    start: VertexId,
    goal: VertexId,
    limit: usize,
) -> Result<Vec<Vec<VertexId>>, OracleError> {
    let mut out = Vec::new();
    let mut on_path = vec![false; roadmap.vertex_count()];
    let mut path = vec![start];
    on_path[start.0] = true;
    // neighbor lists are sorted by id, so DFS emits paths lexicographically
    let mut stack: Vec<usize> = vec![0];
    while let Some(&cursor) = stack.last() {
        let u = *path.last().expect("path follows stack");
        if u == goal {
            out.push(path.clone());
            if out.len() > limit {
                return Err(OracleError::PathLimitExceeded {
                    limit,
                    reached: out.len(),
                });
            }
            stack.pop();
            on_path[path.pop().expect("nonempty").0] = false;
            continue;
        }
        let nbrs = roadmap.neighbors(u);
        match nbrs[cursor..]
            .iter()
            .position(|inc| !on_path[inc.neighbor.0])
        {
            Some(off) => {
                let v = nbrs[cursor + off].neighbor;
                *stack.last_mut().expect("nonempty") = cursor + off + 1;
                on_path[v.0] = true;
                path.push(v);
                stack.push(0);
            }
            None => {
                stack.pop();
                on_path[path.pop().expect("nonempty").0] = false;
            }
        }
    }
    Ok(out)
}

/// Edges of each path with their direction flag, for fast tuple checks.
struct Priced {
    edges: Vec<(usize, bool)>,
}

/// Certified optimum: minimum max-cost over all feasible R-tuples of simple
/// paths (no opposite-direction sharing, schedulable), priced at final
/// occupancy. Ties go to the smaller total cost, then lexicographic order.
pub fn exhaustive_optimum(
    roadmap: &Roadmap,
    query: &PlanQuery,
    limits: &OracleLimits,
) -> Result<PathSet, OracleError> {
    if limits.max_simple_paths == 0 || limits.max_combinations == 0 {
        return Err(OracleError::InvalidLimits);
    }
    query.validate(roadmap)?;
    let paths = enumerate_simple_paths(roadmap, query.start, query.goal, limits.max_simple_paths)?;
    if paths.is_empty() {
        return Err(OracleError::Plan(PlanError::Disconnected {
            start: query.start,
            goal: query.goal,
        }));
    }
    let needed = (paths.len() as u128).saturating_pow(query.robots as u32);
    if needed > limits.max_combinations as u128 {
        return Err(OracleError::CombinationBudgetExceeded {
            paths: paths.len(),
            robots: query.robots,
            needed,
            limit: limits.max_combinations,
        });
    }

    let priced: Vec<Priced> = paths
        .iter()
        .map(|p| Priced {
            edges: p
                .windows(2)
                .map(|w| {
                    let e = roadmap
                        .edge_between(w[0], w[1])
                        .expect("enumerated along edges");
                    (e.0, roadmap.edge(e).u == w[0])
                })
                .collect(),
        })
        .collect();
    let capacity_ok = roadmap
        .edges()
        .iter()
        .all(|e| e.costs.capacity() >= query.robots);
    if !capacity_ok {
        // let evaluate_plan report the exact edge
        let all_on_first = vec![paths[0].clone(); query.robots];
        PathSet::evaluate(roadmap, all_on_first)?;
    }

    let r = query.robots;
    let mut count = vec![0usize; roadmap.edge_count()];
    let mut forward = vec![0usize; roadmap.edge_count()];
    let mut best: Option<(f64, f64, Vec<usize>)> = None;
    let mut idx = vec![0usize; r];
    let mut costs = vec![0.0; r];
    loop {
        for &i in &idx {
            for &(e, fwd) in &priced[i].edges {
                count[e] += 1;
                forward[e] += usize::from(fwd);
            }
        }
        let opposite = idx.iter().any(|&i| {
            priced[i]
                .edges
                .iter()
                .any(|&(e, _)| forward[e] != 0 && forward[e] != count[e])
        });
        if !opposite {
            for (slot, &i) in idx.iter().enumerate() {
                let mut total = 0.0;
                for &(e, _) in &priced[i].edges {
                    total += roadmap.edge(crate::model::EdgeId(e)).costs.as_slice()[count[e] - 1];
                }
                costs[slot] = total;
            }
            let objective = costs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = costs.iter().sum();
            let better = match &best {
                None => true,
                Some((bo, bs, _)) => {
                    objective < bo - TIE_EPS
                        || ((objective - bo).abs() <= TIE_EPS && sum < bs - TIE_EPS)
                }
            };
            if better {
                let tuple: Vec<Vec<VertexId>> = idx.iter().map(|&i| paths[i].clone()).collect();
                if make_schedule(&tuple).is_ok() {
                    best = Some((objective, sum, idx.clone()));
                }
            }
        }
        for &i in &idx {
            for &(e, fwd) in &priced[i].edges {
                count[e] -= 1;
                forward[e] -= usize::from(fwd);
            }
        }
        if !advance(&mut idx, paths.len()) {
            break;
        }
    }
    let (_, _, idx) = best.ok_or(OracleError::Infeasible)?;
    Ok(PathSet::evaluate(
        roadmap,
        idx.iter().map(|&i| paths[i].clone()).collect(),
    )?)
}

/// Next nondecreasing tuple over `0..n` in lexicographic order.
fn advance(idx: &mut [usize], n: usize) -> bool {
    let Some(pos) = idx.iter().rposition(|&i| i + 1 < n) else {
        return false;
    };
    let next = idx[pos] + 1;
    for slot in &mut idx[pos..] {
        *slot = next;
    }
    true
}

#[derive(Debug, Error, PartialEq)]
pub enum GapError {
    #[error("optimum {c_opt} must be positive")]
    NonPositiveOptimum { c_opt: f64 },
    #[error("cost {c} is below the optimum {c_opt}: oracle or planner is broken")]
    BelowOptimum { c: f64, c_opt: f64 },
}

/// Relative excess `(c − c_opt) / c_opt`, clamped to 0 within [`TIE_EPS`].
pub fn gap(c: f64, c_opt: f64) -> Result<f64, GapError> {
    if !(c_opt > 0.0) {
        return Err(GapError::NonPositiveOptimum { c_opt });
    }
    if c < c_opt - TIE_EPS {
        return Err(GapError::BelowOptimum { c, c_opt });
    }
    if (c - c_opt).abs() <= TIE_EPS {
        return Ok(0.0);
    }
    Ok((c - c_opt) / c_opt)
}
