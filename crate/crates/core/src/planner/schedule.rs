//! Path feasibility checks and wait-synchronized scheduling.
//!
//! Every vertex visited by several robots must be reached by all of them at
//! the same step. Consecutive path vertices `a → b` require
//! `step(b) ≥ step(a) + 1`, so the least schedule is the longest-path labelling
//! of the union of all path arcs, which exists iff that union is acyclic.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{PlanQuery, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("scheduling conflict: cyclic wait through vertices {cycle:?}")]
pub struct ScheduleConflict {
    /// Vertices of one offending cycle, starting at its smallest id.
    pub cycle: Vec<VertexId>,
}

/// Arrival steps per robot; a gap larger than one between consecutive
/// arrivals means the robot waits at the earlier vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub arrivals: Vec<Vec<(VertexId, usize)>>,
    pub k_min: usize,
}

impl Schedule {
    /// Position of `robot` at every step `0..=k_min`, with waits expanded
    /// as repeated vertices.
    pub fn timeline(&self, robot: usize) -> Vec<VertexId> {
        let arr = &self.arrivals[robot];
        let mut out = Vec::with_capacity(self.k_min + 1);
        for w in arr.windows(2) {
            let (v, t) = w[0];
            let (_, next_t) = w[1];
            out.extend(std::iter::repeat_n(v, next_t - t));
        }
        if let Some(&(v, t)) = arr.last() {
            out.extend(std::iter::repeat_n(v, self.k_min + 1 - t));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serialization is infallible")
    }
}

pub fn make_schedule(paths: &[Vec<VertexId>]) -> Result<Schedule, ScheduleConflict> {
    let mut succ: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    let mut indegree: HashMap<VertexId, usize> = HashMap::new();
    for path in paths {
        for &v in path {
            succ.entry(v).or_default();
            indegree.entry(v).or_insert(0);
        }
        for w in path.windows(2) {
            if succ.get_mut(&w[0]).expect("inserted").insert(w[1]) {
                *indegree.get_mut(&w[1]).expect("inserted") += 1;
            }
        }
    }

    let mut step: HashMap<VertexId, usize> = succ.keys().map(|&v| (v, 0)).collect();
    let mut ready: BTreeSet<VertexId> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&v, _)| v)
        .collect();
    let mut done = 0;
    while let Some(u) = ready.pop_first() {
        done += 1;
        let su = step[&u];
        for &v in &succ[&u] {
            let sv = step.get_mut(&v).expect("known vertex");
            *sv = (*sv).max(su + 1);
            let d = indegree.get_mut(&v).expect("known vertex");
            *d -= 1;
            if *d == 0 {
                ready.insert(v);
            }
        }
    }
    if done < succ.len() {
        return Err(find_cycle(&succ, &indegree));
    }

    let arrivals: Vec<Vec<(VertexId, usize)>> = paths
        .iter()
        .map(|p| p.iter().map(|v| (*v, step[v])).collect())
        .collect();
    let k_min = arrivals
        .iter()
        .filter_map(|a| a.last().map(|&(_, t)| t))
        .max()
        .unwrap_or(0);
    Ok(Schedule { arrivals, k_min })
}

/// Every vertex Kahn's algorithm could not release has an unreleased
/// predecessor; walking predecessors must therefore revisit a vertex.
fn find_cycle(
    succ: &BTreeMap<VertexId, BTreeSet<VertexId>>,
    indegree: &HashMap<VertexId, usize>,
) -> ScheduleConflict {
    let stuck: BTreeSet<VertexId> = indegree
        .iter()
        .filter(|(_, &d)| d > 0)
        .map(|(&v, _)| v)
        .collect();
    let mut pred: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (&u, vs) in succ {
        if !stuck.contains(&u) {
            continue;
        }
        for &v in vs {
            if stuck.contains(&v) {
                pred.entry(v).or_insert(u);
            }
        }
    }
    let mut order = Vec::new();
    let mut pos: HashMap<VertexId, usize> = HashMap::new();
    let mut cur = *stuck.first().expect("at least one stuck vertex");
    while !pos.contains_key(&cur) {
        pos.insert(cur, order.len());
        order.push(cur);
        cur = pred[&cur];
    }
    let mut cycle: Vec<VertexId> = order[pos[&cur]..].to_vec();
    cycle.reverse();
    let min_at = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, v)| **v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    cycle.rotate_left(min_at);
    ScheduleConflict { cycle }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyPath {
        robot: usize,
    },
    /// Constraint 1: the path does not begin at the common start.
    WrongStart {
        robot: usize,
        found: VertexId,
    },
    /// Constraint 2: the path does not end at the common goal.
    WrongGoal {
        robot: usize,
        found: VertexId,
    },
    /// Constraint 3: `first` goes `from → to` while `second` goes `to → from`.
    OppositeTraversal {
        first: usize,
        second: usize,
        from: VertexId,
        to: VertexId,
    },
    /// Constraint 4: no wait-synchronized schedule exists.
    Unschedulable(ScheduleConflict),
}

/// Returns every violated feasibility constraint; empty means feasible.
pub fn check_constraints(paths: &[Vec<VertexId>], query: &PlanQuery) -> Vec<Violation> {
    let mut out = Vec::new();
    for (robot, path) in paths.iter().enumerate() {
        match (path.first(), path.last()) {
            (Some(&s), Some(&g)) => {
                if s != query.start {
                    out.push(Violation::WrongStart { robot, found: s });
                }
                if g != query.goal {
                    out.push(Violation::WrongGoal { robot, found: g });
                }
            }
            _ => out.push(Violation::EmptyPath { robot }),
        }
    }

    // (low, high) vertex pair -> robots crossing low→high and high→low
    let mut users: BTreeMap<(VertexId, VertexId), [Vec<usize>; 2]> = BTreeMap::new();
    for (robot, path) in paths.iter().enumerate() {
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            let key = (a.min(b), a.max(b));
            let slot = usize::from(a > b);
            let list = &mut users.entry(key).or_default()[slot];
            if list.last() != Some(&robot) {
                list.push(robot);
            }
        }
    }
    let mut opposite = BTreeSet::new();
    for ((lo, hi), [up, down]) in &users {
        for &i in up {
            for &j in down {
                let (first, second, from, to) = if i < j {
                    (i, j, *lo, *hi)
                } else {
                    (j, i, *hi, *lo)
                };
                opposite.insert((first, second, from, to));
            }
        }
    }
    out.extend(opposite.into_iter().map(|(first, second, from, to)| {
        Violation::OppositeTraversal {
            first,
            second,
            from,
            to,
        }
    }));

    if let Err(conflict) = make_schedule(paths) {
        out.push(Violation::Unschedulable(conflict));
    }
    out
}
