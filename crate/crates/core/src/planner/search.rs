//! Occupancy bookkeeping and the occupancy-aware single-robot search.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use super::PlanError;
use crate::model::{EdgeId, Roadmap, VertexId};

/// Traversal direction relative to the edge's stored `(u, v)` orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn of(roadmap: &Roadmap, edge: EdgeId, from: VertexId) -> Direction {
        if roadmap.edge(edge).u == from {
            Direction::Forward
        } else {
            Direction::Backward
        }
    }

    pub fn reverse(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    fn index(self) -> usize {
        match self {
            Direction::Forward => 0,
            Direction::Backward => 1,
        }
    }
}

/// Per-edge count of planned robots in each direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occupancy {
    counts: Vec<[usize; 2]>,
}

impl Occupancy {
    pub fn empty(roadmap: &Roadmap) -> Self {
        Occupancy {
            counts: vec![[0, 0]; roadmap.edge_count()],
        }
    }

    pub fn from_paths<'a>(
        roadmap: &Roadmap,
        paths: impl IntoIterator<Item = &'a Vec<VertexId>>,
    ) -> Result<Self, PlanError> {
        let mut occ = Occupancy::empty(roadmap);
        for (robot, path) in paths.into_iter().enumerate() {
            occ.add_path(roadmap, robot, path)?;
        }
        Ok(occ)
    }

    fn add_path(
        &mut self,
        roadmap: &Roadmap,
        robot: usize,
        path: &[VertexId],
    ) -> Result<(), PlanError> {
        for w in path.windows(2) {
            let edge = roadmap
                .edge_between(w[0], w[1])
                .ok_or(PlanError::NotAnEdge {
                    robot,
                    from: w[0],
                    to: w[1],
                })?;
            self.counts[edge.0][Direction::of(roadmap, edge, w[0]).index()] += 1;
        }
        Ok(())
    }

    pub fn count(&self, edge: EdgeId, dir: Direction) -> usize {
        self.counts[edge.0][dir.index()]
    }

    /// Robots on the edge in either direction (n_e).
    pub fn total(&self, edge: EdgeId) -> usize {
        let [f, b] = self.counts[edge.0];
        f + b
    }

    /// Used edges with their forward/backward counts, in id order.
    pub fn used(&self) -> impl Iterator<Item = (EdgeId, usize, usize)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| c[0] + c[1] > 0)
            .map(|(i, c)| (EdgeId(i), c[0], c[1]))
    }
}

/// Load seen by the next robot entering an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentLoad {
    /// Formation size `r_uv` the robot would join, including itself.
    Shared(usize),
    /// A planned robot already uses the edge the other way.
    Blocked,
}

pub fn robots_in_segment(occupancy: &Occupancy, edge: EdgeId, dir: Direction) -> SegmentLoad {
    if occupancy.count(edge, dir.reverse()) > 0 {
        SegmentLoad::Blocked
    } else {
        SegmentLoad::Shared(1 + occupancy.count(edge, dir))
    }
}

#[derive(Clone, Copy, Debug)]
struct QueueEntry {
    cost: f64,
    vertex: VertexId,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    // reversed: BinaryHeap is a max-heap, we want the cheapest, then smallest id
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra bookkeeping: best known cost, predecessor, settled flags and the
/// priority queue.
#[derive(Debug)]
pub struct SearchState {
    pub cost: Vec<f64>,
    pub prev: Vec<Option<VertexId>>,
    pub settled: Vec<bool>,
    queue: BinaryHeap<QueueEntry>,
}

impl SearchState {
    pub fn new(vertex_count: usize, start: VertexId) -> Self {
        let mut cost = vec![f64::INFINITY; vertex_count];
        cost[start.0] = 0.0;
        let mut queue = BinaryHeap::new();
        queue.push(QueueEntry {
            cost: 0.0,
            vertex: start,
        });
        SearchState {
            cost,
            prev: vec![None; vertex_count],
            settled: vec![false; vertex_count],
            queue,
        }
    }

    fn pop(&mut self) -> Option<VertexId> {
        while let Some(QueueEntry { cost, vertex }) = self.queue.pop() {
            if !self.settled[vertex.0] && cost <= self.cost[vertex.0] {
                self.settled[vertex.0] = true;
                return Some(vertex);
            }
        }
        None
    }

    fn path_to(&self, goal: VertexId) -> Vec<VertexId> {
        let mut path = vec![goal];
        let mut cur = goal;
        while let Some(p) = self.prev[cur.0] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

/// Cheapest start→goal path for one more robot given the robots already in
/// `occupancy`. Crossing `u→v` costs `c_{r_uv}` with `r_uv` from
/// [`robots_in_segment`]; blocked edges are skipped. Equal-cost relaxations
/// prefer the smaller predecessor id; equal-cost queue entries pop in vertex
/// id order.
pub fn dijkstra_single(
    roadmap: &Roadmap,
    occupancy: &Occupancy,
    start: VertexId,
    goal: VertexId,
) -> Result<Vec<VertexId>, PlanError> {
    let mut state = SearchState::new(roadmap.vertex_count(), start);
    while let Some(u) = state.pop() {
        if u == goal {
            return Ok(state.path_to(goal));
        }
        let base = state.cost[u.0];
        for inc in roadmap.neighbors(u) {
            let v = inc.neighbor;
            if state.settled[v.0] {
                continue;
            }
            let dir = Direction::of(roadmap, inc.edge, u);
            let r = match robots_in_segment(occupancy, inc.edge, dir) {
                SegmentLoad::Blocked => continue,
                SegmentLoad::Shared(r) => r,
            };
            let costs = &roadmap.edge(inc.edge).costs;
            let step = costs.get(r).ok_or(PlanError::CapacityExceeded {
                edge: inc.edge,
                needed: r,
                capacity: costs.capacity(),
            })?;
            let candidate = base + step;
            if candidate < state.cost[v.0] {
                state.cost[v.0] = candidate;
                state.prev[v.0] = Some(u);
                state.queue.push(QueueEntry {
                    cost: candidate,
                    vertex: v,
                });
            } else if candidate == state.cost[v.0] && state.prev[v.0].is_some_and(|p| u < p) {
                state.prev[v.0] = Some(u);
            }
        }
    }
    if reachable_ignoring_blocks(roadmap, start, goal) {
        Err(PlanError::Blocked { start, goal })
    } else {
        Err(PlanError::Disconnected { start, goal })
    }
}

fn reachable_ignoring_blocks(roadmap: &Roadmap, start: VertexId, goal: VertexId) -> bool {
    let mut seen = vec![false; roadmap.vertex_count()];
    let mut queue = VecDeque::from([start]);
    seen[start.0] = true;
    while let Some(u) = queue.pop_front() {
        if u == goal {
            return true;
        }
        for inc in roadmap.neighbors(u) {
            if !seen[inc.neighbor.0] {
                seen[inc.neighbor.0] = true;
                queue.push_back(inc.neighbor);
            }
        }
    }
    false
}
