//! Graph clean-up passes: clearance filtering, tail pruning, component
//! selection and degree-2 chain contraction.

use std::collections::{BTreeSet, HashSet};

use super::RoadmapError;
use crate::geometry::segments_intersect;
use crate::model::{CostVector, EdgeSpec, PolygonMap, Remap, Roadmap, VertexId};

/// Removes every non-virtual edge whose clearance is below `min_clearance`
/// (or not positive), whose midpoint lies inside an obstacle, or whose
/// segment crosses the map boundary. Vertices left isolated are dropped.
pub fn filter_edges(
    roadmap: &Roadmap,
    map: &PolygonMap,
    min_clearance: f64,
) -> Result<Roadmap, RoadmapError> {
    let segments = map.boundary_segments();
    let keep_edge: Vec<bool> = roadmap
        .edges()
        .iter()
        .map(|e| {
            if e.is_virtual {
                return true;
            }
            let a = roadmap.vertex(e.u).position;
            let b = roadmap.vertex(e.v).position;
            e.clearance > 0.0
                && e.clearance >= min_clearance
                && map.inside_obstacle(a.midpoint(b)).is_none()
                && !segments
                    .iter()
                    .any(|&(c, d)| segments_intersect(a, b, c, d))
        })
        .collect();
    let mut keep_vertex = vec![false; roadmap.vertex_count()];
    for e in roadmap.edges().iter().filter(|e| keep_edge[e.id.0]) {
        keep_vertex[e.u.0] = true;
        keep_vertex[e.v.0] = true;
    }
    if !keep_edge.iter().any(|&k| k) {
        return Err(RoadmapError::EmptyGraph);
    }
    Ok(roadmap.subgraph(&keep_vertex, &keep_edge).0)
}

/// Repeatedly deletes vertices of degree at most one that are not in
/// `keep`, together with their edges, until none remain.
pub fn prune_tails(roadmap: &Roadmap, keep: &BTreeSet<VertexId>) -> (Roadmap, Remap) {
    let n = roadmap.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|i| roadmap.degree(VertexId(i))).collect();
    let mut alive = vec![true; n];
    let mut stack: Vec<VertexId> = (0..n)
        .map(VertexId)
        .filter(|v| degree[v.0] <= 1 && !keep.contains(v))
        .collect();
    while let Some(v) = stack.pop() {
        if !alive[v.0] {
            continue;
        }
        alive[v.0] = false;
        for inc in roadmap.neighbors(v) {
            let w = inc.neighbor;
            if alive[w.0] {
                degree[w.0] -= 1;
                if degree[w.0] <= 1 && !keep.contains(&w) {
                    stack.push(w);
                }
            }
        }
    }
    let keep_edge = vec![true; roadmap.edge_count()];
    roadmap.subgraph(&alive, &keep_edge)
}

/// Keeps only one connected component: the one containing `anchor` when
/// given, otherwise the largest (ties go to the component with the
/// smallest vertex id).
pub fn select_component(roadmap: &Roadmap, anchor: Option<VertexId>) -> (Roadmap, Remap) {
    let components = roadmap.components();
    let chosen = match anchor {
        Some(a) => components.iter().find(|c| c.binary_search(&a).is_ok()),
        None => components
            .iter()
            .enumerate()
            .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
            .map(|(_, c)| c),
    };
    let mut keep_vertex = vec![false; roadmap.vertex_count()];
    if let Some(c) = chosen {
        for v in c {
            keep_vertex[v.0] = true;
        }
    }
    roadmap.subgraph(&keep_vertex, &vec![true; roadmap.edge_count()])
}

struct Chain {
    ends: (VertexId, VertexId),
    interior: Vec<VertexId>,
    edges: Vec<usize>,
}

fn merge_specs(roadmap: &Roadmap, u: VertexId, v: VertexId, edges: &[usize]) -> EdgeSpec {
    let parts: Vec<_> = edges.iter().map(|&e| &roadmap.edges()[e]).collect();
    let capacity = parts[0].costs.capacity();
    let costs = if parts.iter().all(|e| e.costs.capacity() == capacity) {
        let mut sum = vec![0.0; capacity];
        for e in &parts {
            for (acc, c) in sum.iter_mut().zip(e.costs.as_slice()) {
                *acc += c;
            }
        }
        CostVector::new(sum)
    } else {
        CostVector::default()
    };
    EdgeSpec {
        u,
        v,
        length: parts.iter().map(|e| e.length).sum(),
        clearance: parts
            .iter()
            .map(|e| e.clearance)
            .fold(f64::INFINITY, f64::min),
        is_virtual: parts.iter().all(|e| e.is_virtual),
        costs,
    }
}

/// Replaces every maximal chain of degree-2 vertices (outside `keep`) by a
/// single edge whose length is the chain length and whose clearance is the
/// chain minimum. A chain whose contraction would duplicate an existing
/// edge, or close a loop, keeps one or two interior vertices so the result
/// stays a simple graph. Components that are bare cycles are left alone.
pub fn contract_chains(roadmap: &Roadmap, keep: &BTreeSet<VertexId>) -> (Roadmap, Remap) {
    let n = roadmap.vertex_count();
    let mut anchor: Vec<bool> = (0..n)
        .map(|i| roadmap.degree(VertexId(i)) != 2 || keep.contains(&VertexId(i)))
        .collect();
    // bare cycles have no anchor to walk from; keep them intact
    for comp in roadmap.components() {
        if comp.iter().all(|v| !anchor[v.0]) {
            for v in &comp {
                anchor[v.0] = true;
            }
        }
    }

    let mut used = vec![false; roadmap.edge_count()];
    let mut chains = Vec::new();
    for a in (0..n).map(VertexId).filter(|v| anchor[v.0]) {
        for inc in roadmap.neighbors(a) {
            if used[inc.edge.0] {
                continue;
            }
            let mut edges = vec![inc.edge.0];
            let mut interior = Vec::new();
            used[inc.edge.0] = true;
            let mut prev_edge = inc.edge;
            let mut cur = inc.neighbor;
            while !anchor[cur.0] {
                interior.push(cur);
                let next = roadmap
                    .neighbors(cur)
                    .iter()
                    .find(|i| i.edge != prev_edge)
                    .expect("interior chain vertex has degree 2");
                used[next.edge.0] = true;
                edges.push(next.edge.0);
                prev_edge = next.edge;
                cur = next.neighbor;
            }
            chains.push(Chain {
                ends: (a, cur),
                interior,
                edges,
            });
        }
    }

    let mut pairs: HashSet<(VertexId, VertexId)> = chains
        .iter()
        .filter(|c| c.interior.is_empty())
        .map(|c| (c.ends.0.min(c.ends.1), c.ends.0.max(c.ends.1)))
        .collect();
    let mut keep_vertex = anchor.clone();
    // (kept vertex sequence, edges between consecutive kept vertices)
    let mut pieces: Vec<(VertexId, VertexId, Vec<usize>)> = Vec::new();
    for chain in &chains {
        let (a, b) = chain.ends;
        let m = chain.interior.len();
        let splits: Vec<usize> = if m == 0 {
            vec![]
        } else if a == b {
            vec![m / 3, (2 * m) / 3]
        } else if pairs.contains(&(a.min(b), a.max(b))) {
            vec![m / 2]
        } else {
            pairs.insert((a.min(b), a.max(b)));
            vec![]
        };
        let mut start = a;
        let mut from = 0;
        for &s in &splits {
            let mid = chain.interior[s];
            keep_vertex[mid.0] = true;
            pieces.push((start, mid, chain.edges[from..=s].to_vec()));
            start = mid;
            from = s + 1;
        }
        pieces.push((start, b, chain.edges[from..].to_vec()));
    }

    let mut old_to_new = vec![None; n];
    let mut parts = Vec::new();
    for (i, v) in roadmap.vertices().iter().enumerate() {
        if keep_vertex[i] {
            old_to_new[i] = Some(VertexId(parts.len()));
            parts.push((v.position, v.clearance));
        }
    }
    let mut specs: Vec<(usize, EdgeSpec)> = pieces
        .into_iter()
        .map(|(u, v, edges)| {
            let first = *edges.iter().min().expect("non-empty piece");
            let spec = merge_specs(
                roadmap,
                old_to_new[u.0].expect("kept"),
                old_to_new[v.0].expect("kept"),
                &edges,
            );
            (first, spec)
        })
        .collect();
    specs.sort_by_key(|(first, _)| *first);
    let contracted = Roadmap::from_parts(parts, specs.into_iter().map(|(_, s)| s))
        .expect("chain contraction keeps the graph simple");
    (contracted, Remap::from_vec(old_to_new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn path_graph(n: usize) -> Roadmap {
        Roadmap::from_parts(
            (0..n).map(|i| (Point::new(i as f64, 0.0), 1.0)),
            (1..n).map(|i| EdgeSpec::real(VertexId(i - 1), VertexId(i), 1.0, 1.0)),
        )
        .unwrap()
    }

    #[test]
    fn protected_endpoints_are_kept() {
        let g = path_graph(3);
        let keep = BTreeSet::from([VertexId(0), VertexId(2)]);
        let (out, _) = prune_tails(&g, &keep);
        assert_eq!(out, g);
    }

    #[test]
    fn one_pruning_step() {
        let g = path_graph(4);
        let keep = BTreeSet::from([VertexId(0), VertexId(2)]);
        let (out, remap) = prune_tails(&g, &keep);
        assert_eq!(out, path_graph(3));
        assert_eq!(remap.get(VertexId(3)), None);
        assert_eq!(remap.get(VertexId(2)), Some(VertexId(2)));
    }

    #[test]
    fn contraction_of_a_path() {
        let g = path_graph(5);
        let (out, remap) = contract_chains(&g, &BTreeSet::new());
        assert_eq!(out.vertex_count(), 2);
        assert_eq!(out.edge_count(), 1);
        assert_eq!(out.edges()[0].length, 4.0);
        assert_eq!(remap.get(VertexId(4)), Some(VertexId(1)));
        assert_eq!(remap.get(VertexId(2)), None);
    }

    #[test]
    fn contraction_keeps_graph_simple() {
        // Two parallel routes between 0 and 3, plus a pendant on each end.
        let pts = [(0., 0.), (1., 1.), (1., -1.), (2., 0.), (-1., 0.), (3., 0.)];
        let edges = [(0, 1), (1, 3), (0, 2), (2, 3), (4, 0), (3, 5)];
        let g = Roadmap::from_parts(
            pts.iter().map(|&(x, y)| (Point::new(x, y), 1.0)),
            edges
                .iter()
                .map(|&(a, b)| EdgeSpec::real(VertexId(a), VertexId(b), 1.0, 1.0)),
        )
        .unwrap();
        let (out, _) = contract_chains(&g, &BTreeSet::new());
        // One route contracts to a direct edge, the other keeps its middle.
        assert_eq!(out.vertex_count(), 5);
        assert_eq!(out.edge_count(), 5);
    }

    #[test]
    fn bare_cycle_untouched() {
        let g = Roadmap::from_parts(
            (0..4).map(|i| (Point::new(i as f64, (i % 2) as f64), 1.0)),
            (0..4).map(|i| EdgeSpec::real(VertexId(i), VertexId((i + 1) % 4), 1.0, 1.0)),
        )
        .unwrap();
        let (out, _) = contract_chains(&g, &BTreeSet::new());
        assert_eq!(out.vertex_count(), 4);
    }
}
