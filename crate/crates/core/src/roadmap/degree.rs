use crate::model::{CostVector, EdgeSpec, Roadmap, VertexId};

/// Replaces every vertex of degree `d > 3` by a chain of `d - 2` colocated
/// vertices joined by virtual zero-length, zero-cost edges.
///
/// Incident edges are ordered by angle around the vertex (edge id breaks
/// ties); the chain ends take two consecutive edges each and every interior
/// chain vertex takes one, so each chain vertex ends up with degree 3. The
/// first chain vertex keeps the original id; the others are appended, as are
/// the virtual edges.
pub fn reduce_degree(roadmap: &Roadmap) -> Roadmap {
    let mut vertices = roadmap.vertex_parts();
    let mut edges = roadmap.edge_specs();
    let capacity = roadmap
        .edges()
        .iter()
        .map(|e| e.costs.capacity())
        .max()
        .unwrap_or(0);

    for v in roadmap.vertices() {
        let incident = roadmap.neighbors(v.id);
        let d = incident.len();
        if d <= 3 {
            continue;
        }
        let origin = v.position;
        let mut order: Vec<_> = incident
            .iter()
            .map(|inc| {
                let p = roadmap.vertex(inc.neighbor).position;
                ((p.y - origin.y).atan2(p.x - origin.x), inc.edge)
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut chain = vec![v.id];
        for _ in 0..d - 3 {
            chain.push(VertexId(vertices.len()));
            vertices.push((v.position, v.clearance));
        }
        for (slot, &(_, edge)) in order.iter().enumerate() {
            let owner = chain[(slot.max(1) - 1).min(d - 3)];
            let spec = &mut edges[edge.0];
            if spec.u == v.id {
                spec.u = owner;
            } else {
                spec.v = owner;
            }
        }
        for w in chain.windows(2) {
            edges.push(EdgeSpec {
                u: w[0],
                v: w[1],
                length: 0.0,
                clearance: v.clearance,
                is_virtual: true,
                costs: CostVector::zeros(capacity),
            });
        }
    }
    Roadmap::from_parts(vertices, edges).expect("degree reduction keeps the graph simple")
}
