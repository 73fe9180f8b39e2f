use super::{skeleton::ClearanceField, RoadmapError};
use crate::geometry::{distance_to_segment, project_onto_segment, Point};
use crate::model::{CostVector, EdgeSpec, PolygonMap, Roadmap, VertexId};

const COINCIDENT: f64 = 1e-9;

/// Adds `point` to the roadmap and returns its vertex id.
///
/// A point within 1e-9 of an existing vertex reuses it. Otherwise the point
/// is projected onto the nearest edge (smallest edge id on ties); that edge
/// is split at the projection and the point is joined to the split vertex.
/// The two halves keep the original clearance; the connector gets the
/// geometric clearance of its endpoints and midpoint. Edges created here
/// carry empty cost vectors, so costs must be evaluated afterwards.
pub fn insert_terminal(
    roadmap: &Roadmap,
    map: &PolygonMap,
    point: Point,
) -> Result<(Roadmap, VertexId), RoadmapError> {
    if !map.border.contains(point) {
        return Err(RoadmapError::PointOutsideBorder);
    }
    if let Some(obstacle) = map.inside_obstacle(point) {
        return Err(RoadmapError::PointInObstacle { obstacle });
    }
    if let Some(v) = roadmap
        .vertices()
        .iter()
        .find(|v| v.position.distance(point) <= COINCIDENT)
    {
        return Ok((roadmap.clone(), v.id));
    }

    let mut nearest: Option<(usize, f64)> = None;
    for e in roadmap.edges() {
        let a = roadmap.vertex(e.u).position;
        let b = roadmap.vertex(e.v).position;
        let d = distance_to_segment(point, a, b);
        if nearest.is_none_or(|(_, best)| d < best - COINCIDENT) {
            nearest = Some((e.id.0, d));
        }
    }
    let (edge_idx, _) = nearest.ok_or(RoadmapError::EmptyGraph)?;
    let edge = &roadmap.edges()[edge_idx];
    let a = roadmap.vertex(edge.u).position;
    let b = roadmap.vertex(edge.v).position;
    let t = project_onto_segment(point, a, b);
    let foot = a.lerp(b, t);
    let clearance = ClearanceField::new(map);

    let mut vertices = roadmap.vertex_parts();
    let mut edges = roadmap.edge_specs();

    let split = if foot.distance(a) <= COINCIDENT {
        edge.u
    } else if foot.distance(b) <= COINCIDENT {
        edge.v
    } else {
        let mid = VertexId(vertices.len());
        vertices.push((foot, clearance.at(foot)));
        let original = edges[edge_idx].clone();
        edges[edge_idx] = EdgeSpec {
            v: mid,
            length: a.distance(foot),
            costs: CostVector::default(),
            ..original.clone()
        };
        edges.push(EdgeSpec {
            u: mid,
            length: foot.distance(b),
            costs: CostVector::default(),
            ..original
        });
        mid
    };

    if foot.distance(point) <= COINCIDENT {
        let rm = Roadmap::from_parts(vertices, edges)?;
        return Ok((rm, split));
    }
    let terminal = VertexId(vertices.len());
    vertices.push((point, clearance.at(point)));
    let split_pos = vertices[split.0].0;
    edges.push(EdgeSpec::real(
        split,
        terminal,
        split_pos.distance(point),
        clearance.of_edge(split_pos, point),
    ));
    Ok((Roadmap::from_parts(vertices, edges)?, terminal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EdgeId, Rect};

    fn open_map() -> PolygonMap {
        PolygonMap::new("open", Rect::new(-50., -50., 50., 50.), vec![]).unwrap()
    }

    fn single_edge() -> Roadmap {
        Roadmap::from_parts(
            [(Point::new(0., 0.), 1.0), (Point::new(10., 0.), 1.0)],
            [EdgeSpec::real(VertexId(0), VertexId(1), 10.0, 4.0)],
        )
        .unwrap()
    }

    #[test]
    fn existing_vertex_is_reused() {
        let g = single_edge();
        let (out, id) = insert_terminal(&g, &open_map(), Point::new(10.0, 0.0)).unwrap();
        assert_eq!(id, VertexId(1));
        assert_eq!(out, g);
    }

    #[test]
    fn midpoint_projection_splits_edge() {
        let g = single_edge();
        let (out, id) = insert_terminal(&g, &open_map(), Point::new(5.0, 3.0)).unwrap();
        assert_eq!(id, VertexId(3));
        assert_eq!(out.edge_count(), 3);
        assert_eq!(out.edge(EdgeId(0)).length, 5.0);
        assert_eq!(out.edge(EdgeId(1)).length, 5.0);
        assert_eq!(out.edge(EdgeId(2)).length, 3.0);
        assert_eq!(out.edge(EdgeId(0)).clearance, 4.0);
        assert_eq!(out.edge(EdgeId(1)).clearance, 4.0);
        assert_eq!(out.vertex(VertexId(2)).position, Point::new(5.0, 0.0));
    }

    #[test]
    fn point_in_obstacle_rejected() {
        let map = PolygonMap::new(
            "o",
            Rect::new(-50., -50., 50., 50.),
            vec![Rect::new(4., 2., 6., 4.).corners().to_vec()],
        )
        .unwrap();
        assert!(matches!(
            insert_terminal(&single_edge(), &map, Point::new(5.0, 3.0)),
            Err(RoadmapError::PointInObstacle { obstacle: 0 })
        ));
    }

    #[test]
    fn point_beyond_edge_end_connects_to_endpoint() {
        let (out, id) = insert_terminal(&single_edge(), &open_map(), Point::new(13., 4.)).unwrap();
        assert_eq!(out.vertex_count(), 3);
        assert_eq!(out.edge_between(VertexId(1), id), Some(EdgeId(1)));
        assert_eq!(out.edge(EdgeId(1)).length, 5.0);
    }
}
