use super::RoadmapError;
use crate::model::{CostVector, Roadmap};

/// Cost for one robot crossing an edge shared by `r` robots:
/// `length · (1 + α / clearance) · (1 + k · (r − 1) / 100)`.
pub fn edge_cost(length: f64, clearance: f64, alpha: f64, k: f64, r: usize) -> f64 {
    length * (1.0 + alpha / clearance) * (1.0 + k * (r as f64 - 1.0) / 100.0)
}

/// Attaches a cost vector of capacity `robots` to every edge. Virtual edges
/// get all-zero vectors.
pub fn evaluate_edge_costs(
    roadmap: &Roadmap,
    robots: usize,
    k: f64,
    alpha: f64,
) -> Result<Roadmap, RoadmapError> {
    if robots == 0 {
        return Err(RoadmapError::InvalidParams(
            "robot count must be at least 1",
        ));
    }
    if !(k.is_finite() && k >= 0.0) {
        return Err(RoadmapError::InvalidParams(
            "k must be finite and non-negative",
        ));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(RoadmapError::InvalidParams(
            "alpha must be finite and non-negative",
        ));
    }
    let costs = roadmap
        .edges()
        .iter()
        .map(|e| {
            if e.is_virtual {
                return Ok(CostVector::zeros(robots));
            }
            if e.clearance <= 0.0 {
                return Err(RoadmapError::ZeroClearance { edge: e.id.0 });
            }
            Ok(CostVector::new(
                (1..=robots)
                    .map(|r| edge_cost(e.length, e.clearance, alpha, k, r))
                    .collect(),
            ))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(roadmap.with_costs(costs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::model::{EdgeId, EdgeSpec, VertexId};

    fn one_edge(clearance: f64) -> Roadmap {
        Roadmap::from_parts(
            [(Point::new(0., 0.), 1.0), (Point::new(10., 0.), 1.0)],
            [EdgeSpec::real(VertexId(0), VertexId(1), 10.0, clearance)],
        )
        .unwrap()
    }

    #[test]
    fn formula_values() {
        let r = evaluate_edge_costs(&one_edge(2.0), 2, 100.0, 1.0).unwrap();
        let c = &r.edge(EdgeId(0)).costs;
        assert_eq!(c.get(1), Some(15.0));
        assert_eq!(c.get(2), Some(30.0));
    }

    #[test]
    fn zero_k_is_flat() {
        let r = evaluate_edge_costs(&one_edge(2.0), 5, 0.0, 1.0).unwrap();
        let c = r.edge(EdgeId(0)).costs.as_slice();
        assert!(c.iter().all(|&x| x == c[0]));
    }

    #[test]
    fn zero_clearance_is_internal_error() {
        assert!(matches!(
            evaluate_edge_costs(&one_edge(0.0), 2, 10.0, 1.0),
            Err(RoadmapError::ZeroClearance { edge: 0 })
        ));
    }
}
