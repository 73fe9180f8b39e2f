//! World and graph data types together with their JSON file formats.
//!
//! Everything here is immutable once constructed; operations in the other
//! modules build new values instead of mutating these in place.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{loop_edges, orient, point_in_polygon, segments_intersect, signed_area2};
pub use crate::geometry::{Point, Rect};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("border must have positive finite width and height")]
    InvalidBorder,
    #[error("polygon {polygon}: {reason}")]
    InvalidPolygon {
        polygon: usize,
        reason: PolygonDefect,
    },
    #[error("polygons {first} and {second} overlap")]
    OverlappingPolygons { first: usize, second: usize },
    #[error("vertex at position {index} has id {id}; ids must be dense and ordered")]
    NonDenseVertexId { index: usize, id: usize },
    #[error("edge at position {index} has id {id}; ids must be dense and ordered")]
    NonDenseEdgeId { index: usize, id: usize },
    #[error("edge {edge} references missing vertex {vertex}")]
    DanglingEndpoint { edge: usize, vertex: usize },
    #[error("edge {edge} is a self-loop")]
    SelfLoop { edge: usize },
    #[error("edge {edge} duplicates edge {other}")]
    ParallelEdge { edge: usize, other: usize },
    #[error("virtual edge {edge} must have zero length and zero costs")]
    InvalidVirtualEdge { edge: usize },
    #[error("edge {edge} has a negative or non-finite length, clearance or cost")]
    InvalidEdgeValue { edge: usize },
    #[error("vertex {vertex} has a non-finite coordinate or clearance")]
    InvalidVertexValue { vertex: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolygonDefect {
    TooFewVertices,
    NonFinite,
    Degenerate,
    SelfIntersecting,
    OutsideBorder,
}

impl fmt::Display for PolygonDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PolygonDefect::TooFewVertices => "fewer than three vertices",
            PolygonDefect::NonFinite => "non-finite coordinate",
            PolygonDefect::Degenerate => "degenerate (zero area or collinear vertices)",
            PolygonDefect::SelfIntersecting => "self-intersecting",
            PolygonDefect::OutsideBorder => "not inside the border",
        };
        f.write_str(s)
    }
}

/// Rectangular world with simple, pairwise disjoint polygonal obstacles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonMap {
    pub name: String,
    pub border: Rect,
    pub obstacles: Vec<Vec<Point>>,
}

impl PolygonMap {
    /// Validates and returns the map. A repeated closing vertex on an
    /// obstacle loop is dropped.
    pub fn new(
        name: impl Into<String>,
        border: Rect,
        obstacles: Vec<Vec<Point>>,
    ) -> Result<Self, ModelError> {
        let obstacles = obstacles
            .into_iter()
            .map(|mut poly| {
                if poly.len() > 1 && poly.first() == poly.last() {
                    poly.pop();
                }
                poly
            })
            .collect();
        let map = PolygonMap {
            name: name.into(),
            border,
            obstacles,
        };
        map.validate()?;
        Ok(map)
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, ModelError> {
        let raw: PolygonMap = serde_json::from_slice(bytes)?;
        PolygonMap::new(raw.name, raw.border, raw.obstacles)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map serialization is infallible")
    }

    fn validate(&self) -> Result<(), ModelError> {
        let b = &self.border;
        let finite = [b.xmin, b.ymin, b.xmax, b.ymax]
            .iter()
            .all(|v| v.is_finite());
        if !finite || b.width() <= 0.0 || b.height() <= 0.0 {
            return Err(ModelError::InvalidBorder);
        }
        for (i, poly) in self.obstacles.iter().enumerate() {
            check_polygon(poly, b)
                .map_err(|reason| ModelError::InvalidPolygon { polygon: i, reason })?;
        }
        for i in 0..self.obstacles.len() {
            for j in i + 1..self.obstacles.len() {
                if polygons_overlap(&self.obstacles[i], &self.obstacles[j]) {
                    return Err(ModelError::OverlappingPolygons {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(())
    }

    /// All boundary segments: the four border sides first, then every
    /// obstacle edge in loop order.
    pub fn boundary_segments(&self) -> Vec<(Point, Point)> {
        let corners = self.border.corners();
        let mut segs: Vec<(Point, Point)> = loop_edges(&corners).collect();
        for poly in &self.obstacles {
            segs.extend(loop_edges(poly));
        }
        segs
    }

    pub fn inside_obstacle(&self, p: Point) -> Option<usize> {
        self.obstacles
            .iter()
            .position(|poly| point_in_polygon(p, poly))
    }

    pub fn obstacle_area(&self) -> f64 {
        self.obstacles
            .iter()
            .map(|p| 0.5 * signed_area2(p).abs())
            .sum()
    }
}

fn check_polygon(poly: &[Point], border: &Rect) -> Result<(), PolygonDefect> {
    let n = poly.len();
    if n < 3 {
        return Err(PolygonDefect::TooFewVertices);
    }
    if poly.iter().any(|p| !p.is_finite()) {
        return Err(PolygonDefect::NonFinite);
    }
    for i in 0..n {
        let a = poly[(i + n - 1) % n];
        let b = poly[i];
        let c = poly[(i + 1) % n];
        if a == b || orient(a, b, c) == 0.0 {
            return Err(PolygonDefect::Degenerate);
        }
    }
    let edges: Vec<_> = loop_edges(poly).collect();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            if segments_intersect(a, b, c, d) {
                return Err(PolygonDefect::SelfIntersecting);
            }
        }
    }
    if signed_area2(poly) == 0.0 {
        return Err(PolygonDefect::Degenerate);
    }
    if !poly.iter().all(|&p| border.contains(p)) {
        return Err(PolygonDefect::OutsideBorder);
    }
    Ok(())
}

fn polygons_overlap(a: &[Point], b: &[Point]) -> bool {
    for (p, q) in loop_edges(a) {
        for (r, s) in loop_edges(b) {
            if segments_intersect(p, q, r, s) {
                return true;
            }
        }
    }
    point_in_polygon(a[0], b) || point_in_polygon(b[0], a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Per-edge traversal cost indexed by formation size: entry `r` (1-based)
/// is what one robot pays to cross the edge while `r` robots share it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CostVector(Vec<f64>);

impl CostVector {
    pub fn new(entries: Vec<f64>) -> Self {
        CostVector(entries)
    }

    pub fn zeros(capacity: usize) -> Self {
        CostVector(vec![0.0; capacity])
    }

    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    /// Cost for a formation of `r` robots, `r >= 1`.
    pub fn get(&self, r: usize) -> Option<f64> {
        r.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_valid(&self) -> bool {
        self.0.iter().all(|c| c.is_finite() && *c >= 0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub id: VertexId,
    pub position: Point,
    pub clearance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub length: f64,
    pub clearance: f64,
    pub is_virtual: bool,
    pub costs: CostVector,
}

impl Edge {
    pub fn other(&self, end: VertexId) -> VertexId {
        if end == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: VertexId,
    pub edge: EdgeId,
}

/// Undirected planning graph with dense vertex and edge ids.
///
/// Adjacency lists are sorted by neighbour id so every traversal is
/// deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct Roadmap {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Incidence>>,
}

impl Roadmap {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self, ModelError> {
        for (i, v) in vertices.iter().enumerate() {
            if v.id.0 != i {
                return Err(ModelError::NonDenseVertexId {
                    index: i,
                    id: v.id.0,
                });
            }
            if !v.position.is_finite() || !v.clearance.is_finite() {
                return Err(ModelError::InvalidVertexValue { vertex: i });
            }
        }
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            if e.id.0 != i {
                return Err(ModelError::NonDenseEdgeId {
                    index: i,
                    id: e.id.0,
                });
            }
            for end in [e.u, e.v] {
                if end.0 >= vertices.len() {
                    return Err(ModelError::DanglingEndpoint {
                        edge: i,
                        vertex: end.0,
                    });
                }
            }
            if e.u == e.v {
                return Err(ModelError::SelfLoop { edge: i });
            }
            let values_ok = e.length.is_finite()
                && e.length >= 0.0
                && e.clearance.is_finite()
                && e.costs.is_valid();
            if !values_ok {
                return Err(ModelError::InvalidEdgeValue { edge: i });
            }
            if e.is_virtual && (e.length != 0.0 || e.costs.as_slice().iter().any(|&c| c != 0.0)) {
                return Err(ModelError::InvalidVirtualEdge { edge: i });
            }
            adjacency[e.u.0].push(Incidence {
                neighbor: e.v,
                edge: e.id,
            });
            adjacency[e.v.0].push(Incidence {
                neighbor: e.u,
                edge: e.id,
            });
        }
        for list in &mut adjacency {
            list.sort_by_key(|inc| (inc.neighbor, inc.edge));
            if let Some(w) = list.windows(2).find(|w| w[0].neighbor == w[1].neighbor) {
                return Err(ModelError::ParallelEdge {
                    edge: w[1].edge.0,
                    other: w[0].edge.0,
                });
            }
        }
        Ok(Roadmap {
            vertices,
            edges,
            adjacency,
        })
    }

    /// Builds a roadmap from id-less parts, assigning dense ids in order.
    pub fn from_parts(
        vertices: impl IntoIterator<Item = (Point, f64)>,
        edges: impl IntoIterator<Item = EdgeSpec>,
    ) -> Result<Self, ModelError> {
        let vertices = vertices
            .into_iter()
            .enumerate()
            .map(|(i, (position, clearance))| Vertex {
                id: VertexId(i),
                position,
                clearance,
            })
            .collect();
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(i, s)| Edge {
                id: EdgeId(i),
                u: s.u,
                v: s.v,
                length: s.length,
                clearance: s.clearance,
                is_virtual: s.is_virtual,
                costs: s.costs,
            })
            .collect();
        Roadmap::new(vertices, edges)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id.0]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, id: VertexId) -> bool {
        id.0 < self.vertices.len()
    }

    pub fn neighbors(&self, id: VertexId) -> &[Incidence] {
        &self.adjacency[id.0]
    }

    /// Vertex degree ρ.
    pub fn degree(&self, id: VertexId) -> usize {
        self.adjacency[id.0].len()
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.adjacency[a.0]
            .iter()
            .find(|inc| inc.neighbor == b)
            .map(|inc| inc.edge)
    }

    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        self.edges.iter().map(EdgeSpec::from).collect()
    }

    pub fn vertex_parts(&self) -> Vec<(Point, f64)> {
        self.vertices
            .iter()
            .map(|v| (v.position, v.clearance))
            .collect()
    }

    /// Keeps the vertices and edges whose flags are set, dropping edges with
    /// a removed endpoint, and renumbers densely. Returns the old-to-new
    /// vertex map.
    pub fn subgraph(&self, keep_vertex: &[bool], keep_edge: &[bool]) -> (Roadmap, Remap) {
        let mut old_to_new = vec![None; self.vertices.len()];
        let mut parts = Vec::new();
        for v in &self.vertices {
            if keep_vertex[v.id.0] {
                old_to_new[v.id.0] = Some(VertexId(parts.len()));
                parts.push((v.position, v.clearance));
            }
        }
        let edges: Vec<EdgeSpec> = self
            .edges
            .iter()
            .filter(|e| keep_edge[e.id.0])
            .filter_map(|e| {
                let u = old_to_new[e.u.0]?;
                let v = old_to_new[e.v.0]?;
                Some(EdgeSpec {
                    u,
                    v,
                    ..EdgeSpec::from(e)
                })
            })
            .collect();
        let roadmap =
            Roadmap::from_parts(parts, edges).expect("subgraph of a valid roadmap is valid");
        (roadmap, Remap { old_to_new })
    }

    /// Replaces every edge's cost vector; `costs` is indexed by edge id.
    pub fn with_costs(&self, costs: Vec<CostVector>) -> Result<Roadmap, ModelError> {
        let edges = self
            .edges
            .iter()
            .zip(costs)
            .map(|(e, costs)| Edge { costs, ..e.clone() })
            .collect();
        Roadmap::new(self.vertices.clone(), edges)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Connected components, each sorted by id, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for s in 0..self.vertices.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![VertexId(s)];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for inc in self.neighbors(u) {
                    if !seen[inc.neighbor.0] {
                        seen[inc.neighbor.0] = true;
                        stack.push(inc.neighbor);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RoadmapFile::from(self))
            .expect("roadmap serialization is infallible")
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, ModelError> {
        let file: RoadmapFile = serde_json::from_slice(bytes)?;
        file.into_roadmap()
    }
}

/// Old-to-new vertex id mapping produced by operations that delete vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Remap {
    old_to_new: Vec<Option<VertexId>>,
}

impl Remap {
    pub fn identity(n: usize) -> Self {
        Remap {
            old_to_new: (0..n).map(|i| Some(VertexId(i))).collect(),
        }
    }

    pub fn from_vec(old_to_new: Vec<Option<VertexId>>) -> Self {
        Remap { old_to_new }
    }

    pub fn get(&self, old: VertexId) -> Option<VertexId> {
        self.old_to_new.get(old.0).copied().flatten()
    }

    /// Composes `self` (a → b) with `next` (b → c).
    pub fn then(&self, next: &Remap) -> Remap {
        Remap {
            old_to_new: self
                .old_to_new
                .iter()
                .map(|m| m.and_then(|b| next.get(b)))
                .collect(),
        }
    }
}

/// An edge without its id, used when assembling a roadmap.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSpec {
    pub u: VertexId,
    pub v: VertexId,
    pub length: f64,
    pub clearance: f64,
    pub is_virtual: bool,
    pub costs: CostVector,
}

impl EdgeSpec {
    pub fn real(u: VertexId, v: VertexId, length: f64, clearance: f64) -> Self {
        EdgeSpec {
            u,
            v,
            length,
            clearance,
            is_virtual: false,
            costs: CostVector::default(),
        }
    }
}

impl From<&Edge> for EdgeSpec {
    fn from(e: &Edge) -> Self {
        EdgeSpec {
            u: e.u,
            v: e.v,
            length: e.length,
            clearance: e.clearance,
            is_virtual: e.is_virtual,
            costs: e.costs.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VertexRecord {
    id: usize,
    x: f64,
    y: f64,
    clearance: f64,
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    id: usize,
    u: usize,
    v: usize,
    length: f64,
    clearance: f64,
    #[serde(rename = "virtual")]
    is_virtual: bool,
    costs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RoadmapFile {
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
}

impl From<&Roadmap> for RoadmapFile {
    fn from(r: &Roadmap) -> Self {
        RoadmapFile {
            vertices: r
                .vertices
                .iter()
                .map(|v| VertexRecord {
                    id: v.id.0,
                    x: v.position.x,
                    y: v.position.y,
                    clearance: v.clearance,
                })
                .collect(),
            edges: r
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    id: e.id.0,
                    u: e.u.0,
                    v: e.v.0,
                    length: e.length,
                    clearance: e.clearance,
                    is_virtual: e.is_virtual,
                    costs: e.costs.as_slice().to_vec(),
                })
                .collect(),
        }
    }
}

impl RoadmapFile {
    fn into_roadmap(self) -> Result<Roadmap, ModelError> {
        let vertices = self
            .vertices
            .into_iter()
            .map(|v| Vertex {
                id: VertexId(v.id),
                position: Point::new(v.x, v.y),
                clearance: v.clearance,
            })
            .collect();
        let edges = self
            .edges
            .into_iter()
            .map(|e| Edge {
                id: EdgeId(e.id),
                u: VertexId(e.u),
                v: VertexId(e.v),
                length: e.length,
                clearance: e.clearance,
                is_virtual: e.is_virtual,
                costs: CostVector::new(e.costs),
            })
            .collect();
        Roadmap::new(vertices, edges)
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum QueryError {
    #[error("start and goal are the same vertex {0}")]
    SameTerminals(VertexId),
    #[error("vertex {0} is not in the roadmap")]
    UnknownVertex(VertexId),
    #[error("robot count must be at least 1")]
    NoRobots,
    #[error("formation control coefficient must be finite and non-negative")]
    InvalidCoefficient,
}

/// Planning request: a common start and goal for `robots` robots.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanQuery {
    pub start: VertexId,
    pub goal: VertexId,
    pub robots: usize,
    pub coefficient: f64,
}

impl PlanQuery {
    pub fn new(
        roadmap: &Roadmap,
        start: VertexId,
        goal: VertexId,
        robots: usize,
        coefficient: f64,
    ) -> Result<Self, QueryError> {
        let q = PlanQuery {
            start,
            goal,
            robots,
            coefficient,
        };
        q.validate(roadmap)?;
        Ok(q)
    }

    pub fn validate(&self, roadmap: &Roadmap) -> Result<(), QueryError> {
        for id in [self.start, self.goal] {
            if !roadmap.contains(id) {
                return Err(QueryError::UnknownVertex(id));
            }
        }
        if self.start == self.goal {
            return Err(QueryError::SameTerminals(self.start));
        }
        if self.robots == 0 {
            return Err(QueryError::NoRobots);
        }
        if !self.coefficient.is_finite() || self.coefficient < 0.0 {
            return Err(QueryError::InvalidCoefficient);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point> {
        vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ]
    }

    #[test]
    fn empty_map_loads() {
        let map = PolygonMap::from_json(br#"{"name":"e","border":[0,0,100,100],"obstacles":[]}"#)
            .unwrap();
        assert!(map.obstacles.is_empty());
        assert_eq!(map.border.area(), 10_000.0);
    }

    #[test]
    fn single_square_loads_with_four_vertices() {
        let json = r#"{"name":"sq","border":[0,0,100,100],
            "obstacles":[[[40,40],[60,40],[60,60],[40,60]]]}"#;
        let map = PolygonMap::from_json(json.as_bytes()).unwrap();
        assert_eq!(map.obstacles.len(), 1);
        assert_eq!(map.obstacles[0].len(), 4);
        let again = PolygonMap::from_json(map.to_json().as_bytes()).unwrap();
        assert_eq!(again, map);
    }

    #[test]
    fn bowtie_is_rejected_naming_polygon_zero() {
        let json = r#"{"name":"b","border":[0,0,100,100],
            "obstacles":[[[10,10],[20,20],[20,10],[10,20]]]}"#;
        match PolygonMap::from_json(json.as_bytes()) {
            Err(ModelError::InvalidPolygon { polygon: 0, reason }) => {
                assert_eq!(reason, PolygonDefect::SelfIntersecting)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn obstacle_outside_border_and_overlap() {
        let err = PolygonMap::new(
            "o",
            Rect::new(0., 0., 10., 10.),
            vec![square(5., 5., 12., 8.)],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ModelError::InvalidPolygon {
                polygon: 0,
                reason: PolygonDefect::OutsideBorder
            }
        ));
        let err = PolygonMap::new(
            "o",
            Rect::new(0., 0., 10., 10.),
            vec![square(1., 1., 4., 4.), square(2., 2., 3., 3.)],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ModelError::OverlappingPolygons {
                first: 0,
                second: 1
            }
        ));
    }

    #[test]
    fn collinear_vertices_rejected() {
        let poly = vec![
            Point::new(1., 1.),
            Point::new(2., 1.),
            Point::new(3., 1.),
            Point::new(2., 2.),
        ];
        let err = PolygonMap::new("c", Rect::new(0., 0., 10., 10.), vec![poly]).unwrap_err();
        assert!(matches!(
            err,
            ModelError::InvalidPolygon {
                reason: PolygonDefect::Degenerate,
                ..
            }
        ));
    }

    #[test]
    fn closing_vertex_is_dropped() {
        let mut poly = square(1., 1., 2., 2.);
        poly.push(poly[0]);
        let map = PolygonMap::new("c", Rect::new(0., 0., 10., 10.), vec![poly]).unwrap();
        assert_eq!(map.obstacles[0].len(), 4);
    }

    fn two_vertex() -> Roadmap {
        Roadmap::from_parts(
            [(Point::new(0.0, 0.0), 1.5), (Point::new(3.0, 4.0), 2.25)],
            [EdgeSpec {
                costs: CostVector::new(vec![5.0, 10.0]),
                ..EdgeSpec::real(VertexId(0), VertexId(1), 5.0, 1.5)
            }],
        )
        .unwrap()
    }

    #[test]
    fn roadmap_round_trip() {
        let r = two_vertex();
        let back = Roadmap::from_json(r.to_json().as_bytes()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn virtual_flag_survives_round_trip() {
        let r = Roadmap::from_parts(
            [(Point::new(0.0, 0.0), 1.0), (Point::new(0.0, 0.0), 1.0)],
            [EdgeSpec {
                is_virtual: true,
                costs: CostVector::zeros(3),
                ..EdgeSpec::real(VertexId(0), VertexId(1), 0.0, 1.0)
            }],
        )
        .unwrap();
        let back = Roadmap::from_json(r.to_json().as_bytes()).unwrap();
        assert!(back.edge(EdgeId(0)).is_virtual);
        assert_eq!(back, r);
    }

    #[test]
    fn dangling_endpoint_named() {
        let json = r#"{"vertices":[{"id":0,"x":0,"y":0,"clearance":1}],
            "edges":[{"id":0,"u":0,"v":99,"length":1,"clearance":1,"virtual":false,"costs":[]}]}"#;
        match Roadmap::from_json(json.as_bytes()) {
            Err(ModelError::DanglingEndpoint {
                edge: 0,
                vertex: 99,
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parallel_and_virtual_violations() {
        let p = (Point::new(0.0, 0.0), 1.0);
        let e = EdgeSpec::real(VertexId(0), VertexId(1), 1.0, 1.0);
        let err = Roadmap::from_parts([p, p], [e.clone(), e.clone()]).unwrap_err();
        assert!(matches!(
            err,
            ModelError::ParallelEdge { edge: 1, other: 0 }
        ));
        let bad_virtual = EdgeSpec {
            is_virtual: true,
            ..e
        };
        let err = Roadmap::from_parts([p, p], [bad_virtual]).unwrap_err();
        assert!(matches!(err, ModelError::InvalidVirtualEdge { edge: 0 }));
    }

    #[test]
    fn query_validation() {
        let r = two_vertex();
        assert!(PlanQuery::new(&r, VertexId(0), VertexId(1), 2, 10.0).is_ok());
        assert_eq!(
            PlanQuery::new(&r, VertexId(0), VertexId(0), 2, 10.0),
            Err(QueryError::SameTerminals(VertexId(0)))
        );
        assert_eq!(
            PlanQuery::new(&r, VertexId(0), VertexId(7), 2, 10.0),
            Err(QueryError::UnknownVertex(VertexId(7)))
        );
        assert_eq!(
            PlanQuery::new(&r, VertexId(0), VertexId(1), 0, 10.0),
            Err(QueryError::NoRobots)
        );
    }

    #[test]
    fn cost_vector_is_one_based() {
        let c = CostVector::new(vec![1.0, 2.0]);
        assert_eq!(c.get(0), None);
        assert_eq!(c.get(1), Some(1.0));
        assert_eq!(c.get(2), Some(2.0));
        assert_eq!(c.get(3), None);
    }
}
