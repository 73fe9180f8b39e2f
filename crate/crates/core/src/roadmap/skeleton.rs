//! Approximate generalized Voronoi skeleton of the free space.
//!
//! Every boundary segment (the four border sides and each obstacle edge) is
//! sampled into point sites tagged with the segment they came from. The
//! point-site Voronoi diagram is read off the Delaunay triangulation as
//! circumcentres joined across interior Delaunay edges. Only Voronoi edges
//! separating sites of two *different* boundary segments are kept; edges
//! between consecutive samples of the same segment are sampling artefacts.

use std::collections::HashMap;

use delaunator::{next_halfedge, triangulate, EMPTY};

use super::{RoadmapBuildParams, RoadmapError};
use crate::geometry::{distance_to_segment, Point};
use crate::model::{EdgeSpec, PolygonMap, Roadmap, VertexId};

/// Exact distance from a point to the nearest border or obstacle segment.
#[derive(Clone, Debug)]
pub struct ClearanceField {
    segments: Vec<(Point, Point)>,
}

impl ClearanceField {
    pub fn new(map: &PolygonMap) -> Self {
        ClearanceField {
            segments: map.boundary_segments(),
        }
    }

    pub fn at(&self, p: Point) -> f64 {
        self.segments
            .iter()
            .map(|&(a, b)| distance_to_segment(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Clearance of a straight edge: the minimum over both endpoints and
    /// the midpoint.
    pub fn of_edge(&self, a: Point, b: Point) -> f64 {
        self.at(a).min(self.at(b)).min(self.at(a.midpoint(b)))
    }
}

fn sample_sites(map: &PolygonMap, step: f64) -> (Vec<delaunator::Point>, Vec<usize>) {
    let mut sites = Vec::new();
    let mut feature = Vec::new();
    for (f, (a, b)) in map.boundary_segments().into_iter().enumerate() {
        let n = (a.distance(b) / step).ceil().max(1.0) as usize;
        for i in 0..n {
            let p = a.lerp(b, i as f64 / n as f64);
            sites.push(delaunator::Point { x: p.x, y: p.y });
            feature.push(f);
        }
    }
    (sites, feature)
}

fn circumcenter(a: &delaunator::Point, b: &delaunator::Point, c: &delaunator::Point) -> Point {
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    Point::new(a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d)
}

/// Snaps nearly coincident points onto one id using a hashed grid.
struct VertexPool {
    tolerance: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<Point>,
}

impl VertexPool {
    fn new(tolerance: f64) -> Self {
        VertexPool {
            tolerance,
            cells: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn key(&self, p: Point) -> (i64, i64) {
        (
            (p.x / self.tolerance).floor() as i64,
            (p.y / self.tolerance).floor() as i64,
        )
    }

    fn intern(&mut self, p: Point) -> usize {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(kx + dx, ky + dy)) {
                    if let Some(&id) = ids
                        .iter()
                        .find(|&&id| self.points[id].distance(p) <= self.tolerance)
                    {
                        return id;
                    }
                }
            }
        }
        let id = self.points.len();
        self.points.push(p);
        self.cells.entry((kx, ky)).or_default().push(id);
        id
    }
}

/// Builds the raw skeleton graph; clearances are exact distances to the map
/// boundary. The result still contains edges inside obstacles and edges
/// touching obstacle corners; see [`super::filter_edges`].
pub fn build_skeleton(
    map: &PolygonMap,
    params: &RoadmapBuildParams,
) -> Result<Roadmap, RoadmapError> {
    params.validate()?;
    if map.obstacle_area() >= map.border.area() {
        return Err(RoadmapError::NoFreeSpace);
    }
    let (sites, feature) = sample_sites(map, params.sampling_step);
    let tri = triangulate(&sites);
    if tri.triangles.is_empty() {
        return Err(RoadmapError::NoFreeSpace);
    }
    let centers: Vec<Point> = tri
        .triangles
        .chunks_exact(3)
        .map(|t| circumcenter(&sites[t[0]], &sites[t[1]], &sites[t[2]]))
        .collect();

    let border = map.border;
    let scale = border.width().max(border.height());
    let slack = 1e-9 * scale;
    let inside = |p: Point| {
        p.is_finite()
            && p.x >= border.xmin - slack
            && p.x <= border.xmax + slack
            && p.y >= border.ymin - slack
            && p.y <= border.ymax + slack
    };

    let mut pool = VertexPool::new(1e-7 * scale);
    let mut pool_id: Vec<Option<usize>> = vec![None; centers.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for e in 0..tri.halfedges.len() {
        let opp = tri.halfedges[e];
        if opp == EMPTY || opp < e {
            continue;
        }
        let s0 = tri.triangles[e];
        let s1 = tri.triangles[next_halfedge(e)];
        if feature[s0] == feature[s1] {
            continue;
        }
        let (t0, t1) = (e / 3, opp / 3);
        if !inside(centers[t0]) || !inside(centers[t1]) {
            continue;
        }
        let mut id = |t: usize| *pool_id[t].get_or_insert_with(|| pool.intern(centers[t]));
        let (a, b) = (id(t0), id(t1));
        if a != b {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();

    let clearance = ClearanceField::new(map);
    let vertices: Vec<(Point, f64)> = pool.points.iter().map(|&p| (p, clearance.at(p))).collect();
    let edges: Vec<EdgeSpec> = pairs
        .into_iter()
        .map(|(a, b)| {
            let (pa, pb) = (vertices[a].0, vertices[b].0);
            EdgeSpec::real(
                VertexId(a),
                VertexId(b),
                pa.distance(pb),
                clearance.of_edge(pa, pb),
            )
        })
        .collect();
    Ok(Roadmap::from_parts(vertices, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Rect;

    #[test]
    fn circumcenter_of_right_triangle_is_hypotenuse_midpoint() {
        let p = |x, y| delaunator::Point { x, y };
        let c = circumcenter(&p(0.0, 0.0), &p(4.0, 0.0), &p(0.0, 2.0));
        assert!((c.x - 2.0).abs() < 1e-12 && (c.y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_map_skeleton_is_nonempty_and_inside() {
        let map = PolygonMap::new("e", Rect::new(0., 0., 20., 10.), vec![]).unwrap();
        let params = RoadmapBuildParams {
            sampling_step: 1.0,
            ..Default::default()
        };
        let sk = build_skeleton(&map, &params).unwrap();
        assert!(sk.edge_count() > 0);
        for v in sk.vertices() {
            let p = v.position;
            assert!(p.x > -1e-6 && p.x < 20.0 + 1e-6 && p.y > -1e-6 && p.y < 10.0 + 1e-6);
            assert!(v.clearance <= 5.0 + 1e-9);
        }
    }

    #[test]
    fn full_cover_has_no_free_space() {
        let cover = Rect::new(0., 0., 10., 10.).corners().to_vec();
        let map = PolygonMap::new("full", Rect::new(0., 0., 10., 10.), vec![cover]).unwrap();
        assert!(matches!(
            build_skeleton(&map, &RoadmapBuildParams::default()),
            Err(RoadmapError::NoFreeSpace)
        ));
    }
}
