//! Shared test oracles and random instance generators.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use formplan::geometry::Point;
use formplan::model::{CostVector, EdgeSpec, PlanQuery, PolygonMap, Roadmap, VertexId};
use formplan::planner::{check_constraints, make_schedule};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn ids(v: &[usize]) -> Vec<VertexId> {
    v.iter().copied().map(VertexId).collect()
}

/// s=0, a=1, b=2, g=3 with lengths 10, 10, 12, 12 and `c_r = r·length`.
pub fn diamond(robots: usize) -> Roadmap {
    let pts = [(0., 0.), (1., 1.), (1., -1.), (2., 0.)];
    let edges = [(0, 1, 10.0), (1, 3, 10.0), (0, 2, 12.0), (2, 3, 12.0)];
    Roadmap::from_parts(
        pts.iter().map(|&(x, y)| (Point::new(x, y), 1.0)),
        edges.iter().map(|&(u, v, len)| EdgeSpec {
            costs: CostVector::new((1..=robots).map(|r| len * r as f64).collect()),
            ..EdgeSpec::real(VertexId(u), VertexId(v), len, 1.0)
        }),
    )
    .unwrap()
}

/// Textbook O(V²) Dijkstra on `c_1` costs; no heap, no tie-breaking rules.
pub fn reference_distances(roadmap: &Roadmap, source: VertexId) -> Vec<f64> {
    let n = roadmap.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[source.0] = 0.0;
    for _ in 0..n {
        let mut u = None;
        for v in 0..n {
            if !done[v] && dist[v].is_finite() && u.is_none_or(|w: usize| dist[v] < dist[w]) {
                u = Some(v);
            }
        }
        let Some(u) = u else { break };
        done[u] = true;
        for e in roadmap.edges() {
            let other = if e.u.0 == u {
                e.v.0
            } else if e.v.0 == u {
                e.u.0
            } else {
                continue;
            };
            let nd = dist[u] + e.costs.as_slice()[0];
            if nd < dist[other] {
                dist[other] = nd;
            }
        }
    }
    dist
}

fn distinct_points(rng: &mut impl Rng, n: usize) -> Vec<Point> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0));
        if seen.insert((p.x.to_bits(), p.y.to_bits())) {
            out.push(p);
        }
    }
    out
}

/// Random spanning tree plus extra edges, respecting a degree cap.
pub fn random_edges(
    rng: &mut impl Rng,
    n: usize,
    extra: usize,
    max_degree: usize,
) -> Vec<(usize, usize)> {
    let mut deg = vec![0usize; n];
    let mut set = BTreeSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let v = order[i];
        let candidates: Vec<usize> = order[..i]
            .iter()
            .copied()
            .filter(|&u| deg[u] < max_degree)
            .collect();
        let u = *candidates.choose(rng).expect("tree attachment point");
        deg[u] += 1;
        deg[v] += 1;
        set.insert((u.min(v), u.max(v)));
    }
    for _ in 0..extra {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u == v
            || deg[u] >= max_degree
            || deg[v] >= max_degree
            || !set.insert((u.min(v), u.max(v)))
        {
            continue;
        }
        deg[u] += 1;
        deg[v] += 1;
    }
    set.into_iter().collect()
}

/// Connected roadmap with `2..=max_n` vertices and random single-entry costs.
pub fn random_single_robot_roadmap(rng: &mut impl Rng, max_n: usize) -> Roadmap {
    let n = rng.gen_range(2..=max_n);
    let pts = distinct_points(rng, n);
    let extra = rng.gen_range(0..=2 * n);
    let edges = random_edges(rng, n, extra, n);
    Roadmap::from_parts(
        pts.into_iter().map(|p| (p, 1.0)),
        edges.into_iter().map(|(u, v)| {
            let c: f64 = rng.gen_range(0.1..20.0);
            EdgeSpec {
                costs: CostVector::new(vec![c]),
                ..EdgeSpec::real(VertexId(u), VertexId(v), c, 1.0)
            }
        }),
    )
    .unwrap()
}

/// Small degree-limited instance with random nondecreasing cost vectors of
/// capacity 3, start 0 and goal `n − 1`.
pub fn random_small_instance(rng: &mut impl Rng, max_n: usize) -> (Roadmap, PlanQuery) {
    let n = rng.gen_range(4..=max_n);
    let pts = distinct_points(rng, n);
    let extra = rng.gen_range(0..=n);
    let edges = random_edges(rng, n, extra, 3);
    let roadmap = Roadmap::from_parts(
        pts.into_iter().map(|p| (p, 1.0)),
        edges.into_iter().map(|(u, v)| {
            let c1: f64 = rng.gen_range(1.0..10.0);
            let c2 = c1 * (1.0 + rng.gen_range(0.0..1.0));
            let c3 = c2 * (1.0 + rng.gen_range(0.0..1.0));
            EdgeSpec {
                costs: CostVector::new(vec![c1, c2, c3]),
                ..EdgeSpec::real(VertexId(u), VertexId(v), c1, 1.0)
            }
        }),
    )
    .unwrap();
    let query = PlanQuery {
        start: VertexId(0),
        goal: VertexId(n - 1),
        robots: rng.gen_range(1..=3),
        coefficient: 100.0,
    };
    (roadmap, query)
}

/// Graph with hubs of degree up to 8 and length-based costs.
pub fn random_high_degree_roadmap(rng: &mut impl Rng) -> Roadmap {
    let n = rng.gen_range(6..=30);
    let pts = distinct_points(rng, n);
    let mut edges: BTreeSet<(usize, usize)> = random_edges(rng, n, n, 8).into_iter().collect();
    // force at least one hub, never exceeding degree 8 anywhere
    let degree = |edges: &BTreeSet<(usize, usize)>, x: usize| {
        edges.iter().filter(|&&(a, b)| a == x || b == x).count()
    };
    let hub = rng.gen_range(0..n);
    let want = rng.gen_range(4..=8.min(n - 1));
    let mut others: Vec<usize> = (0..n).filter(|&v| v != hub).collect();
    others.shuffle(rng);
    for &v in &others {
        if degree(&edges, hub) >= want {
            break;
        }
        if degree(&edges, v) < 8 {
            edges.insert((hub.min(v), hub.max(v)));
        }
    }
    Roadmap::from_parts(
        pts.iter().map(|&p| (p, 1.0)),
        edges.into_iter().map(|(u, v)| {
            let len = pts[u].distance(pts[v]);
            EdgeSpec {
                costs: CostVector::new(vec![len]),
                ..EdgeSpec::real(VertexId(u), VertexId(v), len, 1.0)
            }
        }),
    )
    .unwrap()
}

/// Independent check of the feasibility constraints plus schedule
/// synchronization. Returns a description of the first problem found.
pub fn audit_plan(paths: &[Vec<VertexId>], query: &PlanQuery) -> Result<(), String> {
    let v = check_constraints(paths, query);
    if !v.is_empty() {
        return Err(format!("violations: {v:?}"));
    }
    // no edge used both ways, recomputed from scratch
    let mut dirs: BTreeMap<(usize, usize), BTreeSet<bool>> = BTreeMap::new();
    for p in paths {
        for w in p.windows(2) {
            let (a, b) = (w[0].0, w[1].0);
            dirs.entry((a.min(b), a.max(b))).or_default().insert(a < b);
        }
    }
    if let Some(e) = dirs.iter().find(|(_, d)| d.len() > 1) {
        return Err(format!("edge {:?} used in both directions", e.0));
    }
    let s = make_schedule(paths).map_err(|e| e.to_string())?;
    let mut at: BTreeMap<VertexId, BTreeSet<usize>> = BTreeMap::new();
    for (robot, arr) in s.arrivals.iter().enumerate() {
        if arr.iter().map(|a| a.0).collect::<Vec<_>>() != paths[robot] {
            return Err(format!("robot {robot}: schedule does not follow its path"));
        }
        if arr.windows(2).any(|w| w[1].1 <= w[0].1) {
            return Err(format!("robot {robot}: steps not increasing"));
        }
        for &(v, t) in arr {
            at.entry(v).or_default().insert(t);
        }
        let tl = s.timeline(robot);
        if tl.len() != s.k_min + 1 || tl.last() != paths[robot].last() {
            return Err(format!(
                "robot {robot}: timeline does not end at the goal at k_min"
            ));
        }
    }
    if let Some((v, ts)) = at.iter().find(|(_, ts)| ts.len() > 1) {
        return Err(format!("vertex {v} reached at different steps {ts:?}"));
    }
    Ok(())
}

/// Distances (in map units) from each raster cell center to the nearest
/// rasterized boundary cell, via the separable squared-distance transform.
pub struct RasterField {
    pub res: usize,
    pub xmin: f64,
    pub ymin: f64,
    pub cell: f64,
    dist: Vec<f64>,
}

impl RasterField {
    pub fn new(map: &PolygonMap, res: usize) -> Self {
        let b = map.border;
        let cell = b.width().max(b.height()) / res as f64;
        let mut f = vec![f64::INFINITY; res * res];
        let clamp = |x: f64| (x.floor().max(0.0) as usize).min(res - 1);
        for (a, c) in map.boundary_segments() {
            let steps = ((a.distance(c) / (cell * 0.25)).ceil() as usize).max(1);
            for i in 0..=steps {
                let p = a.lerp(c, i as f64 / steps as f64);
                let ix = clamp((p.x - b.xmin) / cell);
                let iy = clamp((p.y - b.ymin) / cell);
                f[iy * res + ix] = 0.0;
            }
        }
        // rows then columns
        let mut buf = vec![0.0; res];
        for y in 0..res {
            buf.copy_from_slice(&f[y * res..(y + 1) * res]);
            let d = dt1d(&buf);
            f[y * res..(y + 1) * res].copy_from_slice(&d);
        }
        for x in 0..res {
            for y in 0..res {
                buf[y] = f[y * res + x];
            }
            let d = dt1d(&buf);
            for y in 0..res {
                f[y * res + x] = d[y];
            }
        }
        RasterField {
            res,
            xmin: b.xmin,
            ymin: b.ymin,
            cell,
            dist: f.into_iter().map(|d| d.sqrt() * cell).collect(),
        }
    }

    pub fn at(&self, p: Point) -> f64 {
        let clamp = |x: f64| (x.floor().max(0.0) as usize).min(self.res - 1);
        let ix = clamp((p.x - self.xmin) / self.cell);
        let iy = clamp((p.y - self.ymin) / self.cell);
        self.dist[iy * self.res + ix]
    }
}

/// 1-D squared Euclidean distance transform (lower envelope of parabolas).
fn dt1d(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![f64::INFINITY; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    let first = match f.iter().position(|x| x.is_finite()) {
        Some(i) => i,
        None => return d,
    };
    v[0] = first;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in first + 1..n {
        if !f[q].is_finite() {
            continue;
        }
        loop {
            let p = v[k];
            let s =
                ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                k -= 1;
                continue;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    k = 0;
    for (q, out) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let diff = q as f64 - p as f64;
        *out = diff * diff + f[p];
    }
    d
}
