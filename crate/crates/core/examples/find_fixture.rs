//! Searches random small roadmaps for one where the sequential planner
//! misses the optimum but the improvement pass recovers it. Prints the
//! roadmap as JSON on stdout; this is how `tests/fixtures/split_regression.json`
//! was produced.
//!
//! ```text
//! cargo run --release --example find_fixture > split_regression.json
//! ```

use formplan::geometry::Point;
use formplan::model::{CostVector, EdgeSpec, PlanQuery, Roadmap, VertexId};
use formplan::optimizer::plan_optimized;
use formplan::oracle::{exhaustive_optimum, OracleLimits};
use formplan::planner::plan_sequential;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ROBOTS: usize = 3;
const MAX_DEGREE: usize = 3;

/// Random tree plus a few chords on 4..=8 vertices, with increasing
/// `c_1 ≤ c_2 ≤ c_3` drawn per edge.
fn random_roadmap(rng: &mut ChaCha8Rng) -> Roadmap {
    let n = rng.gen_range(4..=8);
    let mut deg = vec![0; n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        loop {
            let u = rng.gen_range(0..v);
            if deg[u] < MAX_DEGREE {
                deg[u] += 1;
                deg[v] += 1;
                edges.push((u, v));
                break;
            }
        }
    }
    for _ in 0..rng.gen_range(0..=n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let key = (u.min(v), u.max(v));
        if u == v || deg[u] >= MAX_DEGREE || deg[v] >= MAX_DEGREE || edges.contains(&key) {
            continue;
        }
        deg[u] += 1;
        deg[v] += 1;
        edges.push(key);
    }
    let specs: Vec<EdgeSpec> = edges
        .iter()
        .map(|&(u, v)| {
            let c1: f64 = rng.gen_range(1.0..10.0);
            let c2 = c1 * (1.0 + rng.gen_range(0.0..1.0));
            let c3 = c2 * (1.0 + rng.gen_range(0.0..1.0));
            EdgeSpec {
                costs: CostVector::new(vec![c1, c2, c3]),
                ..EdgeSpec::real(VertexId(u), VertexId(v), c1, 1.0)
            }
        })
        .collect();
    Roadmap::from_parts((0..n).map(|i| (Point::new(i as f64, 0.0), 1.0)), specs)
        .expect("generated edges are valid")
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..1_000_000u64 {
        let g = random_roadmap(&mut rng);
        let q = PlanQuery {
            start: VertexId(0),
            goal: VertexId(g.vertex_count() - 1),
            robots: ROBOTS,
            coefficient: 100.0,
        };
        let Ok(seq) = plan_sequential(&g, &q) else {
            continue;
        };
        let opt = plan_optimized(&g, &q, 1).expect("sequential plan exists");
        let best = exhaustive_optimum(&g, &q, &OracleLimits::default()).expect("tiny instance");
        if seq.objective > best.objective + 1e-6 && (opt.objective - best.objective).abs() <= 1e-9 {
            eprintln!(
                "trial {trial}: {} vertices, {} edges; sequential {}, optimized {}, optimum {}",
                g.vertex_count(),
                g.edge_count(),
                seq.objective,
                opt.objective,
                best.objective
            );
            println!("{}", g.to_json());
            return;
        }
    }
    eprintln!("no instance found");
    std::process::exit(1);
}
