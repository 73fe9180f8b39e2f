//! Batch experiments over maps × robot counts × formation coefficients.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::generate::{generate_map, GenParams, MapKind};
use crate::geometry::Point;
use crate::model::{PlanQuery, PolygonMap, Roadmap, VertexId};
use crate::optimizer::plan_optimized;
use crate::oracle::{exhaustive_optimum, gap, OracleLimits};
use crate::planner::plan_sequential;
use crate::roadmap::{build_roadmap, corner_terminals, evaluate_edge_costs, RoadmapBuildParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    File {
        name: Option<String>,
        file: PathBuf,
    },
    /// A prebuilt roadmap; its stored costs are replaced per (R, k).
    Roadmap {
        name: Option<String>,
        roadmap: PathBuf,
        start: Option<VertexId>,
        goal: Option<VertexId>,
    },
    Generated {
        name: Option<String>,
        kind: MapKind,
        #[serde(default)]
        params: GenParams,
        #[serde(default)]
        seed: u64,
    },
}

impl MapSpec {
    pub fn label(&self) -> String {
        match self {
            MapSpec::File { name: Some(n), .. }
            | MapSpec::Roadmap { name: Some(n), .. }
            | MapSpec::Generated { name: Some(n), .. } => n.clone(),
            MapSpec::File { file, .. } => file.display().to_string(),
            MapSpec::Roadmap { roadmap, .. } => roadmap.display().to_string(),
            MapSpec::Generated { kind, seed, .. } => format!("{}-{seed}", kind.name()),
        }
    }
}

/// How start and goal are chosen on each roadmap.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalRule {
    /// Lexicographically smallest and largest `(x, y)` roadmap vertices.
    #[default]
    Corners,
    /// Fixed points, inserted into the roadmap.
    Points { start: Point, goal: Point },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    pub records: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub maps: Vec<MapSpec>,
    pub robots: Vec<usize>,
    pub k: Vec<f64>,
    /// Roadmap geometry knobs; its `robots` and `coefficient` are ignored.
    #[serde(default)]
    pub roadmap: RoadmapBuildParams,
    #[serde(default)]
    pub terminals: TerminalRule,
    /// Run the exhaustive oracle with these limits.
    #[serde(default)]
    pub oracle: Option<OracleLimits>,
    #[serde(default = "one")]
    pub opt_rounds: usize,
    #[serde(default)]
    pub output: OutputPaths,
}

fn one() -> usize {
    1
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config lists no {0}")]
    Empty(&'static str),
}

impl BenchConfig {
    pub fn from_json(bytes: &[u8]) -> Result<Self, ConfigError> {
        let cfg: BenchConfig = serde_json::from_slice(bytes)?;
        if cfg.maps.is_empty() {
            return Err(ConfigError::Empty("maps"));
        }
        if cfg.robots.is_empty() {
            return Err(ConfigError::Empty("robot counts"));
        }
        if cfg.k.is_empty() {
            return Err(ConfigError::Empty("k values"));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let bytes = std::fs::read(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        BenchConfig::from_json(&bytes)
    }
}

/// One (map, start, goal, R, k) sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub map: String,
    pub start: Option<VertexId>,
    pub goal: Option<VertexId>,
    pub robots: usize,
    pub k: f64,
    pub seq_objective: Option<f64>,
    pub opt_objective: Option<f64>,
    pub oracle_objective: Option<f64>,
    pub gap_seq: Option<f64>,
    pub gap_opt: Option<f64>,
    /// Wall-clock seconds around the planning call alone.
    pub runtime_seq: f64,
    pub runtime_opt: f64,
    /// Why the sample has no planner result.
    pub error: Option<String>,
    /// Why the oracle gave no answer, when it was requested.
    pub oracle_error: Option<String>,
}

impl ExperimentRecord {
    fn failed(map: &str, robots: usize, k: f64, error: String) -> Self {
        ExperimentRecord {
            map: map.to_string(),
            start: None,
            goal: None,
            robots,
            k,
            seq_objective: None,
            opt_objective: None,
            oracle_objective: None,
            gap_seq: None,
            gap_opt: None,
            runtime_seq: 0.0,
            runtime_opt: 0.0,
            error: Some(error),
            oracle_error: None,
        }
    }

    pub fn is_failed(&self) -> bool {
        self.error.is_some()
    }
}

struct Geometry {
    roadmap: Roadmap,
    start: VertexId,
    goal: VertexId,
}

fn read(base: &Path, file: &Path) -> Result<Vec<u8>, String> {
    let path = if file.is_absolute() {
        file.to_path_buf()
    } else {
        base.join(file)
    };
    std::fs::read(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn prepare(spec: &MapSpec, base: &Path, cfg: &BenchConfig) -> Result<Geometry, String> {
    let map = match spec {
        MapSpec::File { file, .. } => {
            PolygonMap::from_json(&read(base, file)?).map_err(|e| e.to_string())?
        }
        MapSpec::Generated {
            kind, params, seed, ..
        } => generate_map(*kind, params, *seed).map_err(|e| e.to_string())?,
        MapSpec::Roadmap {
            roadmap,
            start,
            goal,
            ..
        } => {
            let roadmap = Roadmap::from_json(&read(base, roadmap)?).map_err(|e| e.to_string())?;
            let (s, g) = match (start, goal) {
                (Some(s), Some(g)) => (*s, *g),
                _ => corner_terminals(&roadmap).ok_or("roadmap has fewer than two vertices")?,
            };
            return Ok(Geometry {
                roadmap,
                start: s,
                goal: g,
            });
        }
    };
    let params = RoadmapBuildParams {
        robots: 1,
        ..cfg.roadmap.clone()
    };
    let points = match &cfg.terminals {
        TerminalRule::Corners => None,
        TerminalRule::Points { start, goal } => Some((*start, *goal)),
    };
    let built = build_roadmap(&map, &params, points).map_err(|e| e.to_string())?;
    let (start, goal) = match built.terminals {
        Some(t) => t,
        None => corner_terminals(&built.roadmap).ok_or("roadmap has a single vertex")?,
    };
    Ok(Geometry {
        roadmap: built.roadmap,
        start,
        goal,
    })
}

/// Runs every configuration in order. Roadmap geometry is built once per
/// map; costs are re-evaluated per (R, k). Failures become records.
pub fn run_benchmark(cfg: &BenchConfig, base_dir: &Path) -> Vec<ExperimentRecord> {
    let mut out = Vec::new();
    for spec in &cfg.maps {
        let name = spec.label();
        let geo = prepare(spec, base_dir, cfg);
        for &robots in &cfg.robots {
            for &k in &cfg.k {
                let rec = match &geo {
                    Ok(g) => sample(&name, g, robots, k, cfg),
                    Err(e) => ExperimentRecord::failed(&name, robots, k, e.clone()),
                };
                out.push(rec);
            }
        }
    }
    out
}

fn sample(
    name: &str,
    geo: &Geometry,
    robots: usize,
    k: f64,
    cfg: &BenchConfig,
) -> ExperimentRecord {
    let roadmap =
        match evaluate_edge_costs(&geo.roadmap, robots.max(1), k, cfg.roadmap.clearance_weight) {
            Ok(r) => r,
            Err(e) => return ExperimentRecord::failed(name, robots, k, e.to_string()),
        };
    let query = PlanQuery {
        start: geo.start,
        goal: geo.goal,
        robots,
        coefficient: k,
    };
    let t = Instant::now();
    let seq = plan_sequential(&roadmap, &query);
    let runtime_seq = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let opt = plan_optimized(&roadmap, &query, cfg.opt_rounds);
    let runtime_opt = t.elapsed().as_secs_f64();
    let (seq, opt) = match (seq, opt) {
        (Ok(s), Ok(o)) => (s, o),
        (Err(e), _) | (_, Err(e)) => {
            return ExperimentRecord::failed(name, robots, k, e.to_string())
        }
    };

    let mut rec = ExperimentRecord {
        map: name.to_string(),
        start: Some(geo.start),
        goal: Some(geo.goal),
        robots,
        k,
        seq_objective: Some(seq.objective),
        opt_objective: Some(opt.objective),
        oracle_objective: None,
        gap_seq: None,
        gap_opt: None,
        runtime_seq,
        runtime_opt,
        error: None,
        oracle_error: None,
    };
    if let Some(limits) = &cfg.oracle {
        match exhaustive_optimum(&roadmap, &query, limits) {
            Ok(best) => {
                let gaps = gap(seq.objective, best.objective)
                    .and_then(|gs| gap(opt.objective, best.objective).map(|go| (gs, go)));
                match gaps {
                    Ok((gs, go)) => {
                        rec.oracle_objective = Some(best.objective);
                        rec.gap_seq = Some(gs);
                        rec.gap_opt = Some(go);
                    }
                    Err(e) => rec.oracle_error = Some(e.to_string()),
                }
            }
            Err(e) => rec.oracle_error = Some(e.to_string()),
        }
    }
    rec
}
