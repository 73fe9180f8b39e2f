//! `formplan` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 planning infeasible,
//! 3 oracle budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use formplan::bench::{
    generate_map, render_svg, run_benchmark, summarize, BenchConfig, GenParams, MapKind,
};
use formplan::geometry::Point;
use formplan::model::{PlanQuery, PolygonMap, Roadmap, VertexId};
use formplan::optimizer::plan_optimized;
use formplan::oracle::{exhaustive_optimum, OracleError, OracleLimits};
use formplan::planner::{make_schedule, plan_sequential, PathSet, PlanError};
use formplan::roadmap::{build_roadmap, corner_terminals, evaluate_edge_costs, RoadmapBuildParams};

#[derive(Parser)]
#[command(
    name = "formplan",
    version,
    about = "Formation path planning with split and merge"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a costed roadmap from a polygon map.
    BuildRoadmap {
        map: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, default_value_t = 1.0)]
        min_clearance: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 100.0)]
        k: f64,
        /// Cost-vector capacity.
        #[arg(long, default_value_t = 1)]
        robots: usize,
        /// Keep degree-2 chains instead of collapsing them.
        #[arg(long)]
        no_contract: bool,
        /// Start point `x,y`, inserted into the roadmap.
        #[arg(long, value_parser = parse_point, requires = "goal")]
        start: Option<Point>,
        #[arg(long, value_parser = parse_point, requires = "start")]
        goal: Option<Point>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Plan a formation on a roadmap.
    Plan {
        roadmap: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        /// Run the improvement pass after each robot.
        #[arg(long)]
        optimize: bool,
        #[arg(long, default_value_t = 1)]
        opt_rounds: usize,
        /// Also write the wait-synchronized schedule here.
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive optimum for small instances.
    Oracle {
        roadmap: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value_t = OracleLimits::default().max_simple_paths)]
        max_paths: usize,
        #[arg(long, default_value_t = OracleLimits::default().max_combinations)]
        max_combos: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a benchmark batch from a JSON config.
    Bench {
        config: PathBuf,
        /// Records output; overrides the config.
        #[arg(long)]
        records: Option<PathBuf>,
        /// Summary output; overrides the config.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Draw map, roadmap and plan as SVG.
    Render {
        map: PathBuf,
        roadmap: PathBuf,
        plan: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate a synthetic map.
    GenMap {
        #[arg(long)]
        kind: MapKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator parameters as a JSON object; missing keys use defaults.
        #[arg(long)]
        params: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    robots: usize,
    /// Re-evaluate edge costs with this coefficient; without it the costs
    /// stored in the roadmap are used.
    #[arg(long)]
    k: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Defaults to the lowest-leftmost vertex.
    #[arg(long)]
    start_id: Option<usize>,
    /// Defaults to the highest-rightmost vertex.
    #[arg(long)]
    goal_id: Option<usize>,
}

enum Failure {
    Usage(String),
    Infeasible(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Infeasible(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Infeasible(m) | Failure::Budget(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn from_plan(e: PlanError) -> Failure {
    match e.root() {
        PlanError::Blocked { .. } | PlanError::Disconnected { .. } => {
            Failure::Infeasible(e.to_string())
        }
        _ => usage(e),
    }
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected `x,y`")?;
    let x: f64 = x.trim().parse().map_err(|e| format!("bad x: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("bad y: {e}"))?;
    Ok(Point::new(x, y))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => {
            fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_query(path: &Path, args: &QueryArgs) -> Result<(Roadmap, PlanQuery), Failure> {
    let roadmap = Roadmap::from_json(&read(path)?).map_err(usage)?;
    let roadmap = match args.k {
        Some(k) => {
            evaluate_edge_costs(&roadmap, args.robots.max(1), k, args.alpha).map_err(usage)?
        }
        None => roadmap,
    };
    let corners = corner_terminals(&roadmap);
    let start = args
        .start_id
        .map(VertexId)
        .or(corners.map(|c| c.0))
        .ok_or_else(|| usage("roadmap needs two vertices to pick default terminals"))?;
    let goal = args
        .goal_id
        .map(VertexId)
        .or(corners.map(|c| c.1))
        .ok_or_else(|| usage("roadmap needs two vertices to pick default terminals"))?;
    let query = PlanQuery {
        start,
        goal,
        robots: args.robots,
        // informational only: planning reads the cost vectors
        coefficient: args.k.unwrap_or(0.0),
    };
    Ok((roadmap, query))
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::BuildRoadmap {
            map,
            step,
            min_clearance,
            alpha,
            k,
            robots,
            no_contract,
            start,
            goal,
            output,
        } => {
            let map = PolygonMap::from_json(&read(&map)?).map_err(usage)?;
            let params = RoadmapBuildParams {
                sampling_step: step,
                min_clearance,
                clearance_weight: alpha,
                coefficient: k,
                robots,
                contract: !no_contract,
            };
            let built = build_roadmap(&map, &params, start.zip(goal)).map_err(usage)?;
            if let Some((s, g)) = built.terminals {
                eprintln!("start vertex {s}, goal vertex {g}");
            }
            emit(output.as_deref(), &built.roadmap.to_json())
        }
        Cmd::Plan {
            roadmap,
            query,
            optimize,
            opt_rounds,
            schedule,
            output,
        } => {
            let (roadmap, query) = load_query(&roadmap, &query)?;
            let set = if optimize {
                plan_optimized(&roadmap, &query, opt_rounds)
            } else {
                plan_sequential(&roadmap, &query)
            }
            .map_err(from_plan)?;
            if let Some(path) = schedule {
                let s =
                    make_schedule(&set.paths).map_err(|e| Failure::Infeasible(e.to_string()))?;
                emit(Some(&path), &s.to_json())?;
            }
            emit(output.as_deref(), &set.to_json())
        }
        Cmd::Oracle {
            roadmap,
            query,
            max_paths,
            max_combos,
            output,
        } => {
            let (roadmap, query) = load_query(&roadmap, &query)?;
            let limits = OracleLimits {
                max_simple_paths: max_paths,
                max_combinations: max_combos,
            };
            let set = exhaustive_optimum(&roadmap, &query, &limits).map_err(|e| match e {
                OracleError::PathLimitExceeded { .. }
                | OracleError::CombinationBudgetExceeded { .. } => Failure::Budget(e.to_string()),
                OracleError::Infeasible => Failure::Infeasible(e.to_string()),
                OracleError::Plan(p) => from_plan(p),
                other => usage(other),
            })?;
            emit(output.as_deref(), &set.to_json())
        }
        Cmd::Bench {
            config,
            records,
            summary,
        } => {
            let cfg = BenchConfig::load(&config).map_err(usage)?;
            let base = config.parent().unwrap_or(Path::new("."));
            let recs = run_benchmark(&cfg, base);
            let resolve = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
            let records = records.or(cfg.output.records.clone().map(resolve));
            let summary_path = summary.or(cfg.output.summary.clone().map(resolve));
            if let Some(p) = records {
                let text = serde_json::to_string_pretty(&recs).map_err(usage)?;
                emit(Some(&p), &text)?;
            }
            let s = summarize(&recs).map_err(usage)?;
            if let Some(p) = summary_path {
                emit(Some(&p), &s.to_json())?;
            }
            print!("{}", s.table());
            for r in recs.iter().filter(|r| r.is_failed()) {
                eprintln!(
                    "failed: {} R={} k={}: {}",
                    r.map,
                    r.robots,
                    r.k,
                    r.error.as_deref().unwrap_or("")
                );
            }
            Ok(())
        }
        Cmd::Render {
            map,
            roadmap,
            plan,
            output,
        } => {
            let map = PolygonMap::from_json(&read(&map)?).map_err(usage)?;
            let roadmap = Roadmap::from_json(&read(&roadmap)?).map_err(usage)?;
            let set = match plan {
                Some(p) => PathSet::from_json(&read(&p)?, &roadmap).map_err(usage)?,
                None => PathSet::evaluate(&roadmap, Vec::new()).map_err(usage)?,
            };
            let svg = render_svg(&map, &roadmap, &set).map_err(usage)?;
            emit(Some(&output), &svg)
        }
        Cmd::GenMap {
            kind,
            seed,
            params,
            output,
        } => {
            let params: GenParams = match params {
                Some(p) => serde_json::from_str(&p).map_err(usage)?,
                None => GenParams::default(),
            };
            let map = generate_map(kind, &params, seed).map_err(usage)?;
            emit(output.as_deref(), &map.to_json())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
