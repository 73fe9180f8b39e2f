//! Optimality rates, gap distributions and a runtime table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::run::ExperimentRecord;
use crate::oracle::TIE_EPS;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SummaryError {
    #[error("no records to summarize")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapStats {
    pub mean: f64,
    pub max: f64,
    pub p50: f64,
    pub p90: f64,
    pub p99: f64,
}

impl GapStats {
    fn of(gaps: &[f64]) -> GapStats {
        let mut sorted = gaps.to_vec();
        sorted.sort_by(f64::total_cmp);
        // nearest rank
        let pct = |p: f64| {
            let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
            sorted[rank.clamp(1, sorted.len()) - 1]
        };
        GapStats {
            mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
            max: *sorted.last().expect("nonempty"),
            p50: pct(50.0),
            p90: pct(90.0),
            p99: pct(99.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Optimality {
    /// Records carrying an oracle objective.
    pub samples: usize,
    pub seq_optimal_pct: f64,
    pub opt_optimal_pct: f64,
    pub gap_seq: GapStats,
    pub gap_opt: GapStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuntimeRow {
    pub map: String,
    pub robots: usize,
    pub samples: usize,
    /// Mean seconds.
    pub seq: f64,
    pub opt: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub failed: usize,
    /// Absent when no record has an oracle result.
    pub optimality: Option<Optimality>,
    pub runtime: Vec<RuntimeRow>,
}

pub fn summarize(records: &[ExperimentRecord]) -> Result<Summary, SummaryError> {
    if records.is_empty() {
        return Err(SummaryError::Empty);
    }
    let ok: Vec<&ExperimentRecord> = records.iter().filter(|r| !r.is_failed()).collect();

    let gaps: Vec<(f64, f64)> = ok
        .iter()
        .filter_map(|r| Some((r.gap_seq?, r.gap_opt?)))
        .collect();
    let optimality = (!gaps.is_empty()).then(|| {
        let n = gaps.len() as f64;
        let seq: Vec<f64> = gaps.iter().map(|g| g.0).collect();
        let opt: Vec<f64> = gaps.iter().map(|g| g.1).collect();
        let pct = |v: &[f64]| 100.0 * v.iter().filter(|&&g| g <= TIE_EPS).count() as f64 / n;
        Optimality {
            samples: gaps.len(),
            seq_optimal_pct: pct(&seq),
            opt_optimal_pct: pct(&opt),
            gap_seq: GapStats::of(&seq),
            gap_opt: GapStats::of(&opt),
        }
    });

    // grouped in first-seen map order, then by R
    let mut order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<(usize, usize), (usize, f64, f64)> = BTreeMap::new();
    for r in &ok {
        let m = match order.iter().position(|m| *m == r.map) {
            Some(i) => i,
            None => {
                order.push(&r.map);
                order.len() - 1
            }
        };
        let g = groups.entry((m, r.robots)).or_insert((0, 0.0, 0.0));
        g.0 += 1;
        g.1 += r.runtime_seq;
        g.2 += r.runtime_opt;
    }
    let runtime = groups
        .into_iter()
        .map(|((m, robots), (n, s, o))| RuntimeRow {
            map: order[m].to_string(),
            robots,
            samples: n,
            seq: s / n as f64,
            opt: o / n as f64,
        })
        .collect();

    Ok(Summary {
        records: records.len(),
        failed: records.len() - ok.len(),
        optimality,
        runtime,
    })
}

impl Summary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialization is infallible")
    }

    /// Plain-text report: optimality block plus an aligned runtime table
    /// with one row per (map, R) and opt / non-opt columns.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "records: {} ({} failed)", self.records, self.failed);
        match &self.optimality {
            Some(o) => {
                let _ = writeln!(s, "optimal (oracle samples: {})", o.samples);
                let _ = writeln!(s, "  non-opt: {:6.2}%", o.seq_optimal_pct);
                let _ = writeln!(s, "  opt:     {:6.2}%", o.opt_optimal_pct);
                let _ = writeln!(s, "gap        mean      p50       p90       p99       max");
                for (label, g) in [("non-opt", &o.gap_seq), ("opt", &o.gap_opt)] {
                    let _ = writeln!(
                        s,
                        "  {label:<8} {:<9.6} {:<9.6} {:<9.6} {:<9.6} {:.6}",
                        g.mean, g.p50, g.p90, g.p99, g.max
                    );
                }
            }
            None => {
                let _ = writeln!(s, "optimality: absent (no oracle results)");
            }
        }
        let width = self
            .runtime
            .iter()
            .map(|r| r.map.len())
            .max()
            .unwrap_or(0)
            .max(3);
        let _ = writeln!(
            s,
            "{:<width$}  {:>5}  {:>12}  {:>12}",
            "map", "R", "opt [s]", "non-opt [s]"
        );
        for r in &self.runtime {
            let _ = writeln!(
                s,
                "{:<width$}  {:>5}  {:>12.6}  {:>12.6}",
                r.map, r.robots, r.opt, r.seq
            );
        }
        s
    }
}
