//! Parameterized synthetic maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Rect;
use crate::model::{ModelError, PolygonMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    GridBlocks,
    StaggeredBricks,
    VariableDensity,
    RandomRects,
}

impl MapKind {
    pub const ALL: [MapKind; 4] = [
        MapKind::GridBlocks,
        MapKind::StaggeredBricks,
        MapKind::VariableDensity,
        MapKind::RandomRects,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MapKind::GridBlocks => "grid-blocks",
            MapKind::StaggeredBricks => "staggered-bricks",
            MapKind::VariableDensity => "variable-density",
            MapKind::RandomRects => "random-rects",
        }
    }
}

impl std::str::FromStr for MapKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MapKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown map kind `{s}`"))
    }
}

/// Knobs shared by all generators; each kind reads the ones it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    pub width: f64,
    pub height: f64,
    /// Grid rows; for variable-density, the obstacle count of the densest column.
    pub rows: usize,
    pub cols: usize,
    /// Fraction of a cell's side covered by its obstacle, in (0, 1).
    pub fill: f64,
    /// random-rects: number of rectangles and their side range.
    pub count: usize,
    pub min_size: f64,
    pub max_size: f64,
    /// Minimum free gap between obstacles, and between obstacles and the border.
    pub margin: f64,
    /// random-rects: placement attempts per rectangle.
    pub retries: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            width: 100.0,
            height: 100.0,
            rows: 2,
            cols: 2,
            fill: 0.5,
            count: 8,
            min_size: 5.0,
            max_size: 15.0,
            margin: 2.0,
            retries: 1000,
        }
    }
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(&'static str),
    #[error("placed only {placed} of {requested} obstacles")]
    Placement { placed: usize, requested: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Deterministic map for `(kind, params, seed)`.
pub fn generate_map(
    kind: MapKind,
    params: &GenParams,
    seed: u64,
) -> Result<PolygonMap, GenerateError> {
    check(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rects = match kind {
        MapKind::GridBlocks => grid_blocks(params),
        MapKind::StaggeredBricks => staggered_bricks(params),
        MapKind::VariableDensity => variable_density(params, &mut rng),
        MapKind::RandomRects => random_rects(params, &mut rng)?,
    };
    let border = Rect::new(0.0, 0.0, params.width, params.height);
    for (i, a) in rects.iter().enumerate() {
        if !within(&inset(&border, params.margin), a) {
            return Err(GenerateError::InvalidParams(
                "obstacles do not fit inside the border margin",
            ));
        }
        if rects[..i].iter().any(|b| too_close(a, b, params.margin)) {
            return Err(GenerateError::InvalidParams(
                "obstacles overlap or violate the margin",
            ));
        }
    }
    let name = format!("{}-{seed}", kind.name());
    Ok(PolygonMap::new(
        name,
        border,
        rects.iter().map(|r| r.corners().to_vec()).collect(),
    )?)
}

fn check(p: &GenParams) -> Result<(), GenerateError> {
    let positive = |x: f64| x.is_finite() && x > 0.0;
    if !positive(p.width) || !positive(p.height) {
        return Err(GenerateError::InvalidParams(
            "width and height must be positive",
        ));
    }
    if p.rows == 0 || p.cols == 0 {
        return Err(GenerateError::InvalidParams(
            "rows and cols must be at least 1",
        ));
    }
    if !(p.fill > 0.0 && p.fill < 1.0) {
        return Err(GenerateError::InvalidParams("fill must lie in (0, 1)"));
    }
    if !positive(p.min_size) || !(p.max_size >= p.min_size) || !p.max_size.is_finite() {
        return Err(GenerateError::InvalidParams(
            "need 0 < min_size <= max_size",
        ));
    }
    if !(p.margin.is_finite() && p.margin >= 0.0) {
        return Err(GenerateError::InvalidParams("margin must be non-negative"));
    }
    Ok(())
}

fn inset(r: &Rect, d: f64) -> Rect {
    Rect::new(r.xmin + d, r.ymin + d, r.xmax - d, r.ymax - d)
}

fn within(outer: &Rect, r: &Rect) -> bool {
    const EPS: f64 = 1e-9;
    r.xmin >= outer.xmin - EPS
        && r.ymin >= outer.ymin - EPS
        && r.xmax <= outer.xmax + EPS
        && r.ymax <= outer.ymax + EPS
}

fn too_close(a: &Rect, b: &Rect, margin: f64) -> bool {
    let gap_x = (b.xmin - a.xmax).max(a.xmin - b.xmax);
    let gap_y = (b.ymin - a.ymax).max(a.ymin - b.ymax);
    gap_x.max(gap_y) < margin
}

fn centered(cx: f64, cy: f64, w: f64, h: f64) -> Rect {
    Rect::new(cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0)
}

fn grid_blocks(p: &GenParams) -> Vec<Rect> {
    let (cw, ch) = (p.width / p.cols as f64, p.height / p.rows as f64);
    let side = p.fill * cw.min(ch);
    let mut out = Vec::new();
    for row in 0..p.rows {
        for col in 0..p.cols {
            let cx = (col as f64 + 0.5) * cw;
            let cy = (row as f64 + 0.5) * ch;
            out.push(centered(cx, cy, side, side));
        }
    }
    out
}

/// Rows of bricks; odd rows are shifted by half a brick and hold one fewer.
fn staggered_bricks(p: &GenParams) -> Vec<Rect> {
    let (cw, ch) = (p.width / p.cols as f64, p.height / p.rows as f64);
    let (bw, bh) = (p.fill * cw, p.fill * ch);
    let mut out = Vec::new();
    for row in 0..p.rows {
        let shift = if row % 2 == 1 { 1.0 } else { 0.5 };
        let n = if row % 2 == 1 { p.cols - 1 } else { p.cols };
        for col in 0..n {
            let cx = (col as f64 + shift) * cw;
            let cy = (row as f64 + 0.5) * ch;
            out.push(centered(cx, cy, bw, bh));
        }
    }
    out
}

/// Columns whose obstacle count grows from 1 (left) to `rows` (right); each
/// obstacle is jittered inside its cell.
fn variable_density(p: &GenParams, rng: &mut ChaCha8Rng) -> Vec<Rect> {
    let cw = p.width / p.cols as f64;
    let mut out = Vec::new();
    for col in 0..p.cols {
        let n = if p.cols == 1 {
            p.rows
        } else {
            1 + (col * (p.rows - 1) + (p.cols - 1) / 2) / (p.cols - 1)
        };
        let ch = p.height / n as f64;
        let side = p.fill * cw.min(ch);
        let slack_x = ((cw - side) / 2.0 - p.margin).max(0.0);
        let slack_y = ((ch - side) / 2.0 - p.margin).max(0.0);
        for row in 0..n {
            let jx = if slack_x > 0.0 {
                rng.gen_range(-slack_x..slack_x)
            } else {
                0.0
            };
            let jy = if slack_y > 0.0 {
                rng.gen_range(-slack_y..slack_y)
            } else {
                0.0
            };
            let cx = (col as f64 + 0.5) * cw + jx;
            let cy = (row as f64 + 0.5) * ch + jy;
            out.push(centered(cx, cy, side, side));
        }
    }
    out
}

fn random_rects(p: &GenParams, rng: &mut ChaCha8Rng) -> Result<Vec<Rect>, GenerateError> {
    let free = inset(&Rect::new(0.0, 0.0, p.width, p.height), p.margin);
    if free.width() < p.min_size || free.height() < p.min_size {
        return Err(GenerateError::Placement {
            placed: 0,
            requested: p.count,
        });
    }
    // every rectangle claims at least (min_size + margin)² of the inset area
    // grown by one margin, so more than that many can never be placed
    let cell = (p.min_size + p.margin).powi(2);
    let room = (free.width() + p.margin) * (free.height() + p.margin);
    if p.count as f64 * cell > room {
        return Err(GenerateError::Placement {
            placed: 0,
            requested: p.count,
        });
    }
    let mut out: Vec<Rect> = Vec::with_capacity(p.count);
    for _ in 0..p.count {
        let mut placed = false;
        for _ in 0..p.retries.max(1) {
            let w = rng.gen_range(p.min_size..=p.max_size).min(free.width());
            let h = rng.gen_range(p.min_size..=p.max_size).min(free.height());
            let x = rng.gen_range(free.xmin..=free.xmax - w);
            let y = rng.gen_range(free.ymin..=free.ymax - h);
            let r = Rect::new(x, y, x + w, y + h);
            if out.iter().all(|o| !too_close(&r, o, p.margin.max(1e-9))) {
                out.push(r);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(GenerateError::Placement {
                placed: out.len(),
                requested: p.count,
            });
        }
    }
    Ok(out)
}
