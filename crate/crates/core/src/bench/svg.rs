//! Hand-written SVG of a map, its roadmap and a plan.

use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::Point;
use crate::model::{EdgeId, PolygonMap, Roadmap, VertexId};
use crate::planner::PathSet;

const WIDTH_PX: f64 = 800.0;
const PAD_PX: f64 = 20.0;
const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#1f78b4",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("robot {robot} references unknown vertex {vertex}")]
    UnknownVertex { robot: usize, vertex: VertexId },
    #[error("robot {robot} steps {from} -> {to}, which is not an edge")]
    NotAnEdge {
        robot: usize,
        from: VertexId,
        to: VertexId,
    },
}

/// Number of robots crossing `edge` in the `from → to` direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabel {
    pub edge: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
    pub count: usize,
}

/// One label per used (edge, direction), in edge id order.
pub fn edge_labels(
    roadmap: &Roadmap,
    paths: &[Vec<VertexId>],
) -> Result<Vec<EdgeLabel>, RenderError> {
    let mut counts = vec![[0usize; 2]; roadmap.edge_count()];
    for (robot, path) in paths.iter().enumerate() {
        if let Some(&vertex) = path.iter().find(|v| !roadmap.contains(**v)) {
            return Err(RenderError::UnknownVertex { robot, vertex });
        }
        for w in path.windows(2) {
            let e = roadmap
                .edge_between(w[0], w[1])
                .ok_or(RenderError::NotAnEdge {
                    robot,
                    from: w[0],
                    to: w[1],
                })?;
            counts[e.0][usize::from(roadmap.edge(e).u != w[0])] += 1;
        }
    }
    let mut out = Vec::new();
    for (i, [fwd, bwd]) in counts.into_iter().enumerate() {
        let e = roadmap.edge(EdgeId(i));
        for (count, from, to) in [(fwd, e.u, e.v), (bwd, e.v, e.u)] {
            if count > 0 {
                out.push(EdgeLabel {
                    edge: e.id,
                    from,
                    to,
                    count,
                });
            }
        }
    }
    Ok(out)
}

struct View {
    scale: f64,
    xmin: f64,
    ymax: f64,
}

impl View {
    fn px(&self, p: Point) -> (f64, f64) {
        (
            PAD_PX + (p.x - self.xmin) * self.scale,
            PAD_PX + (self.ymax - p.y) * self.scale,
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Border, obstacles, roadmap edges, one polyline per robot, per-edge robot
/// counts with direction arrows, and start/goal markers.
pub fn render_svg(
    map: &PolygonMap,
    roadmap: &Roadmap,
    plan: &PathSet,
) -> Result<String, RenderError> {
    let labels = edge_labels(roadmap, &plan.paths)?;
    let b = map.border;
    let scale = (WIDTH_PX / b.width().max(f64::MIN_POSITIVE))
        .min(WIDTH_PX / b.height().max(f64::MIN_POSITIVE));
    let view = View {
        scale,
        xmin: b.xmin,
        ymax: b.ymax,
    };
    let (w, h) = (
        b.width() * scale + 2.0 * PAD_PX,
        b.height() * scale + 2.0 * PAD_PX,
    );
    let pos = |v: VertexId| view.px(roadmap.vertex(v).position);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&map.name));
    s.push_str(
        r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#000"/></marker></defs>
"##,
    );
    let (x0, y0) = view.px(Point::new(b.xmin, b.ymax));
    let _ = writeln!(
        s,
        r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="#fff" stroke="#000" stroke-width="2"/>"##,
        b.width() * scale,
        b.height() * scale
    );

    s.push_str("<g fill=\"#888\" stroke=\"#444\">\n");
    for poly in &map.obstacles {
        let pts: Vec<String> = poly
            .iter()
            .map(|p| {
                let (x, y) = view.px(*p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(s, r#"<polygon points="{}"/>"#, pts.join(" "));
    }
    s.push_str("</g>\n");

    s.push_str("<g stroke=\"#bbb\" stroke-width=\"1\">\n");
    for e in roadmap.edges() {
        let ((x1, y1), (x2, y2)) = (pos(e.u), pos(e.v));
        let dash = if e.is_virtual {
            r#" stroke-dasharray="2,2""#
        } else {
            ""
        };
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"{dash}/>"#
        );
    }
    s.push_str("</g>\n");

    s.push_str("<g fill=\"none\" stroke-width=\"3\" stroke-opacity=\"0.7\">\n");
    for (robot, path) in plan.paths.iter().enumerate() {
        let pts: Vec<String> = path
            .iter()
            .map(|v| {
                let (x, y) = pos(*v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="robot-path" data-robot="{robot}" stroke="{}" points="{}"/>"#,
            PALETTE[robot % PALETTE.len()],
            pts.join(" ")
        );
    }
    s.push_str("</g>\n");

    s.push_str("<g font-family=\"sans-serif\" font-size=\"11\">\n");
    for l in &labels {
        let ((x1, y1), (x2, y2)) = (pos(l.from), pos(l.to));
        let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
        let len = ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt();
        if len > 0.0 {
            let (ux, uy) = ((x2 - x1) / len * 6.0, (y2 - y1) / len * 6.0);
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000" marker-end="url(#arrow)"/>"##,
                mx - ux,
                my - uy,
                mx + ux,
                my + uy
            );
        }
        let _ = writeln!(
            s,
            r#"<text class="edge-count" data-edge="{}" x="{:.2}" y="{:.2}">{}</text>"#,
            l.edge,
            mx + 4.0,
            my - 4.0,
            l.count
        );
    }
    s.push_str("</g>\n");

    let ends = plan
        .paths
        .iter()
        .find_map(|p| Some((*p.first()?, *p.last()?)));
    if let Some((start, goal)) = ends {
        let (sx, sy) = pos(start);
        let (gx, gy) = pos(goal);
        let _ = writeln!(
            s,
            r##"<circle class="start" cx="{sx:.2}" cy="{sy:.2}" r="6" fill="#2ca02c"/>"##
        );
        let _ = writeln!(
            s,
            r##"<rect class="goal" x="{:.2}" y="{:.2}" width="12" height="12" fill="#d62728"/>"##,
            gx - 6.0,
            gy - 6.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
