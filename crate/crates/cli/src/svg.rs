//! SVG frame rendering: one file per recorded round, robots colored by
//! role, the connectivity boundary as a closed polyline, and the wave
//! segment quads shaded for rounds that stepped under the wave protocol.
//!
//! All frames of a trace share one viewport so a flip-through reads as an
//! animation.

use std::path::Path;

use swarmwave::sim::{Protocol, RoundRecord, Trace};
use swarmwave::wave::wave_regions;
use swarmwave::{geom, Configuration64, Point64};

const CANVAS: f64 = 640.0;
const GEOM_TOL: f64 = 1e-9;

struct Viewport {
    x0: f64,
    y1: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Viewport {
    /// Maps world coordinates to canvas pixels, flipping y so the plane's
    /// upward direction points up on screen.
    fn map(&self, p: Point64) -> (f64, f64) {
        ((p.x - self.x0) * self.scale, (self.y1 - p.y) * self.scale)
    }
}

fn viewport(trace: &Trace, range_circle: Option<usize>) -> Viewport {
    let mut x0 = f64::INFINITY;
    let mut y0 = f64::INFINITY;
    let mut x1 = f64::NEG_INFINITY;
    let mut y1 = f64::NEG_INFINITY;
    for record in &trace.records {
        for &(x, y) in &record.positions {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
    }
    if !x0.is_finite() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let mut margin = 0.5;
    if range_circle.is_some() {
        margin += trace.scenario.viewing_range();
    }
    x0 -= margin;
    y0 -= margin;
    x1 += margin;
    y1 += margin;
    let scale = CANVAS / (x1 - x0).max(y1 - y0);
    Viewport {
        x0,
        y1,
        scale,
        width: (x1 - x0) * scale,
        height: (y1 - y0) * scale,
    }
}

fn role_color(role: &str) -> &'static str {
    match role {
        "boundary" => "#d62728",
        "wave_old" => "#ff7f0e",
        "wave_new" => "#2ca02c",
        "inner" => "#1f77b4",
        _ => "#7f7f7f",
    }
}

/// Renders every `every`-th round plus the final round to
/// `frame_<round>.svg` files under `out`. Returns the number written.
pub fn render_frames(
    trace: &Trace,
    out: &Path,
    every: usize,
    range_circle: Option<usize>,
) -> Result<usize, String> {
    std::fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
    let every = every.max(1);
    let view = viewport(trace, range_circle);
    let last = trace.records.len().saturating_sub(1);
    let mut written = 0;
    for (i, record) in trace.records.iter().enumerate() {
        if i % every != 0 && i != last {
            continue;
        }
        let frame = render_frame(trace, record, &view, range_circle);
        let path = out.join(format!("frame_{:04}.svg", record.round));
        std::fs::write(&path, frame)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        written += 1;
    }
    Ok(written)
}

fn render_frame(
    trace: &Trace,
    record: &RoundRecord,
    view: &Viewport,
    range_circle: Option<usize>,
) -> String {
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
         viewBox=\"0 0 {:.2} {:.2}\">\n",
        view.width, view.height, view.width, view.height
    ));
    svg.push_str(&format!("  <title>round {}</title>\n", record.round));
    svg.push_str(&format!(
        "  <rect width=\"{:.2}\" height=\"{:.2}\" fill=\"#ffffff\"/>\n",
        view.width, view.height
    ));

    let points: Vec<Point64> = record
        .positions
        .iter()
        .map(|&(x, y)| Point64::new(x, y))
        .collect();
    let config = Configuration64::new(points.clone()).ok();
    let cycle = config
        .as_ref()
        .and_then(|c| geom::connectivity_boundary(c, GEOM_TOL).ok());

    // Segment quads first, so the boundary and robots draw over them. The
    // recorded roles belong to the step taken from this round, so shade
    // exactly when that step ran under the wave protocol.
    let stepped = record.roles.iter().any(|r| r != "none");
    if trace.scenario.protocol == Protocol::Wave && stepped {
        if let Some(cycle) = cycle.as_ref().filter(|c| {
            !c.degenerate && c.positions.len() >= 3 && geom::is_convex_cycle(c, GEOM_TOL)
        }) {
            let regions = wave_regions(cycle.positions.clone(), trace.scenario.epsilon);
            for (segments, fill) in [(&regions.old_segments, "#ff7f0e"), (&regions.new_segments, "#2ca02c")] {
                for seg in segments.iter() {
                    svg.push_str(&polygon(
                        &[seg.a, seg.b, seg.c, seg.d],
                        view,
                        &format!("fill=\"{fill}\" fill-opacity=\"0.14\" class=\"segment\""),
                    ));
                }
            }
        }
    }

    if let Some(cycle) = cycle.as_ref() {
        let attrs = "fill=\"none\" stroke=\"#333944\" stroke-width=\"1.5\" class=\"boundary\"";
        if cycle.degenerate {
            svg.push_str(&polyline(&cycle.positions, view, attrs));
        } else {
            svg.push_str(&polygon(&cycle.positions, view, attrs));
        }
    }

    if let Some(index) = range_circle {
        if let Some(&center) = points.get(index) {
            let (cx, cy) = view.map(center);
            svg.push_str(&format!(
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"none\" \
                 stroke=\"#9aa0a8\" stroke-dasharray=\"6 4\" class=\"range\"/>\n",
                cx,
                cy,
                trace.scenario.viewing_range() * view.scale
            ));
        }
    }

    let radius = (0.08 * view.scale).clamp(2.0, 7.0);
    for (p, role) in points.iter().zip(&record.roles) {
        let (cx, cy) = view.map(*p);
        svg.push_str(&format!(
            "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{radius:.2}\" fill=\"{}\" class=\"robot {role}\"/>\n",
            role_color(role)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn path_points(points: &[Point64], view: &Viewport) -> String {
    points
        .iter()
        .map(|&p| {
            let (x, y) = view.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn polygon(points: &[Point64], view: &Viewport, attrs: &str) -> String {
    format!("  <polygon points=\"{}\" {attrs}/>\n", path_points(points, view))
}

fn polyline(points: &[Point64], view: &Viewport, attrs: &str) -> String {
    format!("  <polyline points=\"{}\" {attrs}/>\n", path_points(points, view))
}
