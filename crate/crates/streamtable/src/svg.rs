//! SVG rendering of layouts: one filled path per stream, optional dotted row
//! grid, labels, and corner smoothing.
//!
//! The rectilinear geometry is exact; floats appear only here. Each stream is
//! drawn as one path with a subpath per maximal run of vertically adjacent
//! cells. With smoothing enabled, every stair corner of the outline is
//! replaced by a quadratic curve whose radius is a fraction of the smallest
//! row height, clamped per corner to half the adjacent segment lengths so the
//! curve cannot leave the corner wedge. Smoothing is render-only; the area
//! bookkeeping below is done on the exact rectilinear outlines before any
//! rounding.

use crate::layout::Layout;
use crate::rational::{self, Rational};
use num_traits::Zero;
use std::fmt::Write as _;

/// Default corner radius as a fraction of the minimum row height.
pub const DEFAULT_SMOOTHING_FRACTION: f64 = 0.25;

/// Twelve-hue colorblind-safe palette, cycled by column.
pub const DEFAULT_PALETTE: [&str; 12] = [
    "#4477aa", "#66ccee", "#228833", "#ccbb44", "#ee6677", "#aa3377", "#bbbbbb", "#222255",
    "#225555", "#666633", "#663333", "#555555",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothing {
    None,
    /// Corner radius as a fraction of the minimum row height, in [0, 1/2].
    Rounded(f64),
}

#[derive(Debug, Clone)]
pub struct RenderOptions {
    /// Pixels per layout unit; must be positive.
    pub scale: f64,
    pub palette: Vec<String>,
    pub smoothing: Smoothing,
    pub show_grid: bool,
    pub labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 40.0,
            palette: DEFAULT_PALETTE.iter().map(|s| s.to_string()).collect(),
            smoothing: Smoothing::Rounded(DEFAULT_SMOOTHING_FRACTION),
            show_grid: true,
            labels: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    x: f64,
    y: f64,
}

/// One maximal run of vertically adjacent cells of a stream, as an exact
/// rectilinear outline (clockwise).
struct RunOutline {
    points: Vec<(Rational, Rational)>,
    area: Rational,
}

fn stream_runs(layout: &Layout, col: usize) -> Vec<RunOutline> {
    let tops = layout.band_tops();
    let order = layout.order();
    let mut runs = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len()
            && layout.rect(order[end], col).x_touches(layout.rect(order[end + 1], col))
        {
            end += 1;
        }
        runs.push(run_outline(layout, col, start, end, &tops));
        start = end + 1;
    }
    runs
}

fn run_outline(
    layout: &Layout,
    col: usize,
    first_band: usize,
    last_band: usize,
    tops: &[Rational],
) -> RunOutline {
    let order = layout.order();
    let mut points: Vec<(Rational, Rational)> = Vec::new();
    // Down the right side.
    for band in first_band..=last_band {
        let rect = layout.rect(order[band], col);
        points.push((rect.right.clone(), tops[band].clone()));
        points.push((rect.right.clone(), tops[band + 1].clone()));
    }
    // Back up the left side.
    for band in (first_band..=last_band).rev() {
        let rect = layout.rect(order[band], col);
        points.push((rect.left.clone(), tops[band + 1].clone()));
        points.push((rect.left.clone(), tops[band].clone()));
    }
    // Drop repeated points (straight joints between equal-width bands).
    points.dedup();
    if points.len() > 1 && points.first() == points.last() {
        points.pop();
    }
    let mut area = Rational::zero();
    for i in 0..points.len() {
        let (x1, y1) = &points[i];
        let (x2, y2) = &points[(i + 1) % points.len()];
        area += x1 * y2 - x2 * y1;
    }
    // Clockwise in a y-down coordinate system gives a positive signed area.
    area /= rational::from_i64(2);
    RunOutline { points, area }
}

fn path_data(points: &[Point], smoothing: Smoothing, radius_base: f64) -> String {
    let mut d = String::new();
    match smoothing {
        Smoothing::None => {
            for (i, p) in points.iter().enumerate() {
                let _ = write!(d, "{}{:.3} {:.3} ", if i == 0 { "M" } else { "L" }, p.x, p.y);
            }
            d.push('Z');
        }
        Smoothing::Rounded(_) => {
            let n = points.len();
            let mut first = true;
            for i in 0..n {
                let prev = points[(i + n - 1) % n];
                let corner = points[i];
                let next = points[(i + 1) % n];
                let len_in = ((corner.x - prev.x).powi(2) + (corner.y - prev.y).powi(2)).sqrt();
                let len_out = ((next.x - corner.x).powi(2) + (next.y - corner.y).powi(2)).sqrt();
                let radius = radius_base.min(len_in / 2.0).min(len_out / 2.0);
                if radius <= f64::EPSILON || len_in <= 0.0 || len_out <= 0.0 {
                    let _ = write!(d, "{}{:.3} {:.3} ", if first { "M" } else { "L" }, corner.x, corner.y);
                    first = false;
                    continue;
                }
                let entry = Point {
                    x: corner.x - (corner.x - prev.x) / len_in * radius,
                    y: corner.y - (corner.y - prev.y) / len_in * radius,
                };
                let exit = Point {
                    x: corner.x + (next.x - corner.x) / len_out * radius,
                    y: corner.y + (next.y - corner.y) / len_out * radius,
                };
                let _ =
                    write!(d, "{}{:.3} {:.3} ", if first { "M" } else { "L" }, entry.x, entry.y);
                first = false;
                let _ = write!(d, "Q{:.3} {:.3} {:.3} {:.3} ", corner.x, corner.y, exit.x, exit.y);
            }
            d.push('Z');
        }
    }
    d
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders a layout as SVG text. Asserts, with exact arithmetic, that the
/// stream outlines cover exactly the total weight and that the bounding box
/// equals total weight plus excess.
pub fn render_svg(layout: &Layout, opts: &RenderOptions) -> String {
    assert!(opts.scale > 0.0, "scale must be positive");
    if let Smoothing::Rounded(frac) = opts.smoothing {
        assert!((0.0..=0.5).contains(&frac), "smoothing fraction must be in [0, 1/2]");
    }
    let cols = layout.table().cols();
    let scale = opts.scale;
    let x0 = rational::to_f64(layout.left_edge());
    let width = rational::to_f64(&layout.width()) * scale;
    let height = rational::to_f64(&layout.total_height()) * scale;
    let bbox_exact = layout.width() * layout.total_height();
    assert_eq!(
        bbox_exact,
        layout.table().total_weight() + layout.excess_area(),
        "bounding box must equal total weight plus excess"
    );

    let margin_left = if opts.labels { 90.0 } else { 0.0 };
    let margin_top = if opts.labels { 24.0 } else { 0.0 };
    let view_w = width + margin_left;
    let view_h = height + margin_top;

    let min_height = layout
        .heights()
        .as_slice()
        .iter()
        .min()
        .map(rational::to_f64)
        .unwrap_or(1.0);
    let radius_base = match opts.smoothing {
        Smoothing::None => 0.0,
        Smoothing::Rounded(frac) => frac * min_height * scale,
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {view_w:.3} {view_h:.3}\" width=\"{view_w:.3}\" height=\"{view_h:.3}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect class=\"canvas\" x=\"{margin_left:.3}\" y=\"{margin_top:.3}\" width=\"{width:.3}\" height=\"{height:.3}\" fill=\"#ffffff\"/>"
    );

    let mut covered = Rational::zero();
    for col in 0..cols {
        let color = &opts.palette[col % opts.palette.len()];
        let mut d = String::new();
        for run in stream_runs(layout, col) {
            covered += &run.area;
            let points: Vec<Point> = run
                .points
                .iter()
                .map(|(x, y)| Point {
                    x: (rational::to_f64(x) - x0) * scale + margin_left,
                    y: rational::to_f64(y) * scale + margin_top,
                })
                .collect();
            d.push_str(&path_data(&points, opts.smoothing, radius_base));
            d.push(' ');
        }
        let _ = writeln!(
            svg,
            "  <path class=\"stream stream-{col}\" d=\"{}\" fill=\"{color}\" stroke=\"none\"/>",
            d.trim_end()
        );
    }
    assert_eq!(
        covered,
        layout.table().total_weight(),
        "stream outlines must cover exactly the total weight"
    );

    if opts.show_grid {
        let _ = writeln!(svg, "  <g class=\"grid\" stroke=\"#444444\" stroke-dasharray=\"3 3\" stroke-width=\"0.7\">");
        for top in &layout.band_tops() {
            let y = rational::to_f64(top) * scale + margin_top;
            let _ = writeln!(
                svg,
                "    <line x1=\"{margin_left:.3}\" y1=\"{y:.3}\" x2=\"{:.3}\" y2=\"{y:.3}\"/>",
                margin_left + width
            );
        }
        let _ = writeln!(svg, "  </g>");
    }

    if opts.labels {
        let _ = writeln!(svg, "  <g class=\"labels\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#000000\">");
        let tops = layout.band_tops();
        for (band, &row) in layout.order().iter().enumerate() {
            let mid = (rational::to_f64(&tops[band]) + rational::to_f64(&tops[band + 1])) / 2.0;
            let _ = writeln!(
                svg,
                "    <text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"end\">{}</text>",
                margin_left - 6.0,
                mid * scale + margin_top + 4.0,
                xml_escape(&layout.table().row_labels()[row])
            );
        }
        let first_row = layout.order()[0];
        for col in 0..cols {
            let rect = layout.rect(first_row, col);
            let mid = (rational::to_f64(&rect.left) + rational::to_f64(&rect.right)) / 2.0 - x0;
            let _ = writeln!(
                svg,
                "    <text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"middle\">{}</text>",
                mid * scale + margin_left,
                margin_top - 8.0,
                xml_escape(&layout.table().col_labels()[col])
            );
        }
        let _ = writeln!(svg, "  </g>");
    }

    svg.push_str("</svg>\n");
    svg
}
