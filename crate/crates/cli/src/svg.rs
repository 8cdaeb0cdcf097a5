//! Minimal self-contained SVG line charts.
//!
//! Hand-rolled on purpose: the charts need nothing beyond polylines, point
//! markers, two axes with ticks, and a legend, and producing the bytes
//! directly keeps the output deterministic down to the last digit.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 58.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy)]
pub struct Axes {
    pub log_x: bool,
    pub log_y: bool,
}

fn tick_label(value: f64, log: bool) -> String {
    let v = if log { 10f64.powf(value) } else { value };
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 0.01 && v.abs() < 10_000.0 {
        format!("{v:.4}")
    } else {
        format!("{v:.2e}")
    }
}

/// Renders a line chart; returns `None` when no series has a plottable
/// point (e.g. all values non-positive on a log axis).
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series], axes: Axes) -> Option<String> {
    let transform = |(x, y): (f64, f64)| -> Option<(f64, f64)> {
        let tx = if axes.log_x {
            if x <= 0.0 {
                return None;
            }
            x.log10()
        } else {
            x
        };
        let ty = if axes.log_y {
            if y <= 0.0 {
                return None;
            }
            y.log10()
        } else {
            y
        };
        (tx.is_finite() && ty.is_finite()).then_some((tx, ty))
    };

    let transformed: Vec<(usize, Vec<(f64, f64)>)> = series
        .iter()
        .enumerate()
        .map(|(i, s)| (i, s.points.iter().filter_map(|&p| transform(p)).collect()))
        .filter(|(_, pts): &(usize, Vec<(f64, f64)>)| !pts.is_empty())
        .collect();
    if transformed.is_empty() {
        return None;
    }

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, pts) in &transformed {
        for &(x, y) in pts {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_min == x_max {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if y_min == y_max {
        let pad = y_min.abs().max(1.0) * 1e-3;
        y_min -= pad;
        y_max += pad;
    }
    let x_pad = 0.02 * (x_max - x_min);
    let y_pad = 0.06 * (y_max - y_min);
    x_min -= x_pad;
    x_max += x_pad;
    y_min -= y_pad;
    y_max += y_pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let py = |y: f64| MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut svg = String::with_capacity(16 * 1024);
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"13\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>",
        WIDTH / 2.0,
        xml_escape(title)
    );

    // axes
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        svg,
        "<line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{x1:.1}\" y2=\"{y0:.1}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{x0:.1}\" y2=\"{y1:.1}\" stroke=\"black\"/>"
    );

    for i in 0..5 {
        let fx = x_min + (x_max - x_min) * i as f64 / 4.0;
        let gx = px(fx);
        let _ = writeln!(
            svg,
            "<line x1=\"{gx:.1}\" y1=\"{y0:.1}\" x2=\"{gx:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{gx:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            y0 + 20.0,
            tick_label(fx, axes.log_x)
        );

        let fy = y_min + (y_max - y_min) * i as f64 / 4.0;
        let gy = py(fy);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{gy:.1}\" x2=\"{x0:.1}\" y2=\"{gy:.1}\" stroke=\"black\"/>",
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>",
            x0 - 9.0,
            gy + 4.0,
            tick_label(fy, axes.log_y)
        );
    }

    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 14.0,
        xml_escape(x_label)
    );
    let _ = writeln!(
        svg,
        "<text x=\"20\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.1})\">{}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        xml_escape(y_label)
    );

    // series
    for (slot, (index, pts)) in transformed.iter().enumerate() {
        let color = PALETTE[slot % PALETTE.len()];
        if pts.len() > 1 {
            let path: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            let _ = writeln!(
                svg,
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\" points=\"{}\"/>",
                path.join(" ")
            );
        }
        for &(x, y) in pts {
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{color}\"/>",
                px(x),
                py(y)
            );
        }
        // legend entry
        let ly = MARGIN_TOP + 8.0 + 18.0 * slot as f64;
        let lx = WIDTH - MARGIN_RIGHT - 190.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            lx + 26.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\">{}</text>",
            lx + 32.0,
            ly + 4.0,
            xml_escape(&series[*index].label)
        );
    }

    svg.push_str("</svg>\n");
    Some(svg)
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
