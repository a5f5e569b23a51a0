//! Minimal static SVG line charts. No charting dependency: the CSV is the
//! canonical output and these plots are a convenience view of it.

use grand::ldp::ExponentCurve;

use crate::curves::CurveSet;

pub struct SvgOptions {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
}

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 560.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 190.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

fn tick_label(v: f64, log_y: bool) -> String {
    if log_y {
        format!("1e{v:.1}")
    } else if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Render curves (and point markers) to a standalone SVG document.
pub fn render_svg(set: &CurveSet, opts: &SvgOptions) -> String {
    let transform = |y: f64| if opts.log_y { y.log10() } else { y };
    let mut xs_min = f64::INFINITY;
    let mut xs_max = f64::NEG_INFINITY;
    let mut ys_min = f64::INFINITY;
    let mut ys_max = f64::NEG_INFINITY;
    let usable = |y: f64| y.is_finite() && (!opts.log_y || y > 0.0);
    for c in &set.curves {
        for (&x, &y) in c.xs.iter().zip(&c.ys) {
            if x.is_finite() && usable(y) {
                xs_min = xs_min.min(x);
                xs_max = xs_max.max(x);
                let ty = transform(y);
                ys_min = ys_min.min(ty);
                ys_max = ys_max.max(ty);
            }
        }
    }
    for m in &set.markers {
        if m.x.is_finite() && usable(m.y) {
            xs_min = xs_min.min(m.x);
            xs_max = xs_max.max(m.x);
            let ty = transform(m.y);
            ys_min = ys_min.min(ty);
            ys_max = ys_max.max(ty);
        }
    }
    if !xs_min.is_finite() || xs_min == xs_max {
        xs_min = 0.0;
        xs_max = 1.0;
    }
    if !ys_min.is_finite() || ys_min == ys_max {
        ys_min = 0.0;
        ys_max = 1.0;
    }
    let px = |x: f64| MARGIN_L + (x - xs_min) / (xs_max - xs_min) * (WIDTH - MARGIN_L - MARGIN_R);
    let py =
        |y: f64| HEIGHT - MARGIN_B - (y - ys_min) / (ys_max - ys_min) * (HEIGHT - MARGIN_T - MARGIN_B);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        escape(&opts.title)
    ));

    // axes and ticks
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_L),
        fmt(HEIGHT - MARGIN_B),
        fmt(WIDTH - MARGIN_R),
        fmt(HEIGHT - MARGIN_B)
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_L),
        fmt(MARGIN_T),
        fmt(MARGIN_L),
        fmt(HEIGHT - MARGIN_B)
    ));
    for i in 0..=5 {
        let fx = xs_min + (xs_max - xs_min) * i as f64 / 5.0;
        let fy = ys_min + (ys_max - ys_min) * i as f64 / 5.0;
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n",
            fmt(px(fx)),
            fmt(HEIGHT - MARGIN_B),
            fmt(HEIGHT - MARGIN_B + 5.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            fmt(px(fx)),
            fmt(HEIGHT - MARGIN_B + 18.0),
            tick_label(fx, false)
        ));
        svg.push_str(&format!(
            "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"black\"/>\n",
            fmt(py(fy)),
            fmt(MARGIN_L - 5.0),
            fmt(MARGIN_L)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            fmt(MARGIN_L - 8.0),
            fmt(py(fy) + 4.0),
            tick_label(fy, opts.log_y)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 12.0,
        escape(&opts.x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        escape(&opts.y_label)
    ));

    // series
    for (i, c) in set.curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = c
            .xs
            .iter()
            .zip(&c.ys)
            .filter(|(x, y)| x.is_finite() && usable(**y))
            .map(|(&x, &y)| format!("{},{}", fmt(px(x)), fmt(py(transform(y)))))
            .collect();
        if points.len() > 1 {
            svg.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                points.join(" ")
            ));
        }
        let legend_y = MARGIN_T + 16.0 * i as f64;
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            fmt(WIDTH - MARGIN_R + 10.0),
            fmt(legend_y),
            fmt(WIDTH - MARGIN_R + 34.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\">{}</text>\n",
            fmt(WIDTH - MARGIN_R + 40.0),
            fmt(legend_y + 4.0),
            escape(&legend_name(c))
        ));
    }
    for m in &set.markers {
        if m.x.is_finite() && usable(m.y) {
            svg.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"none\" stroke=\"black\" stroke-width=\"1.2\"/>\n",
                fmt(px(m.x)),
                fmt(py(transform(m.y)))
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn legend_name(c: &ExponentCurve) -> String {
    if c.label.is_empty() {
        c.kind.clone()
    } else {
        format!("{} {}", c.kind, c.label)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
