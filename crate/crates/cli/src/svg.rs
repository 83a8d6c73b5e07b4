//! Minimal self-contained SVG line charts: axes, ticks, legend, one
//! polyline per series. No scripts, no external assets.

/// One plotted series.
pub struct Series {
    pub name: String,
    pub color: &'static str,
    /// (x, y) pairs; y must be positive when the chart is log-scaled.
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 56.0;

pub const PALETTE: [&str; 6] = [
    "#7b2d8e", // purple
    "#e0a420", // yellow
    "#d64545", // red
    "#3465a4", // blue
    "#4e9a06", // green
    "#555555",
];

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// Round a raw step to a 1/2/5 decade multiple.
fn nice_step(raw: f64) -> f64 {
    if raw <= 0.0 || !raw.is_finite() {
        return 1.0;
    }
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn x_ticks(min: f64, max: f64) -> Vec<f64> {
    if (max - min).abs() < f64::EPSILON {
        return vec![min];
    }
    let step = nice_step((max - min) / 6.0);
    let mut ticks = Vec::new();
    let mut t = (min / step).ceil() * step;
    while t <= max + 1e-9 * step {
        ticks.push(t);
        t += step;
    }
    ticks
}

/// Render a line chart. With `log_y` the y axis is log10-scaled with one
/// tick per decade; points with non-positive y are dropped from log charts.
pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    log_y: bool,
) -> String {
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for s in series {
        for &(x, y) in &s.points {
            if log_y && y <= 0.0 {
                continue;
            }
            xs.push(x);
            ys.push(if log_y { y.log10() } else { y });
        }
    }
    let (x_min, x_max) = bounds(&xs);
    let (mut y_min, mut y_max) = bounds(&ys);
    if log_y {
        y_min = y_min.floor();
        y_max = y_max.ceil();
        if y_max - y_min < 1.0 {
            y_max = y_min + 1.0;
        }
    } else if (y_max - y_min).abs() < f64::EPSILON {
        y_max = y_min + 1.0;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min).max(f64::EPSILON) * plot_w;
    let py = |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        fmt(WIDTH / 2.0),
        xml_escape(title)
    ));

    // Axes.
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP),
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP + plot_h)
    ));
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP + plot_h),
        fmt(MARGIN_LEFT + plot_w),
        fmt(MARGIN_TOP + plot_h)
    ));

    // Y ticks.
    let y_tick_values: Vec<f64> = if log_y {
        let mut v = Vec::new();
        let mut t = y_min;
        while t <= y_max + 1e-9 {
            v.push(t);
            t += 1.0;
        }
        v
    } else {
        x_ticks(y_min, y_max)
    };
    for t in &y_tick_values {
        let y = py(*t);
        let label = if log_y {
            format!("1e{}", *t as i64)
        } else {
            format!("{t}")
        };
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#cccccc\"/>\n",
            fmt(MARGIN_LEFT),
            fmt(y),
            fmt(MARGIN_LEFT + plot_w),
            fmt(y)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            fmt(MARGIN_LEFT - 6.0),
            fmt(y + 4.0),
            label
        ));
    }

    // X ticks.
    for t in x_ticks(x_min, x_max) {
        let x = px(t);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt(x),
            fmt(MARGIN_TOP + plot_h),
            fmt(x),
            fmt(MARGIN_TOP + plot_h + 5.0)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            fmt(x),
            fmt(MARGIN_TOP + plot_h + 18.0),
            t
        ));
    }

    // Axis labels.
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        fmt(MARGIN_LEFT + plot_w / 2.0),
        fmt(HEIGHT - 14.0),
        xml_escape(x_label)
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {})\">{}</text>\n",
        fmt(MARGIN_TOP + plot_h / 2.0),
        fmt(MARGIN_TOP + plot_h / 2.0),
        xml_escape(y_label)
    ));

    // Series.
    for s in series {
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|&&(_, y)| !log_y || y > 0.0)
            .map(|&(x, y)| {
                let yy = if log_y { y.log10() } else { y };
                format!("{},{}", fmt(px(x)), fmt(py(yy)))
            })
            .collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n",
            s.color,
            pts.join(" ")
        ));
        for &(x, y) in s.points.iter().filter(|&&(_, y)| !log_y || y > 0.0) {
            let yy = if log_y { y.log10() } else { y };
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
                fmt(px(x)),
                fmt(py(yy)),
                s.color
            ));
        }
    }

    // Legend.
    let legend_x = MARGIN_LEFT + 12.0;
    let mut legend_y = MARGIN_TOP + 10.0;
    for s in series {
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            fmt(legend_x),
            fmt(legend_y),
            fmt(legend_x + 26.0),
            fmt(legend_y),
            s.color
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n",
            fmt(legend_x + 32.0),
            fmt(legend_y + 4.0),
            xml_escape(&s.name)
        ));
        legend_y += 18.0;
    }

    out.push_str("</svg>\n");
    out
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min.is_finite() && max.is_finite() {
        (min, max)
    } else {
        (0.0, 1.0)
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_is_self_contained_svg() {
        let series = vec![
            Series {
                name: "a".into(),
                color: PALETTE[0],
                points: vec![(2.0, 1e-7), (4.0, 5e-7), (8.0, 3e-6)],
            },
            Series {
                name: "b".into(),
                color: PALETTE[1],
                points: vec![(2.0, 2e-6), (4.0, 8e-6), (8.0, 4e-5)],
            },
        ];
        let svg = line_chart("energy", "dimension", "joules", &series, true);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("1e-7"));
        assert!(!svg.contains("<script"));
        // Deterministic bytes.
        let again = line_chart("energy", "dimension", "joules", &series, true);
        assert_eq!(svg, again);
    }
}
