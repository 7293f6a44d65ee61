//! Minimal deterministic SVG writer for log-log decay plots.

use crate::record::Curve;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

/// Render curves on log-log axes. Non-positive values are clamped to a
/// floor so vanished norms stay drawable.
pub fn log_log_plot(title: &str, curves: &[Curve]) -> String {
    let floor = 1e-16;
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for c in curves {
        for &x in &c.xs {
            lx.push(x.max(floor).log10());
        }
        for &y in &c.ys {
            ly.push(y.max(floor).log10());
        }
    }
    let (x0, x1) = bounds(&lx);
    let (y0, y1) = bounds(&ly);
    let sx = |v: f64| MARGIN + (v.max(floor).log10() - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |v: f64| {
        HEIGHT - MARGIN - (v.max(floor).log10() - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN)
    };
    let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">{}</text>\n",
        MARGIN,
        xml_escape(title)
    ));
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN,
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\">log10 gamma: {} .. {}</text>\n",
        MARGIN,
        HEIGHT - MARGIN / 3.0,
        fmt(x0),
        fmt(x1)
    ));
    out.push_str(&format!(
        "<text x=\"8\" y=\"{}\" font-family=\"monospace\" font-size=\"12\">log10 norm: {} .. {}</text>\n",
        MARGIN,
        fmt(y0),
        fmt(y1)
    ));
    for (ci, c) in curves.iter().enumerate() {
        let color = palette[ci % palette.len()];
        let pts: Vec<String> = c
            .xs
            .iter()
            .zip(&c.ys)
            .map(|(&x, &y)| format!("{},{}", fmt(sx(x)), fmt(sy(y))))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
            pts.join(" "),
            color
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" fill=\"{}\">{}</text>\n",
            WIDTH - MARGIN - 220.0,
            MARGIN + 16.0 * ci as f64,
            color,
            xml_escape(&c.label)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(vals: &[f64]) -> (f64, f64) {
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
