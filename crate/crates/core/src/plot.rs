//! Minimal static SVG output: axes, points or a polyline, and labels.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(points: &[(f64, f64)]) -> Self {
        let finite = points.iter().filter(|(x, y)| x.is_finite() && y.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in finite {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        // degenerate spans get a unit window
        if x1 - x0 <= 0.0 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 - y0 <= 0.0 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let pad = 0.05 * (y1 - y0);
        Frame {
            x0,
            x1,
            y0: y0 - pad,
            y1: y1 + pad,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn open(s: &mut String, f: &Frame, title: &str, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<polyline points="{l},{t} {l},{b} {r},{b}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        t - 20.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 14.0,
        escape(xlabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(ylabel)
    );
    for (v, anchor_x, anchor_y, align) in [(f.x0, l, b + 16.0, "start"), (f.x1, r, b + 16.0, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{anchor_x}" y="{anchor_y}" text-anchor="{align}">{}</text>"#,
            tick(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        l - 4.0,
        b,
        tick(f.y0)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        l - 4.0,
        t + 4.0,
        tick(f.y1)
    );
}

fn tick(v: f64) -> String {
    format!("{v:.4}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Scatter plot of `(x, y)` points.
pub fn scatter_svg(points: &[(f64, f64)], title: &str, xlabel: &str, ylabel: &str) -> String {
    let f = Frame::fit(points);
    let mut s = String::new();
    open(&mut s, &f, title, xlabel, ylabel);
    for &(x, y) in points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="black"/>"#,
            f.px(x),
            f.py(y)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Line plot of one or more series sharing the x values.
pub fn lines_svg(xs: &[f64], series: &[(&str, Vec<f64>)], title: &str, xlabel: &str) -> String {
    const COLORS: [&str; 4] = ["#1f4e99", "#b03a2e", "#1e8449", "#7d3c98"];
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|(_, ys)| xs.iter().copied().zip(ys.iter().copied()))
        .collect();
    let f = Frame::fit(&all);
    let mut s = String::new();
    let names: Vec<&str> = series.iter().map(|(n, _)| *n).collect();
    open(&mut s, &f, title, xlabel, &names.join(", "));
    // thin long series so the file stays small
    let stride = (xs.len() / 4000).max(1);
    for (k, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut pts = String::new();
        for (x, y) in xs.iter().zip(ys).step_by(stride) {
            if x.is_finite() && y.is_finite() {
                let _ = write!(pts, "{:.2},{:.2} ", f.px(*x), f.py(*y));
            }
        }
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1"/>"#,
            pts.trim_end()
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            WIDTH - MARGIN + 4.0,
            MARGIN + 14.0 * k as f64,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scatter_has_one_circle_per_point() {
        let svg = scatter_svg(&[(0.0, 1.0), (1.0, 2.0), (2.0, f64::NAN)], "t", "a0", "X");
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn degenerate_ranges_do_not_divide_by_zero() {
        let svg = scatter_svg(&[(1.0, 1.0)], "one", "x", "y");
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
        let svg = lines_svg(&[0.0, 1.0], &[("X", vec![2.0, 2.0])], "flat", "t");
        assert!(!svg.contains("NaN"));
    }
}
