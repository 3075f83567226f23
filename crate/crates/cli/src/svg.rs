//! Minimal SVG plotting: a fixed-size canvas with a linear world-to-pixel
//! map, polylines, markers, labels and a boxed frame with tick labels.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const MARGIN: f64 = 56.0;

pub struct Plot {
    x_range: (f64, f64),
    y_range: (f64, f64),
    body: String,
    title: String,
}

/// Stroke style for a polyline.
#[derive(Clone, Copy)]
pub struct Pen<'a> {
    pub color: &'a str,
    pub width: f64,
    pub dash: Option<&'a str>,
}

impl<'a> Pen<'a> {
    pub const fn solid(color: &'a str, width: f64) -> Self {
        Pen { color, width, dash: None }
    }

    pub const fn dashed(color: &'a str, width: f64) -> Self {
        Pen { color, width, dash: Some("6,4") }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Padded range covering `values`, or `fallback` when there are none.
pub fn span(values: impl IntoIterator<Item = f64>, fallback: (f64, f64)) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.into_iter().filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        return fallback;
    }
    if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        let pad = 0.5 * (1.0 + lo.abs());
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

impl Plot {
    pub fn new(title: &str, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        Plot { x_range, y_range, body: String::new(), title: title.to_string() }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_range.0) / (self.x_range.1 - self.x_range.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y_range.0) / (self.y_range.1 - self.y_range.0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn inside(&self, x: f64, y: f64) -> bool {
        let (xl, xh) = self.x_range;
        let (yl, yh) = self.y_range;
        x >= xl && x <= xh && y >= yl && y <= yh
    }

    /// Polyline through `pts`, broken wherever a point is non-finite or
    /// outside the viewport.
    pub fn polyline(&mut self, pts: &[[f64; 2]], pen: Pen) {
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, body: &mut String| {
            if run.len() >= 2 {
                let dash = pen.dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
                let _ = writeln!(
                    body,
                    "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"{dash} points=\"{}\"/>",
                    pen.color,
                    pen.width,
                    run.join(" ")
                );
            }
            run.clear();
        };
        for &[x, y] in pts {
            if x.is_finite() && y.is_finite() && self.inside(x, y) {
                run.push(format!("{:.2},{:.2}", self.px(x), self.py(y)));
            } else {
                flush(&mut run, &mut self.body);
            }
        }
        flush(&mut run, &mut self.body);
    }

    pub fn vline(&mut self, x: f64, pen: Pen) {
        let (lo, hi) = self.y_range;
        self.polyline(&[[x, lo], [x, hi]], pen);
    }

    pub fn hline(&mut self, y: f64, pen: Pen) {
        let (lo, hi) = self.x_range;
        self.polyline(&[[lo, y], [hi, y]], pen);
    }

    pub fn marker(&mut self, x: f64, y: f64, color: &str, label: Option<&str>) {
        if !self.inside(x, y) {
            return;
        }
        let (cx, cy) = (self.px(x), self.py(y));
        let _ = writeln!(self.body, "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"4\" fill=\"{color}\"/>");
        if let Some(l) = label {
            let _ = writeln!(
                self.body,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"{color}\">{}</text>",
                cx + 6.0,
                cy - 6.0,
                escape(l)
            );
        }
    }

    /// Legend entry `k` (0-based) in the upper right corner.
    pub fn legend(&mut self, k: usize, label: &str, color: &str) {
        let y = MARGIN + 16.0 + 16.0 * k as f64;
        let x = WIDTH - MARGIN - 150.0;
        let _ = writeln!(
            self.body,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>\n<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>",
            y - 4.0,
            x + 18.0,
            y - 4.0,
            x + 24.0,
            y,
            escape(label)
        );
    }

    fn frame(&self, x_label: &str, y_label: &str) -> String {
        let mut s = String::new();
        let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(s, "<rect x=\"{l}\" y=\"{t}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>", r - l, b - t);
        for k in 0..=4 {
            let f = k as f64 / 4.0;
            let xv = self.x_range.0 + f * (self.x_range.1 - self.x_range.0);
            let yv = self.y_range.0 + f * (self.y_range.1 - self.y_range.0);
            let _ = writeln!(
                s,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
                self.px(xv),
                b + 16.0,
                tick(xv)
            );
            let _ = writeln!(
                s,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{}</text>",
                l - 6.0,
                self.py(yv) + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
            0.5 * (l + r),
            HEIGHT - 12.0,
            escape(x_label)
        );
        let _ = writeln!(
            s,
            "<text x=\"14\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">{}</text>",
            0.5 * (t + b),
            0.5 * (t + b),
            escape(y_label)
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
            0.5 * (l + r),
            t - 16.0,
            escape(&self.title)
        );
        s
    }

    pub fn render(&self, x_label: &str, y_label: &str) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!-- vi3 {} -->\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}{}</svg>\n",
            env!("CARGO_PKG_VERSION"),
            self.frame(x_label, y_label),
            self.body
        )
    }
}

fn tick(v: f64) -> String {
    if v == 0.0 || (1e-2..1e4).contains(&v.abs()) {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clips_outside_points_into_separate_runs() {
        let mut p = Plot::new("t", (0.0, 1.0), (0.0, 1.0));
        p.polyline(&[[0.1, 0.1], [0.2, 0.2], [5.0, 5.0], [0.3, 0.3], [0.4, f64::NAN]], Pen::solid("black", 1.0));
        assert_eq!(p.body.matches("<polyline").count(), 1);
        let svg = p.render("x", "y");
        assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn span_pads_degenerate_ranges() {
        assert_eq!(span([], (-1.0, 1.0)), (-1.0, 1.0));
        let (lo, hi) = span([2.0, 2.0], (0.0, 1.0));
        assert!(lo < 2.0 && hi > 2.0);
    }
}
