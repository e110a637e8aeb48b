//! Minimal static SVG charts.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 60.0;

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Value range padded so a zero baseline is always visible.
fn y_range(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(0.0, f64::min);
    let hi = values.iter().copied().fold(0.0, f64::max);
    let pad = 0.05 * (hi - lo).max(1e-12);
    (lo - pad, hi + pad)
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        H - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * MARGIN)
    }

    fn axes(&self, s: &mut String, xlabel: &str, ylabel: &str) {
        let zero = self.py(0.0);
        let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{zero:.1}" x2="{:.1}" y2="{zero:.1}" stroke="gray"/>"#, W - MARGIN);
        let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{:.1}" stroke="black"/>"#, H - MARGIN);
        for y in [self.y0, 0.0, self.y1] {
            let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{y:.3}</text>"#, MARGIN - 6.0, self.py(y) + 4.0);
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 16.0, escape(xlabel));
        let _ = writeln!(
            s,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            H / 2.0,
            H / 2.0,
            escape(ylabel)
        );
    }
}

pub fn line_chart(xs: &[f64], ys: &[f64], title: &str, xlabel: &str, ylabel: &str) -> String {
    let mut s = header(title);
    let (y0, y1) = y_range(ys);
    let x0 = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let mut x1 = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let f = Frame { x0, x1, y0, y1 };
    f.axes(&mut s, xlabel, ylabel);
    let points: Vec<String> = xs.iter().zip(ys).map(|(x, y)| format!("{:.1},{:.1}", f.px(*x), f.py(*y))).collect();
    let _ = writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#, points.join(" "));
    for (x, label) in [(x0, x0), (x1, x1)] {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{label:.3}</text>"#, f.px(x), H - MARGIN + 16.0);
    }
    s.push_str("</svg>\n");
    s
}

pub fn bar_chart(labels: &[String], values: &[f64], title: &str, ylabel: &str) -> String {
    let mut s = header(title);
    let (y0, y1) = y_range(values);
    let f = Frame { x0: 0.0, x1: values.len().max(1) as f64, y0, y1 };
    f.axes(&mut s, "", ylabel);
    for (k, (label, v)) in labels.iter().zip(values).enumerate() {
        let left = f.px(k as f64 + 0.15);
        let width = f.px(k as f64 + 0.85) - left;
        let (top, bottom) = (f.py(v.max(0.0)), f.py(v.min(0.0)));
        let color = if *v < 0.0 { "firebrick" } else { "gray" };
        let _ = writeln!(
            s,
            r#"<rect x="{left:.1}" y="{top:.1}" width="{width:.1}" height="{:.1}" fill="{color}"/>"#,
            bottom - top
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            left + width / 2.0,
            H - MARGIN + 16.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_are_well_formed() {
        let line = line_chart(&[0.5, 1.0, 2.0], &[-0.1, -0.3, 0.2], "scan", "l/d", "violation");
        assert!(line.starts_with("<svg") && line.trim_end().ends_with("</svg>"));
        assert_eq!(line.matches("<polyline").count(), 1);
        let bars = bar_chart(&["a<b".into(), "c".into()], &[-0.2, 0.1], "t", "v");
        assert_eq!(bars.matches("<rect").count(), 3);
        assert!(bars.contains("a&lt;b"));
    }
}
