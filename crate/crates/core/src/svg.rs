//! SVG output. Coordinates are rounded to 6 decimals for display only; the
//! exact crossing count is stamped into the file.

use crate::geometry::{q_to_f64, Drawing};
use std::fmt::Write;

fn r6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// Render `d` into an SVG 1.1 document about `size` user units wide.
pub fn render(d: &Drawing, crossings: usize, size: f64) -> String {
    let pts: Vec<(f64, f64)> = d
        .positions
        .iter()
        .chain(d.routes.iter().flatten())
        .map(|p| (q_to_f64(&p.x), q_to_f64(&p.y)))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 1.0f64, 0.0f64, 1.0f64);
    if let Some(&(x, y)) = pts.first() {
        (x0, x1, y0, y1) = (x, x, y, y);
        for &(x, y) in &pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let s = size / span;
    let pad = size * 0.05;
    // flip y so the drawing reads with y pointing up
    let map = |x: f64, y: f64| (pad + (x - x0) * s, pad + (y1 - y) * s);
    let w = (x1 - x0) * s + 2.0 * pad;
    let h = (y1 - y0) * s + 2.0 * pad;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        r6(w),
        r6(h),
        r6(w),
        r6(h)
    );
    let _ = writeln!(out, "<!-- exact crossings: {crossings} -->");
    let _ = writeln!(out, r#"<desc>crossings={crossings}</desc>"#);
    let _ = writeln!(out, r##"<g fill="none" stroke="#333" stroke-width="1">"##);
    for r in &d.routes {
        let pts: Vec<String> = r
            .iter()
            .map(|p| {
                let (x, y) = map(q_to_f64(&p.x), q_to_f64(&p.y));
                format!("{},{}", r6(x), r6(y))
            })
            .collect();
        let _ = writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" "));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g fill="#c33" stroke="none">"##);
    for (v, p) in d.positions.iter().enumerate() {
        let (x, y) = map(q_to_f64(&p.x), q_to_f64(&p.y));
        let _ = writeln!(
            out,
            r#"<circle id="v{v}" cx="{}" cy="{}" r="3"/>"#,
            r6(x),
            r6(y)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<text x="4" y="14" font-size="12">crossings: {crossings}</text>"#
    );
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn stamps_count() {
        let d = Drawing::convex(&Graph::complete(4), &[0, 1, 2, 3]);
        let s = render(&d, 1, 400.0);
        assert!(s.contains("exact crossings: 1"));
        assert_eq!(s.matches("<polyline").count(), 6);
        assert_eq!(s.matches("<circle").count(), 4);
        assert_eq!(render(&d, 1, 400.0), s);
    }
}
