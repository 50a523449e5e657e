//! SVG rendering of a layer set.

use std::fmt::Write as _;

use onion_core::{LayerSet, Point};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

/// Strokes cycled by depth.
const PALETTE: [&str; 8] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// Draws each layer as a closed polygon (a dot or a segment when it has one
/// or two vertices) and every input point as a dot.
pub fn render(points: &[Point], ls: &LayerSet) -> String {
    let (mut x0, mut y0, mut x1, mut y1) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
    for p in points {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    if points.is_empty() {
        (x0, y0, x1, y1) = (0, 0, 1, 1);
    }
    let span = ((x1 - x0).max(y1 - y0).max(1)) as f64;
    let k = (SIZE - 2.0 * MARGIN) / span;
    // y grows downward in SVG
    let at = |p: &Point| (MARGIN + (p.x - x0) as f64 * k, SIZE - MARGIN - (p.y - y0) as f64 * k);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, layer) in ls.layers.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let depth = i + 1;
        match layer.as_slice() {
            [] => {}
            [p] => {
                let (x, y) = at(p);
                let _ = writeln!(
                    s,
                    r#"<circle class="layer" data-depth="{depth}" cx="{x:.2}" cy="{y:.2}" r="4" fill="none" stroke="{color}" stroke-width="1.5"/>"#
                );
            }
            [p, q] => {
                let ((ax, ay), (bx, by)) = (at(p), at(q));
                let _ = writeln!(
                    s,
                    r#"<line class="layer" data-depth="{depth}" x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="{color}" stroke-width="1.5"/>"#
                );
            }
            poly => {
                let pts: Vec<String> = poly
                    .iter()
                    .map(|p| {
                        let (x, y) = at(p);
                        format!("{x:.2},{y:.2}")
                    })
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polygon class="layer" data-depth="{depth}" points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    pts.join(" ")
                );
            }
        }
    }
    for p in points {
        let (x, y) = at(p);
        let _ = writeln!(s, r#"<circle class="point" cx="{x:.2}" cy="{y:.2}" r="2" fill="black"/>"#);
    }
    s.push_str("</svg>\n");
    s
}
