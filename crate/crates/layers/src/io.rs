//! Point files and layer output.
//!
//! A point file has one `x,y` pair per line. Blank lines, `#` comments and
//! an optional `x,y` header are ignored. Coordinates are integers, or
//! decimals when a scale of `K` decimal digits is given: each value is
//! multiplied by `10^K` and must then be an exact integer.

use std::fmt::Write as _;

use onion_core::{LayerSet, Point, COORD_LIMIT};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum InputError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate point ({x},{y}): ids {first} and {second} (lines {first_line} and {second_line})")]
    Duplicate { x: i64, y: i64, first: u32, second: u32, first_line: usize, second_line: usize },
    #[error("invalid layer document: {0}")]
    Layers(String),
}

/// Parses a point file; ids are assigned in file order.
pub fn parse_points(text: &str, scale: u32) -> Result<Vec<Point>, InputError> {
    let mut points = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| InputError::Parse { line, message };
        let (xs, ys) = body.split_once(',').ok_or_else(|| err(format!("expected `x,y`, found `{body}`")))?;
        let (xs, ys) = (xs.trim(), ys.trim());
        if points.is_empty() && xs.eq_ignore_ascii_case("x") && ys.eq_ignore_ascii_case("y") {
            continue;
        }
        let x = parse_coord(xs, scale).map_err(err)?;
        let y = parse_coord(ys, scale).map_err(err)?;
        points.push(Point::new(points.len() as u32, x, y));
        lines.push(line);
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| (points[i].x_key(), i));
    for w in order.windows(2) {
        let (a, b) = (&points[w[0]], &points[w[1]]);
        if a.x_key() == b.x_key() {
            return Err(InputError::Duplicate {
                x: a.x,
                y: a.y,
                first: a.id,
                second: b.id,
                first_line: lines[w[0]],
                second_line: lines[w[1]],
            });
        }
    }
    Ok(points)
}

pub const MAX_SCALE: u32 = 18;

/// Parses one coordinate and multiplies it by `10^scale` exactly.
pub fn parse_coord(s: &str, scale: u32) -> Result<i64, String> {
    if scale > MAX_SCALE {
        return Err(format!("scale {scale} exceeds the maximum of {MAX_SCALE}"));
    }
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty()
        || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
    {
        return Err(format!("`{s}` is not a number"));
    }
    let kept = frac.len().min(scale as usize);
    if frac[kept..].bytes().any(|b| b != b'0') {
        return Err(format!("`{s}` has more than {scale} decimal digits; refusing to round"));
    }
    let mut v: i128 = 0;
    for b in int.bytes().chain(frac[..kept].bytes()) {
        v = v * 10 + (b - b'0') as i128;
        if v > COORD_LIMIT as i128 * 10i128.pow(scale) {
            return Err(format!("`{s}` exceeds the coordinate bound 2^30"));
        }
    }
    for _ in kept..scale as usize {
        v *= 10;
        if v > COORD_LIMIT as i128 {
            break;
        }
    }
    if v > COORD_LIMIT as i128 {
        return Err(format!("`{s}` scaled by 10^{scale} exceeds the coordinate bound 2^30"));
    }
    Ok(if neg { -(v as i64) } else { v as i64 })
}

pub fn write_points(points: &[Point]) -> String {
    let mut out = String::from("x,y\n");
    for p in points {
        let _ = writeln!(out, "{},{}", p.x, p.y);
    }
    out
}

/// The JSON result document.
#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LayersDoc {
    pub n: usize,
    pub k: usize,
    pub layers: Vec<Vec<[i64; 2]>>,
}

impl LayersDoc {
    pub fn new(n: usize, ls: &LayerSet) -> Self {
        let layers: Vec<Vec<[i64; 2]>> =
            ls.layers.iter().map(|l| l.iter().map(|p| [p.x, p.y]).collect()).collect();
        LayersDoc { n, k: layers.len(), layers }
    }
}

pub fn layers_json(n: usize, ls: &LayerSet) -> String {
    serde_json::to_string(&LayersDoc::new(n, ls)).expect("layer document serializes")
}

pub fn parse_layers_json(text: &str) -> Result<LayersDoc, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Layers(e.to_string()))
}

/// `layer,idx,x,y` rows with a header; layers are 1-based, indices 0-based.
pub fn layers_csv(ls: &LayerSet) -> String {
    let mut out = String::from("layer,idx,x,y\n");
    for (i, layer) in ls.layers.iter().enumerate() {
        for (j, p) in layer.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", i + 1, j, p.x, p.y);
        }
    }
    out
}
