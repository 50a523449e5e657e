//! Brute-force oracles, instance generators and scaling analysis.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use onion_core::geometry::cross;
use onion_core::layers::{counterexample_fixture, normalize_start};
use onion_core::{LayerSet, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Convex hull vertices, counterclockwise from the smallest `(x, y)`.
/// Points interior to an edge are not vertices.
pub fn oracle_hull(points: &[Point]) -> Vec<Point> {
    let mut s = points.to_vec();
    s.sort_unstable_by_key(|p| p.x_key());
    hull_of_sorted(&s)
}

fn hull_of_sorted(s: &[Point]) -> Vec<Point> {
    if s.len() <= 2 {
        return s.to_vec();
    }
    let mut h: Vec<Point> = Vec::with_capacity(s.len() + 1);
    for p in s {
        while h.len() >= 2 && cross(&h[h.len() - 2], &h[h.len() - 1], p) <= 0 {
            h.pop();
        }
        h.push(*p);
    }
    let lower = h.len() + 1;
    for p in s.iter().rev().skip(1) {
        while h.len() >= lower && cross(&h[h.len() - 2], &h[h.len() - 1], p) <= 0 {
            h.pop();
        }
        h.push(*p);
    }
    h.pop();
    h
}

/// Peels hulls one at a time until no point is left.
pub fn oracle_layers(points: &[Point]) -> LayerSet {
    let mut rest = points.to_vec();
    rest.sort_unstable_by_key(|p| p.x_key());
    let mut on_hull = vec![false; points.len()];
    let mut layers = Vec::new();
    while !rest.is_empty() {
        let mut h = hull_of_sorted(&rest);
        for p in &h {
            on_hull[p.id as usize] = true;
        }
        rest.retain(|p| !on_hull[p.id as usize]);
        normalize_start(&mut h);
        layers.push(h);
    }
    LayerSet::from_layers(points.len(), layers)
}

/// The north-west monotone hull chain, west to east.
pub fn oracle_nw_hull(points: &[Point]) -> Vec<Point> {
    let mut s = points.to_vec();
    s.sort_unstable_by_key(|p| p.x_key());
    let mut up: Vec<Point> = Vec::new();
    for p in s {
        while up.len() >= 2 && cross(&up[up.len() - 2], &up[up.len() - 1], &p) >= 0 {
            up.pop();
        }
        up.push(p);
    }
    if let Some(top) = up.iter().enumerate().max_by_key(|(_, p)| p.y_key()).map(|(i, _)| i) {
        up.truncate(top + 1);
    }
    up
}

/// Result of [`oracle_bridge`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bridge {
    Pair(Point, Point),
    /// Left chain empty; the right end is the right chain's tail.
    EmptyLeft(Point),
    /// Right chain empty or lower than the left tail; carries that tail.
    Degenerate(Point),
}

/// All-pairs bridge between two north-west chains, `left` preceding
/// `right`. Among supporting pairs the outermost ends win.
pub fn oracle_bridge(left: &[Point], right: &[Point]) -> Bridge {
    match (left.last(), right.last()) {
        (None, None) => panic!("oracle_bridge on two empty chains"),
        (None, Some(&t)) => return Bridge::EmptyLeft(t),
        (Some(&lt), None) => return Bridge::Degenerate(lt),
        (Some(&lt), Some(rt)) if rt.lower_than(&lt) => return Bridge::Degenerate(lt),
        _ => {}
    }
    let mut best: Option<(Point, Point)> = None;
    for p in left {
        for q in right {
            if left.iter().chain(right).all(|r| cross(p, q, r) <= 0) {
                let outer = best.is_none_or(|(bp, bq)| p.x_key() <= bp.x_key() && q.x_key() >= bq.x_key());
                if outer {
                    best = Some((*p, *q));
                }
            }
        }
    }
    let (p, q) = best.expect("two nonempty chains always have a bridge");
    Bridge::Pair(p, q)
}

/// Instance families understood by [`generate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    UniformSquare,
    UniformDisk,
    Circle,
    Grid,
    Collinear,
    NestedRings,
    Fixture,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::UniformSquare,
        Kind::UniformDisk,
        Kind::Circle,
        Kind::Grid,
        Kind::Collinear,
        Kind::NestedRings,
        Kind::Fixture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::UniformSquare => "uniform-square",
            Kind::UniformDisk => "uniform-disk",
            Kind::Circle => "circle",
            Kind::Grid => "grid",
            Kind::Collinear => "collinear",
            Kind::NestedRings => "nested-rings",
            Kind::Fixture => "fixture",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Kind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown kind `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub points: Vec<Point>,
    pub kind: Kind,
    pub seed: u64,
    /// No three points collinear and no shared x or y, as checked by the
    /// generator. Large uniform instances are not checked and report false.
    pub general_position: bool,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.points.len()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GenError {
    #[error("{kind} needs {need}, got n = {n}")]
    Infeasible { kind: Kind, n: usize, need: &'static str },
}

/// Half-width of the uniform and circle generators' coordinate box.
pub const GEN_RADIUS: i64 = 1 << 29;

/// Largest uniform instance whose general position is verified.
pub const GP_CHECK_LIMIT: usize = 4096;

/// Deterministic instance of `kind` with `n` points.
pub fn generate(kind: Kind, n: usize, seed: u64) -> Result<Instance, GenError> {
    let infeasible = |need| GenError::Infeasible { kind, n, need };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (xy, general_position): (Vec<(i64, i64)>, bool) = match kind {
        Kind::UniformSquare | Kind::UniformDisk => {
            let disk = kind == Kind::UniformDisk;
            let sample = |rng: &mut ChaCha8Rng| loop {
                let x = rng.gen_range(-GEN_RADIUS..=GEN_RADIUS);
                let y = rng.gen_range(-GEN_RADIUS..=GEN_RADIUS);
                if !disk || (x as i128).pow(2) + (y as i128).pow(2) <= (GEN_RADIUS as i128).pow(2) {
                    return (x, y);
                }
            };
            let check = n <= GP_CHECK_LIMIT;
            let mut xs = HashSet::with_capacity(n);
            let mut ys = HashSet::with_capacity(n);
            let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
            while pts.len() < n {
                let (x, y) = sample(&mut rng);
                if xs.contains(&x) || ys.contains(&y) {
                    continue;
                }
                if check && makes_collinear_triple(&pts, (x, y)) {
                    continue;
                }
                xs.insert(x);
                ys.insert(y);
                pts.push((x, y));
            }
            (pts, check)
        }
        Kind::Circle => {
            let r = GEN_RADIUS as f64;
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let mut seen = HashSet::new();
            let mut pts = Vec::with_capacity(n);
            for i in 0..n {
                let t = phase + std::f64::consts::TAU * i as f64 / n as f64;
                let p = ((r * t.cos()).round() as i64, (r * t.sin()).round() as i64);
                if seen.insert(p) {
                    pts.push(p);
                }
            }
            if pts.len() != n {
                return Err(infeasible("distinct rounded circle points"));
            }
            (pts, false)
        }
        Kind::Grid => {
            let k = (n as f64).sqrt().round() as usize;
            if k * k != n {
                return Err(infeasible("a perfect square"));
            }
            let pts = (0..k).flat_map(|i| (0..k).map(move |j| (i as i64, j as i64))).collect();
            (pts, false)
        }
        Kind::Collinear => {
            let (dx, dy) = (rng.gen_range(1..=7i64), rng.gen_range(-7..=7i64));
            ((0..n as i64).map(|i| (i * dx, i * dy)).collect(), false)
        }
        Kind::NestedRings => {
            if !n.is_multiple_of(8) {
                return Err(infeasible("a multiple of 8"));
            }
            let mut pts = Vec::with_capacity(n);
            for r in 1..=(n / 8) as i64 {
                pts.extend_from_slice(&[
                    (2 * r, r),
                    (r, 2 * r),
                    (-r, 2 * r),
                    (-2 * r, r),
                    (-2 * r, -r),
                    (-r, -2 * r),
                    (r, -2 * r),
                    (2 * r, -r),
                ]);
            }
            (pts, false)
        }
        Kind::Fixture => {
            if n != 10 {
                return Err(infeasible("n = 10"));
            }
            let pts = counterexample_fixture().iter().map(|p| (p.x, p.y)).collect();
            (pts, false)
        }
    };
    let points = xy.into_iter().enumerate().map(|(i, (x, y))| Point::new(i as u32, x, y)).collect();
    Ok(Instance { points, kind, seed, general_position })
}

/// True when `p` is collinear with two points of `pts`: two of them then
/// share a reduced direction from `p`.
fn makes_collinear_triple(pts: &[(i64, i64)], p: (i64, i64)) -> bool {
    let mut dirs = HashSet::with_capacity(pts.len());
    pts.iter().any(|&q| {
        let (mut dx, mut dy) = (q.0 - p.0, q.1 - p.1);
        let g = gcd(dx.unsigned_abs(), dy.unsigned_abs()) as i64;
        dx /= g;
        dy /= g;
        if dx < 0 || (dx == 0 && dy < 0) {
            dx = -dx;
            dy = -dy;
        }
        !dirs.insert((dx, dy))
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Random sets on a small lattice, so that many points share an x or a y
/// coordinate and many triples are collinear.
pub fn shared_coordinate_set(n: usize, span: i64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = ((2 * span + 1) * (2 * span + 1)) as usize;
    let mut seen = HashSet::new();
    let mut pts = Vec::new();
    while pts.len() < n.min(cap) {
        let p = (rng.gen_range(-span..=span), rng.gen_range(-span..=span));
        if seen.insert(p) {
            pts.push(Point::new(pts.len() as u32, p.0, p.1));
        }
    }
    pts
}

/// One size of a scaling experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub value: u64,
}

impl ScalingRow {
    /// `value / (n log2 n)`.
    pub fn ratio(&self) -> f64 {
        let n = self.n as f64;
        self.value as f64 / (n * n.log2())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingVerdict {
    pub pass: bool,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub rows: Vec<(usize, u64, f64)>,
}

impl ScalingVerdict {
    pub fn spread(&self) -> f64 {
        self.max_ratio / self.min_ratio
    }
}

impl fmt::Display for ScalingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>10} {:>14} {:>10}", "n", "count", "/(n lg n)")?;
        for (n, v, r) in &self.rows {
            writeln!(f, "{n:>10} {v:>14} {r:>10.4}")?;
        }
        write!(
            f,
            "max/min = {:.3} -> {}",
            self.spread(),
            if self.pass { "pass" } else { "fail" }
        )
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("scaling fit needs at least 4 sizes, got {0}")]
pub struct InsufficientData(pub usize);

/// Passes iff `max / min` of `value / (n log2 n)` over the rows is at most 2.
pub fn fit_scaling(rows: &[ScalingRow]) -> Result<ScalingVerdict, InsufficientData> {
    if rows.len() < 4 {
        return Err(InsufficientData(rows.len()));
    }
    let table: Vec<(usize, u64, f64)> = rows.iter().map(|r| (r.n, r.value, r.ratio())).collect();
    let min_ratio = table.iter().map(|t| t.2).fold(f64::INFINITY, f64::min);
    let max_ratio = table.iter().map(|t| t.2).fold(0.0, f64::max);
    Ok(ScalingVerdict { pass: max_ratio <= 2.0 * min_ratio, min_ratio, max_ratio, rows: table })
}

/// Least-squares fit of `t = a n + b n log2 n` through the given timings,
/// evaluated at `n`.
pub fn extrapolate_n_log_n(samples: &[(usize, f64)], n: usize) -> f64 {
    let f = |n: usize| {
        let n = n as f64;
        (n, n * n.log2())
    };
    let (mut s11, mut s12, mut s22, mut s1t, mut s2t) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(m, t) in samples {
        let (u, v) = f(m);
        s11 += u * u;
        s12 += u * v;
        s22 += v * v;
        s1t += u * t;
        s2t += v * t;
    }
    let det = s11 * s22 - s12 * s12;
    let (u, v) = f(n);
    if det.abs() < 1e-12 * s11 * s22 {
        return v * s2t / s22;
    }
    let a = (s1t * s22 - s2t * s12) / det;
    let b = (s11 * s2t - s12 * s1t) / det;
    if a < 0.0 || b < 0.0 {
        // fall back to a pure n log n fit when the two-term fit goes negative
        return v * s2t / s22;
    }
    a * u + b * v
}
