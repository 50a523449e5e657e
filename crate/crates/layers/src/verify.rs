//! Differential checking of the hull-tree peeler against the oracle.

use std::fmt;

use onion_core::{peel_layers, Error, LayerSet, Mode, PeelOptions, Point, Sequential};

use crate::testkit::oracle_layers;

/// How a computed layer set differs from the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// Points whose layer index differs, with (computed, expected) depths.
    pub misplaced: Vec<(Point, Option<u32>, Option<u32>)>,
    /// 1-based layers with the right members in the wrong cyclic order.
    pub misordered: Vec<usize>,
    pub computed_k: usize,
    pub expected_k: usize,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "layers: computed {} expected {}", self.computed_k, self.expected_k)?;
        for (p, got, want) in &self.misplaced {
            let show = |d: &Option<u32>| d.map_or("-".to_string(), |d| d.to_string());
            writeln!(f, "point ({},{}) id {}: layer {} expected {}", p.x, p.y, p.id, show(got), show(want))?;
        }
        for l in &self.misordered {
            writeln!(f, "layer {l}: vertex order differs")?;
        }
        Ok(())
    }
}

/// Compares two layer sets over the same points. Layers are expected to be
/// normalized (counterclockwise from the smallest point).
pub fn compare(points: &[Point], got: &LayerSet, want: &LayerSet) -> Option<Mismatch> {
    let misplaced: Vec<_> = points
        .iter()
        .filter(|p| got.depth(p.id) != want.depth(p.id))
        .map(|p| (*p, got.depth(p.id), want.depth(p.id)))
        .collect();
    let (g, w) = (got.id_layers(), want.id_layers());
    let misordered: Vec<usize> = g
        .iter()
        .zip(&w)
        .enumerate()
        .filter(|(_, (a, b))| a != b && sorted(a) == sorted(b))
        .map(|(i, _)| i + 1)
        .collect();
    (!misplaced.is_empty() || !misordered.is_empty() || g.len() != w.len()).then_some(Mismatch {
        misplaced,
        misordered,
        computed_k: g.len(),
        expected_k: w.len(),
    })
}

fn sorted(v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

/// Peels `points` in `mode` and compares with the oracle.
pub fn check(points: &[Point], mode: Mode, validate: bool) -> Result<Option<Mismatch>, Error> {
    let opts = PeelOptions { mode, validate, ..Default::default() };
    let got = peel_layers(points, opts, &Sequential)?;
    Ok(compare(points, &got, &oracle_layers(points)))
}

/// Renumbers ids to `0..n` in slice order.
pub fn relabel(points: &[Point]) -> Vec<Point> {
    points.iter().enumerate().map(|(i, p)| Point::new(i as u32, p.x, p.y)).collect()
}

/// Greedily drops points while the disagreement persists. The result is
/// locally minimal: removing any single point makes the two peelers agree.
pub fn shrink(points: &[Point], mode: Mode) -> Vec<Point> {
    let fails = |p: &[Point]| !matches!(check(p, mode, false), Ok(None));
    let mut cur = relabel(points);
    debug_assert!(fails(&cur));
    let mut progress = true;
    while progress {
        progress = false;
        let mut i = 0;
        while i < cur.len() {
            let mut trial = cur.clone();
            trial.remove(i);
            let trial = relabel(&trial);
            if fails(&trial) {
                cur = trial;
                progress = true;
            } else {
                i += 1;
            }
        }
    }
    cur
}
