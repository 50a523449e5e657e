//! Timing and counter collection over doubling sizes.

use std::fmt::Write as _;
use std::time::Instant;

use onion_core::{Error, Peeler, PeelOptions, Point, ScanCounters, Sequential};

use crate::testkit::{fit_scaling, generate, oracle_layers, GenError, Kind, ScalingRow, ScalingVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    HullTree,
    BruteForce,
}

/// One hull-tree run.
#[derive(Clone, Debug)]
pub struct HullTreeRun {
    pub n: usize,
    pub k: usize,
    pub build_secs: f64,
    pub peel_secs: f64,
    pub build: ScanCounters,
    pub peel: ScanCounters,
    /// Largest chain-node census over the four trees, sampled after the
    /// build and after every `sample_every` layers.
    pub peak_live_nodes: usize,
    /// False if a sampled census disagreed with the live-point count.
    pub census_ok: bool,
}

impl HullTreeRun {
    pub fn total_secs(&self) -> f64 {
        self.build_secs + self.peel_secs
    }
}

/// Builds and peels `points`, sampling the census every `sample_every`
/// layers (0 samples only after the build).
pub fn run_hull_tree(points: &[Point], sample_every: usize) -> Result<HullTreeRun, Error> {
    let census = |p: &Peeler| -> (usize, bool) {
        p.trees().iter().fold((0, true), |(m, ok), t| {
            let c = t.chain_node_census();
            (m.max(c), ok && c == t.live_points())
        })
    };
    let t0 = Instant::now();
    let mut peeler = Peeler::new(points, PeelOptions::default(), &Sequential)?;
    let build_secs = t0.elapsed().as_secs_f64();
    let (mut peak, mut census_ok) = census(&peeler);
    let t1 = Instant::now();
    let mut sample_time = 0.0;
    let mut layers = 0usize;
    while peeler.next_layer(&Sequential)?.is_some() {
        layers += 1;
        if sample_every > 0 && layers.is_multiple_of(sample_every) {
            let s = Instant::now();
            let (c, ok) = census(&peeler);
            peak = peak.max(c);
            census_ok &= ok;
            sample_time += s.elapsed().as_secs_f64();
        }
    }
    let peel_secs = t1.elapsed().as_secs_f64() - sample_time;
    let ls = peeler.finish();
    Ok(HullTreeRun {
        n: points.len(),
        k: ls.len(),
        build_secs,
        peel_secs,
        build: ls.build_counters,
        peel: ls.peel_counters,
        peak_live_nodes: peak,
        census_ok,
    })
}

/// Seconds taken by the brute-force peeler, and its layer count.
pub fn run_brute_force(points: &[Point]) -> (f64, usize) {
    let t = Instant::now();
    let k = oracle_layers(points).len();
    (t.elapsed().as_secs_f64(), k)
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub hull_tree: Option<HullTreeRun>,
    pub brute_force: Option<(f64, usize)>,
    pub n: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Peel(#[from] Error),
}

pub fn run(kind: Kind, sizes: &[usize], seed: u64, algos: &[Algo]) -> Result<Vec<BenchRow>, BenchError> {
    let mut rows = Vec::new();
    for &n in sizes {
        let inst = generate(kind, n, seed)?;
        let hull_tree = if algos.contains(&Algo::HullTree) { Some(run_hull_tree(&inst.points, 64)?) } else { None };
        let brute_force = algos.contains(&Algo::BruteForce).then(|| run_brute_force(&inst.points));
        rows.push(BenchRow { hull_tree, brute_force, n });
    }
    Ok(rows)
}

/// Scan-event scaling verdicts for the build and for the peel.
pub fn verdicts(rows: &[BenchRow]) -> Option<(ScalingVerdict, ScalingVerdict)> {
    let runs: Vec<&HullTreeRun> = rows.iter().filter_map(|r| r.hull_tree.as_ref()).collect();
    let pick = |f: fn(&HullTreeRun) -> u64| -> Vec<ScalingRow> {
        runs.iter().map(|r| ScalingRow { n: r.n, value: f(r) }).collect()
    };
    let build = fit_scaling(&pick(|r| r.build.scan_events)).ok()?;
    let peel = fit_scaling(&pick(|r| r.peel.scan_events)).ok()?;
    Some((build, peel))
}

pub fn table(rows: &[BenchRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>9} {:>6} {:>10} {:>10} {:>12} {:>12} {:>10} {:>10} {:>10} {:>8} {:>11}",
        "n", "k", "build_s", "peel_s", "build_scan", "peel_scan", "evict", "promote", "peak_live", "census", "brute_s"
    );
    for r in rows {
        let brute = r.brute_force.map_or("-".to_string(), |(t, _)| format!("{t:.4}"));
        match &r.hull_tree {
            Some(h) => {
                let _ = writeln!(
                    s,
                    "{:>9} {:>6} {:>10.4} {:>10.4} {:>12} {:>12} {:>10} {:>10} {:>10} {:>8} {:>11}",
                    h.n,
                    h.k,
                    h.build_secs,
                    h.peel_secs,
                    h.build.scan_events,
                    h.peel.scan_events,
                    h.build.evictions,
                    h.peel.promotions,
                    h.peak_live_nodes,
                    if h.census_ok { "ok" } else { "BAD" },
                    brute
                );
            }
            None => {
                let k = r.brute_force.map_or(0, |b| b.1);
                let _ = writeln!(s, "{:>9} {:>6} {:>10} {:>10} {:>12} {:>12} {:>10} {:>10} {:>10} {:>8} {:>11}", r.n, k, "-", "-", "-", "-", "-", "-", "-", "-", brute);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_smoke() {
        let rows = run(Kind::UniformSquare, &[3], 1, &[Algo::HullTree, Algo::BruteForce]).unwrap();
        let h = rows[0].hull_tree.as_ref().unwrap();
        assert_eq!(h.k, 1);
        assert!(h.census_ok);
        assert_eq!(rows[0].brute_force.unwrap().1, 1);
        assert!(table(&rows).lines().count() == 2);
    }
}
