//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use onion::bench::{run_brute_force, run_hull_tree};
use onion::testkit::{
    extrapolate_n_log_n, fit_scaling, generate, oracle_layers, shared_coordinate_set, Kind, ScalingRow,
};
use onion::verify::{check, compare};
use onion::Parallel;
use onion_core::layers::counterexample_fixture;
use onion_core::{peel_layers, Mode, PeelOptions, Point, Sequential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn general_position_instances() -> Vec<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut out = Vec::new();
    for _ in 0..500 {
        let n = rng.gen_range(3..=512);
        out.push(generate(Kind::UniformSquare, n, rng.gen()).unwrap());
    }
    for _ in 0..100 {
        let n = rng.gen_range(3..=4096);
        out.push(generate(Kind::UniformDisk, n, rng.gen()).unwrap());
    }
    assert!(out.iter().all(|i| i.general_position));
    out.into_iter().map(|i| i.points).collect()
}

fn degenerate_instances() -> Vec<(String, Vec<Point>)> {
    let mut out = Vec::new();
    for k in 2..=12 {
        out.push((format!("grid {k}x{k}"), generate(Kind::Grid, k * k, 0).unwrap().points));
    }
    for n in 2..=40 {
        out.push((format!("collinear n={n}"), generate(Kind::Collinear, n, n as u64).unwrap().points));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for i in 0..50 {
        let n = rng.gen_range(3..=300);
        let span = rng.gen_range(3..=20);
        out.push((format!("shared-coordinate #{i} n={n} span={span}"), shared_coordinate_set(n, span, rng.gen())));
    }
    out
}

fn oracle_equivalence(instances: &[Vec<Point>], validate: bool) -> Outcome {
    let t = Instant::now();
    for p in instances {
        match check(p, Mode::Purge, validate) {
            Ok(None) => {}
            Ok(Some(m)) => return outcome(false, format!("n={} mismatch:\n{m}", p.len())),
            Err(e) => return outcome(false, format!("n={} error: {e}", p.len())),
        }
    }
    outcome(true, format!("{} instances identical ({:.1}s)", instances.len(), t.elapsed().as_secs_f64()))
}

fn degenerate_equivalence(instances: &[(String, Vec<Point>)], validate: bool) -> Outcome {
    for (label, p) in instances {
        match check(p, Mode::Purge, validate) {
            Ok(None) => {}
            Ok(Some(m)) => return outcome(false, format!("{label} mismatch:\n{m}")),
            Err(e) => return outcome(false, format!("{label} error: {e}")),
        }
    }
    outcome(true, format!("{} grid/collinear/shared-coordinate instances identical", instances.len()))
}

fn counterexample(validate: bool) -> Outcome {
    let p = counterexample_fixture();
    let oracle = oracle_layers(&p);
    let sizes: Vec<usize> = oracle.layers.iter().map(Vec::len).collect();
    if sizes != [5, 5] || oracle.depth(6) != Some(2) {
        return outcome(false, format!("oracle ground truth differs: sizes {sizes:?}"));
    }
    let opts = |mode| PeelOptions { mode, validate, ..Default::default() };
    let purge = match peel_layers(&p, opts(Mode::Purge), &Sequential) {
        Ok(ls) => ls,
        Err(e) => return outcome(false, format!("purge error: {e}")),
    };
    let literal = match peel_layers(&p, opts(Mode::Literal), &Sequential) {
        Ok(ls) => ls,
        Err(e) => return outcome(false, format!("literal error: {e}")),
    };
    let purge_ok = compare(&p, &purge, &oracle).is_none() && purge.len() == 2;
    let lit = compare(&p, &literal, &oracle);
    let literal_ok = lit.as_ref().is_some_and(|m| {
        m.misplaced.len() == 1 && {
            let (q, got, want) = m.misplaced[0];
            (q.x, q.y, got, want) == (20, 50, Some(3), Some(2))
        }
    });
    outcome(
        purge_ok && literal_ok,
        format!(
            "oracle k=2 sizes 5,5; purge k={} matches={}; literal k={} with (20,50) in layer {:?}",
            purge.len(),
            purge_ok,
            literal.len(),
            literal.depth(6)
        ),
    )
}

fn layer_count_bound(instances: &[Vec<Point>]) -> Outcome {
    let mut worst = 0.0f64;
    for p in instances {
        let ls = peel_layers(p, PeelOptions::default(), &Sequential).unwrap();
        let bound = p.len().div_ceil(3);
        if ls.len() > bound {
            return outcome(false, format!("n={} k={} > {bound}", p.len(), ls.len()));
        }
        worst = worst.max(ls.len() as f64 / bound as f64);
    }
    outcome(true, format!("k <= ceil(n/3) on all {} instances (max k/bound = {worst:.3})", instances.len()))
}

/// Best of three wall times for `f`, after one discarded warm-up.
fn best_of<F: FnMut() -> f64>(mut f: F) -> f64 {
    f();
    (0..3).map(|_| f()).fold(f64::INFINITY, f64::min)
}

fn complexity(samples: &mut Vec<(usize, f64)>) -> Outcome {
    let mut build_rows = Vec::new();
    let mut peel_rows = Vec::new();
    for e in 10..=17 {
        let n = 1usize << e;
        let inst = generate(Kind::UniformSquare, n, 17).unwrap();
        let mut run = None;
        let secs = best_of(|| {
            let r = run_hull_tree(&inst.points, 0).unwrap();
            let t = r.total_secs();
            run = Some(r);
            t
        });
        let r = run.unwrap();
        samples.push((n, secs));
        build_rows.push(ScalingRow { n, value: r.build.scan_events });
        peel_rows.push(ScalingRow { n, value: r.peel.scan_events });
    }
    let build = fit_scaling(&build_rows).unwrap();
    let peel = fit_scaling(&peel_rows).unwrap();

    let mut ratios = Vec::new();
    for e in 13..=15 {
        let n = 1usize << e;
        let inst = generate(Kind::NestedRings, n, 0).unwrap();
        run_brute_force(&inst.points);
        let mut trials: Vec<f64> = (0..7)
            .map(|_| {
                let ht = run_hull_tree(&inst.points, 0).unwrap().total_secs();
                run_brute_force(&inst.points).0 / ht
            })
            .collect();
        trials.sort_by(f64::total_cmp);
        ratios.push((n, trials[3]));
    }
    let growing = ratios.windows(2).all(|w| w[1].1 > w[0].1) && ratios[1].1 > 1.0;
    let pass = build.pass && peel.pass && growing;
    let ratio_text: Vec<String> = ratios.iter().map(|(n, r)| format!("n={n}: {r:.1}x")).collect();
    outcome(
        pass,
        format!(
            "build scan max/min {:.3}, peel scan max/min {:.3} (limit 2); median brute/hull-tree on nested rings {}",
            build.spread(),
            peel.spread(),
            ratio_text.join(", ")
        ),
    )
}

fn scale_smoke(samples: &[(usize, f64)]) -> Outcome {
    let n = 1_000_000;
    let inst = generate(Kind::UniformSquare, n, 23).unwrap();
    let run = match run_hull_tree(&inst.points, 250) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let predicted = extrapolate_n_log_n(samples, n);
    let actual = run.total_secs();
    let pass = run.census_ok && run.peak_live_nodes == n && actual <= 3.0 * predicted;
    outcome(
        pass,
        format!(
            "n={n} k={} in {actual:.2}s (extrapolated {predicted:.2}s, limit x3); census ok={} peak live nodes={}",
            run.k, run.census_ok, run.peak_live_nodes
        ),
    )
}

fn invariant_suite(gp: &[Vec<Point>], degenerate: &[(String, Vec<Point>)]) -> Outcome {
    let t = Instant::now();
    let parts = [
        ("criterion 1", oracle_equivalence(gp, true)),
        ("criterion 2", degenerate_equivalence(degenerate, true)),
        ("criterion 3", counterexample(true)),
    ];
    let failed: Vec<String> =
        parts.iter().filter(|(_, o)| !o.pass).map(|(n, o)| format!("{n}: {}", o.detail)).collect();
    if failed.is_empty() {
        outcome(true, format!("criteria 1-3 re-run with validation after every mutation: 0 violations ({:.1}s)", t.elapsed().as_secs_f64()))
    } else {
        outcome(false, failed.join("; "))
    }
}

fn schedules_agree(instances: &[Vec<Point>]) -> bool {
    instances.iter().step_by(25).all(|p| {
        let a = peel_layers(p, PeelOptions::default(), &Sequential).unwrap();
        let b = peel_layers(p, PeelOptions::default(), &Parallel).unwrap();
        a == b
    })
}

fn main() -> ExitCode {
    let gp = general_position_instances();
    let degenerate = degenerate_instances();
    let mut samples = Vec::new();

    let mut all = true;
    let mut report = |i: u32, name: &str, o: Outcome| {
        all &= o.pass;
        println!("criterion {i} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    let mut c1 = oracle_equivalence(&gp, false);
    if c1.pass && !schedules_agree(&gp) {
        c1 = outcome(false, "sequential and parallel schedules disagree");
    }
    report(1, "oracle equivalence (general position)", c1);
    report(2, "oracle equivalence (degenerate)", degenerate_equivalence(&degenerate, false));
    report(3, "counterexample regression", counterexample(false));
    report(4, "layer-count bound", layer_count_bound(&gp));
    report(5, "complexity certification", complexity(&mut samples));
    report(6, "scale smoke", scale_smoke(&samples));
    report(7, "invariant suite", invariant_suite(&gp, &degenerate));

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
