use std::fs;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use onion::bench::{self, Algo};
use onion::io::{self, InputError};
use onion::testkit::{generate, Kind};
use onion::verify::{self, Mismatch};
use onion::{svg, Parallel};
use onion_core::{peel_layers, Error, LayerSet, Mode, PeelOptions, Point, Sequential};

#[derive(Parser)]
#[command(name = "onion", version, about = "Convex layers (onion peeling) of planar point sets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the convex layers of a point file.
    Compute(ComputeArgs),
    /// Compare the hull-tree peeler with the brute-force oracle.
    Verify(VerifyArgs),
    /// Time both peelers and report scan counters over doubling sizes.
    Bench(BenchArgs),
    /// Write a generated instance as a point file.
    Gen(GenArgs),
    /// Draw the layers of a point file as SVG.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Purge,
    Literal,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Purge => Mode::Purge,
            ModeArg::Literal => Mode::Literal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Hulltree,
    Bruteforce,
    Both,
}

#[derive(Args)]
struct InputArgs {
    /// Point file with one `x,y` per line.
    #[arg(long)]
    input: PathBuf,
    /// Multiply decimal coordinates by 10^K; values must then be integers.
    #[arg(long, default_value_t = 0)]
    scale: u32,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Purge)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    max_layers: Option<usize>,
    /// Check every hull-tree invariant after each mutation.
    #[arg(long)]
    validate: bool,
    /// Run the four trees on the thread pool.
    #[arg(long)]
    parallel: bool,
    /// Print scan counters to stderr as key=value lines.
    #[arg(long)]
    counters: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    scale: u32,
    #[arg(long, value_parser = parse_kind)]
    gen: Option<Kind>,
    #[arg(long, requires = "gen")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instances to check, with seeds `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Purge)]
    mode: ModeArg,
    #[arg(long)]
    validate: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_parser = parse_kind, default_value = "uniform-square")]
    gen: Kind,
    /// `2^10..2^17` (doubling), or a comma list such as `1000,4096,2^14`.
    #[arg(long, default_value = "2^10..2^17", value_parser = parse_sizes)]
    sizes: Sizes,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = AlgoArg::Both)]
    algo: AlgoArg,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Purge)]
    mode: ModeArg,
}

#[derive(Clone, Debug)]
struct Sizes(Vec<usize>);

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse()
}

fn parse_size(s: &str) -> Result<usize, String> {
    let s = s.trim();
    match s.split_once('^') {
        Some((b, e)) => {
            let b: usize = b.parse().map_err(|_| format!("bad size `{s}`"))?;
            let e: u32 = e.parse().map_err(|_| format!("bad size `{s}`"))?;
            b.checked_pow(e).ok_or_else(|| format!("size `{s}` overflows"))
        }
        None => s.parse().map_err(|_| format!("bad size `{s}`")),
    }
}

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    if let Some((a, b)) = s.split_once("..") {
        let (mut n, end) = (parse_size(a)?, parse_size(b)?);
        if n == 0 || n > end {
            return Err(format!("empty size range `{s}`"));
        }
        let mut v = Vec::new();
        while n <= end {
            v.push(n);
            n *= 2;
        }
        return Ok(Sizes(v));
    }
    s.split(',').map(parse_size).collect::<Result<_, _>>().map(Sizes)
}

/// Process outcome; the discriminant is the exit code.
enum Failure {
    Mismatch(String),
    Input(String),
    Invariant(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(v) => Failure::Invariant(format!("invariant violated: {v}")),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn read_points(path: &Path, scale: u32) -> Result<Vec<Point>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(io::parse_points(&text, scale)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn peel(points: &[Point], opts: PeelOptions, parallel: bool) -> Result<LayerSet, Failure> {
    Ok(if parallel { peel_layers(points, opts, &Parallel)? } else { peel_layers(points, opts, &Sequential)? })
}

fn prefixed(prefix: &str, c: &onion_core::ScanCounters) -> String {
    c.to_string().lines().map(|l| format!("{prefix}{l}\n")).collect()
}

fn compute(a: ComputeArgs) -> Result<(), Failure> {
    let points = read_points(&a.input.input, a.input.scale)?;
    let opts = PeelOptions { mode: a.mode.into(), max_layers: a.max_layers, validate: a.validate };
    let ls = peel(&points, opts, a.parallel)?;
    match a.format {
        Format::Json => println!("{}", io::layers_json(points.len(), &ls)),
        Format::Csv => print!("{}", io::layers_csv(&ls)),
    }
    if a.counters {
        eprint!("{}{}", prefixed("build.", &ls.build_counters), prefixed("peel.", &ls.peel_counters));
    }
    Ok(())
}

fn report_mismatch(label: &str, points: &[Point], m: &Mismatch, mode: Mode) -> String {
    let small = verify::shrink(points, mode);
    let small_m = verify::check(&small, mode, false).ok().flatten();
    let mut s = format!("MISMATCH {label}\n{m}");
    s.push_str(&format!("minimized instance ({} points):\n", small.len()));
    s.push_str(&io::write_points(&small));
    if let Some(sm) = small_m {
        s.push_str(&format!("{sm}"));
    }
    s
}

fn verify_cmd(a: VerifyArgs) -> Result<(), Failure> {
    let mode: Mode = a.mode.into();
    let mut instances: Vec<(String, Vec<Point>)> = Vec::new();
    if let Some(path) = &a.input {
        instances.push((path.display().to_string(), read_points(path, a.scale)?));
    } else if let Some(kind) = a.gen {
        let n = a.n.ok_or_else(|| Failure::Input("--gen needs --n".into()))?;
        for seed in a.seed..a.seed + a.trials {
            let inst = generate(kind, n, seed).map_err(|e| Failure::Input(e.to_string()))?;
            instances.push((format!("{kind} n={n} seed={seed}"), inst.points));
        }
    }
    let total = instances.len();
    for (label, points) in instances {
        if let Some(m) = verify::check(&points, mode, a.validate)? {
            return Err(Failure::Mismatch(report_mismatch(&label, &points, &m, mode)));
        }
    }
    println!("ok: {total} instance(s) match the oracle");
    Ok(())
}

fn bench_cmd(a: BenchArgs) -> Result<(), Failure> {
    let algos: &[Algo] = match a.algo {
        AlgoArg::Hulltree => &[Algo::HullTree],
        AlgoArg::Bruteforce => &[Algo::BruteForce],
        AlgoArg::Both => &[Algo::HullTree, Algo::BruteForce],
    };
    let rows = bench::run(a.gen, &a.sizes.0, a.seed, algos).map_err(|e| match e {
        bench::BenchError::Gen(g) => Failure::Input(g.to_string()),
        bench::BenchError::Peel(p) => p.into(),
    })?;
    print!("{}", bench::table(&rows));
    match bench::verdicts(&rows) {
        Some((b, p)) => {
            println!("build scan events\n{b}");
            println!("peel scan events\n{p}");
        }
        None => println!("scaling verdict: needs at least 4 hull-tree sizes"),
    }
    Ok(())
}

fn gen_cmd(a: GenArgs) -> Result<(), Failure> {
    let inst = generate(a.kind, a.n, a.seed).map_err(|e| Failure::Input(e.to_string()))?;
    let mut text = format!(
        "# kind={} n={} seed={} general_position={}\n",
        inst.kind,
        inst.n(),
        inst.seed,
        inst.general_position
    );
    text.push_str(&io::write_points(&inst.points));
    write_file(&a.out, &text)
}

fn plot_cmd(a: PlotArgs) -> Result<(), Failure> {
    let points = read_points(&a.input.input, a.input.scale)?;
    let opts = PeelOptions { mode: a.mode.into(), ..Default::default() };
    let ls = peel(&points, opts, false)?;
    write_file(&a.out, &svg::render(&points, &ls))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = panic::catch_unwind(|| match cli.cmd {
        Cmd::Compute(a) => compute(a),
        Cmd::Verify(a) => verify_cmd(a),
        Cmd::Bench(a) => bench_cmd(a),
        Cmd::Gen(a) => gen_cmd(a),
        Cmd::Plot(a) => plot_cmd(a),
    });
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Mismatch(msg))) => {
            print!("{msg}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Input(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(Failure::Invariant(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(_) => {
            eprintln!("error: internal invariant failure");
            ExitCode::from(3)
        }
    }
}
