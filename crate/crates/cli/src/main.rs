mod cli;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use prngaudit::battery::{
    binary_rank_test, birthday_spacings_test, charpoly_parity_samples, collision_test,
    decorrelation_time, escape_from_zeroland, gap_test, hamming_weight_screen,
    linear_complexity_test, EscapeResult, Histogram, Seeded, Source, TestReport,
};
use prngaudit::equidist::equidistribution_score_with_budget;
use prngaudit::generators::{dump_bytes, make, Algorithm, Generator, SeedSpec};
use prngaudit::par;

use cli::{BenchArgs, Cli, Command, EquidistArgs, EscapeArgs, FiguresArgs, Format, GenArgs, SourceArgs, TestKind};

/// Version tag written into every figure CSV row.
const SCHEMA_VERSION: u32 = 1;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<prngaudit::Error> for CliError {
    fn from(e: prngaudit::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

type CliResult = Result<bool, CliError>;

/// Everything a run depends on, resolved before execution.
#[derive(Debug, Serialize)]
struct ExperimentConfig {
    command: String,
    generators: Vec<String>,
    master_seed: u64,
    threads: usize,
    params: BTreeMap<String, Value>,
    output: Option<PathBuf>,
    format: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    if cli.print_config {
        eprintln!("{}", serde_json::to_string_pretty(&resolve_config(&cli)).unwrap());
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) -> Result<(), String> {
    match threads {
        Some(0) => Err("--threads must be at least 1".into()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string()),
        None => Ok(()),
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(threads: Option<usize>) -> Result<(), String> {
    match threads {
        Some(0) => Err("--threads must be at least 1".into()),
        Some(n) if n > 1 => {
            eprintln!("note: built without the `parallel` feature; running on one thread");
            Ok(())
        }
        _ => Ok(()),
    }
}

fn resolve_config(cli: &Cli) -> ExperimentConfig {
    let mut params = BTreeMap::new();
    let mut generators = Vec::new();
    let (command, output, format) = match &cli.command {
        Command::Gen(a) => {
            generators.push(source_name(&a.source));
            params.insert("bytes".into(), json!(a.bytes));
            ("gen".to_string(), None, None)
        }
        Command::Figures(a) => {
            generators.extend(a.algos.iter().map(|g| g.name().to_string()));
            params.insert("mode".into(), json!(a.mode.to_string()));
            params.insert("n".into(), json!(a.n));
            params.insert("samples".into(), json!(a.samples));
            ("figures".into(), Some(a.out_dir.clone()), Some(format_name(a.format)))
        }
        Command::Test(t) => {
            let c = t.kind.common();
            generators.push(source_name(&c.source));
            params = test_params(&t.kind);
            (format!("test {}", t.kind.name()), c.out.clone(), Some("json".into()))
        }
        Command::Equidist(a) => {
            generators.push(a.algo.name().into());
            params.insert("budget".into(), json!(a.budget));
            ("equidist".into(), a.out.clone(), Some("json".into()))
        }
        Command::Escape(a) => {
            generators.push(a.algo.name().into());
            params.insert("positions".into(), json!(a.positions));
            params.insert("bits".into(), json!(a.bits));
            params.insert("decorrelation".into(), json!(a.decorrelation));
            ("escape".into(), a.out.clone(), Some(format_name(a.format)))
        }
        Command::Bench(a) => {
            match a.algo {
                Some(g) => generators.push(g.name().into()),
                None => generators.extend(Algorithm::ALL.iter().map(|g| g.name().to_string())),
            }
            params.insert("warmup".into(), json!(a.warmup));
            params.insert("words".into(), json!(a.words));
            ("bench".into(), None, Some("json".into()))
        }
    };
    ExperimentConfig {
        command,
        generators,
        master_seed: cli.seed,
        threads: par::current_threads(),
        params,
        output,
        format,
    }
}

fn format_name(f: Format) -> String {
    match f {
        Format::Csv => "csv".into(),
        Format::Json => "json".into(),
    }
}

fn test_params(kind: &TestKind) -> BTreeMap<String, Value> {
    let pairs: Vec<(&str, Value)> = match kind {
        TestKind::BinaryRank { side, samples, mode, .. } => vec![
            ("side", json!(side)),
            ("samples", json!(samples)),
            ("mode", json!(mode.to_string())),
        ],
        TestKind::LinearComplexity { bit, n, .. } => vec![("bit", json!(bit)), ("n", json!(n))],
        TestKind::Collision { block_bits, blocks, .. } => {
            vec![("block_bits", json!(block_bits)), ("blocks", json!(blocks))]
        }
        TestKind::Gap { alpha, beta, max_gap, gaps, .. } => vec![
            ("alpha", json!(alpha)),
            ("beta", json!(beta)),
            ("max_gap", json!(max_gap)),
            ("gaps", json!(gaps)),
        ],
        TestKind::BirthdaySpacings { bits, points, .. } => {
            vec![("bits", json!(bits)), ("points", json!(points))]
        }
        TestKind::HammingWeight { budget, .. } => vec![("budget", json!(budget))],
    };
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn source_name(s: &SourceArgs) -> String {
    Seeded::new(s.algo, 0).with_transform(s.transform).name()
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a, cli.seed),
        Command::Figures(a) => cmd_figures(a, cli.seed),
        Command::Test(t) => cmd_test(&t.kind, cli.seed),
        Command::Equidist(a) => cmd_equidist(a, cli.seed),
        Command::Escape(a) => cmd_escape(a, cli.seed),
        Command::Bench(a) => cmd_bench(a, cli.seed),
    }
}

fn build(source: &SourceArgs, seed: u64) -> Result<Box<dyn Generator>, CliError> {
    Ok(Seeded::new(source.algo, seed)
        .with_transform(source.transform)
        .spawn(0)?)
}

fn write_output(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.write_all(b"\n")?;
            out.flush()
        }
    }
}

fn cmd_gen(a: &GenArgs, seed: u64) -> CliResult {
    let mut g = build(&a.source, seed)?;
    let mut out = io::stdout().lock();
    dump_bytes(g.as_mut(), a.bytes, &mut out)?;
    Ok(true)
}

fn figure_path(dir: &Path, mode: &str, algo: Algorithm, ext: &str) -> PathBuf {
    dir.join(format!("{mode}_{}.{ext}", algo.name()))
}

fn cmd_figures(a: &FiguresArgs, seed: u64) -> CliResult {
    fs::create_dir_all(&a.out_dir)?;
    let mode = a.mode.to_string();
    for &algo in &a.algos {
        let values = charpoly_parity_samples(&Seeded::new(algo, seed), a.n, a.samples, a.mode)?;
        let hist = Histogram::from_values(&values);
        let path = match a.format {
            Format::Csv => {
                let path = figure_path(&a.out_dir, &mode, algo, "csv");
                write_figure_csv(&path, &values, &hist)?;
                fs::write(figure_path(&a.out_dir, &mode, algo, "hist.csv"), hist.to_csv())?;
                path
            }
            Format::Json => {
                let path = figure_path(&a.out_dir, &mode, algo, "json");
                let doc = json!({
                    "generator": algo.name(),
                    "mode": mode,
                    "n": a.n,
                    "schema_version": SCHEMA_VERSION,
                    "values": values,
                    "histogram": hist,
                });
                fs::write(&path, serde_json::to_string_pretty(&doc).unwrap())?;
                path
            }
        };
        println!(
            "{}",
            json!({
                "generator": algo.name(),
                "mode": mode,
                "n": a.n,
                "samples": a.samples,
                "mean": hist.mean,
                "variance": hist.variance,
                "path": path,
            })
        );
    }
    Ok(true)
}

/// Header `sample,value,mean,variance,schema_version`; one row per sample,
/// then a `summary` row carrying mean and variance.
fn write_figure_csv(path: &Path, values: &[u64], hist: &Histogram) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    let version = SCHEMA_VERSION.to_string();
    w.write_record(["sample", "value", "mean", "variance", "schema_version"])?;
    for (k, v) in values.iter().enumerate() {
        w.write_record([k.to_string(), v.to_string(), String::new(), String::new(), version.clone()])?;
    }
    w.write_record([
        "summary".to_string(),
        String::new(),
        hist.mean.to_string(),
        hist.variance.to_string(),
        version,
    ])?;
    w.flush()?;
    Ok(())
}

fn cmd_test(kind: &TestKind, seed: u64) -> CliResult {
    let common = kind.common();
    let report: TestReport = match kind {
        TestKind::BinaryRank { side, samples, mode, .. } => {
            let src = Seeded::new(common.source.algo, seed).with_transform(common.source.transform);
            binary_rank_test(&src, *side, *samples, *mode)?
        }
        TestKind::LinearComplexity { bit, n, .. } => {
            linear_complexity_test(build(&common.source, seed)?.as_mut(), *bit, *n)?
        }
        TestKind::Collision { block_bits, blocks, .. } => {
            collision_test(build(&common.source, seed)?.as_mut(), *block_bits, *blocks)?
        }
        TestKind::Gap { alpha, beta, max_gap, gaps, .. } => {
            gap_test(build(&common.source, seed)?.as_mut(), *alpha, *beta, *max_gap, *gaps)?
        }
        TestKind::BirthdaySpacings { bits, points, .. } => {
            birthday_spacings_test(build(&common.source, seed)?.as_mut(), *bits, *points)?
        }
        TestKind::HammingWeight { budget, .. } => {
            hamming_weight_screen(build(&common.source, seed)?.as_mut(), *budget)?
        }
    };
    let report = report.param("master_seed", seed);
    write_output(common.out.as_deref(), &report.to_json())?;
    Ok(common.no_fail_exit || !report.verdict.is_failure())
}

fn cmd_equidist(a: &EquidistArgs, seed: u64) -> CliResult {
    let g = make(a.algo, SeedSpec::new(seed))?;
    if !g.declared_linear() {
        return Err(CliError::Usage(format!(
            "`{}` is not F2-linear (its output passes through a nonlinear scrambler or cipher), \
             so equidistribution cannot be decided by rank; choose a linear engine",
            a.algo
        )));
    }
    let score = equidistribution_score_with_budget(g.as_ref(), a.budget)?;
    write_output(a.out.as_deref(), &score.to_json())?;
    Ok(true)
}

fn probe_positions(a: &EscapeArgs, state_bits: usize, seed: u64) -> Result<Vec<usize>, CliError> {
    if let Some(bits) = &a.bits {
        if let Some(&bad) = bits.iter().find(|&&b| b >= state_bits) {
            return Err(CliError::Usage(format!(
                "bit position {bad} outside the {state_bits}-bit state"
            )));
        }
        return Ok(bits.clone());
    }
    if a.positions >= state_bits {
        return Ok((0..state_bits).collect());
    }
    let mut sm = SeedSpec::new(seed).with_stream(u64::MAX).expander();
    let mut chosen = BTreeSet::new();
    while chosen.len() < a.positions {
        chosen.insert((sm.next() % state_bits as u64) as usize);
    }
    Ok(chosen.into_iter().collect())
}

fn median(mut v: Vec<u64>) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] as f64 + v[n / 2] as f64) / 2.0
    }
}

fn cmd_escape(a: &EscapeArgs, seed: u64) -> CliResult {
    let g = make(a.algo, SeedSpec::new(seed))?;
    let positions = probe_positions(a, g.state_bits(), seed)?;
    let g_ref: &dyn Generator = g.as_ref();
    let results = par::map_slice(&positions, |&b| {
        if a.decorrelation {
            decorrelation_time(g_ref, b)
        } else {
            escape_from_zeroland(g_ref, b)
        }
    });
    let results: Vec<EscapeResult> = results.into_iter().collect::<Result<_, _>>()?;
    let med = median(results.iter().map(|r| r.iterations).collect());
    let saturated = results.iter().filter(|r| r.saturated).count();
    let text = match a.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["bit_position", "escape_iterations", "saturated"])?;
            for (b, r) in positions.iter().zip(&results) {
                w.write_record([b.to_string(), r.iterations.to_string(), r.saturated.to_string()])?;
            }
            w.write_record(["median".to_string(), med.to_string(), (2 * saturated > results.len()).to_string()])?;
            String::from_utf8(w.into_inner().map_err(|e| io::Error::other(e.to_string()))?)
                .expect("csv is utf-8")
        }
        Format::Json => serde_json::to_string_pretty(&json!({
            "generator": a.algo.name(),
            "measure": if a.decorrelation { "decorrelation" } else { "escape" },
            "positions": positions.iter().zip(&results).map(|(b, r)| json!({
                "bit_position": b,
                "escape_iterations": r.iterations,
                "saturated": r.saturated,
            })).collect::<Vec<_>>(),
            "median": med,
            "saturated": saturated,
        }))
        .unwrap(),
    };
    match &a.out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(true)
}

fn bench_one(algo: Algorithm, seed: u64, warmup: u64, words: u64) -> Result<Value, CliError> {
    let mut g = make(algo, SeedSpec::new(seed))?;
    let mut checksum = 0u64;
    for _ in 0..warmup {
        checksum ^= g.next_word();
    }
    let start = Instant::now();
    for _ in 0..words {
        checksum = checksum.wrapping_add(std::hint::black_box(g.next_word()));
    }
    let elapsed = start.elapsed().as_nanos() as f64;
    Ok(json!({
        "generator": algo.name(),
        "word_width": g.word_width(),
        "ns_per_word": elapsed / words.max(1) as f64,
        "words": words,
        "checksum": format!("{checksum:016x}"),
    }))
}

fn cmd_bench(a: &BenchArgs, seed: u64) -> CliResult {
    if a.words == 0 {
        return Err(CliError::Usage("--words must be positive".into()));
    }
    let doc = match a.algo {
        Some(algo) => bench_one(algo, seed, a.warmup, a.words)?,
        None => Value::Array(
            Algorithm::ALL
                .iter()
                .map(|&algo| bench_one(algo, seed, a.warmup, a.words))
                .collect::<Result<_, _>>()?,
        ),
    };
    write_output(None, &serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(true)
}

