use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prngaudit::battery::FillMode;
use prngaudit::generators::{Algorithm, Transform, DEFAULT_MASTER_SEED};

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: prngaudit::Error| {
        let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
        format!("{e}; known: {}", names.join(", "))
    })
}

fn parse_transform(s: &str) -> Result<Transform, String> {
    s.parse().map_err(|e: prngaudit::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<FillMode, String> {
    s.parse().map_err(|e: prngaudit::Error| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "prngaudit", version, about = "Audit PRNGs for GF(2)-linear artifacts")]
pub struct Cli {
    /// Master seed; every generator instance derives its state from it.
    #[arg(long, global = true, default_value_t = DEFAULT_MASTER_SEED)]
    pub seed: u64,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print the resolved configuration as JSON to stderr before running.
    #[arg(long, global = true)]
    pub print_config: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write raw output bytes (little-endian 64-bit words) to stdout.
    Gen(GenArgs),
    /// Odd-coefficient counts of characteristic polynomials of filled matrices.
    Figures(FiguresArgs),
    /// Run one battery test and print its JSON report.
    Test(TestArgs),
    /// Equidistribution score of a linear generator.
    Equidist(EquidistArgs),
    /// Escape-from-zeroland (or decorrelation) times for single-bit states.
    Escape(EscapeArgs),
    /// Output throughput in nanoseconds per word.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    #[arg(long, value_parser = parse_algo)]
    pub algo: Algorithm,
    /// identity, bit-reverse or low-K.
    #[arg(long, value_parser = parse_transform, default_value = "identity")]
    pub transform: Transform,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub bytes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct FiguresArgs {
    /// raw, float or nonuniform.
    #[arg(long, value_parser = parse_mode, default_value = "raw")]
    pub mode: FillMode,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Comma-separated generator names.
    #[arg(
        long,
        value_delimiter = ',',
        value_parser = parse_algo,
        default_value = "aes128ctr,xoroshiro128plusplus,xorshift128plus,well512a"
    )]
    pub algos: Vec<Algorithm>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TestArgs {
    #[command(subcommand)]
    pub kind: TestKind,
}

#[derive(Args, Debug, Clone)]
pub struct TestCommon {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit 0 even when the test fails.
    #[arg(long)]
    pub no_fail_exit: bool,
}

#[derive(Subcommand, Debug)]
pub enum TestKind {
    BinaryRank {
        #[command(flatten)]
        common: TestCommon,
        #[arg(long, default_value_t = 1024)]
        side: usize,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, value_parser = parse_mode, default_value = "raw")]
        mode: FillMode,
    },
    LinearComplexity {
        #[command(flatten)]
        common: TestCommon,
        #[arg(long, default_value_t = 0)]
        bit: u32,
        #[arg(long, default_value_t = 2048)]
        n: usize,
    },
    Collision {
        #[command(flatten)]
        common: TestCommon,
        #[arg(long, default_value_t = 16)]
        block_bits: u32,
        #[arg(long, default_value_t = 4096)]
        blocks: u64,
    },
    Gap {
        #[command(flatten)]
        common: TestCommon,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value_t = 16)]
        max_gap: usize,
        #[arg(long, default_value_t = 1_000_000)]
        gaps: u64,
    },
    BirthdaySpacings {
        #[command(flatten)]
        common: TestCommon,
        #[arg(long, default_value_t = 30)]
        bits: u32,
        #[arg(long, default_value_t = 4096)]
        points: u64,
    },
    HammingWeight {
        #[command(flatten)]
        common: TestCommon,
        #[arg(long, default_value_t = 1 << 30)]
        budget: u64,
    },
}

impl TestKind {
    pub fn common(&self) -> &TestCommon {
        match self {
            TestKind::BinaryRank { common, .. }
            | TestKind::LinearComplexity { common, .. }
            | TestKind::Collision { common, .. }
            | TestKind::Gap { common, .. }
            | TestKind::BirthdaySpacings { common, .. }
            | TestKind::HammingWeight { common, .. } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TestKind::BinaryRank { .. } => "binary-rank",
            TestKind::LinearComplexity { .. } => "linear-complexity",
            TestKind::Collision { .. } => "collision",
            TestKind::Gap { .. } => "gap",
            TestKind::BirthdaySpacings { .. } => "birthday-spacings",
            TestKind::HammingWeight { .. } => "hamming-weight",
        }
    }
}

#[derive(Args, Debug)]
pub struct EquidistArgs {
    #[arg(long, value_parser = parse_algo)]
    pub algo: Algorithm,
    /// Largest state size analysed.
    #[arg(long, default_value_t = prngaudit::equidist::DEFAULT_STATE_BUDGET)]
    pub budget: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EscapeArgs {
    #[arg(long, value_parser = parse_algo)]
    pub algo: Algorithm,
    /// Number of distinct pseudorandom bit positions to probe.
    #[arg(long, default_value_t = 100, conflicts_with = "bits")]
    pub positions: usize,
    /// Explicit comma-separated bit positions.
    #[arg(long, value_delimiter = ',')]
    pub bits: Option<Vec<usize>>,
    /// Measure decorrelation of S and S ⊕ e_i instead of escape from e_i.
    #[arg(long)]
    pub decorrelation: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Generator to time; all roster generators when omitted.
    #[arg(long, value_parser = parse_algo)]
    pub algo: Option<Algorithm>,
    #[arg(long, default_value_t = 1_000_000)]
    pub warmup: u64,
    #[arg(long, default_value_t = 20_000_000)]
    pub words: u64,
}
