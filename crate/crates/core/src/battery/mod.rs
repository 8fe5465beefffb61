//! Statistical tests and matrix experiments, each producing a [`TestReport`].
//!
//! Multi-sample tests draw from a [`Source`]: sample `k` runs on the
//! generator for stream index `k`, so results do not depend on scheduling
//! or thread count.

mod escape;
mod matrix;
mod sequence;
pub mod stats;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::generators::{make, Algorithm, Generator, SeedSpec, Transform, TransformWrapper};

pub use escape::{
    decorrelation_time, escape_detector, escape_from_zeroland, stream_xor_identity, EscapeResult,
    ESCAPE_DELTA, ESCAPE_MAX_ITERATIONS, ESCAPE_WINDOW, ESCAPE_WINDOWS,
};
pub use matrix::{
    binary_rank_test, charpoly_parity_experiment, charpoly_parity_samples, fill_matrix,
    inversion_value, EXACT_RANK_SAMPLES,
};
pub use sequence::{
    birthday_spacings_test, collision_expected, collision_test, gap_test, hamming_weight_screen,
    linear_complexity_test, HAMMING_CHUNK_BYTES, HAMMING_THRESHOLD, LINEAR_COMPLEXITY_MARGIN,
};

/// Significance level for p-value verdicts.
pub const ALPHA: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    DeterministicFail,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        self != Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::DeterministicFail => "deterministic-fail",
        })
    }
}

/// Outcome of one battery run.
///
/// Either `p_value` is set and `verdict` follows from it, or `p_value` is
/// `None` and `verdict` was decided deterministically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test: String,
    pub generator: String,
    pub params: BTreeMap<String, Value>,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub verdict: Verdict,
    pub samples: u64,
    #[serde(default)]
    pub details: BTreeMap<String, Value>,
}

impl TestReport {
    /// Report scored by a p-value: fail iff `p < threshold`.
    pub fn from_p_value(
        test: &str,
        generator: String,
        statistic: f64,
        p_value: f64,
        threshold: f64,
        samples: u64,
    ) -> Self {
        let verdict = if p_value < threshold {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        Self::build(test, generator, statistic, Some(p_value), verdict, samples)
    }

    pub fn deterministic(
        test: &str,
        generator: String,
        statistic: f64,
        verdict: Verdict,
        samples: u64,
    ) -> Self {
        Self::build(test, generator, statistic, None, verdict, samples)
    }

    fn build(
        test: &str,
        generator: String,
        statistic: f64,
        p_value: Option<f64>,
        verdict: Verdict,
        samples: u64,
    ) -> Self {
        assert!(samples > 0, "a report needs at least one sample");
        TestReport {
            test: test.to_string(),
            generator,
            params: BTreeMap::new(),
            statistic: finite(statistic),
            p_value,
            verdict,
            samples,
            details: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Domain(format!("malformed report: {e}")))
    }
}

/// JSON has no infinities; clamp to the largest finite value.
fn finite(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(f64::MIN, f64::MAX)
    }
}

/// How generator output is turned into matrix entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FillMode {
    /// Output bits, row-major, each 64-bit word most significant bit first.
    RawBits,
    /// 0 if `next_double() < 1/2`, else 1.
    FloatThreshold,
    /// Parity of a three-valued variable obtained by inversion; see
    /// [`inversion_value`].
    NonuniformInversion,
}

impl FromStr for FillMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" | "raw-bits" => Ok(FillMode::RawBits),
            "float" | "float-threshold" => Ok(FillMode::FloatThreshold),
            "nonuniform" | "nonuniform-inversion" => Ok(FillMode::NonuniformInversion),
            _ => Err(Error::Domain(format!("unknown fill mode `{s}`"))),
        }
    }
}

impl fmt::Display for FillMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FillMode::RawBits => "raw",
            FillMode::FloatThreshold => "float",
            FillMode::NonuniformInversion => "nonuniform",
        })
    }
}

/// Distribution of integer sample values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
    pub mean: f64,
    /// Unbiased sample variance (0 for a single sample).
    pub variance: f64,
}

impl Histogram {
    pub fn from_values(values: &[u64]) -> Self {
        let mut counts = BTreeMap::new();
        for &v in values {
            *counts.entry(v).or_insert(0) += 1;
        }
        Self::from_counts(counts)
    }

    pub fn from_counts(counts: BTreeMap<u64, u64>) -> Self {
        let total: u64 = counts.values().sum();
        let n = total as f64;
        let mean = if total == 0 {
            0.0
        } else {
            counts.iter().map(|(&b, &c)| b as f64 * c as f64).sum::<f64>() / n
        };
        let variance = if total < 2 {
            0.0
        } else {
            counts
                .iter()
                .map(|(&b, &c)| c as f64 * (b as f64 - mean).powi(2))
                .sum::<f64>()
                / (n - 1.0)
        };
        Histogram {
            counts,
            total,
            mean,
            variance,
        }
    }

    /// CSV with header `bin,count`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin,count\n");
        for (b, c) in &self.counts {
            s.push_str(&format!("{b},{c}\n"));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |line: &str| Error::Domain(format!("malformed histogram line `{line}`"));
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("bin,count") {
            return Err(Error::Domain("histogram CSV must start with `bin,count`".into()));
        }
        let mut counts = BTreeMap::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (b, c) = line.split_once(',').ok_or_else(|| bad(line))?;
            let b: u64 = b.trim().parse().map_err(|_| bad(line))?;
            let c: u64 = c.trim().parse().map_err(|_| bad(line))?;
            *counts.entry(b).or_insert(0) += c;
        }
        Ok(Self::from_counts(counts))
    }
}

/// Supplies one independent generator per sample index.
pub trait Source: Sync {
    fn name(&self) -> String;
    fn spawn(&self, stream: u64) -> Result<Box<dyn Generator>>;
}

/// A roster algorithm seeded from a master seed, optionally transformed.
#[derive(Clone, Copy, Debug)]
pub struct Seeded {
    pub algorithm: Algorithm,
    pub master_seed: u64,
    pub transform: Transform,
}

impl Seeded {
    pub fn new(algorithm: Algorithm, master_seed: u64) -> Self {
        Seeded {
            algorithm,
            master_seed,
            transform: Transform::Identity,
        }
    }

    pub fn with_transform(self, transform: Transform) -> Self {
        Seeded { transform, ..self }
    }
}

impl Source for Seeded {
    fn name(&self) -> String {
        match self.transform {
            Transform::Identity => self.algorithm.name().to_string(),
            t => format!("{}+{t}", self.algorithm),
        }
    }

    fn spawn(&self, stream: u64) -> Result<Box<dyn Generator>> {
        let g = make(self.algorithm, SeedSpec::new(self.master_seed).with_stream(stream))?;
        Ok(match self.transform {
            Transform::Identity => g,
            t => Box::new(TransformWrapper::new(g, t)?),
        })
    }
}

/// Source backed by a closure.
pub struct FnSource<F> {
    name: String,
    f: F,
}

impl<F> FnSource<F>
where
    F: Fn(u64) -> Box<dyn Generator> + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnSource {
            name: name.into(),
            f,
        }
    }
}

impl<F> Source for FnSource<F>
where
    F: Fn(u64) -> Box<dyn Generator> + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn spawn(&self, stream: u64) -> Result<Box<dyn Generator>> {
        Ok((self.f)(stream))
    }
}

/// Reads a generator's 64-bit word stream as a bit stream, most significant
/// bit of each word first.
pub(crate) struct MsbBits<'a> {
    g: &'a mut dyn Generator,
    buf: u64,
    avail: u32,
}

impl<'a> MsbBits<'a> {
    pub(crate) fn new(g: &'a mut dyn Generator) -> Self {
        MsbBits { g, buf: 0, avail: 0 }
    }

    /// Next `n` bits (1..=64), first bit in the most significant position.
    pub(crate) fn take(&mut self, n: u32) -> u64 {
        debug_assert!((1..=64).contains(&n));
        if self.avail >= n {
            let v = self.buf >> (64 - n);
            self.buf = if n == 64 { 0 } else { self.buf << n };
            self.avail -= n;
            return v;
        }
        let have = self.avail;
        let hi = if have == 0 { 0 } else { self.buf >> (64 - have) };
        let w = self.g.next_u64();
        let need = n - have;
        let lo = w >> (64 - need);
        self.buf = if need == 64 { 0 } else { w << need };
        self.avail = 64 - need;
        if need == 64 {
            lo
        } else {
            (hi << need) | lo
        }
    }
}
