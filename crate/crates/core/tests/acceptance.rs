//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fail. Pass substrings as arguments to run a subset,
//! e.g. `cargo test --test acceptance -- equidist`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use prngaudit::battery::{
    binary_rank_test, birthday_spacings_test, charpoly_parity_samples, collision_test,
    decorrelation_time, escape_from_zeroland, fill_matrix, gap_test, hamming_weight_screen,
    linear_complexity_test, stream_xor_identity, FillMode, Seeded, TestReport, Verdict,
    HAMMING_CHUNK_BYTES,
};
use prngaudit::equidist::{allowable_pair_count, equidistribution_score, EquidistQuery};
use prngaudit::generators::{make, Algorithm, Generator, SeedSpec, DEFAULT_MASTER_SEED};
use prngaudit::gf2::{char_poly, BitVec};

/// Smallest budget within which lfsr127 (default seed) must fail the
/// Hamming-weight screen. Measured failure point: 643_825_664 bytes.
const LFSR127_HAMMING_BUDGET: u64 = 1 << 30;

const CALIBRATION_RUNS: u64 = 200;
const CALIBRATION_LEVEL: f64 = 1e-3;

const MODES: [FillMode; 3] = [FillMode::RawBits, FillMode::FloatThreshold, FillMode::NonuniformInversion];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome { pass, summary: summary.into() }
}

fn seeded(algo: Algorithm) -> Box<dyn Generator> {
    make(algo, SeedSpec::new(DEFAULT_MASTER_SEED)).unwrap()
}

fn detail_u64(r: &TestReport, key: &str) -> u64 {
    r.details[key].as_u64().unwrap_or_else(|| panic!("detail {key} missing"))
}

fn detail_f64(r: &TestReport, key: &str) -> f64 {
    r.details[key].as_f64().unwrap_or_else(|| panic!("detail {key} missing"))
}

fn mean(v: &[u64]) -> f64 {
    v.iter().sum::<u64>() as f64 / v.len() as f64
}

fn reference_vectors() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, mut g) in common::reference_generators() {
        let n = common::fixture(name).len();
        let bad = common::first_mismatch(name, g.as_mut());
        pass &= n >= 1000 && bad.is_none();
        parts.push(match bad {
            None => format!("{name} {n} words"),
            Some(i) => format!("{name} mismatch at word {i}"),
        });
    }
    outcome(pass, parts.join(", "))
}

/// Means over 1000 samples of n = 1024 for each figure generator.
fn figure(mode: FillMode) -> (bool, String) {
    let bands = [
        (Algorithm::Well512a, 243.0, 273.0),
        (Algorithm::Aes128Ctr, 504.0, 521.0),
        (Algorithm::Xoroshiro128PlusPlus, 504.0, 521.0),
        (Algorithm::Xorshift128Plus, 504.0, 521.0),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (algo, lo, hi) in bands {
        let values = charpoly_parity_samples(&Seeded::new(algo, DEFAULT_MASTER_SEED), 1024, 1000, mode).unwrap();
        let m = mean(&values);
        let ok = (lo..=hi).contains(&m);
        pass &= ok;
        parts.push(format!("{algo} {m:.2}{}", if ok { "" } else { " (out of band)" }));
    }
    (pass, format!("{mode}: {}", parts.join(", ")))
}

fn figure_1() -> Outcome {
    let (pass, summary) = figure(FillMode::RawBits);
    outcome(pass, summary)
}

fn figures_2_3() -> Outcome {
    let (a, sa) = figure(FillMode::FloatThreshold);
    let (b, sb) = figure(FillMode::NonuniformInversion);
    outcome(a && b, format!("{sa}; {sb}"))
}

fn deterministic_bounds() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for mode in MODES {
        let mut g = seeded(Algorithm::Well512a);
        let (mut max_rank, mut max_terms, mut exceptions) = (0, 0, 0);
        for _ in 0..100 {
            let m = fill_matrix(g.as_mut(), 1024, mode).unwrap();
            let rank = m.rank();
            let terms = char_poly(&m).unwrap().count_nonzero_coeffs();
            exceptions += usize::from(rank > 512 || terms > 513);
            max_rank = max_rank.max(rank);
            max_terms = max_terms.max(terms);
        }
        pass &= exceptions == 0;
        parts.push(format!("{mode}: max rank {max_rank}, max terms {max_terms}, {exceptions} exceptions"));
    }
    outcome(pass, parts.join("; "))
}

fn binary_rank() -> Outcome {
    let mt = binary_rank_test(&Seeded::new(Algorithm::Mt19937, DEFAULT_MASTER_SEED), 20480, 1, FillMode::RawBits)
        .unwrap();
    let mt_rank = detail_u64(&mt, "max_rank");
    let aes = binary_rank_test(&Seeded::new(Algorithm::Aes128Ctr, DEFAULT_MASTER_SEED), 1024, 100, FillMode::RawBits)
        .unwrap();
    let p = aes.p_value.unwrap();
    let pass = mt_rank <= 19937
        && mt.verdict == Verdict::DeterministicFail
        && (1e-4..=1.0 - 1e-4).contains(&p)
        && aes.verdict == Verdict::Pass;
    outcome(pass, format!("mt19937 L=20480 rank {mt_rank} ({:?}); aes128ctr 1024x100 p = {p:.4}", mt.verdict))
}

fn linear_complexity() -> Outcome {
    let mt = linear_complexity_test(seeded(Algorithm::Mt19937).as_mut(), 0, 40000).unwrap();
    let xs = linear_complexity_test(seeded(Algorithm::Xorshift128Plus).as_mut(), 0, 2048).unwrap();
    let xo = linear_complexity_test(seeded(Algorithm::Xoroshiro128PlusPlus).as_mut(), 0, 2048).unwrap();
    let (l_mt, l_xs, l_xo) = (
        detail_u64(&mt, "linear_complexity"),
        detail_u64(&xs, "linear_complexity"),
        detail_u64(&xo, "linear_complexity"),
    );
    let pass = l_mt <= 19937
        && mt.verdict.is_failure()
        && l_xs <= 128
        && xs.verdict.is_failure()
        && l_xo.abs_diff(1024) <= 32
        && xo.verdict == Verdict::Pass;
    outcome(
        pass,
        format!("mt19937 N=40000 L={l_mt}; xorshift128plus N=2048 L={l_xs}; xoroshiro128plusplus N=2048 L={l_xo}"),
    )
}

/// (ℓ, d)-equidistribution of toy8 by counting ℓd-bit output tuples over all
/// 255 nonzero states.
fn toy8_enumerated(ell: u32, d: usize) -> bool {
    let g = seeded(Algorithm::Toy8);
    let k = 8 - ell as usize * d;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for s in 1u64..256 {
        let mut h = g.box_clone();
        h.set_state(&BitVec::from_words(vec![s], 8)).unwrap();
        let tuple = (0..d).fold(0u64, |acc, _| (acc << ell) | (h.next_word() >> (8 - ell)));
        *counts.entry(tuple).or_default() += 1;
    }
    (0..1u64 << (ell as usize * d)).all(|t| {
        let want = if t == 0 { (1 << k) - 1 } else { 1 << k };
        counts.get(&t).copied().unwrap_or(0) == want
    })
}

fn equidistribution() -> Outcome {
    let allowable = allowable_pair_count(32, 1024);
    let well = equidistribution_score(seeded(Algorithm::Well1024a).as_ref()).unwrap();
    let toy = equidistribution_score(seeded(Algorithm::Toy8).as_ref()).unwrap();
    let mut pairs = 0;
    let mut disagreements = 0;
    for ell in 1..=8u32 {
        for d in 1..=8 / ell as usize {
            pairs += 1;
            let failing = toy.is_failing(EquidistQuery::new(ell, d));
            disagreements += usize::from(failing == toy8_enumerated(ell, d));
        }
    }
    let pass = allowable == 4143
        && well.allowable == 4143
        && well.failing == 0
        && disagreements == 0
        && pairs as u64 == toy.allowable;
    outcome(
        pass,
        format!(
            "allowable(32, 1024) = {allowable}; well1024a {}/{}; toy8 {disagreements} disagreements over {pairs} pairs ({} failing)",
            well.failing, well.allowable, toy.failing
        ),
    )
}

fn collision() -> Outcome {
    let (n, m) = (4096.0f64, 65536.0f64);
    let oracle = n - m + m * (1.0 - 1.0 / m).powf(n);
    let toy = collision_test(seeded(Algorithm::Toy16).as_mut(), 16, 4096).unwrap();
    let aes = collision_test(seeded(Algorithm::Aes128Ctr).as_mut(), 16, 4096).unwrap();
    let expected = detail_f64(&toy, "expected");
    let (toy_obs, aes_obs) = (detail_u64(&toy, "observed"), detail_u64(&aes, "observed"));
    let sigma = expected.sqrt();
    let pass = (expected - oracle).abs() < 1e-6
        && toy_obs == 0
        && toy.verdict.is_failure()
        && (aes_obs as f64 - expected).abs() <= 4.0 * sigma;
    outcome(
        pass,
        format!(
            "expected {expected:.3}; toy16 observed {toy_obs} ({:?}); aes128ctr observed {aes_obs} ({:+.2} sigma)",
            toy.verdict,
            (aes_obs as f64 - expected) / sigma
        ),
    )
}

fn probe_positions(state_bits: usize, count: usize) -> Vec<usize> {
    let mut sm = SeedSpec::new(DEFAULT_MASTER_SEED).with_stream(u64::MAX).expander();
    let mut chosen = BTreeSet::new();
    while chosen.len() < count.min(state_bits) {
        chosen.insert((sm.next() % state_bits as u64) as usize);
    }
    chosen.into_iter().collect()
}

fn median_escape(algo: Algorithm) -> f64 {
    let g = seeded(algo);
    let mut t: Vec<u64> = probe_positions(g.state_bits(), 100)
        .into_iter()
        .map(|b| escape_from_zeroland(g.as_ref(), b).unwrap().iterations)
        .collect();
    t.sort_unstable();
    (t[49] + t[50]) as f64 / 2.0
}

fn escape() -> Outcome {
    let mt = median_escape(Algorithm::Mt19937);
    let well = median_escape(Algorithm::Well1024a);
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for &algo in Algorithm::ALL {
        let g = seeded(algo);
        if !g.declared_linear() {
            continue;
        }
        let n = g.state_bits();
        for b in [0, n / 2, n - 1] {
            checked += 1;
            let same = escape_from_zeroland(g.as_ref(), b).unwrap() == decorrelation_time(g.as_ref(), b).unwrap();
            if !same || !stream_xor_identity(g.as_ref(), b, 10_000).unwrap() {
                mismatches.push(format!("{algo}@{b}"));
            }
        }
    }
    let pass = mt > 1e5 && well < mt / 10.0 && mismatches.is_empty();
    outcome(
        pass,
        format!(
            "median escape mt19937 {mt}, well1024a {well}; {checked} linear (generator, bit) pairs, mismatches: [{}]",
            mismatches.join(", ")
        ),
    )
}

/// Two-sided asymptotic Kolmogorov tail with Stephens' finite-n correction.
fn ks_p_value(p_values: &[f64]) -> (f64, f64) {
    let mut u = p_values.to_vec();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    let d = u
        .iter()
        .enumerate()
        .map(|(i, &x)| ((i + 1) as f64 / n - x).max(x - i as f64 / n))
        .fold(0.0, f64::max);
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    let tail: f64 = (1..=100)
        .map(|k| {
            let k = k as f64;
            2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp()
        })
        .sum();
    (d, tail.clamp(0.0, 1.0))
}

fn calibration() -> Outcome {
    type Run = fn(u64) -> f64;
    let tests: [(&str, Run); 4] = [
        ("binary-rank", |r| {
            let src = Seeded::new(Algorithm::Aes128Ctr, DEFAULT_MASTER_SEED + r);
            binary_rank_test(&src, 64, 256, FillMode::RawBits).unwrap().p_value.unwrap()
        }),
        ("gap", |r| {
            let mut g = make(Algorithm::Aes128Ctr, SeedSpec::new(DEFAULT_MASTER_SEED).with_stream(r)).unwrap();
            gap_test(g.as_mut(), 0.0, 0.5, 16, 20_000).unwrap().p_value.unwrap()
        }),
        ("collision", |r| {
            let mut g = make(Algorithm::Aes128Ctr, SeedSpec::new(DEFAULT_MASTER_SEED).with_stream(r)).unwrap();
            collision_test(g.as_mut(), 24, 1 << 16).unwrap().p_value.unwrap()
        }),
        ("birthday-spacings", |r| {
            let mut g = make(Algorithm::Aes128Ctr, SeedSpec::new(DEFAULT_MASTER_SEED).with_stream(r)).unwrap();
            birthday_spacings_test(g.as_mut(), 48, 1 << 20).unwrap().p_value.unwrap()
        }),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, run) in tests {
        let p: Vec<f64> = (0..CALIBRATION_RUNS).map(run).collect();
        let (d, ks_p) = ks_p_value(&p);
        pass &= ks_p >= CALIBRATION_LEVEL;
        parts.push(format!("{name} D={d:.4} p={ks_p:.3}"));
    }
    outcome(pass, format!("aes128ctr, {CALIBRATION_RUNS} runs: {}", parts.join(", ")))
}

fn hamming_weight() -> Outcome {
    let aes = hamming_weight_screen(seeded(Algorithm::Aes128Ctr).as_mut(), 1_000_000_000).unwrap();
    let zero = hamming_weight_screen(seeded(Algorithm::Zero).as_mut(), 1 << 24).unwrap();
    let lfsr = hamming_weight_screen(seeded(Algorithm::Lfsr127).as_mut(), LFSR127_HAMMING_BUDGET).unwrap();
    let aes_bytes = detail_u64(&aes, "bytes_consumed");
    let zero_bytes = detail_u64(&zero, "bytes_consumed");
    let lfsr_bytes = detail_u64(&lfsr, "bytes_consumed");
    let pass = aes.verdict == Verdict::Pass
        && aes_bytes == 1_000_000_000
        && zero.verdict.is_failure()
        && zero_bytes == HAMMING_CHUNK_BYTES
        && lfsr.verdict.is_failure()
        && lfsr_bytes <= LFSR127_HAMMING_BUDGET;
    outcome(
        pass,
        format!(
            "aes128ctr {aes_bytes} bytes p = {:.3} ({:?}); zero fails after {zero_bytes} bytes; lfsr127 fails after {lfsr_bytes} of {LFSR127_HAMMING_BUDGET} bytes",
            aes.p_value.unwrap(),
            aes.verdict
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("reference vectors", reference_vectors),
        ("figure 1, raw fill", figure_1),
        ("figures 2-3, float and nonuniform fill", figures_2_3),
        ("deterministic linearity bounds", deterministic_bounds),
        ("binary rank", binary_rank),
        ("linear complexity", linear_complexity),
        ("equidistribution", equidistribution),
        ("collision", collision),
        ("escape and decorrelation", escape),
        ("calibration [slow]", calibration),
        ("hamming-weight screen", hamming_weight),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                outcome(false, format!("panicked: {msg}"))
            });
        failed += usize::from(!result.pass);
        println!(
            "{} {name}: {} [{:.1}s]",
            if result.pass { "PASS" } else { "FAIL" },
            result.summary,
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
