use super::stats::{binomial_half, chi_square, chi_square_merged, poisson_two_sided_mid_p};
use super::{MsbBits, TestReport, Verdict, ALPHA};
use crate::error::{Error, Result};
use crate::generators::{output_bit_sequence, Generator};
use crate::gf2::linear_complexity;

/// Linear-complexity verdict margin: fail when L < N/2 − margin.
pub const LINEAR_COMPLEXITY_MARGIN: usize = 32;

/// Bytes consumed between checkpoints of the Hamming-weight screen.
pub const HAMMING_CHUNK_BYTES: u64 = 1 << 20;

/// The Hamming-weight screen fails once its p-value drops below this.
pub const HAMMING_THRESHOLD: f64 = 1e-20;

const MAX_COLLISION_BITS: u32 = 40;
const MAX_COLLISION_BLOCKS: u64 = 1 << 28;

/// Berlekamp–Massey complexity of output bit `bit_index` over `n_bits`
/// consecutive words. Statistic is N/2 − L.
pub fn linear_complexity_test(g: &mut dyn Generator, bit_index: u32, n_bits: usize) -> Result<TestReport> {
    if n_bits < 64 {
        return Err(Error::Domain("linear-complexity test needs N ≥ 64".into()));
    }
    let name = g.name();
    let seq = output_bit_sequence(g, bit_index, n_bits)?;
    let l = linear_complexity(&seq);
    let half = n_bits as f64 / 2.0;
    let verdict = if l + LINEAR_COMPLEXITY_MARGIN < n_bits / 2 {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    Ok(
        TestReport::deterministic("linear-complexity", name, half - l as f64, verdict, n_bits as u64)
            .param("bit", bit_index)
            .param("n", n_bits)
            .param("margin", LINEAR_COMPLEXITY_MARGIN)
            .detail("linear_complexity", l),
    )
}

/// Expected number of collisions when `n` balls fall into `2^r` urns:
/// n − m + m(1 − 1/m)^n.
pub fn collision_expected(n: u64, r: u32) -> f64 {
    let m = (r as f64).exp2();
    let n = n as f64;
    n + m * (n * (-1.0 / m).ln_1p()).exp_m1()
}

/// Counts repeated `r`-bit blocks among `n_blocks` consecutive blocks of the
/// output bit stream.
pub fn collision_test(g: &mut dyn Generator, block_bits: u32, n_blocks: u64) -> Result<TestReport> {
    if block_bits == 0 {
        return Err(Error::Domain("block size must be positive".into()));
    }
    if block_bits > MAX_COLLISION_BITS || n_blocks > MAX_COLLISION_BLOCKS {
        return Err(Error::Resource(format!(
            "collision test limited to r ≤ {MAX_COLLISION_BITS} and {MAX_COLLISION_BLOCKS} blocks"
        )));
    }
    if n_blocks == 0 {
        return Err(Error::Domain("collision test needs at least one block".into()));
    }
    let name = g.name();
    let mut bits = MsbBits::new(g);
    let mut blocks: Vec<u64> = (0..n_blocks).map(|_| bits.take(block_bits)).collect();
    blocks.sort_unstable();
    let distinct = 1 + blocks.windows(2).filter(|w| w[0] != w[1]).count() as u64;
    let observed = n_blocks - distinct;
    let expected = collision_expected(n_blocks, block_bits);
    let p = poisson_two_sided_mid_p(observed, expected);
    let mut report = TestReport::from_p_value("collision", name, observed as f64, p, ALPHA, n_blocks);
    if observed == 0 && expected >= 20.0 {
        report.verdict = Verdict::Fail;
    }
    Ok(report
        .param("block_bits", block_bits)
        .param("n_blocks", n_blocks)
        .detail("observed", observed)
        .detail("expected", expected))
}

/// Knuth's gap test on `next_double` visits to [alpha, beta).
///
/// Gap lengths 0..max_gap−1 are counted individually and longer gaps share a
/// tail bucket. If fewer than `n_gaps` gaps complete within a generous draw
/// budget the sequence is reported as a degenerate failure.
pub fn gap_test(
    g: &mut dyn Generator,
    alpha: f64,
    beta: f64,
    max_gap: usize,
    n_gaps: u64,
) -> Result<TestReport> {
    if !(0.0 <= alpha && alpha < beta && beta <= 1.0) {
        return Err(Error::Domain(format!("need 0 ≤ alpha < beta ≤ 1, got [{alpha}, {beta})")));
    }
    if max_gap == 0 || n_gaps == 0 {
        return Err(Error::Domain("max_gap and n_gaps must be positive".into()));
    }
    let name = g.name();
    let p = beta - alpha;
    let budget = ((n_gaps as f64 / p) * 4.0 + 1e6).min(1e12) as u64;
    let mut counts = vec![0u64; max_gap + 1];
    let mut completed = 0u64;
    let mut draws = 0u64;
    let mut run = 0usize;
    while completed < n_gaps && draws < budget {
        let u = g.next_double();
        draws += 1;
        if alpha <= u && u < beta {
            counts[run.min(max_gap)] += 1;
            completed += 1;
            run = 0;
        } else {
            run += 1;
        }
    }
    let report = if completed < n_gaps {
        TestReport::deterministic("gap", name, completed as f64, Verdict::Fail, draws)
            .detail("degenerate", true)
    } else {
        let q = 1.0 - p;
        let mut probs: Vec<f64> = (0..max_gap).map(|k| p * q.powi(k as i32)).collect();
        probs.push(q.powi(max_gap as i32));
        let (stat, pv) = chi_square(&counts, &probs);
        TestReport::from_p_value("gap", name, stat, pv, ALPHA, completed)
            .detail("draws", draws)
    };
    Ok(report
        .param("alpha", alpha)
        .param("beta", beta)
        .param("max_gap", max_gap)
        .param("n_gaps", n_gaps)
        .detail("counts", counts))
}

/// Marsaglia's birthday-spacings test with `n_points` values of `bits` bits
/// (the top bits of consecutive 64-bit words).
///
/// The sorted values give n − 1 spacings; the number of repeated spacings
/// is compared to Poisson(λ = n³ / 2^(d+2)). The approximation is only
/// accurate for n² ≪ 2^d; at n² ≈ 2^d the mean is noticeably below λ.
pub fn birthday_spacings_test(g: &mut dyn Generator, bits: u32, n_points: u64) -> Result<TestReport> {
    if bits == 0 || bits > 64 {
        return Err(Error::Domain(format!("value width {bits} outside 1..=64")));
    }
    let lambda = (n_points as f64).powi(3) / ((bits + 2) as f64).exp2();
    if !(1.0..=1e4).contains(&lambda) {
        return Err(Error::Domain(format!(
            "λ = n³/2^(d+2) = {lambda} must lie in [1, 1e4]"
        )));
    }
    let name = g.name();
    let mut v: Vec<u64> = (0..n_points).map(|_| g.next_u64() >> (64 - bits)).collect();
    v.sort_unstable();
    let mut spacings: Vec<u64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    spacings.sort_unstable();
    let duplicates = spacings.windows(2).filter(|w| w[0] == w[1]).count() as u64;
    let p = poisson_two_sided_mid_p(duplicates, lambda);
    Ok(
        TestReport::from_p_value("birthday-spacings", name, duplicates as f64, p, ALPHA, n_points)
            .param("bits", bits)
            .param("n_points", n_points)
            .detail("lambda", lambda)
            .detail("duplicates", duplicates),
    )
}

fn weight_bucket(w: u32, lo: f64, hi: f64) -> usize {
    let w = w as f64;
    if w < lo {
        0
    } else if w > hi {
        2
    } else {
        1
    }
}

/// Screen for Hamming-weight dependencies.
///
/// Two statistics on cumulative counts: a chi-square of word weights against
/// Binomial(w, 1/2), and a chi-square of the joint weight category (below
/// μ − σ, within, above μ + σ) of non-overlapping consecutive word pairs.
/// After every 2^20-byte chunk (the last one may be shorter) the Bonferroni-combined p-value is checked and
/// the screen stops with a failure once it falls below 1e-20.
pub fn hamming_weight_screen(g: &mut dyn Generator, budget_bytes: u64) -> Result<TestReport> {
    if budget_bytes < HAMMING_CHUNK_BYTES {
        return Err(Error::Domain("Hamming-weight screen needs a budget of at least 2^20 bytes".into()));
    }
    let name = g.name();
    let w = g.word_width();
    let word_bytes = w as f64 / 8.0;
    let probs = binomial_half(w);
    let mu = w as f64 / 2.0;
    let sigma = (w as f64).sqrt() / 2.0;
    let (lo, hi) = (mu - sigma, mu + sigma);
    let mut cat_p = [0.0f64; 3];
    for (k, &pk) in probs.iter().enumerate() {
        cat_p[weight_bucket(k as u32, lo, hi)] += pk;
    }
    let pair_p: Vec<f64> = (0..9).map(|c| cat_p[c / 3] * cat_p[c % 3]).collect();

    let mut weights = vec![0u64; w as usize + 1];
    let mut pairs = vec![0u64; 9];
    let mut consumed = 0u64;
    let mut result = (0.0, 1.0, 1.0, 1.0);
    while consumed < budget_bytes {
        let chunk = HAMMING_CHUNK_BYTES.min(budget_bytes - consumed);
        let words = ((chunk as f64 / word_bytes) as u64) & !1;
        if words == 0 {
            break;
        }
        for _ in 0..words / 2 {
            let a = g.next_word().count_ones();
            let b = g.next_word().count_ones();
            weights[a as usize] += 1;
            weights[b as usize] += 1;
            pairs[3 * weight_bucket(a, lo, hi) + weight_bucket(b, lo, hi)] += 1;
        }
        consumed += (words as f64 * word_bytes) as u64;
        let (s1, p1) = chi_square_merged(&weights, &probs, 5.0);
        let (s2, p2) = chi_square(&pairs, &pair_p);
        let combined = (2.0 * p1.min(p2)).min(1.0);
        result = (s1.max(s2), combined, p1, p2);
        if combined < HAMMING_THRESHOLD {
            break;
        }
    }
    let (stat, p, p1, p2) = result;
    let n_words: u64 = weights.iter().sum();
    Ok(
        TestReport::from_p_value("hamming-weight", name, stat, p, HAMMING_THRESHOLD, n_words)
            .param("budget_bytes", budget_bytes)
            .param("chunk_bytes", HAMMING_CHUNK_BYTES)
            .detail("bytes_consumed", consumed)
            .detail("weight_p", p1)
            .detail("pair_p", p2)
            .detail("pair_counts", pairs),
    )
}
