use crate::error::{Error, Result};

/// Probability that a uniformly random `n × n` matrix over GF(2) has rank `r`:
///
/// ```text
/// P(n, r) = 2^{-(n-r)^2} ∏_{i=0}^{r-1} (1 - 2^{i-n})^2 / (1 - 2^{i-r})
/// ```
///
/// Evaluated in log space; each factor is `ln(1 - 2^{-k})` via `ln_1p`.
pub fn rank_probability(n: usize, r: usize) -> Result<f64> {
    if r > n {
        return Err(Error::Domain(format!("rank {r} exceeds matrix side {n}")));
    }
    let mut log_p = -((n - r) as f64).powi(2) * std::f64::consts::LN_2;
    for i in 0..r {
        log_p += 2.0 * ln_one_minus_pow2(n - i) - ln_one_minus_pow2(r - i);
    }
    Ok(log_p.exp())
}

/// `ln(1 - 2^{-k})` for `k ≥ 1`.
fn ln_one_minus_pow2(k: usize) -> f64 {
    if k >= 1100 {
        return 0.0;
    }
    (-(2f64).powi(-(k as i32))).ln_1p()
}

/// Rank probabilities for the categories `{n, n-1, n-2, ≤ n-3}`; the last
/// entry is the complement of the first three so the vector sums to one.
pub fn rank_category_probabilities(n: usize) -> Vec<f64> {
    let mut probs: Vec<f64> = (0..3.min(n + 1))
        .map(|d| rank_probability(n, n - d).expect("d ≤ n"))
        .collect();
    if n >= 3 {
        let rest = 1.0 - probs.iter().sum::<f64>();
        probs.push(rest.max(0.0));
    }
    probs
}
