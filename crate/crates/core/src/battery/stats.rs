//! Goodness-of-fit helpers shared by the tests.

use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson};
use statrs::function::gamma::ln_gamma;

/// Pearson statistic and upper-tail p-value against `probs` (which should
/// sum to 1). Cells with zero probability and zero count are skipped.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> (f64, f64) {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let n = total as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        if p <= 0.0 {
            if o > 0 {
                return (f64::INFINITY, 0.0);
            }
            continue;
        }
        let e = n * p;
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    (stat, chi_square_sf(stat, cells.saturating_sub(1)))
}

/// Like [`chi_square`], after merging cells from both ends until every
/// merged cell has expected count at least `min_expected`.
pub fn chi_square_merged(observed: &[u64], probs: &[f64], min_expected: f64) -> (f64, f64) {
    let n: u64 = observed.iter().sum();
    let (o, p) = merge_sparse_cells(observed, probs, n as f64, min_expected);
    chi_square(&o, &p)
}

fn merge_sparse_cells(observed: &[u64], probs: &[f64], n: f64, min_expected: f64) -> (Vec<u64>, Vec<f64>) {
    let mut o = Vec::new();
    let mut p = Vec::new();
    let (mut acc_o, mut acc_p) = (0u64, 0.0);
    let len = observed.len();
    // left tail
    let mut i = 0;
    while i < len {
        acc_o += observed[i];
        acc_p += probs[i];
        i += 1;
        if acc_p * n >= min_expected {
            break;
        }
    }
    o.push(acc_o);
    p.push(acc_p);
    // right tail, collected backwards
    let mut tail_o = 0u64;
    let mut tail_p = 0.0;
    let mut j = len;
    while j > i {
        j -= 1;
        tail_o += observed[j];
        tail_p += probs[j];
        if tail_p * n >= min_expected {
            break;
        }
    }
    o.extend_from_slice(&observed[i..j]);
    p.extend_from_slice(&probs[i..j]);
    if tail_p > 0.0 || tail_o > 0 {
        if tail_p * n < min_expected && o.len() > 1 {
            *o.last_mut().unwrap() += tail_o;
            *p.last_mut().unwrap() += tail_p;
        } else {
            o.push(tail_o);
            p.push(tail_p);
        }
    }
    (o, p)
}

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
pub fn chi_square_sf(stat: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    if !stat.is_finite() {
        return 0.0;
    }
    if stat <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(df as f64).unwrap().sf(stat)
}

/// Two-sided mid-p value of an observed Poisson count:
/// 2 · min(P(X < k) + P(X = k)/2, P(X > k) + P(X = k)/2), capped at 1.
pub fn poisson_two_sided_mid_p(k: u64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let d = Poisson::new(lambda).unwrap();
    let pk = d.pmf(k);
    let below = if k == 0 { 0.0 } else { d.cdf(k - 1) };
    let above = d.sf(k);
    (2.0 * (below + 0.5 * pk).min(above + 0.5 * pk)).min(1.0)
}

/// Exact mid-p value of the Pearson statistic under the multinomial law:
/// P(X² > x) + P(X² = x)/2 over all count vectors with the observed total.
/// Enumeration cost grows as n^(k−1); intended for a handful of categories.
pub fn multinomial_chi_square_mid_p(observed: &[u64], probs: &[f64]) -> (f64, f64) {
    let n: u64 = observed.iter().sum();
    let (stat, _) = chi_square(observed, probs);
    let k = observed.len();
    let ln_p: Vec<f64> = probs.iter().map(|p| p.ln()).collect();
    let ln_fact_n = ln_gamma(n as f64 + 1.0);
    let tol = 1e-9 * stat.abs().max(1.0);
    let mut above = 0.0;
    let mut equal = 0.0;
    let mut counts = vec![0u64; k];
    enumerate(&mut counts, 0, n, &mut |c| {
        let x = chi_square(c, probs).0;
        let mut ln = ln_fact_n;
        for (i, &ci) in c.iter().enumerate() {
            if ci > 0 {
                ln += ci as f64 * ln_p[i];
            }
            ln -= ln_gamma(ci as f64 + 1.0);
        }
        let pr = ln.exp();
        if (x - stat).abs() <= tol {
            equal += pr;
        } else if x > stat {
            above += pr;
        }
    });
    (stat, (above + 0.5 * equal).clamp(0.0, 1.0))
}

fn enumerate(counts: &mut [u64], i: usize, remaining: u64, f: &mut impl FnMut(&[u64])) {
    if i + 1 == counts.len() {
        counts[i] = remaining;
        f(counts);
        return;
    }
    for c in 0..=remaining {
        counts[i] = c;
        enumerate(counts, i + 1, remaining - c, f);
    }
}

/// One-sample Kolmogorov–Smirnov test against Uniform(0, 1). Returns the
/// statistic D and its asymptotic p-value with Stephens' small-sample
/// correction.
pub fn ks_uniform(values: &[f64]) -> (f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let lo = x - i as f64 / n;
        let hi = (i + 1) as f64 / n - x;
        d = d.max(lo).max(hi);
    }
    let sn = n.sqrt();
    (d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d))
}

/// P(K > x) for the Kolmogorov distribution.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x < 0.27 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * x * x).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Binomial(n, 1/2) probabilities for 0..=n.
pub fn binomial_half(n: u32) -> Vec<f64> {
    let ln_half_n = n as f64 * std::f64::consts::LN_2;
    let ln_fact_n = ln_gamma(n as f64 + 1.0);
    (0..=n)
        .map(|k| {
            (ln_fact_n - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0) - ln_half_n).exp()
        })
        .collect()
}
