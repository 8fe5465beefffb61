use super::stats::{chi_square, multinomial_chi_square_mid_p};
use super::{FillMode, Histogram, MsbBits, Source, TestReport, Verdict, ALPHA};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::gf2::{char_poly, rank_category_probabilities, BitMatrix};
use crate::par;

/// Up to this many samples the rank test uses the exact multinomial law of
/// the chi-square statistic instead of its asymptotic distribution.
pub const EXACT_RANK_SAMPLES: u64 = 256;

/// Value drawn by inversion from `p` ∈ [0, 1): 2 on [0, 1/4), 5 on
/// [1/4, 3/4), 6 on [3/4, 1), so Pr(2) = 1/4, Pr(5) = 1/2, Pr(6) = 1/4.
///
/// Note: the original description of this experiment assigns 5 only to
/// [1/2, 3/4) and leaves [1/4, 1/2) unassigned, which contradicts its stated
/// Pr(5) = 1/2. The intervals above satisfy both the stated distribution and
/// the property that the parity equals the xor of the two leading
/// fractional bits of `p`.
pub fn inversion_value(p: f64) -> u8 {
    if p < 0.25 {
        2
    } else if p < 0.75 {
        5
    } else {
        6
    }
}

fn entry(g: &mut dyn Generator, mode: FillMode) -> bool {
    match mode {
        FillMode::RawBits => unreachable!(),
        FillMode::FloatThreshold => g.next_double() >= 0.5,
        FillMode::NonuniformInversion => inversion_value(g.next_double()) & 1 == 1,
    }
}

/// An `n`×`n` matrix filled from `g` in row-major order.
pub fn fill_matrix(g: &mut dyn Generator, n: usize, mode: FillMode) -> Result<BitMatrix> {
    if n == 0 {
        return Err(Error::Dimension("matrix side must be at least 1".into()));
    }
    let mut m = BitMatrix::zeros(n, n);
    match mode {
        FillMode::RawBits if n.is_multiple_of(64) => {
            for i in 0..n {
                for w in m.row_mut(i) {
                    *w = g.next_u64().reverse_bits();
                }
            }
        }
        FillMode::RawBits => {
            let mut bits = MsbBits::new(g);
            for i in 0..n {
                let mut j = 0;
                while j < n {
                    let k = (n - j).min(64);
                    let chunk = bits.take(k as u32).reverse_bits() >> (64 - k);
                    let row = m.row_mut(i);
                    let (wi, off) = (j / 64, j % 64);
                    row[wi] |= chunk << off;
                    if off != 0 && off + k > 64 {
                        row[wi + 1] |= chunk >> (64 - off);
                    }
                    j += k;
                }
            }
        }
        _ => {
            for i in 0..n {
                let row = m.row_mut(i);
                for j in 0..n {
                    if entry(g, mode) {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Odd-coefficient counts of the characteristic polynomials of `samples`
/// independently filled `n`×`n` matrices; sample `k` uses stream `k`.
pub fn charpoly_parity_samples(
    src: &dyn Source,
    n: usize,
    samples: u64,
    mode: FillMode,
) -> Result<Vec<u64>> {
    let counts = par::map_indexed(samples, |k| -> Result<u64> {
        let mut g = src.spawn(k)?;
        let m = fill_matrix(g.as_mut(), n, mode)?;
        Ok(char_poly(&m)?.count_nonzero_coeffs() as u64)
    });
    counts.into_iter().collect()
}

pub fn charpoly_parity_experiment(
    src: &dyn Source,
    n: usize,
    samples: u64,
    mode: FillMode,
) -> Result<Histogram> {
    Ok(Histogram::from_values(&charpoly_parity_samples(src, n, samples, mode)?))
}

/// Binary-rank test on `samples` matrices of side `side`.
///
/// Ranks are binned into {L, L−1, L−2, ≤ L−3}. When every observed rank is at
/// most the generator's state size and that size is below `side`, the
/// verdict is a deterministic failure: a linear generator with k state bits
/// cannot produce a matrix of rank above k.
pub fn binary_rank_test(
    src: &dyn Source,
    side: usize,
    samples: u64,
    mode: FillMode,
) -> Result<TestReport> {
    if samples == 0 {
        return Err(Error::Domain("binary-rank test needs at least one sample".into()));
    }
    let state_bits = src.spawn(0)?.state_bits();
    let ranks = par::map_indexed(samples, |k| -> Result<usize> {
        let mut g = src.spawn(k)?;
        Ok(fill_matrix(g.as_mut(), side, mode)?.rank())
    });
    let ranks: Vec<usize> = ranks.into_iter().collect::<Result<_>>()?;

    let mut observed = [0u64; 4];
    for &r in &ranks {
        observed[(side - r).min(3)] += 1;
    }
    let probs = rank_category_probabilities(side);
    let (stat, p) = if samples <= EXACT_RANK_SAMPLES {
        multinomial_chi_square_mid_p(&observed, &probs)
    } else {
        chi_square(&observed, &probs)
    };
    let max_rank = *ranks.iter().max().unwrap();
    let min_rank = *ranks.iter().min().unwrap();
    let bounded = state_bits < side && max_rank <= state_bits;
    let report = if bounded {
        TestReport::deterministic("binary-rank", src.name(), stat, Verdict::DeterministicFail, samples)
            .detail("chi_square_p", p)
    } else {
        TestReport::from_p_value("binary-rank", src.name(), stat, p, ALPHA, samples)
    };
    Ok(report
        .param("side", side)
        .param("samples", samples)
        .param("mode", mode.to_string())
        .param("exact", samples <= EXACT_RANK_SAMPLES)
        .detail("category_counts", observed.to_vec())
        .detail("category_probabilities", probs)
        .detail("min_rank", min_rank)
        .detail("max_rank", max_rank)
        .detail("state_bits", state_bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::battery::{FnSource, Seeded};
    use crate::generators::{Algorithm, Constant, SeedSpec};

    #[test]
    fn inversion_intervals_and_parity() {
        assert_eq!(inversion_value(0.3), 5);
        assert_eq!(inversion_value(0.8), 6);
        assert_eq!(inversion_value(0.1), 2);
        assert_eq!(inversion_value(0.25), 5);
        assert_eq!(inversion_value(0.75), 6);
        for k in 0..4096u64 {
            let p = k as f64 / 4096.0;
            let top2 = (p * 4.0) as u64;
            let xor = (top2 >> 1) ^ (top2 & 1);
            assert_eq!((inversion_value(p) & 1) as u64, xor);
        }
    }

    #[test]
    fn zero_generator_fills_zero() {
        let mut g = Constant::new(0, 64);
        for mode in [FillMode::RawBits, FillMode::FloatThreshold, FillMode::NonuniformInversion] {
            for n in [1, 64, 100] {
                let m = fill_matrix(&mut g, n, mode).unwrap();
                assert_eq!(m.count_ones(), 0);
            }
        }
    }

    #[test]
    fn raw_fill_general_side_matches_bitwise_reference() {
        let seed = SeedSpec::new(3);
        let mut a = crate::generators::make(Algorithm::SplitMix64, seed).unwrap();
        let mut b = a.clone();
        let n = 77;
        let m = fill_matrix(a.as_mut(), n, FillMode::RawBits).unwrap();
        let words: Vec<u64> = (0..(n * n).div_ceil(64)).map(|_| b.next_u64()).collect();
        for i in 0..n {
            for j in 0..n {
                let t = i * n + j;
                let bit = words[t / 64] >> (63 - t % 64) & 1 == 1;
                assert_eq!(m.get(i, j), bit, "({i},{j})");
            }
        }
    }

    #[test]
    fn float_mode_uses_top_bit() {
        let seed = SeedSpec::new(8);
        let mut a = crate::generators::make(Algorithm::Mt19937, seed).unwrap();
        let mut b = a.clone();
        let m = fill_matrix(a.as_mut(), 70, FillMode::FloatThreshold).unwrap();
        for i in 0..70 {
            for j in 0..70 {
                assert_eq!(m.get(i, j), b.next_u64() >> 63 == 1);
            }
        }
    }

    #[test]
    fn small_state_rank_is_bounded() {
        let src = Seeded::new(Algorithm::Xorshift128Engine, 1);
        let r = binary_rank_test(&src, 192, 5, FillMode::RawBits).unwrap();
        assert_eq!(r.verdict, Verdict::DeterministicFail);
        assert!(r.p_value.is_none());
        assert!(r.details["max_rank"].as_u64().unwrap() <= 128);
    }

    #[test]
    fn zero_source_fails_rank() {
        let src = FnSource::new("zero", |_| Box::new(Constant::new(0, 64)) as Box<dyn Generator>);
        let r = binary_rank_test(&src, 32, 20, FillMode::RawBits).unwrap();
        assert!(r.verdict.is_failure());
    }

    #[test]
    fn parity_counts_are_deterministic() {
        let src = Seeded::new(Algorithm::SplitMix64, 5);
        let a = charpoly_parity_samples(&src, 96, 8, FillMode::RawBits).unwrap();
        let b = charpoly_parity_samples(&src, 96, 8, FillMode::RawBits).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|&c| (1..=97).contains(&c)));
    }
}
