//! Berlekamp–Massey over GF(2) with word-packed connection polynomials.

use super::bitvec::{words_for, BitSeq};
use super::poly::{xor_shifted, Gf2Poly};

/// Result of running Berlekamp–Massey on a bit sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lfsr {
    /// Connection polynomial `C(x) = 1 + c_1 x + … + c_L x^L`.
    pub connection: Gf2Poly,
    /// Linear complexity `L`.
    pub complexity: usize,
}

impl Lfsr {
    /// Minimal polynomial `x^L · C(1/x)`, monic of degree exactly `L`.
    /// The zero polynomial when `L = 0`.
    pub fn minimal_poly(&self) -> Gf2Poly {
        if self.complexity == 0 {
            return Gf2Poly::zero();
        }
        let l = self.complexity;
        let exps: Vec<usize> = self
            .connection
            .exponents()
            .into_iter()
            .filter(|&e| e <= l)
            .map(|e| l - e)
            .collect();
        Gf2Poly::from_exponents(&exps)
    }
}

/// Minimal polynomial of `s`: monic of degree equal to the linear complexity,
/// so that `s_{n+L} = Σ_{i<L} p_i s_{n+i}` holds across the sequence.
/// Returns the zero polynomial for sequences of complexity 0.
pub fn berlekamp_massey(s: &BitSeq) -> Gf2Poly {
    lfsr_synthesis(s).minimal_poly()
}

pub fn linear_complexity(s: &BitSeq) -> usize {
    lfsr_synthesis(s).complexity
}

pub fn lfsr_synthesis(s: &BitSeq) -> Lfsr {
    let n = s.len();
    // reversed[j] = s[n-1-j], so the window s_t, s_{t-1}, …, s_{t-L}
    // is the contiguous run reversed[n-1-t ..= n-1-t+L]
    let mut reversed_words = vec![0u64; words_for(n) + 1];
    for (j, bit) in (0..n).rev().map(|i| s.get(i)).enumerate() {
        if bit {
            reversed_words[j / 64] |= 1u64 << (j % 64);
        }
    }

    let mut c: Vec<u64> = vec![1];
    let mut b: Vec<u64> = vec![1];
    let mut l = 0usize;
    let mut m = 1usize;
    for t in 0..n {
        let base = n - 1 - t;
        if discrepancy(&c, l, &reversed_words, base) {
            if 2 * l <= t {
                let prev = c.clone();
                xor_shifted(&mut c, &b, m);
                l = t + 1 - l;
                b = prev;
                m = 1;
            } else {
                xor_shifted(&mut c, &b, m);
                m += 1;
            }
        } else {
            m += 1;
        }
    }
    Lfsr {
        connection: Gf2Poly::from_words(c),
        complexity: l,
    }
}

/// Σ_{i=0..=l} c_i · reversed[base + i] over GF(2).
fn discrepancy(c: &[u64], l: usize, reversed: &[u64], base: usize) -> bool {
    let words = words_for(l + 1).min(c.len());
    let bw = base / 64;
    let off = base % 64;
    let mut acc = 0u64;
    for (k, &ck) in c.iter().enumerate().take(words) {
        let lo = reversed.get(bw + k).copied().unwrap_or(0);
        let window = if off == 0 {
            lo
        } else {
            let hi = reversed.get(bw + k + 1).copied().unwrap_or(0);
            (lo >> off) | (hi << (64 - off))
        };
        acc ^= ck & window;
    }
    // c has no terms above x^l, so no masking is needed
    acc.count_ones() & 1 == 1
}

/// Checks that `s` satisfies the recurrence encoded by a minimal polynomial.
pub fn satisfies_recurrence(minimal: &Gf2Poly, s: &BitSeq) -> bool {
    if minimal.is_zero() {
        return s.is_zero();
    }
    let l = minimal.degree();
    let taps: Vec<usize> = minimal.exponents().into_iter().filter(|&e| e < l).collect();
    (0..s.len().saturating_sub(l)).all(|n| {
        let predicted = taps.iter().fold(false, |acc, &e| acc ^ s.get(n + e));
        predicted == s.get(n + l)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitVec;

    fn seq(bits: &[u8]) -> BitSeq {
        BitVec::from_bits(bits.iter().map(|&b| b == 1))
    }

    #[test]
    fn all_zero_sequence() {
        let s = BitVec::zeros(10);
        let r = lfsr_synthesis(&s);
        assert_eq!(r.complexity, 0);
        assert!(berlekamp_massey(&s).is_zero());
    }

    #[test]
    fn recovers_degree_three_lfsr() {
        // s_{n+3} = s_{n+1} + s_n, minimal polynomial x^3 + x + 1
        let mut bits = vec![1u8, 0, 0];
        while bits.len() < 16 {
            let n = bits.len() - 3;
            bits.push(bits[n + 1] ^ bits[n]);
        }
        let s = seq(&bits);
        assert_eq!(berlekamp_massey(&s), Gf2Poly::from_exponents(&[3, 1, 0]));
        assert_eq!(linear_complexity(&s), 3);
    }

    #[test]
    fn alternating_sequence_has_complexity_two() {
        let s = seq(&[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0]);
        assert_eq!(linear_complexity(&s), 2);
        assert!(satisfies_recurrence(&berlekamp_massey(&s), &s));
    }

    #[test]
    fn single_one_then_zeros() {
        let s = seq(&[1, 0, 0, 0, 0]);
        let p = berlekamp_massey(&s);
        assert_eq!(p, Gf2Poly::monomial(1));
        assert!(satisfies_recurrence(&p, &s));
        let s = seq(&[0, 0, 0, 1]);
        assert_eq!(linear_complexity(&s), 4);
    }

    /// Oracle: smallest L such that some recurrence of length L generates s,
    /// by trying every tap set.
    fn brute_force_complexity(s: &[u8]) -> usize {
        let n = s.len();
        for l in 0..=n {
            if l == 0 {
                if s.iter().all(|&b| b == 0) {
                    return 0;
                }
                continue;
            }
            for taps in 0u32..(1 << l) {
                let ok = (l..n).all(|t| {
                    let pred = (0..l).fold(0u8, |acc, i| acc ^ (((taps >> i) & 1) as u8 & s[t - l + i]));
                    pred == s[t]
                });
                if ok {
                    return l;
                }
            }
        }
        n
    }

    #[test]
    fn matches_exhaustive_search_on_short_sequences() {
        for len in 1..=10usize {
            for v in 0u32..(1 << len) {
                let bits: Vec<u8> = (0..len).map(|i| ((v >> i) & 1) as u8).collect();
                let s = seq(&bits);
                let got = lfsr_synthesis(&s);
                assert_eq!(got.complexity, brute_force_complexity(&bits), "{bits:?}");
                assert!(satisfies_recurrence(&got.minimal_poly(), &s));
            }
        }
    }
}
