use std::fmt;

/// Polynomial over GF(2); bit `i` of the coefficient words is the
/// coefficient of `x^i`.
///
/// Words are kept normalized (no trailing zero words), so the zero
/// polynomial has an empty coefficient set and reports degree 0.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    coeffs: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Poly { coeffs: vec![1] }
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut p = Gf2Poly {
            coeffs: vec![0; n / 64 + 1],
        };
        p.coeffs[n / 64] = 1u64 << (n % 64);
        p
    }

    /// Builds a polynomial from the exponents of its nonzero terms;
    /// repeated exponents cancel.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Gf2Poly::zero();
        for &e in exps {
            p.flip(e);
        }
        p
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Gf2Poly { coeffs: words };
        p.normalize();
        p
    }

    pub fn words(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the highest nonzero coefficient; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        match self.coeffs.last() {
            None => 0,
            Some(&w) => (self.coeffs.len() - 1) * 64 + 63 - w.leading_zeros() as usize,
        }
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.coeffs
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn flip(&mut self, i: usize) {
        if self.coeffs.len() <= i / 64 {
            self.coeffs.resize(i / 64 + 1, 0);
        }
        self.coeffs[i / 64] ^= 1u64 << (i % 64);
        self.normalize();
    }

    /// Number of nonzero coefficients, leading term included.
    pub fn count_nonzero_coeffs(&self) -> usize {
        self.coeffs.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Exponents of the nonzero terms, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.coeffs.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(wi * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.coeffs.clone();
        for (a, b) in words.iter_mut().zip(&short.coeffs) {
            *a ^= b;
        }
        Gf2Poly::from_words(words)
    }

    /// `self · x^k`.
    pub fn shl(&self, k: usize) -> Gf2Poly {
        if self.is_zero() {
            return Gf2Poly::zero();
        }
        let mut words = vec![0u64; self.coeffs.len() + k / 64 + 1];
        xor_shifted(&mut words, &self.coeffs, k);
        Gf2Poly::from_words(words)
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || other.is_zero() {
            return Gf2Poly::zero();
        }
        let mut words = vec![0u64; self.coeffs.len() + other.coeffs.len() + 1];
        for e in self.exponents() {
            xor_shifted(&mut words, &other.coeffs, e);
        }
        Gf2Poly::from_words(words)
    }

    /// Quotient and remainder of Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len()];
        loop {
            while rem.last() == Some(&0) {
                rem.pop();
            }
            if rem.is_empty() {
                break;
            }
            let rd = (rem.len() - 1) * 64 + 63 - rem.last().unwrap().leading_zeros() as usize;
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot[shift / 64] ^= 1u64 << (shift % 64);
            xor_shifted(&mut rem, &divisor.coeffs, shift);
        }
        (Gf2Poly::from_words(quot), Gf2Poly::from_words(rem))
    }

    pub fn rem(&self, divisor: &Gf2Poly) -> Gf2Poly {
        self.div_rem(divisor).1
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    pub fn mul_mod(&self, other: &Gf2Poly, modulus: &Gf2Poly) -> Gf2Poly {
        self.mul(other).rem(modulus)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        for e in self.exponents() {
            if e % 2 == 1 {
                out.flip(e - 1);
            }
        }
        out
    }

    /// Evaluates at a point of GF(2).
    pub fn eval(&self, x: bool) -> bool {
        if x {
            self.count_nonzero_coeffs() % 2 == 1
        } else {
            self.coeff(0)
        }
    }

    /// Irreducibility over GF(2) by Ben-Or's test: `p` of degree `n` is
    /// irreducible iff `gcd(x^(2^i) − x, p) = 1` for every `i ≤ n/2`.
    /// Requires degree ≥ 1; returns false otherwise.
    pub fn is_irreducible(&self) -> bool {
        let n = self.degree();
        if self.is_zero() || n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let x = Gf2Poly::monomial(1);
        let mut power = x.clone();
        for _ in 0..n / 2 {
            power = power.mul_mod(&power, self);
            let g = power.add(&x).gcd(self);
            if g.degree() != 0 || g.is_zero() {
                return false;
            }
        }
        true
    }
}

/// `dst ^= src << shift`, growing `dst` as needed.
pub(crate) fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    let ws = shift / 64;
    let bs = shift % 64;
    let need = ws + src.len() + usize::from(bs != 0);
    if dst.len() < need {
        dst.resize(need, 0);
    }
    if bs == 0 {
        for (d, s) in dst[ws..].iter_mut().zip(src) {
            *d ^= s;
        }
    } else {
        for (i, &s) in src.iter().enumerate() {
            dst[ws + i] ^= s << bs;
            dst[ws + i + 1] ^= s >> (64 - bs);
        }
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .rev()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() <= 64 {
            write!(f, "Gf2Poly({self})")
        } else {
            write!(
                f,
                "Gf2Poly(degree {}, {} terms)",
                self.degree(),
                self.count_nonzero_coeffs()
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(e: &[usize]) -> Gf2Poly {
        Gf2Poly::from_exponents(e)
    }

    #[test]
    fn zero_polynomial_conventions() {
        let z = Gf2Poly::zero();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 0);
        assert_eq!(z.count_nonzero_coeffs(), 0);
        assert_eq!(p(&[3, 3]), z);
    }

    #[test]
    fn term_counts() {
        assert_eq!(p(&[3, 1, 0]).count_nonzero_coeffs(), 3);
        assert_eq!(Gf2Poly::monomial(1024).count_nonzero_coeffs(), 1);
        assert_eq!(Gf2Poly::monomial(1024).degree(), 1024);
    }

    #[test]
    fn irreducibility() {
        assert!(p(&[2, 1, 0]).is_irreducible());
        assert!(!p(&[2, 0]).is_irreducible());
        assert!(p(&[3, 1, 0]).is_irreducible());
        assert!(!p(&[4, 2, 0]).is_irreducible()); // (x^2+x+1)^2
        assert!(p(&[127, 1, 0]).is_irreducible());
        assert!(!p(&[6, 5, 4, 3, 2, 1, 0]).mul(&p(&[1, 0])).is_irreducible());
    }

    #[test]
    fn irreducible_matches_trial_division_up_to_degree_10() {
        // oracle: a polynomial is reducible iff some factor of degree ≤ n/2 divides it
        for n in 1..=10usize {
            for low in 0..(1u64 << n) {
                let f = Gf2Poly::from_words(vec![low | (1 << n)]);
                let mut reducible = false;
                'outer: for d in 1..=n / 2 {
                    for g_low in 0..(1u64 << d) {
                        let g = Gf2Poly::from_words(vec![g_low | (1 << d)]);
                        if f.rem(&g).is_zero() {
                            reducible = true;
                            break 'outer;
                        }
                    }
                }
                assert_eq!(f.is_irreducible(), !reducible, "{f}");
            }
        }
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[130, 77, 64, 3, 0]);
        let b = p(&[65, 1, 0]);
        let (q, r) = a.div_rem(&b);
        assert!(r.degree() < b.degree() || r.is_zero());
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[3, 1, 0]).to_string(), "x^3 + x + 1");
    }
}
