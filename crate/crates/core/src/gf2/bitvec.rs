use std::fmt;

/// Packed vector over GF(2).
///
/// Bit `j` lives in word `j / 64` at position `j % 64`. Padding bits beyond
/// `len` are always zero, so word-level equality is bit-level equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

/// A bit sequence fed to Berlekamp–Massey; same storage as [`BitVec`].
pub type BitSeq = BitVec;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// Unit vector `e_i` of length `len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitVec {
            words: Vec::with_capacity(words_for(bits)),
            len: 0,
        }
    }

    /// Builds a vector from packed words, clearing padding beyond `len`.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVec { words, len };
        v.clear_padding();
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = BitVec::default();
        for b in bits {
            v.push(b);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1u64 << (self.len % 64);
        }
        self.len += 1;
    }

    /// Appends the low `n` bits of `value`, least significant first.
    pub fn push_bits(&mut self, value: u64, n: usize) {
        debug_assert!(n <= 64);
        if n == 0 {
            return;
        }
        let value = if n == 64 { value } else { value & ((1u64 << n) - 1) };
        let off = self.len % 64;
        if off == 0 {
            self.words.push(value);
        } else {
            let last = self.words.len() - 1;
            self.words[last] |= value << off;
            if off + n > 64 {
                self.words.push(value >> (64 - off));
            }
        }
        self.len += n;
    }

    /// Reads `n ≤ 64` bits starting at `pos`; bit `pos + j` lands in bit `j`.
    pub fn read_bits(&self, pos: usize, n: usize) -> u64 {
        debug_assert!(n <= 64);
        assert!(pos + n <= self.len, "read past end of bit vector");
        if n == 0 {
            return 0;
        }
        let w = pos / 64;
        let off = pos % 64;
        let mut v = self.words[w] >> off;
        if off != 0 && off + n > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        if n == 64 {
            v
        } else {
            v & ((1u64 << n) - 1)
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot product");
        let acc = self
            .words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b));
        acc.count_ones() & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    fn clear_padding(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{}](", self.len)?;
        for b in self.iter().take(128) {
            f.write_str(if b { "1" } else { "0" })?;
        }
        if self.len > 128 {
            f.write_str("…")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_read_bits_across_words() {
        let mut v = BitVec::default();
        v.push_bits(0b101, 3);
        v.push_bits(u64::MAX, 64);
        v.push_bits(0x1234, 16);
        assert_eq!(v.len(), 83);
        assert_eq!(v.read_bits(0, 3), 0b101);
        assert_eq!(v.read_bits(3, 64), u64::MAX);
        assert_eq!(v.read_bits(67, 16), 0x1234);
        assert_eq!(v.count_ones(), 2 + 64 + 5);
    }

    #[test]
    fn from_words_clears_padding() {
        let v = BitVec::from_words(vec![u64::MAX], 5);
        assert_eq!(v.words(), &[0b11111]);
        assert_eq!(v.count_ones(), 5);
    }

    #[test]
    fn dot_and_xor() {
        let a = BitVec::from_bits([true, true, false, true]);
        let b = BitVec::from_bits([true, false, false, true]);
        assert!(!a.dot(&b));
        let mut c = a.clone();
        c.xor_assign(&b);
        assert_eq!(c, BitVec::from_bits([false, true, false, false]));
    }
}
