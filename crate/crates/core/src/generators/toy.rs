//! Small and degenerate generators used as fixtures: tiny LFSRs whose output
//! is their whole state, a sparse Fibonacci LFSR, a generic matrix engine,
//! and trivially bad streams.

use super::{check_state_len, Generator};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, Gf2Poly};

/// Galois LFSR over `width` bits: the state is a polynomial in x reduced
/// modulo `poly`, each step multiplies it by x, and the output word is the
/// new state.
#[derive(Clone, Debug)]
pub struct GaloisLfsr {
    poly: u64,
    width: u32,
    s: u64,
    name: &'static str,
}

impl GaloisLfsr {
    /// `poly` includes the leading x^width term.
    pub fn new(poly: u64, width: u32, seed: u64, name: &'static str) -> Self {
        assert!((1..=32).contains(&width) && poly >> width == 1);
        GaloisLfsr {
            poly,
            width,
            s: seed & ((1u64 << width) - 1),
            name,
        }
    }

    /// x^8 + x^4 + x^3 + x^2 + 1 (primitive).
    pub fn toy8(seed: u64) -> Self {
        Self::new(0x11d, 8, seed, "toy8")
    }

    /// x^16 + x^14 + x^13 + x^11 + 1 (primitive).
    pub fn toy16(seed: u64) -> Self {
        Self::new(0x1_6801, 16, seed, "toy16")
    }

    pub fn poly(&self) -> Gf2Poly {
        Gf2Poly::from_words(vec![self.poly])
    }
}

impl Generator for GaloisLfsr {
    fn name(&self) -> String {
        self.name.into()
    }

    fn word_width(&self) -> u32 {
        self.width
    }

    fn state_bits(&self) -> usize {
        self.width as usize
    }

    fn declared_linear(&self) -> bool {
        true
    }

    fn next_word(&mut self) -> u64 {
        self.s <<= 1;
        if self.s >> self.width & 1 == 1 {
            self.s ^= self.poly;
        }
        self.s
    }

    fn state(&self) -> BitVec {
        let mut s = BitVec::with_capacity(self.width as usize);
        s.push_bits(self.s, self.width as usize);
        s
    }

    fn set_state(&mut self, state: &BitVec) -> Result<()> {
        check_state_len(state, self.width as usize)?;
        self.s = state.read_bits(0, self.width as usize);
        Ok(())
    }

    fn box_clone(&self) -> Box<dyn Generator> {
        Box::new(self.clone())
    }
}

/// Fibonacci LFSR for x^127 + x + 1, i.e. b[k+127] = b[k+1] ^ b[k], emitting
/// 64 sequence bits per word with the earliest bit in bit 0.
#[derive(Clone, Debug)]
pub struct FibonacciLfsr {
    /// Bit j holds b[k+j] for the next unread index k.
    s: u128,
}

const MASK127: u128 = (1u128 << 127) - 1;

impl FibonacciLfsr {
    pub fn x127_x_1(seed: u128) -> Self {
        FibonacciLfsr { s: seed & MASK127 }
    }
}

impl Generator for FibonacciLfsr {
    fn name(&self) -> String {
        "lfsr127".into()
    }

    fn word_width(&self) -> u32 {
        64
    }

    fn state_bits(&self) -> usize {
        127
    }

    fn declared_linear(&self) -> bool {
        true
    }

    fn next_word(&mut self) -> u64 {
        let out = self.s as u64;
        let fresh = (self.s ^ (self.s >> 1)) as u64;
        self.s = (self.s >> 64) | ((fresh as u128) << 63);
        self.s &= MASK127;
        out
    }

    fn state(&self) -> BitVec {
        let mut s = BitVec::with_capacity(127);
        s.push_bits(self.s as u64, 64);
        s.push_bits((self.s >> 64) as u64, 63);
        s
    }

    fn set_state(&mut self, state: &BitVec) -> Result<()> {
        check_state_len(state, 127)?;
        self.s = state.read_bits(0, 64) as u128 | (state.read_bits(64, 63) as u128) << 64;
        Ok(())
    }

    fn box_clone(&self) -> Box<dyn Generator> {
        Box::new(self.clone())
    }
}

/// Linear engine defined by an explicit next-state matrix (column i is the
/// image of unit state i). The output word is the first `min(n, 64)` state
/// bits after stepping.
#[derive(Clone, Debug)]
pub struct MatrixEngine {
    m: BitMatrix,
    s: BitVec,
}

impl MatrixEngine {
    pub fn new(m: BitMatrix, state: BitVec) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension("next-state matrix must be square".into()));
        }
        check_state_len(&state, m.n_rows())?;
        Ok(MatrixEngine { m, s: state })
    }

    /// Companion matrix of `p` started from unit state 0.
    pub fn companion(p: &Gf2Poly) -> Result<Self> {
        let m = BitMatrix::companion(p)?;
        let n = m.n_rows();
        Self::new(m, BitVec::unit(n, 0))
    }
}

impl Generator for MatrixEngine {
    fn name(&self) -> String {
        format!("matrix{}", self.m.n_rows())
    }

    fn word_width(&self) -> u32 {
        self.m.n_rows().min(64) as u32
    }

    fn state_bits(&self) -> usize {
        self.m.n_rows()
    }

    fn declared_linear(&self) -> bool {
        true
    }

    fn next_word(&mut self) -> u64 {
        self.s = self.m.mul_vec(&self.s);
        self.s.read_bits(0, self.word_width() as usize)
    }

    fn state(&self) -> BitVec {
        self.s.clone()
    }

    fn set_state(&mut self, state: &BitVec) -> Result<()> {
        check_state_len(state, self.m.n_rows())?;
        self.s = state.clone();
        Ok(())
    }

    fn box_clone(&self) -> Box<dyn Generator> {
        Box::new(self.clone())
    }
}

/// Emits its step index: 0, 1, 2, ...
#[derive(Clone, Debug)]
pub struct Counter {
    c: u64,
}

impl Counter {
    pub fn new(start: u64) -> Self {
        Counter { c: start }
    }
}

impl Generator for Counter {
    fn name(&self) -> String {
        "counter".into()
    }

    fn word_width(&self) -> u32 {
        64
    }

    fn state_bits(&self) -> usize {
        64
    }

    fn declared_linear(&self) -> bool {
        false
    }

    fn next_word(&mut self) -> u64 {
        let c = self.c;
        self.c = self.c.wrapping_add(1);
        c
    }

    fn state(&self) -> BitVec {
        BitVec::from_words(vec![self.c], 64)
    }

    fn set_state(&mut self, state: &BitVec) -> Result<()> {
        check_state_len(state, 64)?;
        self.c = state.read_bits(0, 64);
        Ok(())
    }

    fn box_clone(&self) -> Box<dyn Generator> {
        Box::new(self.clone())
    }
}

/// Repeats one word forever. The state is the word itself under the identity
/// map, so the generator is trivially linear.
#[derive(Clone, Debug)]
pub struct Constant {
    value: u64,
    width: u32,
}

impl Constant {
    pub fn new(value: u64, width: u32) -> Self {
        assert!((1..=64).contains(&width));
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        Constant {
            value: value & mask,
            width,
        }
    }
}

impl Generator for Constant {
    fn name(&self) -> String {
        if self.value == 0 {
            "zero".into()
        } else {
            format!("constant{:#x}", self.value)
        }
    }

    fn word_width(&self) -> u32 {
        self.width
    }

    fn state_bits(&self) -> usize {
        self.width as usize
    }

    fn declared_linear(&self) -> bool {
        true
    }

    fn next_word(&mut self) -> u64 {
        self.value
    }

    fn state(&self) -> BitVec {
        let mut s = BitVec::with_capacity(self.width as usize);
        s.push_bits(self.value, self.width as usize);
        s
    }

    fn set_state(&mut self, state: &BitVec) -> Result<()> {
        check_state_len(state, self.width as usize)?;
        self.value = state.read_bits(0, self.width as usize);
        Ok(())
    }

    fn box_clone(&self) -> Box<dyn Generator> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn period(mut g: GaloisLfsr) -> u64 {
        let start = g.s;
        let mut k = 0;
        loop {
            g.next_word();
            k += 1;
            if g.s == start {
                return k;
            }
        }
    }

    #[test]
    fn toy_lfsrs_have_full_period() {
        assert_eq!(period(GaloisLfsr::toy8(1)), 255);
        assert_eq!(period(GaloisLfsr::toy16(1)), 65535);
        assert!(GaloisLfsr::toy8(1).poly().is_irreducible());
        assert!(GaloisLfsr::toy16(1).poly().is_irreducible());
    }

    #[test]
    fn fibonacci_matches_bitwise_recurrence() {
        let seed = 0x1234_5678_9abc_def0_0fed_cba9_8765_4321u128 & MASK127;
        let mut bits: Vec<bool> = (0..127).map(|j| seed >> j & 1 == 1).collect();
        let mut g = FibonacciLfsr::x127_x_1(seed);
        let mut out = Vec::new();
        for _ in 0..10 {
            let w = g.next_word();
            out.extend((0..64).map(|j| w >> j & 1 == 1));
        }
        while bits.len() < out.len() {
            let k = bits.len() - 127;
            bits.push(bits[k] ^ bits[k + 1]);
        }
        assert_eq!(out, bits[..out.len()]);
    }

    #[test]
    fn companion_engine_cycles() {
        let p = Gf2Poly::from_exponents(&[3, 1, 0]);
        let mut g = MatrixEngine::companion(&p).unwrap();
        let first = g.state();
        let mut steps = 0;
        loop {
            g.next_word();
            steps += 1;
            if g.state() == first {
                break;
            }
        }
        assert_eq!(steps, 7);
    }

    #[test]
    fn counter_counts() {
        let mut g = Counter::new(0);
        assert_eq!((g.next_word(), g.next_word(), g.next_word()), (0, 1, 2));
    }
}
