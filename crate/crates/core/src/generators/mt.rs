//! MT19937 and MT19937-64, stepped one word at a time.
//!
//! The classic implementations regenerate the whole array every `n` calls;
//! twisting one slot per call over a circular buffer yields the identical
//! output sequence and keeps the state well-defined between any two calls.
//! The logical state is the `n` words starting at the cursor, of which only
//! the upper `w - r` bits of the first word matter.

use super::{check_state_len, Generator};
use crate::error::Result;
use crate::gf2::BitVec;

const N32: usize = 624;
const M32: usize = 397;
const UPPER32: u32 = 0x8000_0000;
const LOWER32: u32 = 0x7fff_ffff;
const MATRIX_A32: u32 = 0x9908_b0df;

#[derive(Clone)]
pub struct Mt19937 {
    mt: [u32; N32],
    idx: usize,
}

impl Mt19937 {
    pub const DEFAULT_SEED: u32 = 5489;

    /// Reference `init_genrand` seeding.
    pub fn new(seed: u32) -> Self {
        let mut mt = [0u32; N32];
        mt[0] = seed;
        for i in 1..N32 {
            mt[i] = 1_812_433_253u32
                .wrapping_mul(mt[i - 1] ^ (mt[i - 1] >> 30))
                .wrapping_add(i as u32);
        }
        Mt19937 { mt, idx: 0 }
    }

    /// State words in logical order, cursor at word 0.
    pub fn from_words(mt: [u32; N32]) -> Self {
        Mt19937 { mt, idx: 0 }
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        let i = self.idx;
        let j = if i + 1 == N32 { 0 } else { i + 1 };
        let k = if i + M32 >= N32 { i + M32 - N32 } else { i + M32 };
        let y = (self.mt[i] & UPPER32) | (self.mt[j] & LOWER32);
        let mag = if y & 1 == 1 { MATRIX_A32 } else { 0 };
        let v = self.mt[k] ^ (y >> 1) ^ mag;
        self.mt[i] = v;
        self.idx = j;
        temper32(v)
    }
}

#[inline]
fn temper32(mut y: u32) -> u32 {
    y ^= y >> 11;
    y ^= (y << 7) & 0x9d2c_5680;
    y ^= (y << 15) & 0xefc6_0000;
    y ^ (y >> 18)
}

impl Generator for Mt19937 {
    fn name(&self) -> String {
        "mt19937".into()
    }

    fn word_width(&self) -> u32 {
        32
    }

    fn state_bits(&self) -> usize {
        19937
    }

    fn declared_linear(&self) -> bool {
        true
    }

    fn next_word(&mut self) -> u64 {
        self.next_u32() as u64
    }

    fn state(&self) -> BitVec {
        let mut s = BitVec::with_capacity(19937);
        s.push_bits((self.mt[self.idx] >> 31) as u64, 1);
        for k in 1..N32 {
            s.push_bits(self.mt[(self.idx + k) % N32] as u64, 32);
        }
        s
    }

    fn set_state(&mut self, state: &BitVec) -> Result<()> {
        check_state_len(state, 19937)?;
        self.mt[0] = (state.read_bits(0, 1) as u32) << 31;
        for k in 1..N32 {
            self.mt[k] = state.read_bits(1 + (k - 1) * 32, 32) as u32;
        }
        self.idx = 0;
        Ok(())
    }

    fn box_clone(&self) -> Box<dyn Generator> {
        Box::new(self.clone())
    }
}

const N64: usize = 312;
const M64: usize = 156;
const UPPER64: u64 = 0xffff_ffff_8000_0000;
const LOWER64: u64 = 0x7fff_ffff;
const MATRIX_A64: u64 = 0xb502_6f5a_a966_19e9;

#[derive(Clone)]
pub struct Mt19937_64 {
    mt: [u64; N64],
    idx: usize,
}

impl Mt19937_64 {
    pub const DEFAULT_SEED: u64 = 5489;

    /// Reference `init_genrand64` seeding.
    pub fn new(seed: u64) -> Self {
        let mut mt = [0u64; N64];
        mt[0] = seed;
        for i in 1..N64 {
            mt[i] = 6_364_136_223_846_793_005u64
                .wrapping_mul(mt[i - 1] ^ (mt[i - 1] >> 62))
                .wrapping_add(i as u64);
        }
        Mt19937_64 { mt, idx: 0 }
    }

    pub fn from_words(mt: [u64; N64]) -> Self {
        Mt19937_64 { mt, idx: 0 }
    }

    #[inline]
    pub fn next_u64_raw(&mut self) -> u64 {
        let i = self.idx;
        let j = if i + 1 == N64 { 0 } else { i + 1 };
        let k = if i + M64 >= N64 { i + M64 - N64 } else { i + M64 };
        let x = (self.mt[i] & UPPER64) | (self.mt[j] & LOWER64);
        let mag = if x & 1 == 1 { MATRIX_A64 } else { 0 };
        let v = self.mt[k] ^ (x >> 1) ^ mag;
        self.mt[i] = v;
        self.idx = j;
        let mut y = v;
        y ^= (y >> 29) & 0x5555_5555_5555_5555;
        y ^= (y << 17) & 0x71d6_7fff_eda6_0000;
        y ^= (y << 37) & 0xfff7_eee0_0000_0000;
        y ^ (y >> 43)
    }
}

impl Generator for Mt19937_64 {
    fn name(&self) -> String {
        "mt19937_64".into()
    }

    fn word_width(&self) -> u32 {
        64
    }

    fn state_bits(&self) -> usize {
        19937
    }

    fn declared_linear(&self) -> bool {
        true
    }

    fn next_word(&mut self) -> u64 {
        self.next_u64_raw()
    }

    fn state(&self) -> BitVec {
        let mut s = BitVec::with_capacity(19937);
        s.push_bits(self.mt[self.idx] >> 31, 33);
        for k in 1..N64 {
            s.push_bits(self.mt[(self.idx + k) % N64], 64);
        }
        s
    }

    fn set_state(&mut self, state: &BitVec) -> Result<()> {
        check_state_len(state, 19937)?;
        self.mt[0] = state.read_bits(0, 33) << 31;
        for k in 1..N64 {
            self.mt[k] = state.read_bits(33 + (k - 1) * 64, 64);
        }
        self.idx = 0;
        Ok(())
    }

    fn box_clone(&self) -> Box<dyn Generator> {
        Box::new(self.clone())
    }
}
