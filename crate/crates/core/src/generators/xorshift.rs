//! SplitMix64 and the xorshift / xoroshiro / xoshiro families, plain and
//! scrambled.

use super::{check_state_len, Generator};
use crate::error::Result;
use crate::gf2::BitVec;

fn words_state(words: &[u64]) -> BitVec {
    let mut s = BitVec::with_capacity(64 * words.len());
    for &w in words {
        s.push_bits(w, 64);
    }
    s
}

fn read_words<const K: usize>(s: &BitVec) -> Result<[u64; K]> {
    check_state_len(s, 64 * K)?;
    Ok(std::array::from_fn(|k| s.read_bits(64 * k, 64)))
}

macro_rules! word_state_generator {
    ($ty:ident, $k:expr, $name:literal, linear = $linear:expr) => {
        impl Generator for $ty {
            fn name(&self) -> String {
                $name.into()
            }

            fn word_width(&self) -> u32 {
                64
            }

            fn state_bits(&self) -> usize {
                64 * $k
            }

            fn declared_linear(&self) -> bool {
                $linear
            }

            fn next_word(&mut self) -> u64 {
                self.step()
            }

            fn state(&self) -> BitVec {
                words_state(&self.s)
            }

            fn set_state(&mut self, state: &BitVec) -> Result<()> {
                self.s = read_words::<$k>(state)?;
                Ok(())
            }

            fn box_clone(&self) -> Box<dyn Generator> {
                Box::new(self.clone())
            }
        }
    };
}

/// SplitMix64; also the seed expander for every other generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    s: [u64; 1],
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { s: [seed] }
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> u64 {
        self.step()
    }

    #[inline]
    fn step(&mut self) -> u64 {
        self.s[0] = self.s[0].wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.s[0];
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

word_state_generator!(SplitMix64, 1, "splitmix64", linear = false);

/// Linear xorshift engine with shifts (23, 18, 5), emitting the new second
/// state word.
#[derive(Clone, Debug)]
pub struct Xorshift128Engine {
    s: [u64; 2],
}

#[inline]
fn xorshift128_update(s: &mut [u64; 2]) {
    let mut s1 = s[0];
    let s0 = s[1];
    s[0] = s0;
    s1 ^= s1 << 23;
    s[1] = s1 ^ s0 ^ (s1 >> 18) ^ (s0 >> 5);
}

impl Xorshift128Engine {
    pub fn new(s: [u64; 2]) -> Self {
        Xorshift128Engine { s }
    }

    #[inline]
    fn step(&mut self) -> u64 {
        xorshift128_update(&mut self.s);
        self.s[1]
    }
}

word_state_generator!(Xorshift128Engine, 2, "xorshift128_engine", linear = true);

/// xorshift128+: the (23, 18, 5) engine with the sum of its two words as
/// output.
#[derive(Clone, Debug)]
pub struct Xorshift128Plus {
    s: [u64; 2],
}

impl Xorshift128Plus {
    pub fn new(s: [u64; 2]) -> Self {
        Xorshift128Plus { s }
    }

    #[inline]
    fn step(&mut self) -> u64 {
        let result = self.s[0].wrapping_add(self.s[1]);
        xorshift128_update(&mut self.s);
        result
    }
}

word_state_generator!(Xorshift128Plus, 2, "xorshift128plus", linear = false);

#[inline]
fn xoroshiro128_update(s: &mut [u64; 2]) {
    let s0 = s[0];
    let mut s1 = s[1];
    s1 ^= s0;
    s[0] = s0.rotate_left(49) ^ s1 ^ (s1 << 21);
    s[1] = s1.rotate_left(28);
}

/// Unscrambled xoroshiro128 (49, 21, 28) engine, emitting the first state
/// word.
#[derive(Clone, Debug)]
pub struct Xoroshiro128Engine {
    s: [u64; 2],
}

impl Xoroshiro128Engine {
    pub fn new(s: [u64; 2]) -> Self {
        Xoroshiro128Engine { s }
    }

    #[inline]
    fn step(&mut self) -> u64 {
        let result = self.s[0];
        xoroshiro128_update(&mut self.s);
        result
    }
}

word_state_generator!(Xoroshiro128Engine, 2, "xoroshiro128_engine", linear = true);

#[derive(Clone, Debug)]
pub struct Xoroshiro128PlusPlus {
    s: [u64; 2],
}

impl Xoroshiro128PlusPlus {
    pub fn new(s: [u64; 2]) -> Self {
        Xoroshiro128PlusPlus { s }
    }

    #[inline]
    fn step(&mut self) -> u64 {
        let result = self.s[0]
            .wrapping_add(self.s[1])
            .rotate_left(17)
            .wrapping_add(self.s[0]);
        xoroshiro128_update(&mut self.s);
        result
    }
}

word_state_generator!(Xoroshiro128PlusPlus, 2, "xoroshiro128plusplus", linear = false);

#[inline]
fn xoshiro256_update(s: &mut [u64; 4]) {
    let t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = s[3].rotate_left(45);
}

#[derive(Clone, Debug)]
pub struct Xoshiro256PlusPlus {
    s: [u64; 4],
}

impl Xoshiro256PlusPlus {
    pub fn new(s: [u64; 4]) -> Self {
        Xoshiro256PlusPlus { s }
    }

    #[inline]
    fn step(&mut self) -> u64 {
        let result = self.s[0]
            .wrapping_add(self.s[3])
            .rotate_left(23)
            .wrapping_add(self.s[0]);
        xoshiro256_update(&mut self.s);
        result
    }
}

word_state_generator!(Xoshiro256PlusPlus, 4, "xoshiro256plusplus", linear = false);

#[derive(Clone, Debug)]
pub struct Xoshiro256Plus {
    s: [u64; 4],
}

impl Xoshiro256Plus {
    pub fn new(s: [u64; 4]) -> Self {
        Xoshiro256Plus { s }
    }

    #[inline]
    fn step(&mut self) -> u64 {
        let result = self.s[0].wrapping_add(self.s[3]);
        xoshiro256_update(&mut self.s);
        result
    }
}

word_state_generator!(Xoshiro256Plus, 4, "xoshiro256plus", linear = false);
