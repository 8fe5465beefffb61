//! Word-output PRNGs with inspectable raw state.
//!
//! Every generator exposes its state as a [`BitVec`] of exactly
//! [`Generator::state_bits`] bits, so linear engines can be probed with unit
//! states and their transition matrices extracted.

mod aes;
mod linear;
mod mt;
mod toy;
mod transform;
mod well;
mod xorshift;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

pub use aes::{Aes128, Aes128Ctr};
pub use linear::{
    linearity_xor_check, minimal_poly_of_bit, output_bit_sequence, set_low_weight_state,
    transition_matrix,
    LINEARITY_STEPS,
};
pub use mt::{Mt19937, Mt19937_64};
pub use toy::{Constant, Counter, FibonacciLfsr, GaloisLfsr, MatrixEngine};
pub use transform::{Transform, TransformWrapper};
pub use well::{Well1024a, Well512a};
pub use xorshift::{
    SplitMix64, Xoroshiro128Engine, Xoroshiro128PlusPlus, Xorshift128Engine, Xorshift128Plus,
    Xoshiro256Plus, Xoshiro256PlusPlus,
};

/// A stateful PRNG emitting words of `word_width` bits.
pub trait Generator: Send + Sync {
    fn name(&self) -> String;
    /// Native output width in bits (1..=64).
    fn word_width(&self) -> u32;
    fn state_bits(&self) -> usize;
    /// True when both the next-state map and the output map are GF(2)-linear.
    fn declared_linear(&self) -> bool;
    /// Advances one step and returns a word that fits in `word_width` bits.
    fn next_word(&mut self) -> u64;
    fn state(&self) -> BitVec;
    fn set_state(&mut self, state: &BitVec) -> Result<()>;
    fn box_clone(&self) -> Box<dyn Generator>;

    /// Sixty-four output bits: consecutive native words concatenated, first
    /// word in the most significant position. A final partial word
    /// contributes its top bits.
    fn next_u64(&mut self) -> u64 {
        let w = self.word_width();
        if w == 64 {
            return self.next_word();
        }
        let mut acc = 0u64;
        let mut filled = 0u32;
        while filled < 64 {
            let take = w.min(64 - filled);
            let word = self.next_word();
            acc = (acc << take) | (word >> (w - take));
            filled += take;
        }
        acc
    }

    /// Upper 53 bits of [`next_u64`](Generator::next_u64) divided by 2^53.
    fn next_double(&mut self) -> f64 {
        u64_to_double(self.next_u64())
    }
}

impl Clone for Box<dyn Generator> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

impl fmt::Debug for dyn Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (w={}, n={}, linear={})",
            self.name(),
            self.word_width(),
            self.state_bits(),
            self.declared_linear()
        )
    }
}

/// `k / 2^53` for the upper 53 bits `k` of `x`.
#[inline]
pub fn u64_to_double(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub(crate) fn check_state_len(state: &BitVec, expected: usize) -> Result<()> {
    if state.len() != expected {
        return Err(Error::StateLength {
            got: state.len(),
            expected,
        });
    }
    Ok(())
}

/// Master seed used when none is given.
pub const DEFAULT_MASTER_SEED: u64 = 42;

/// Master seed plus a per-instance stream index. Equal specs give equal
/// generator states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64) -> Self {
        SeedSpec {
            master_seed,
            stream: 0,
        }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        SeedSpec { stream, ..self }
    }

    /// Initial SplitMix64 state for this instance. Stream 0 uses the master
    /// seed unchanged; other streams xor in a finalizer-mixed index.
    pub fn expansion_seed(&self) -> u64 {
        self.master_seed ^ fmix64(self.stream)
    }

    /// SplitMix64 stream that fills generator state.
    pub fn expander(&self) -> SplitMix64 {
        SplitMix64::new(self.expansion_seed())
    }
}

/// MurmurHash3 64-bit finalizer; maps 0 to 0.
pub(crate) fn fmix64(mut k: u64) -> u64 {
    k ^= k >> 33;
    k = k.wrapping_mul(0xff51_afd7_ed55_8ccd);
    k ^= k >> 33;
    k = k.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    k ^ (k >> 33)
}

macro_rules! algorithms {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Named generator roster.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum Algorithm {
            $($variant),*
        }

        impl Algorithm {
            pub const ALL: &'static [Algorithm] = &[$(Algorithm::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Algorithm::$variant => $name),*
                }
            }
        }

        impl FromStr for Algorithm {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(Algorithm::$variant),)*
                    _ => Err(Error::UnknownAlgorithm(s.to_string())),
                }
            }
        }
    };
}

algorithms! {
    Mt19937 => "mt19937",
    Mt19937_64 => "mt19937_64",
    Well512a => "well512a",
    Well1024a => "well1024a",
    Xorshift128Plus => "xorshift128plus",
    Xoroshiro128PlusPlus => "xoroshiro128plusplus",
    Xoshiro256PlusPlus => "xoshiro256plusplus",
    Xoshiro256Plus => "xoshiro256plus",
    Xorshift128Engine => "xorshift128_engine",
    Xoroshiro128Engine => "xoroshiro128_engine",
    SplitMix64 => "splitmix64",
    Aes128Ctr => "aes128ctr",
    Toy8 => "toy8",
    Toy16 => "toy16",
    Lfsr127 => "lfsr127",
    Counter => "counter",
    Zero => "zero",
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Constructs a fully seeded generator.
///
/// Linear engines get their state words from the SplitMix64 expansion of the
/// seed; `splitmix64` itself starts from the expansion seed; `aes128ctr`
/// draws key and initial counter from the expansion.
pub fn make(algorithm: Algorithm, seed: SeedSpec) -> Result<Box<dyn Generator>> {
    let mut sm = seed.expander();
    let g: Box<dyn Generator> = match algorithm {
        Algorithm::Mt19937 => Box::new(Mt19937::from_words(std::array::from_fn(|_| {
            sm.next() as u32
        }))),
        Algorithm::Mt19937_64 => {
            Box::new(Mt19937_64::from_words(std::array::from_fn(|_| sm.next())))
        }
        Algorithm::Well512a => Box::new(Well512a::from_words(std::array::from_fn(|_| {
            sm.next() as u32
        }))),
        Algorithm::Well1024a => Box::new(Well1024a::from_words(std::array::from_fn(|_| {
            sm.next() as u32
        }))),
        Algorithm::Xorshift128Plus => Box::new(Xorshift128Plus::new([sm.next(), sm.next()])),
        Algorithm::Xoroshiro128PlusPlus => {
            Box::new(Xoroshiro128PlusPlus::new([sm.next(), sm.next()]))
        }
        Algorithm::Xoshiro256PlusPlus => Box::new(Xoshiro256PlusPlus::new(std::array::from_fn(
            |_| sm.next(),
        ))),
        Algorithm::Xoshiro256Plus => {
            Box::new(Xoshiro256Plus::new(std::array::from_fn(|_| sm.next())))
        }
        Algorithm::Xorshift128Engine => Box::new(Xorshift128Engine::new([sm.next(), sm.next()])),
        Algorithm::Xoroshiro128Engine => {
            Box::new(Xoroshiro128Engine::new([sm.next(), sm.next()]))
        }
        Algorithm::SplitMix64 => Box::new(SplitMix64::new(seed.expansion_seed())),
        Algorithm::Aes128Ctr => {
            let key = ((sm.next() as u128) << 64) | sm.next() as u128;
            let counter = ((sm.next() as u128) << 64) | sm.next() as u128;
            Box::new(Aes128Ctr::new(key.to_be_bytes(), counter))
        }
        Algorithm::Toy8 => Box::new(GaloisLfsr::toy8(nonzero_draw(&mut sm, 8))),
        Algorithm::Toy16 => Box::new(GaloisLfsr::toy16(nonzero_draw(&mut sm, 16))),
        Algorithm::Lfsr127 => {
            let lo = sm.next();
            let hi = sm.next() >> 1;
            Box::new(FibonacciLfsr::x127_x_1(((hi as u128) << 64) | lo as u128))
        }
        Algorithm::Counter => Box::new(Counter::new(0)),
        Algorithm::Zero => Box::new(Constant::new(0, 64)),
    };
    if g.declared_linear() && g.state().is_zero() && algorithm != Algorithm::Zero {
        return Err(Error::ZeroState(algorithm.name().to_string()));
    }
    Ok(g)
}

/// Parses an algorithm name and constructs it.
pub fn make_named(name: &str, seed: SeedSpec) -> Result<Box<dyn Generator>> {
    make(name.parse()?, seed)
}

/// Draws until the low `bits` bits are nonzero; tiny linear engines would
/// otherwise hit the absorbing zero state with visible probability.
fn nonzero_draw(sm: &mut SplitMix64, bits: u32) -> u64 {
    loop {
        let v = sm.next() & ((1u64 << bits) - 1);
        if v != 0 {
            return v;
        }
    }
}

/// Writes `n_bytes` of the generator's 64-bit word stream in little-endian
/// byte order, no framing. A trailing partial word contributes its low bytes.
pub fn dump_bytes<W: std::io::Write>(
    g: &mut dyn Generator,
    n_bytes: u64,
    out: &mut W,
) -> std::io::Result<()> {
    let mut buf = Vec::with_capacity(8 * 1024);
    let mut remaining = n_bytes;
    while remaining > 0 {
        buf.clear();
        while buf.len() < 8 * 1024 && remaining > 0 {
            let bytes = g.next_u64().to_le_bytes();
            let take = remaining.min(8) as usize;
            buf.extend_from_slice(&bytes[..take]);
            remaining -= take as u64;
        }
        out.write_all(&buf)?;
    }
    out.flush()
}
