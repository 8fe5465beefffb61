use std::fmt;
use std::str::FromStr;

use super::Generator;
use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// Output transformation applied word by word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    Identity,
    /// Reverses the bits of each native word.
    BitReverse,
    /// Keeps the lowest `k` bits, yielding `k`-bit words.
    LowestBits(u32),
}

impl FromStr for Transform {
    type Err = Error;

    /// Accepts `identity`, `bit-reverse` and `low-K`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" | "none" => Ok(Transform::Identity),
            "bit-reverse" | "bitrev" => Ok(Transform::BitReverse),
            _ => {
                let k = s
                    .strip_prefix("low-")
                    .and_then(|k| k.parse::<u32>().ok())
                    .filter(|k| (1..=64).contains(k))
                    .ok_or_else(|| Error::Domain(format!("unknown transform `{s}`")))?;
                Ok(Transform::LowestBits(k))
            }
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Identity => f.write_str("identity"),
            Transform::BitReverse => f.write_str("bit-reverse"),
            Transform::LowestBits(k) => write!(f, "low-{k}"),
        }
    }
}

/// A generator whose output words pass through a [`Transform`]. State and
/// linearity are those of the inner generator.
#[derive(Clone, Debug)]
pub struct TransformWrapper {
    inner: Box<dyn Generator>,
    transform: Transform,
}

impl TransformWrapper {
    pub fn new(inner: Box<dyn Generator>, transform: Transform) -> Result<Self> {
        if let Transform::LowestBits(k) = transform {
            if k == 0 || k > inner.word_width() {
                return Err(Error::Domain(format!(
                    "cannot keep {k} bits of a {}-bit word",
                    inner.word_width()
                )));
            }
        }
        Ok(TransformWrapper { inner, transform })
    }

    pub fn into_inner(self) -> Box<dyn Generator> {
        self.inner
    }
}

impl Generator for TransformWrapper {
    fn name(&self) -> String {
        match self.transform {
            Transform::Identity => self.inner.name(),
            t => format!("{}+{t}", self.inner.name()),
        }
    }

    fn word_width(&self) -> u32 {
        match self.transform {
            Transform::LowestBits(k) => k,
            _ => self.inner.word_width(),
        }
    }

    fn state_bits(&self) -> usize {
        self.inner.state_bits()
    }

    fn declared_linear(&self) -> bool {
        self.inner.declared_linear()
    }

    fn next_word(&mut self) -> u64 {
        let w = self.inner.next_word();
        match self.transform {
            Transform::Identity => w,
            Transform::BitReverse => w.reverse_bits() >> (64 - self.inner.word_width()),
            Transform::LowestBits(64) => w,
            Transform::LowestBits(k) => w & ((1u64 << k) - 1),
        }
    }

    fn state(&self) -> BitVec {
        self.inner.state()
    }

    fn set_state(&mut self, state: &BitVec) -> Result<()> {
        self.inner.set_state(state)
    }

    fn box_clone(&self) -> Box<dyn Generator> {
        Box::new(self.clone())
    }
}
