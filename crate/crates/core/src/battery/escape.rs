//! Escape from low-weight states, and decorrelation of nearby states.
//!
//! The detector splits the output into aligned windows of [`ESCAPE_WINDOW`]
//! words. The escape time is the start of the first run of
//! [`ESCAPE_WINDOWS`] consecutive windows whose fraction of one bits lies
//! within 1/2 ± [`ESCAPE_DELTA`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{set_low_weight_state, Generator};
use crate::gf2::BitVec;

pub const ESCAPE_WINDOW: u64 = 1000;
pub const ESCAPE_DELTA: f64 = 0.01;
pub const ESCAPE_WINDOWS: u64 = 10;
pub const ESCAPE_MAX_ITERATIONS: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeResult {
    /// Escape time in output words, or the iteration cap when saturated.
    pub iterations: u64,
    pub saturated: bool,
}

/// Runs the window detector over words of `width` bits produced by `next`.
pub fn escape_detector(width: u32, max_iterations: u64, mut next: impl FnMut() -> u64) -> EscapeResult {
    let bits_per_window = (ESCAPE_WINDOW * width as u64) as f64;
    let mut run = 0u64;
    let mut window = 0u64;
    while (window + 1) * ESCAPE_WINDOW <= max_iterations {
        let ones: u64 = (0..ESCAPE_WINDOW).map(|_| next().count_ones() as u64).sum();
        let frac = ones as f64 / bits_per_window;
        if (frac - 0.5).abs() <= ESCAPE_DELTA {
            run += 1;
            if run == ESCAPE_WINDOWS {
                return EscapeResult {
                    iterations: (window + 1 - ESCAPE_WINDOWS) * ESCAPE_WINDOW,
                    saturated: false,
                };
            }
        } else {
            run = 0;
        }
        window += 1;
    }
    EscapeResult {
        iterations: max_iterations,
        saturated: true,
    }
}

/// Escape time of `g` started from the unit state e_bit_position.
pub fn escape_from_zeroland(g: &dyn Generator, bit_position: usize) -> Result<EscapeResult> {
    let mut h = g.box_clone();
    set_low_weight_state(h.as_mut(), bit_position)?;
    let w = h.word_width();
    Ok(escape_detector(w, ESCAPE_MAX_ITERATIONS, || h.next_word()))
}

fn pair_from(g: &dyn Generator, bit_position: usize) -> Result<(Box<dyn Generator>, Box<dyn Generator>)> {
    let s = g.state();
    if bit_position >= s.len() {
        return Err(Error::StateOutOfRange {
            position: bit_position,
            state_bits: s.len(),
        });
    }
    let mut flipped = s.clone();
    flipped.xor_assign(&BitVec::unit(s.len(), bit_position));
    let a = g.box_clone();
    let mut b = g.box_clone();
    b.set_state(&flipped)?;
    Ok((a, b))
}

/// Escape time of the xor of the streams from the current state S of `g`
/// and from S ⊕ e_bit_position.
pub fn decorrelation_time(g: &dyn Generator, bit_position: usize) -> Result<EscapeResult> {
    let (mut a, mut b) = pair_from(g, bit_position)?;
    let w = a.word_width();
    Ok(escape_detector(w, ESCAPE_MAX_ITERATIONS, || a.next_word() ^ b.next_word()))
}

/// True iff the xor of the streams from S and S ⊕ e_i equals the stream from
/// e_i for `steps` words, where S is the current state of `g`.
pub fn stream_xor_identity(g: &dyn Generator, bit_position: usize, steps: u64) -> Result<bool> {
    let (mut a, mut b) = pair_from(g, bit_position)?;
    let mut e = g.box_clone();
    set_low_weight_state(e.as_mut(), bit_position)?;
    Ok((0..steps).all(|_| a.next_word() ^ b.next_word() == e.next_word()))
}
