//! Probing generators as GF(2)-linear maps.

use super::{Generator, SplitMix64};
use crate::error::{Error, Result};
use crate::gf2::{berlekamp_massey, BitMatrix, BitSeq, BitVec, Gf2Poly};
use crate::par;

/// Output words compared per trial by [`linearity_xor_check`].
pub const LINEARITY_STEPS: usize = 64;

const VERIFY_STATES: usize = 100;
const PROBE_SEED: u64 = 0x6c69_6e65_6172_6974;

pub(crate) fn random_state(n: usize, sm: &mut SplitMix64) -> BitVec {
    let words = (0..n.div_ceil(64)).map(|_| sm.next()).collect();
    BitVec::from_words(words, n)
}

fn step_from(g: &dyn Generator, state: &BitVec) -> Result<BitVec> {
    let mut h = g.box_clone();
    h.set_state(state)?;
    h.next_word();
    Ok(h.state())
}

/// Next-state matrix M with column i = next_state(e_i), so that one step maps
/// state s to M·s. Checked against direct stepping on the zero state and 100
/// pseudorandom states before returning.
pub fn transition_matrix(g: &dyn Generator) -> Result<BitMatrix> {
    if !g.declared_linear() {
        return Err(Error::NotLinear(g.name()));
    }
    let n = g.state_bits();
    let columns = par::map_indexed(n as u64, |i| step_from(g, &BitVec::unit(n, i as usize)));
    let columns: Vec<BitVec> = columns.into_iter().collect::<Result<_>>()?;
    let m = BitMatrix::from_rows(&columns)?.transpose();

    let violation = |detail: String| Error::LinearityViolation {
        generator: g.name(),
        detail,
    };
    if !step_from(g, &BitVec::zeros(n))?.is_zero() {
        return Err(violation("the zero state does not map to zero".into()));
    }
    let mut sm = SplitMix64::new(PROBE_SEED);
    let states: Vec<BitVec> = (0..VERIFY_STATES).map(|_| random_state(n, &mut sm)).collect();
    let checks = par::map_slice(&states, |s| -> Result<bool> { Ok(step_from(g, s)? == m.mul_vec(s)) });
    for (k, ok) in checks.into_iter().enumerate() {
        if !ok? {
            return Err(violation(format!(
                "probe state {k} (seed {PROBE_SEED:#x}) disagrees with M·s"
            )));
        }
    }
    Ok(m)
}

fn outputs_from(g: &dyn Generator, state: &BitVec, steps: usize) -> Result<Vec<u64>> {
    let mut h = g.box_clone();
    h.set_state(state)?;
    Ok((0..steps).map(|_| h.next_word()).collect())
}

/// True iff, for `trials` pseudorandom state pairs (S, S'), the
/// [`LINEARITY_STEPS`] output words from S ⊕ S' equal the xor of the words
/// from S and from S'.
pub fn linearity_xor_check(g: &dyn Generator, trials: usize) -> bool {
    let n = g.state_bits();
    let mut sm = SplitMix64::new(PROBE_SEED ^ 1);
    for _ in 0..trials {
        let s = random_state(n, &mut sm);
        let t = random_state(n, &mut sm);
        let mut v = s.clone();
        v.xor_assign(&t);
        let (Ok(a), Ok(b), Ok(c)) = (
            outputs_from(g, &s, LINEARITY_STEPS),
            outputs_from(g, &t, LINEARITY_STEPS),
            outputs_from(g, &v, LINEARITY_STEPS),
        ) else {
            return false;
        };
        if a.iter().zip(&b).zip(&c).any(|((x, y), z)| x ^ y != *z) {
            return false;
        }
    }
    true
}

/// The bit sequence of output bit `bit_index` (0 = least significant) over
/// `n_samples` consecutive words.
pub fn output_bit_sequence(g: &mut dyn Generator, bit_index: u32, n_samples: usize) -> Result<BitSeq> {
    if bit_index >= g.word_width() {
        return Err(Error::Domain(format!(
            "bit {bit_index} outside a {}-bit word",
            g.word_width()
        )));
    }
    Ok(BitSeq::from_bits((0..n_samples).map(|_| g.next_word() >> bit_index & 1 == 1)))
}

/// Berlekamp–Massey minimal polynomial of one output bit over `n_samples`
/// consecutive outputs, consumed from `g`.
pub fn minimal_poly_of_bit(g: &mut dyn Generator, bit_index: u32, n_samples: usize) -> Result<Gf2Poly> {
    Ok(berlekamp_massey(&output_bit_sequence(g, bit_index, n_samples)?))
}

/// Sets the state to the unit vector e_bit_position.
pub fn set_low_weight_state(g: &mut dyn Generator, bit_position: usize) -> Result<()> {
    let n = g.state_bits();
    if bit_position >= n {
        return Err(Error::StateOutOfRange {
            position: bit_position,
            state_bits: n,
        });
    }
    g.set_state(&BitVec::unit(n, bit_position))
}
