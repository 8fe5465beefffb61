//! Equidistribution of F2-linear generators.
//!
//! For a linear generator with n state bits, the upper ℓ bits of d
//! consecutive outputs are a linear image of the initial state. The generator
//! is (ℓ, d)-equidistributed iff that (ℓd)×n map has full row rank. The
//! equivalence with equal pattern counts over the period assumes full period
//! over the nonzero states, which is taken as given and not verified here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{linearity_xor_check, minimal_poly_of_bit, Generator};
use crate::gf2::{char_poly, BitMatrix, BitVec, Gf2Basis};
use crate::par;

/// Largest state analysed without an explicit override.
pub const DEFAULT_STATE_BUDGET: usize = 4096;

const XOR_TRIALS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EquidistQuery {
    pub ell: u32,
    pub d: usize,
}

impl EquidistQuery {
    pub fn new(ell: u32, d: usize) -> Self {
        EquidistQuery { ell, d }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquidistScore {
    pub generator: String,
    pub word_width: u32,
    pub state_bits: usize,
    pub allowable: u64,
    pub failing: u64,
    /// Failing pairs, ordered by ℓ then d.
    pub failures: Vec<EquidistQuery>,
}

impl EquidistScore {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("score serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Domain(format!("malformed score: {e}")))
    }

    pub fn is_failing(&self, q: EquidistQuery) -> bool {
        self.failures.binary_search(&q).is_ok()
    }
}

/// Σ_{ℓ=1..word_width} ⌊state_bits / ℓ⌋.
pub fn allowable_pair_count(word_width: u32, state_bits: usize) -> u64 {
    (1..=word_width as usize).map(|l| (state_bits / l) as u64).sum()
}

fn require_linear(g: &dyn Generator) -> Result<()> {
    if !g.declared_linear() {
        return Err(Error::NotLinear(g.name()));
    }
    if !linearity_xor_check(g, XOR_TRIALS) {
        return Err(Error::LinearityViolation {
            generator: g.name(),
            detail: "output stream of S ⊕ S' differs from the xor of the streams".into(),
        });
    }
    Ok(())
}

fn check_query(g: &dyn Generator, q: EquidistQuery) -> Result<()> {
    if q.ell == 0 || q.ell > g.word_width() || q.d == 0 {
        return Err(Error::Domain(format!(
            "need 1 ≤ ℓ ≤ {} and d ≥ 1, got ({}, {})",
            g.word_width(),
            q.ell,
            q.d
        )));
    }
    Ok(())
}

/// First `steps` output words from every unit state: `table[t][i]` is
/// output `t` started from e_i.
fn unit_outputs(g: &dyn Generator, steps: usize) -> Result<Vec<Vec<u64>>> {
    let n = g.state_bits();
    let per_state = par::map_indexed(n as u64, |i| -> Result<Vec<u64>> {
        let mut h = g.box_clone();
        h.set_state(&BitVec::unit(n, i as usize))?;
        Ok((0..steps).map(|_| h.next_word()).collect())
    });
    let per_state: Vec<Vec<u64>> = per_state.into_iter().collect::<Result<_>>()?;
    Ok((0..steps)
        .map(|t| per_state.iter().map(|outs| outs[t]).collect())
        .collect())
}

/// Row of the output map for bit `b` (0 = most significant) of one output,
/// given that output's values over all unit states.
fn functional_row(outputs: &[u64], width: u32, b: u32) -> Vec<u64> {
    let shift = width - 1 - b;
    let mut row = vec![0u64; outputs.len().div_ceil(64)];
    for (i, &o) in outputs.iter().enumerate() {
        row[i / 64] |= (o >> shift & 1) << (i % 64);
    }
    row
}

/// The (ℓd)×n matrix taking an initial state to the upper ℓ bits of the next
/// d outputs; row tℓ + b is bit b (from the top) of output t.
pub fn output_map(g: &dyn Generator, q: EquidistQuery) -> Result<BitMatrix> {
    require_linear(g)?;
    check_query(g, q)?;
    let table = unit_outputs(g, q.d)?;
    let w = g.word_width();
    let mut m = BitMatrix::zeros(q.ell as usize * q.d, g.state_bits());
    for (t, outputs) in table.iter().enumerate() {
        for b in 0..q.ell {
            m.set_row_words(t * q.ell as usize + b as usize, &functional_row(outputs, w, b));
        }
    }
    Ok(m)
}

/// Rank criterion for (ℓ, d)-equidistribution.
pub fn is_equidistributed(g: &dyn Generator, q: EquidistQuery) -> Result<bool> {
    check_query(g, q)?;
    let (l, n) = (q.ell as usize, g.state_bits());
    if l * q.d > n {
        return Err(Error::Domain(format!(
            "ℓ·d = {} exceeds the {n}-bit state; no decision possible",
            l * q.d
        )));
    }
    Ok(output_map(g, q)?.rank() == l * q.d)
}

/// Cross-checks every allowable pair. Refuses states above
/// [`DEFAULT_STATE_BUDGET`] bits.
pub fn equidistribution_score(g: &dyn Generator) -> Result<EquidistScore> {
    equidistribution_score_with_budget(g, DEFAULT_STATE_BUDGET)
}

pub fn equidistribution_score_with_budget(g: &dyn Generator, budget: usize) -> Result<EquidistScore> {
    require_linear(g)?;
    let n = g.state_bits();
    let w = g.word_width();
    if n > budget {
        return Err(Error::Resource(format!(
            "{n}-bit state exceeds the {budget}-bit equidistribution budget"
        )));
    }
    let table = unit_outputs(g, n)?;
    // For each ℓ, the largest d whose first ℓd rows are independent. Rows for
    // (ℓ, d) extend those for (ℓ, d − 1), so one incremental basis suffices.
    let max_d: Vec<usize> = par::map_indexed(w as u64, |l0| {
        let l = l0 as u32 + 1;
        let d_max = n / l as usize;
        let mut basis = Gf2Basis::new(n);
        for (t, outputs) in table.iter().take(d_max).enumerate() {
            for b in 0..l {
                if !basis.insert(&functional_row(outputs, w, b)) {
                    return t;
                }
            }
        }
        d_max
    });
    let mut failures = Vec::new();
    for (l0, &good) in max_d.iter().enumerate() {
        let l = l0 as u32 + 1;
        for d in good + 1..=n / l as usize {
            failures.push(EquidistQuery::new(l, d));
        }
    }
    Ok(EquidistScore {
        generator: g.name(),
        word_width: w,
        state_bits: n,
        allowable: allowable_pair_count(w, n),
        failing: failures.len() as u64,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharPolyWeightReport {
    pub generator: String,
    pub degree: usize,
    pub terms: usize,
    /// terms / (degree / 2); 1 means exactly half the degree.
    pub ratio_to_half_degree: f64,
    pub minimal_poly_degree: usize,
    /// Berlekamp–Massey polynomial of output bit 0 divides the
    /// characteristic polynomial.
    pub minimal_poly_divides: bool,
    pub minimal_poly_matches_degree: bool,
}

/// Term count of the next-state characteristic polynomial, cross-checked
/// against the minimal polynomial of output bit 0.
pub fn charpoly_weight_report(g: &dyn Generator, override_budget: bool) -> Result<CharPolyWeightReport> {
    if !g.declared_linear() {
        return Err(Error::NotLinear(g.name()));
    }
    let n = g.state_bits();
    if n > DEFAULT_STATE_BUDGET && !override_budget {
        return Err(Error::Resource(format!(
            "{n}-bit state exceeds the {DEFAULT_STATE_BUDGET}-bit budget"
        )));
    }
    let m = crate::generators::transition_matrix(g)?;
    let p = char_poly(&m)?;
    let mut probe = g.box_clone();
    let minimal = minimal_poly_of_bit(probe.as_mut(), 0, 2 * n + 64)?;
    let degree = p.degree();
    let terms = p.count_nonzero_coeffs();
    Ok(CharPolyWeightReport {
        generator: g.name(),
        degree,
        terms,
        ratio_to_half_degree: terms as f64 / (degree as f64 / 2.0),
        minimal_poly_degree: minimal.degree(),
        minimal_poly_divides: !minimal.is_zero() && p.rem(&minimal).is_zero(),
        minimal_poly_matches_degree: minimal.degree() == degree,
    })
}
