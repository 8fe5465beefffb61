//! Exact linear algebra over GF(2).

mod bitvec;
mod bm;
mod charpoly;
mod matrix;
mod poly;
mod rankprob;

pub use bitvec::{BitSeq, BitVec};
pub use bm::{berlekamp_massey, lfsr_synthesis, linear_complexity, satisfies_recurrence, Lfsr};
pub use charpoly::{char_poly, char_poly_cofactor};
pub use matrix::{BitMatrix, Gf2Basis};
pub use poly::Gf2Poly;
pub use rankprob::{rank_category_probabilities, rank_probability};

pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn count_nonzero_coeffs(p: &Gf2Poly) -> usize {
    p.count_nonzero_coeffs()
}

pub fn is_irreducible(p: &Gf2Poly) -> bool {
    p.is_irreducible()
}
