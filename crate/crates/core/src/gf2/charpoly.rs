//! Characteristic polynomials over GF(2) via Hessenberg reduction.
//!
//! The matrix is brought to upper Hessenberg form by similarity transforms
//! (row/column swaps and elementary eliminations, each paired with its
//! inverse on the other side), then the characteristic polynomial falls out
//! of the leading-principal-minor recurrence
//!
//! ```text
//! p_0 = 1
//! p_k = (x + h_kk) p_{k-1} + Σ_{i<k} h_ik · h_{i+1,i} ⋯ h_{k,k-1} · p_{i-1}
//! ```
//!
//! where signs vanish in characteristic 2. Every step is word-parallel on
//! row-packed storage, including the column updates: a batch of column
//! additions into one target column becomes a per-row parity of a mask.

use super::bitvec::words_for;
use super::matrix::BitMatrix;
use super::poly::{xor_shifted, Gf2Poly};
use crate::error::{Error, Result};

/// `det(xI − M)` over GF(2).
pub fn char_poly(m: &BitMatrix) -> Result<Gf2Poly> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "characteristic polynomial needs a square matrix, got {}×{}",
            m.n_rows(),
            m.n_cols()
        )));
    }
    let mut h = m.clone();
    hessenberg_in_place(&mut h);
    Ok(hessenberg_char_poly(&h))
}

/// Reduces `h` to upper Hessenberg form by a similarity transform.
pub(crate) fn hessenberg_in_place(h: &mut BitMatrix) {
    let n = h.n_rows();
    let stride = h.stride();
    let mut mask = vec![0u64; stride];
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| h.get(i, j)) else {
            continue;
        };
        let t = j + 1;
        if p != t {
            h.swap_rows(p, t);
            swap_columns(h, p, t);
        }
        // rows k > t with a one in column j get row t added; the inverse
        // transform adds those columns k into column t
        mask.iter_mut().for_each(|w| *w = 0);
        let mut any = false;
        let pivot = h.row(t).to_vec();
        for k in t + 1..n {
            if h.get(k, j) {
                for (x, y) in h.row_mut(k).iter_mut().zip(&pivot) {
                    *x ^= y;
                }
                mask[k / 64] |= 1u64 << (k % 64);
                any = true;
            }
        }
        if !any {
            continue;
        }
        let tw = t / 64;
        let tb = 1u64 << (t % 64);
        let data = h.data_mut();
        for row in data.chunks_mut(stride) {
            let par = row
                .iter()
                .zip(&mask)
                .fold(0u64, |acc, (a, b)| acc ^ (a & b))
                .count_ones()
                & 1;
            if par == 1 {
                row[tw] ^= tb;
            }
        }
    }
}

fn swap_columns(h: &mut BitMatrix, a: usize, b: usize) {
    let (wa, ba) = (a / 64, a % 64);
    let (wb, bb) = (b / 64, b % 64);
    let stride = h.stride();
    for row in h.data_mut().chunks_mut(stride) {
        let va = (row[wa] >> ba) & 1;
        let vb = (row[wb] >> bb) & 1;
        if va != vb {
            row[wa] ^= 1u64 << ba;
            row[wb] ^= 1u64 << bb;
        }
    }
}

/// Characteristic polynomial of an upper Hessenberg matrix.
pub(crate) fn hessenberg_char_poly(h: &BitMatrix) -> Gf2Poly {
    let n = h.n_rows();
    let pw = words_for(n + 1);
    // polys[k] = characteristic polynomial of the leading k×k block
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    let mut p0 = vec![0u64; pw];
    p0[0] = 1;
    polys.push(p0);
    for k in 1..=n {
        let c = k - 1; // zero-based column of h_{·,k}
        let mut next = vec![0u64; pw];
        xor_shifted(&mut next, &polys[k - 1], 1);
        next.truncate(pw);
        if h.get(c, c) {
            xor_into(&mut next, &polys[k - 1]);
        }
        // i runs over zero-based rows c-1, c-2, … while the subdiagonal
        // product h_{i+1,i} ⋯ h_{c,c-1} stays 1
        let mut i = c;
        while i > 0 && h.get(i, i - 1) {
            i -= 1;
            if h.get(i, c) {
                xor_into(&mut next, &polys[i]);
            }
        }
        polys.push(next);
    }
    Gf2Poly::from_words(polys.pop().unwrap())
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Reference determinant of `xI − M` by cofactor expansion with polynomial
/// entries. Exponential cost; meant for cross-checking on n ≤ 8.
pub fn char_poly_cofactor(m: &BitMatrix) -> Result<Gf2Poly> {
    if !m.is_square() {
        return Err(Error::Dimension("cofactor expansion needs a square matrix".into()));
    }
    let n = m.n_rows();
    let entries: Vec<Vec<Gf2Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut e = if m.get(i, j) { Gf2Poly::one() } else { Gf2Poly::zero() };
                    if i == j {
                        e = e.add(&Gf2Poly::monomial(1));
                    }
                    e
                })
                .collect()
        })
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    Ok(det_expand(&entries, 0, &cols))
}

fn det_expand(a: &[Vec<Gf2Poly>], row: usize, cols: &[usize]) -> Gf2Poly {
    if cols.is_empty() {
        return Gf2Poly::one();
    }
    let mut acc = Gf2Poly::zero();
    for (idx, &c) in cols.iter().enumerate() {
        let e = &a[row][c];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != idx)
            .map(|(_, &v)| v)
            .collect();
        acc = acc.add(&e.mul(&det_expand(a, row + 1, &rest)));
    }
    acc
}
