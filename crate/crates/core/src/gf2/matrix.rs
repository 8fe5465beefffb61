use std::fmt;

use super::bitvec::{words_for, BitVec};
use crate::error::{Error, Result};

/// Dense matrix over GF(2), rows packed into 64-bit words.
///
/// Entry `(i, j)` is bit `j % 64` of word `j / 64` of row `i`. Padding bits
/// past `n_cols` stay zero.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n_rows: usize,
    n_cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        assert!(n_rows >= 1 && n_cols >= 1, "matrix dimensions must be positive");
        let stride = words_for(n_cols);
        BitMatrix {
            n_rows,
            n_cols,
            stride,
            data: vec![0; n_rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[BitVec]) -> Result<Self> {
        let n_cols = rows.first().map(BitVec::len).unwrap_or(0);
        if rows.is_empty() || n_cols == 0 {
            return Err(Error::Dimension("matrix needs at least one row and column".into()));
        }
        let mut m = Self::zeros(rows.len(), n_cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n_cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} bits, expected {n_cols}",
                    r.len()
                )));
            }
            m.row_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Companion matrix of a monic polynomial of degree `n ≥ 1`; its
    /// characteristic polynomial is the polynomial itself.
    pub fn companion(p: &super::Gf2Poly) -> Result<Self> {
        let n = p.degree();
        if p.is_zero() || n == 0 {
            return Err(Error::Dimension("companion matrix needs degree ≥ 1".into()));
        }
        let mut m = Self::zeros(n, n);
        for i in 1..n {
            m.set(i, i - 1, true);
        }
        for i in 0..n {
            if p.coeff(i) {
                m.set(i, n - 1, true);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    #[inline]
    pub(crate) fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub(crate) fn data_mut(&mut self) -> &mut [u64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        (self.data[i * self.stride + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        let w = &mut self.data[i * self.stride + j / 64];
        let mask = 1u64 << (j % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row_vec(&self, i: usize) -> BitVec {
        BitVec::from_words(self.row(i).to_vec(), self.n_cols)
    }

    /// Overwrites row `i` from packed words; bits past `n_cols` are cleared.
    pub fn set_row_words(&mut self, i: usize, words: &[u64]) {
        let n_cols = self.n_cols;
        let row = self.row_mut(i);
        row.copy_from_slice(words);
        let rem = n_cols % 64;
        if rem != 0 {
            row[row.len() - 1] &= (1u64 << rem) - 1;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            let s = self.stride;
            let (lo, hi) = (a.min(b), a.max(b));
            let (head, tail) = self.data.split_at_mut(hi * s);
            head[lo * s..(lo + 1) * s].swap_with_slice(&mut tail[..s]);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for (wi, &w) in self.row(i).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let j = wi * 64 + w.trailing_zeros() as usize;
                    t.set(j, i, true);
                    w &= w - 1;
                }
            }
        }
        t
    }

    /// Matrix-vector product `M · v` with `v` a column vector.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.n_cols, "vector length must equal column count");
        let mut out = BitVec::zeros(self.n_rows);
        for i in 0..self.n_rows {
            let acc = self
                .row(i)
                .iter()
                .zip(v.words())
                .fold(0u64, |acc, (a, b)| acc ^ (a & b));
            if acc.count_ones() & 1 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}×{} by {}×{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let mut out = BitMatrix::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                if self.get(i, k) {
                    let src = other.row(k).to_vec();
                    for (d, s) in out.row_mut(i).iter_mut().zip(&src) {
                        *d ^= s;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// GF(2) rank; works on a scratch copy.
    pub fn rank(&self) -> usize {
        let mut scratch = self.data.clone();
        rank_in_place(&mut scratch, self.n_rows, self.n_cols, self.stride)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}×{}", self.n_rows, self.n_cols)?;
        for i in 0..self.n_rows.min(16) {
            for j in 0..self.n_cols.min(64) {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Remaining-row count above which eliminating a pivot block switches to
/// 8-bit lookup tables (Four Russians style).
const TABLE_THRESHOLD: usize = 256;

/// Word-packed Gaussian elimination, processed one 64-column block at a time.
///
/// Within a block, pivots are chosen by scanning rows in index order (first
/// available row wins) and kept fully reduced against each other, so every
/// remaining row is eliminated by xoring exactly the pivots whose columns it
/// hits. Destroys `data`.
pub(crate) fn rank_in_place(data: &mut [u64], n_rows: usize, n_cols: usize, stride: usize) -> usize {
    let mut rank = 0usize;
    for wb in 0..stride {
        if rank == n_rows {
            break;
        }
        let block_cols = (n_cols - wb * 64).min(64);
        let mut pivot_bits: Vec<u32> = Vec::with_capacity(64);
        let mut i = rank;
        while i < n_rows && pivot_bits.len() < block_cols {
            let orig = data[i * stride + wb];
            if orig != 0 {
                let k = pivot_bits.len();
                for (j, &b) in pivot_bits.iter().enumerate() {
                    if (orig >> b) & 1 == 1 {
                        xor_row_tail(data, stride, rank + j, i, wb);
                    }
                }
                let w = data[i * stride + wb];
                if w != 0 {
                    let b = w.trailing_zeros();
                    for j in 0..k {
                        if (data[(rank + j) * stride + wb] >> b) & 1 == 1 {
                            xor_row_tail(data, stride, i, rank + j, wb);
                        }
                    }
                    swap_rows_raw(data, stride, i, rank + k);
                    pivot_bits.push(b);
                }
            }
            i += 1;
        }
        let k = pivot_bits.len();
        if k == 0 {
            continue;
        }
        let first = rank + k;
        eliminate_block(data, stride, n_rows, rank, first, wb, &pivot_bits);
        rank += k;
    }
    rank
}

#[inline]
fn xor_row_tail(data: &mut [u64], stride: usize, src: usize, dst: usize, from_word: usize) {
    debug_assert_ne!(src, dst);
    let (s, d) = (src * stride, dst * stride);
    if s < d {
        let (a, b) = data.split_at_mut(d);
        for (x, y) in b[from_word..stride].iter_mut().zip(&a[s + from_word..s + stride]) {
            *x ^= y;
        }
    } else {
        let (a, b) = data.split_at_mut(s);
        for (x, y) in a[d + from_word..d + stride].iter_mut().zip(&b[from_word..stride]) {
            *x ^= y;
        }
    }
}

fn swap_rows_raw(data: &mut [u64], stride: usize, a: usize, b: usize) {
    if a != b {
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = data.split_at_mut(hi * stride);
        head[lo * stride..(lo + 1) * stride].swap_with_slice(&mut tail[..stride]);
    }
}

/// Clears the pivot columns of word `wb` in rows `first..n_rows`.
fn eliminate_block(
    data: &mut [u64],
    stride: usize,
    n_rows: usize,
    pivot_start: usize,
    first: usize,
    wb: usize,
    pivot_bits: &[u32],
) {
    let remaining = n_rows - first;
    if remaining == 0 {
        return;
    }
    let tail = stride - wb;
    let (head, rest) = data.split_at_mut(first * stride);
    let pivots: Vec<&[u64]> = (0..pivot_bits.len())
        .map(|j| &head[(pivot_start + j) * stride + wb..(pivot_start + j + 1) * stride])
        .collect();

    if remaining < TABLE_THRESHOLD {
        for row in rest.chunks_mut(stride) {
            let orig = row[wb];
            if orig == 0 {
                continue;
            }
            for (j, &b) in pivot_bits.iter().enumerate() {
                if (orig >> b) & 1 == 1 {
                    for (x, y) in row[wb..].iter_mut().zip(pivots[j]) {
                        *x ^= y;
                    }
                }
            }
        }
        return;
    }

    // tables[g][mask] = xor of pivots 8g + t over set bits t of mask
    let groups: Vec<&[u32]> = pivot_bits.chunks(8).collect();
    let mut tables: Vec<Vec<u64>> = Vec::with_capacity(groups.len());
    for (g, bits) in groups.iter().enumerate() {
        let size = 1usize << bits.len();
        let mut t = vec![0u64; size * tail];
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            let prev = mask & (mask - 1);
            let (before, cur) = t.split_at_mut(mask * tail);
            let dst = &mut cur[..tail];
            dst.copy_from_slice(&before[prev * tail..prev * tail + tail]);
            for (x, y) in dst.iter_mut().zip(pivots[g * 8 + low]) {
                *x ^= y;
            }
        }
        tables.push(t);
    }

    let apply = |row: &mut [u64]| {
        let orig = row[wb];
        if orig == 0 {
            return;
        }
        for (g, bits) in groups.iter().enumerate() {
            let mut mask = 0usize;
            for (t, &b) in bits.iter().enumerate() {
                mask |= (((orig >> b) & 1) as usize) << t;
            }
            if mask != 0 {
                let src = &tables[g][mask * tail..(mask + 1) * tail];
                for (x, y) in row[wb..].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
    };
    crate::par::for_each_chunk_mut(rest, stride, apply);
}

/// Incrementally built row basis; answers "is this row independent of
/// everything inserted so far".
#[derive(Clone, Debug)]
pub struct Gf2Basis {
    n_cols: usize,
    /// `by_pivot[p]` holds the stored vector whose lowest set bit is `p`.
    by_pivot: Vec<Option<Vec<u64>>>,
    rank: usize,
}

impl Gf2Basis {
    pub fn new(n_cols: usize) -> Self {
        Gf2Basis {
            n_cols,
            by_pivot: vec![None; n_cols],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Inserts a row; returns `true` when it increased the rank.
    pub fn insert(&mut self, row: &[u64]) -> bool {
        let mut v = row.to_vec();
        let stride = words_for(self.n_cols);
        debug_assert_eq!(v.len(), stride);
        let mut w = 0;
        while w < stride {
            if v[w] == 0 {
                w += 1;
                continue;
            }
            let p = w * 64 + v[w].trailing_zeros() as usize;
            match &self.by_pivot[p] {
                Some(b) => {
                    for (x, y) in v[w..].iter_mut().zip(&b[w..]) {
                        *x ^= y;
                    }
                }
                None => {
                    self.by_pivot[p] = Some(v);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }
}
