//! Portable table-based AES-128 and the counter-mode generator built on it.

use super::{check_state_len, Generator};
use crate::error::Result;
use crate::gf2::BitVec;

const fn xtime(b: u8) -> u8 {
    (b << 1) ^ if b & 0x80 != 0 { 0x1b } else { 0 }
}

const fn gmul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    p
}

const fn build_sbox() -> [u8; 256] {
    let mut sbox = [0u8; 256];
    let mut x = 0usize;
    while x < 256 {
        // multiplicative inverse by brute force, 0 maps to 0
        let mut inv = 0u8;
        if x != 0 {
            let mut y = 1usize;
            while y < 256 {
                if gmul(x as u8, y as u8) == 1 {
                    inv = y as u8;
                    break;
                }
                y += 1;
            }
        }
        let b = inv;
        sbox[x] = b ^ b.rotate_left(1) ^ b.rotate_left(2) ^ b.rotate_left(3) ^ b.rotate_left(4) ^ 0x63;
        x += 1;
    }
    sbox
}

static SBOX: [u8; 256] = build_sbox();

const fn build_te0() -> [u32; 256] {
    let sbox = build_sbox();
    let mut t = [0u32; 256];
    let mut i = 0;
    while i < 256 {
        let s = sbox[i];
        t[i] = u32::from_be_bytes([xtime(s), s, s, xtime(s) ^ s]);
        i += 1;
    }
    t
}

static TE0: [u32; 256] = build_te0();

#[inline]
fn te(n: u32, x: u32) -> u32 {
    TE0[x as usize & 0xff].rotate_right(8 * n)
}

/// AES-128 block cipher, encryption only.
#[derive(Clone)]
pub struct Aes128 {
    round_keys: [u32; 44],
}

impl Aes128 {
    pub fn new(key: [u8; 16]) -> Self {
        let mut w = [0u32; 44];
        for i in 0..4 {
            w[i] = u32::from_be_bytes([key[4 * i], key[4 * i + 1], key[4 * i + 2], key[4 * i + 3]]);
        }
        let mut rcon = 1u8;
        for i in 4..44 {
            let mut t = w[i - 1];
            if i % 4 == 0 {
                t = t.rotate_left(8);
                let b = t.to_be_bytes();
                t = u32::from_be_bytes([
                    SBOX[b[0] as usize],
                    SBOX[b[1] as usize],
                    SBOX[b[2] as usize],
                    SBOX[b[3] as usize],
                ]) ^ ((rcon as u32) << 24);
                rcon = xtime(rcon);
            }
            w[i] = w[i - 4] ^ t;
        }
        Aes128 { round_keys: w }
    }

    pub fn encrypt_block(&self, block: [u8; 16]) -> [u8; 16] {
        let rk = &self.round_keys;
        let mut s = [0u32; 4];
        for c in 0..4 {
            s[c] = u32::from_be_bytes([
                block[4 * c],
                block[4 * c + 1],
                block[4 * c + 2],
                block[4 * c + 3],
            ]) ^ rk[c];
        }
        for round in 1..10 {
            let mut t = [0u32; 4];
            for c in 0..4 {
                t[c] = te(0, s[c] >> 24)
                    ^ te(1, s[(c + 1) % 4] >> 16)
                    ^ te(2, s[(c + 2) % 4] >> 8)
                    ^ te(3, s[(c + 3) % 4])
                    ^ rk[4 * round + c];
            }
            s = t;
        }
        let mut out = [0u8; 16];
        for c in 0..4 {
            let b = [
                SBOX[(s[c] >> 24) as usize],
                SBOX[((s[(c + 1) % 4] >> 16) & 0xff) as usize],
                SBOX[((s[(c + 2) % 4] >> 8) & 0xff) as usize],
                SBOX[(s[(c + 3) % 4] & 0xff) as usize],
            ];
            let v = u32::from_be_bytes(b) ^ rk[40 + c];
            out[4 * c..4 * c + 4].copy_from_slice(&v.to_be_bytes());
        }
        out
    }
}

/// AES-128 applied to a 128-bit big-endian counter. Each block yields two
/// 64-bit words, high half first.
///
/// Raw state, 257 bits: key (128, bit `i` = bit `i` of the key read as a
/// big-endian integer), counter (128), and a half-block flag set when the
/// high word of the current block has already been emitted.
#[derive(Clone)]
pub struct Aes128Ctr {
    key: [u8; 16],
    cipher: Aes128,
    counter: u128,
    low_pending: bool,
    block: [u64; 2],
}

impl Aes128Ctr {
    pub fn new(key: [u8; 16], counter: u128) -> Self {
        Aes128Ctr {
            cipher: Aes128::new(key),
            key,
            counter,
            low_pending: false,
            block: [0; 2],
        }
    }

    fn encrypt_counter(&self) -> [u64; 2] {
        let ct = self.cipher.encrypt_block(self.counter.to_be_bytes());
        [
            u64::from_be_bytes(ct[..8].try_into().unwrap()),
            u64::from_be_bytes(ct[8..].try_into().unwrap()),
        ]
    }
}

impl Generator for Aes128Ctr {
    fn name(&self) -> String {
        "aes128ctr".into()
    }

    fn word_width(&self) -> u32 {
        64
    }

    fn state_bits(&self) -> usize {
        257
    }

    fn declared_linear(&self) -> bool {
        false
    }

    fn next_word(&mut self) -> u64 {
        if self.low_pending {
            self.low_pending = false;
            self.counter = self.counter.wrapping_add(1);
            self.block[1]
        } else {
            self.block = self.encrypt_counter();
            self.low_pending = true;
            self.block[0]
        }
    }

    fn state(&self) -> BitVec {
        let key = u128::from_be_bytes(self.key);
        let mut s = BitVec::with_capacity(257);
        s.push_bits(key as u64, 64);
        s.push_bits((key >> 64) as u64, 64);
        s.push_bits(self.counter as u64, 64);
        s.push_bits((self.counter >> 64) as u64, 64);
        s.push_bits(self.low_pending as u64, 1);
        s
    }

    fn set_state(&mut self, s: &BitVec) -> Result<()> {
        check_state_len(s, 257)?;
        let key = (s.read_bits(0, 64) as u128) | ((s.read_bits(64, 64) as u128) << 64);
        let counter = (s.read_bits(128, 64) as u128) | ((s.read_bits(192, 64) as u128) << 64);
        *self = Aes128Ctr::new(key.to_be_bytes(), counter);
        if s.read_bits(256, 1) == 1 {
            self.block = self.encrypt_counter();
            self.low_pending = true;
        }
        Ok(())
    }

    fn box_clone(&self) -> Box<dyn Generator> {
        Box::new(self.clone())
    }
}
