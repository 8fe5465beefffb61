//! WELL512a and WELL1024a with the published parameters.

use super::{check_state_len, Generator};
use crate::error::Result;
use crate::gf2::BitVec;

#[inline]
fn mat0pos(t: u32, v: u32) -> u32 {
    v ^ (v >> t)
}

#[inline]
fn mat0neg(t: u32, v: u32) -> u32 {
    v ^ (v << t)
}

#[inline]
fn mat3neg(t: u32, v: u32) -> u32 {
    v << t
}

#[inline]
fn mat4neg(t: u32, b: u32, v: u32) -> u32 {
    v ^ ((v << t) & b)
}

macro_rules! well_state_impl {
    ($ty:ident, $r:expr, $name:literal) => {
        impl $ty {
            /// State words in logical order (cursor at word 0).
            pub fn from_words(state: [u32; $r]) -> Self {
                $ty { state, i: 0 }
            }
        }

        impl Generator for $ty {
            fn name(&self) -> String {
                $name.into()
            }

            fn word_width(&self) -> u32 {
                32
            }

            fn state_bits(&self) -> usize {
                32 * $r
            }

            fn declared_linear(&self) -> bool {
                true
            }

            fn next_word(&mut self) -> u64 {
                self.step() as u64
            }

            fn state(&self) -> BitVec {
                let mut s = BitVec::with_capacity(32 * $r);
                for k in 0..$r {
                    s.push_bits(self.state[(self.i + k) % $r] as u64, 32);
                }
                s
            }

            fn set_state(&mut self, s: &BitVec) -> Result<()> {
                check_state_len(s, 32 * $r)?;
                for k in 0..$r {
                    self.state[k] = s.read_bits(32 * k, 32) as u32;
                }
                self.i = 0;
                Ok(())
            }

            fn box_clone(&self) -> Box<dyn Generator> {
                Box::new(self.clone())
            }
        }
    };
}

#[derive(Clone)]
pub struct Well512a {
    state: [u32; 16],
    i: usize,
}

impl Well512a {
    #[inline]
    fn step(&mut self) -> u32 {
        let s = &mut self.state;
        let i = self.i;
        let v0 = s[i];
        let vm1 = s[(i + 13) & 15];
        let vm2 = s[(i + 9) & 15];
        let z0 = s[(i + 15) & 15];
        let z1 = mat0neg(16, v0) ^ mat0neg(15, vm1);
        let z2 = mat0pos(11, vm2);
        let new_v1 = z1 ^ z2;
        s[i] = new_v1;
        let new_v0 =
            mat0neg(2, z0) ^ mat0neg(18, z1) ^ mat3neg(28, z2) ^ mat4neg(5, 0xda44_2d24, new_v1);
        s[(i + 15) & 15] = new_v0;
        self.i = (i + 15) & 15;
        new_v0
    }
}

well_state_impl!(Well512a, 16, "well512a");

#[derive(Clone)]
pub struct Well1024a {
    state: [u32; 32],
    i: usize,
}

impl Well1024a {
    #[inline]
    fn step(&mut self) -> u32 {
        let s = &mut self.state;
        let i = self.i;
        let v0 = s[i];
        let vm1 = s[(i + 3) & 31];
        let vm2 = s[(i + 24) & 31];
        let vm3 = s[(i + 10) & 31];
        let z0 = s[(i + 31) & 31];
        let z1 = v0 ^ mat0pos(8, vm1);
        let z2 = mat0neg(19, vm2) ^ mat0neg(14, vm3);
        let new_v1 = z1 ^ z2;
        s[i] = new_v1;
        let new_v0 = mat0neg(11, z0) ^ mat0neg(7, z1) ^ mat0neg(13, z2);
        s[(i + 31) & 31] = new_v0;
        self.i = (i + 31) & 31;
        new_v0
    }
}

well_state_impl!(Well1024a, 32, "well1024a");
