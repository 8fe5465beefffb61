use prngaudit::generators::{
    linearity_xor_check, make, minimal_poly_of_bit, output_bit_sequence, set_low_weight_state,
    transition_matrix, u64_to_double, Aes128Ctr, Algorithm, Generator, Mt19937, SeedSpec, SplitMix64,
};
use prngaudit::gf2::{char_poly, satisfies_recurrence, BitVec};

fn seeded(algo: Algorithm, seed: u64) -> Box<dyn Generator> {
    make(algo, SeedSpec::new(seed)).unwrap()
}

#[test]
fn canonical_first_outputs() {
    assert_eq!(Mt19937::new(5489).next_word(), 0xd091_bb5c);
    assert_eq!(SplitMix64::new(0).next_word(), 0xe220_a839_7b1d_cdaf);
}

#[test]
fn aes_ctr_first_block_is_fips197_ciphertext() {
    let key: [u8; 16] = std::array::from_fn(|i| i as u8);
    let mut g = Aes128Ctr::new(key, 0x0011_2233_4455_6677_8899_aabb_ccdd_eeff);
    assert_eq!(g.next_word(), 0x69c4_e0d8_6a7b_0430);
    assert_eq!(g.next_word(), 0xd8cd_b780_70b4_c55a);
}

#[test]
fn equal_seeds_give_equal_prefixes() {
    for algo in [Algorithm::Mt19937, Algorithm::Aes128Ctr, Algorithm::Well1024a] {
        let mut a = seeded(algo, 5);
        let mut b = seeded(algo, 5);
        assert!((0..1_000_000).all(|_| a.next_word() == b.next_word()), "{algo}");
    }
}

#[test]
fn generator_invariants() {
    for &algo in Algorithm::ALL {
        let mut g = seeded(algo, 11);
        let w = g.word_width();
        for _ in 0..1000 {
            let x = g.next_word();
            assert!(w == 64 || x >> w == 0, "{algo}");
        }
        let s = g.state();
        assert_eq!(s.len(), g.state_bits());
        let mut h = g.box_clone();
        h.set_state(&s).unwrap();
        assert!((0..100).all(|_| g.next_word() == h.next_word()), "{algo}");
        if g.declared_linear() {
            g.set_state(&BitVec::zeros(g.state_bits())).unwrap();
            assert_eq!(g.next_word(), 0, "{algo}");
            assert!(g.state().is_zero(), "{algo}");
        }
    }
}

#[test]
fn double_edges() {
    assert_eq!(u64_to_double(0), 0.0);
    assert_eq!(u64_to_double(u64::MAX), (2f64.powi(53) - 1.0) / 2f64.powi(53));
}

#[test]
fn well512a_transition_matrix_steps_state() {
    let g = seeded(Algorithm::Well512a, 3);
    let m = transition_matrix(g.as_ref()).unwrap();
    assert_eq!((m.n_rows(), m.n_cols()), (512, 512));
    let mut sm = SplitMix64::new(99);
    for _ in 0..100 {
        let words: Vec<u64> = (0..8).map(|_| sm.next()).collect();
        let s = BitVec::from_words(words, 512);
        let mut h = g.box_clone();
        h.set_state(&s).unwrap();
        h.next_word();
        assert_eq!(h.state(), m.mul_vec(&s));
    }
    assert!(m.mul_vec(&BitVec::zeros(512)).is_zero());
}

#[test]
fn xorshift128_engine_has_irreducible_char_poly() {
    let g = seeded(Algorithm::Xorshift128Engine, 1);
    let p = char_poly(&transition_matrix(g.as_ref()).unwrap()).unwrap();
    assert_eq!(p.degree(), 128);
    assert!(p.is_irreducible());
}

#[test]
fn transition_matrix_refuses_nonlinear() {
    assert!(transition_matrix(seeded(Algorithm::Xoroshiro128PlusPlus, 1).as_ref()).is_err());
}

#[test]
fn xor_check_separates_linear_from_scrambled() {
    assert!(linearity_xor_check(seeded(Algorithm::Mt19937, 1).as_ref(), 8));
    assert!(!linearity_xor_check(seeded(Algorithm::Xoroshiro128PlusPlus, 1).as_ref(), 8));
    assert!(!linearity_xor_check(seeded(Algorithm::Aes128Ctr, 1).as_ref(), 8));
}

#[test]
fn minimal_polynomials_of_output_bits() {
    let mut g = seeded(Algorithm::Xorshift128Plus, 2);
    assert!(minimal_poly_of_bit(g.as_mut(), 0, 1024).unwrap().degree() <= 128);

    let engine = seeded(Algorithm::Xorshift128Engine, 2);
    for bit in [0, 13, 63] {
        let s = output_bit_sequence(engine.box_clone().as_mut(), bit, 320).unwrap();
        let p = minimal_poly_of_bit(engine.box_clone().as_mut(), bit, 320).unwrap();
        assert!(p.degree() <= 128);
        assert!(satisfies_recurrence(&p, &s));
    }

    let mut aes = seeded(Algorithm::Aes128Ctr, 2);
    let d = minimal_poly_of_bit(aes.as_mut(), 0, 2048).unwrap().degree();
    assert!(d.abs_diff(1024) <= 32, "{d}");
}

#[test]
fn low_weight_states() {
    let mut g = seeded(Algorithm::Mt19937, 1);
    set_low_weight_state(g.as_mut(), 0).unwrap();
    assert_eq!(g.state().count_ones(), 1);
    let ones: u32 = (0..1000).map(|_| g.next_word().count_ones()).sum();
    assert!(ones < 1000, "{ones} ones in 1000 words");

    let mut aes = seeded(Algorithm::Aes128Ctr, 1);
    set_low_weight_state(aes.as_mut(), 5).unwrap();
    assert_eq!(aes.state().count_ones(), 1);
    let n = aes.state_bits();
    assert!(set_low_weight_state(aes.as_mut(), n).is_err());
}
