mod common;

use common::{first_mismatch, fixture, reference_generators};
use prngaudit::generators::{Aes128, Generator, Mt19937};

#[test]
fn fixtures_hold_enough_words() {
    for (name, _) in reference_generators() {
        assert!(fixture(name).len() >= 1000, "{name}");
    }
}

#[test]
fn generators_match_reference_streams() {
    for (name, mut g) in reference_generators() {
        assert_eq!(first_mismatch(name, g.as_mut()), None, "{name}");
    }
}

#[test]
fn mt19937_10000th_output() {
    let mut g = Mt19937::new(5489);
    let last = (0..10_000).map(|_| g.next_word()).last().unwrap();
    assert_eq!(last, 4_123_659_995);
}

#[test]
fn aes_fips197_example() {
    let key: [u8; 16] = std::array::from_fn(|i| i as u8);
    let pt: [u8; 16] = std::array::from_fn(|i| (i as u8) * 0x11);
    let ct = Aes128::new(key).encrypt_block(pt);
    assert_eq!(u128::from_be_bytes(ct), 0x69c4e0d86a7b0430d8cdb78070b4c55a);
}
