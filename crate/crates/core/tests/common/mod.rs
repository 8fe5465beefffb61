#![allow(dead_code)]

use prngaudit::generators::{
    Generator, Mt19937, Mt19937_64, SplitMix64, Xoroshiro128PlusPlus, Xoshiro256PlusPlus,
};

/// Hex words from `tests/fixtures/<name>.txt`, one per line.
pub fn fixture(name: &str) -> Vec<u64> {
    let path = format!("{}/tests/fixtures/{name}.txt", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{path}: {e}"))
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| u64::from_str_radix(l.trim(), 16).expect("hex word"))
        .collect()
}

/// Each fixture paired with a generator seeded the way the reference
/// implementation was.
pub fn reference_generators() -> Vec<(&'static str, Box<dyn Generator>)> {
    let mut sm = SplitMix64::new(0);
    let two = [sm.next(), sm.next()];
    let mut sm = SplitMix64::new(0);
    let four = [sm.next(), sm.next(), sm.next(), sm.next()];
    vec![
        ("mt19937", Box::new(Mt19937::new(5489))),
        ("mt19937_64", Box::new(Mt19937_64::new(5489))),
        ("splitmix64", Box::new(SplitMix64::new(0))),
        ("xoroshiro128plusplus", Box::new(Xoroshiro128PlusPlus::new(two))),
        ("xoshiro256plusplus", Box::new(Xoshiro256PlusPlus::new(four))),
    ]
}

/// Index of the first mismatch against the fixture, if any.
pub fn first_mismatch(name: &str, g: &mut dyn Generator) -> Option<usize> {
    fixture(name).iter().position(|&w| g.next_word() != w)
}
