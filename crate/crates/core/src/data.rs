//! Seeded input generation.
//!
//! Values come from SplitMix64: element `i` is the upper 32 bits of the
//! `i`-th output, read as a signed integer.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::lanes::Element;

pub fn gen_data(n: usize, seed: u64) -> Vec<Element> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    (0..n).map(|_| (rng.next_u64() >> 32) as u32 as Element).collect()
}

/// Input shapes used by the correctness suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Random,
    Sorted,
    Reverse,
    Constant,
    Sawtooth,
    /// Values drawn from a range of 16.
    FewDistinct,
}

impl Pattern {
    pub const ALL: [Pattern; 6] = [
        Pattern::Random,
        Pattern::Sorted,
        Pattern::Reverse,
        Pattern::Constant,
        Pattern::Sawtooth,
        Pattern::FewDistinct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pattern::Random => "random",
            Pattern::Sorted => "sorted",
            Pattern::Reverse => "reverse",
            Pattern::Constant => "constant",
            Pattern::Sawtooth => "sawtooth",
            Pattern::FewDistinct => "few-distinct",
        }
    }

    pub fn generate(self, n: usize, seed: u64) -> Vec<Element> {
        match self {
            Pattern::Random => gen_data(n, seed),
            Pattern::Sorted => {
                let mut v = gen_data(n, seed);
                v.sort_unstable();
                v
            }
            Pattern::Reverse => {
                let mut v = gen_data(n, seed);
                v.sort_unstable_by(|a, b| b.cmp(a));
                v
            }
            Pattern::Constant => vec![(seed as Element) ^ 0x5a5a; n],
            Pattern::Sawtooth => {
                let period = 1 + (seed as usize % 61) + 3;
                (0..n).map(|i| (i % period) as Element).collect()
            }
            Pattern::FewDistinct => gen_data(n, seed).into_iter().map(|x| x & 15).collect(),
        }
    }
}
