//! Deterministic program and input generation for the verification suites:
//! a canonical enumeration of small cyclic tag programs and seeded random
//! sampling for the larger spaces.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cyclic::{BinaryWord, CyclicTagSystem};

/// Seeded RNG used across the randomized suites.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All binary words of length ≤ `max_len` in (length, value) order:
/// ε, 0, 1, 00, 01, 10, 11, ...
pub fn words_up_to(max_len: usize) -> Vec<BinaryWord> {
    let mut out = Vec::new();
    for len in 0..=max_len {
        for value in 0u64..(1 << len) {
            out.push(
                (0..len)
                    .map(|i| (value >> (len - 1 - i)) & 1 == 1)
                    .collect(),
            );
        }
    }
    out
}

/// All binary words of exactly `len` in value order.
pub fn words_of_len(len: usize) -> Vec<BinaryWord> {
    (0u64..(1 << len))
        .map(|value| {
            (0..len)
                .map(|i| (value >> (len - 1 - i)) & 1 == 1)
                .collect()
        })
        .collect()
}

/// Canonical enumeration of all cyclic tag programs with at most `max_p`
/// appendants of length at most `max_len`, capped to at most `cap` programs
/// by stride-sampling the full ordering so the cap still spans the space.
pub fn enumerate_programs(max_p: usize, max_len: usize, cap: usize) -> Vec<CyclicTagSystem> {
    let words = words_up_to(max_len);
    let w = words.len() as u64;
    let mut total: u64 = 0;
    for p in 1..=max_p {
        total += w.pow(p as u32);
    }
    let stride = total.div_ceil(cap as u64).max(1);

    let mut out = Vec::new();
    let mut index: u64 = 0;
    for p in 1..=max_p {
        let count = w.pow(p as u32);
        for code in 0..count {
            if index.is_multiple_of(stride) {
                let mut appendants = Vec::with_capacity(p);
                let mut c = code;
                for _ in 0..p {
                    appendants.push(words[(c % w) as usize].clone());
                    c /= w;
                }
                out.push(CyclicTagSystem::new(appendants));
            }
            index += 1;
        }
    }
    out
}

/// A random program with p ∈ [1, max_p] appendants of lengths ≤ max_len.
pub fn random_program(rng: &mut ChaCha8Rng, max_p: usize, max_len: usize) -> CyclicTagSystem {
    let p = rng.gen_range(1..=max_p);
    let appendants = (0..p)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            (0..len).map(|_| rng.gen_bool(0.5)).collect()
        })
        .collect();
    CyclicTagSystem::new(appendants)
}

/// A random non-empty input word with length in [min_len.max(1), max_len].
pub fn random_input(rng: &mut ChaCha8Rng, min_len: usize, max_len: usize) -> BinaryWord {
    let lo = min_len.max(1);
    let len = rng.gen_range(lo..=max_len.max(lo));
    (0..len).map(|_| rng.gen_bool(0.5)).collect()
}

/// Deterministic spread of inputs for one length: exhaustive when 2^len is
/// within `budget`, otherwise `budget` seeded samples (deduplicated).
pub fn inputs_of_len(len: usize, budget: usize, seed: u64) -> Vec<BinaryWord> {
    if len <= 16 && (1usize << len) <= budget {
        return words_of_len(len);
    }
    let mut rng = rng(seed ^ (len as u64) << 32);
    let mut out: Vec<BinaryWord> = Vec::with_capacity(budget);
    while out.len() < budget {
        let candidate: BinaryWord = (0..len).map(|_| rng.gen_bool(0.5)).collect();
        if !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}
