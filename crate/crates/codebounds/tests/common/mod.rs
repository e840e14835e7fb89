//! Shared helpers for the integration suites: deterministic random codes
//! and statistics assignments.
#![allow(dead_code)] // each test binary uses a subset

use codebounds::oracle::{exact_max_code, BitWord, Code, ConstraintSet};
use codebounds::tbounds::{normalize, McwSpec};
use codebounds::sdp::VariableKey;
use num_rational::BigRational;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Greedy random code: sample words, keep those at distance >= d_target
/// from everything kept so far. The returned code's true minimum distance
/// may exceed the target; callers should use `min_distance()`.
pub fn random_code(rng: &mut ChaCha8Rng, n: usize, d_target: usize, max_size: usize) -> Code {
    let mut words: Vec<BitWord> = Vec::new();
    let space = 1u64 << n;
    for _ in 0..space.min(4000) {
        if words.len() >= max_size {
            break;
        }
        let bits = (rng.next_u64() % space) as u32;
        let cand = BitWord::new(bits, n);
        if words.iter().all(|w| w.distance(&cand) >= d_target) {
            words.push(cand);
        }
    }
    Code::new(n, words).unwrap()
}

/// Greedy random constant-weight code.
pub fn random_cw_code(
    rng: &mut ChaCha8Rng,
    n: usize,
    d_target: usize,
    w: usize,
    max_size: usize,
) -> Code {
    let mut words: Vec<BitWord> = Vec::new();
    for _ in 0..4000 {
        if words.len() >= max_size {
            break;
        }
        // random weight-w word by shuffling coordinate indices
        let mut coords: Vec<usize> = (0..n).collect();
        coords.shuffle(rng);
        let mut bits = 0u32;
        for &c in coords.iter().take(w) {
            bits |= 1 << c;
        }
        let cand = BitWord::new(bits, n);
        if words.iter().all(|x| x.distance(&cand) >= d_target) {
            words.push(cand);
        }
    }
    Code::new(n, words).unwrap()
}

/// Assignment closure over unrestricted triple statistics.
pub fn stats_fn(
    stats: &codebounds::oracle::TripleStats,
) -> impl Fn(&VariableKey) -> BigRational + '_ {
    move |key| codebounds::sdp::stats_value(stats, key)
}

/// Assignment closure over constant-weight triple statistics.
pub fn cw_stats_fn(
    stats: &codebounds::oracle::CwTripleStats,
) -> impl Fn(&VariableKey) -> BigRational + '_ {
    move |key| codebounds::sdp::stats_value_cw(stats, key)
}

/// Exact maximum size of a multiply constant-weight code by search: the
/// anchor set fixes the number of ones on every block.
pub fn oracle_value(spec: &McwSpec, budget: u64) -> (usize, bool) {
    let n: usize = spec.total_length();
    assert!(n <= 16);
    let mut anchors = vec![(BitWord::new(0, n), spec.total_weight())];
    let mut offset = 0;
    for &(w, len) in &spec.pairs {
        // anchor with ones exactly on this block: distance len - w + (W - w)
        let mut bits = 0u32;
        for b in 0..len {
            bits |= 1 << (offset + b);
        }
        let dist = (len - w) + (spec.total_weight() - w);
        anchors.push((BitWord::new(bits, n), dist));
        offset += len;
    }
    let result = exact_max_code(n, spec.d, &ConstraintSet { anchors }, budget);
    (result.size, result.exact)
}

/// All canonical specs with at most `max_blocks` blocks and total length at
/// most `max_len`.
pub fn enumerate_specs(max_blocks: usize, max_len: usize) -> Vec<McwSpec> {
    let mut pairs = Vec::new();
    for n in 2..=max_len {
        for w in 1..=n / 2 {
            pairs.push((w, n));
        }
    }
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<(usize, usize)>, usize, usize)> = vec![(Vec::new(), 0, 0)];
    while let Some((chosen, from, used)) = stack.pop() {
        if !chosen.is_empty() {
            let total_w: usize = chosen.iter().map(|p| p.0).sum();
            for d in (2..=2 * total_w + 2).step_by(2) {
                if let Ok(spec) = normalize(&McwSpec::new(chosen.clone(), d)) {
                    out.push(spec);
                }
            }
        }
        if chosen.len() == max_blocks {
            continue;
        }
        for (idx, &(w, n)) in pairs.iter().enumerate().skip(from) {
            if used + n <= max_len {
                let mut next = chosen.clone();
                next.push((w, n));
                stack.push((next, idx, used + n));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

