//! Exact ground truth at small scale: maximum-code search, distance and
//! triple statistics, and the anchored-constraint reduction geometry.

mod reduce;
mod search;
mod stats;

pub use reduce::{reduce_lambda2, reduce_lambda4, BlockShape};
pub use search::{exact_max_code, SearchResult};
pub use stats::{cw_triple_stats, distance_distribution, triple_stats, CwTripleStats, TripleStats};

use std::fmt;

use thiserror::Error;

/// A binary word of length `n <= 32`, stored as the low bits of a `u32`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitWord {
    bits: u32,
    len: u8,
}

impl BitWord {
    pub fn new(bits: u32, len: usize) -> Self {
        assert!(len <= 32, "word length limited to 32");
        let mask = if len == 32 { u32::MAX } else { (1u32 << len) - 1 };
        BitWord {
            bits: bits & mask,
            len: len as u8,
        }
    }

    /// Parse a word from a binary string such as `"01101"`.
    pub fn parse(s: &str) -> Result<Self, CodeError> {
        if s.is_empty() || s.len() > 32 {
            return Err(CodeError::BadWord(s.to_string()));
        }
        let mut bits = 0u32;
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << pos,
                _ => return Err(CodeError::BadWord(s.to_string())),
            }
        }
        Ok(BitWord::new(bits, s.len()))
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn distance(&self, other: &BitWord) -> usize {
        debug_assert_eq!(self.len, other.len);
        (self.bits ^ other.bits).count_ones() as usize
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 0..self.len() {
            write!(f, "{}", (self.bits >> pos) & 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A set of distinct binary words of common length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    n: usize,
    words: Vec<BitWord>,
}

impl Code {
    pub fn new(n: usize, mut words: Vec<BitWord>) -> Result<Self, CodeError> {
        if words.iter().any(|w| w.len() != n) {
            return Err(CodeError::LengthMismatch);
        }
        words.sort();
        words.dedup();
        Ok(Code { n, words })
    }

    pub fn from_bits(n: usize, bits: &[u32]) -> Self {
        Code::new(n, bits.iter().map(|&b| BitWord::new(b, n)).collect()).unwrap()
    }

    /// Parse a code from newline-separated binary strings.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let words: Vec<BitWord> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(BitWord::parse)
            .collect::<Result<_, _>>()?;
        let n = words.first().map(|w| w.len()).ok_or(CodeError::Empty)?;
        Code::new(n, words)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in &self.words {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[BitWord] {
        &self.words
    }

    /// Minimum pairwise distance; `None` for codes with fewer than two words.
    pub fn min_distance(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (a, x) in self.words.iter().enumerate() {
            for y in &self.words[a + 1..] {
                let d = x.distance(y);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    }

    pub fn is_constant_weight(&self, w: usize) -> bool {
        self.words.iter().all(|x| x.weight() == w)
    }
}

/// Anchoring constraints: each codeword must lie at distance `d_i` from `X_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    pub anchors: Vec<(BitWord, usize)>,
}

impl ConstraintSet {
    pub fn empty() -> Self {
        ConstraintSet::default()
    }

    pub fn single(anchor: BitWord, dist: usize) -> Self {
        ConstraintSet {
            anchors: vec![(anchor, dist)],
        }
    }

    /// Constant-weight constraint: distance `w` from the zero word.
    pub fn weight(n: usize, w: usize) -> Self {
        ConstraintSet::single(BitWord::new(0, n), w)
    }

    pub fn admits(&self, word: &BitWord) -> bool {
        self.anchors.iter().all(|(x, d)| word.distance(x) == *d)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("word is not a binary string of length 1..=32: {0:?}")]
    BadWord(String),
    #[error("word length differs from code length")]
    LengthMismatch,
    #[error("empty code text")]
    Empty,
    #[error("code is not constant-weight {0}")]
    NotConstantWeight(usize),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let w = BitWord::parse("01101").unwrap();
        assert_eq!(w.to_string(), "01101");
        assert_eq!(w.weight(), 3);
        let c = Code::parse("000\n111\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.to_text(), "000\n111\n");
        assert_eq!(c.min_distance(), Some(3));
    }

    #[test]
    fn rejects_garbage() {
        assert!(BitWord::parse("01x").is_err());
        assert!(BitWord::parse("").is_err());
        assert!(Code::new(3, vec![BitWord::new(0, 4)]).is_err());
    }

    #[test]
    fn constraint_filters() {
        let lam = ConstraintSet::weight(6, 3);
        assert!(lam.admits(&BitWord::parse("111000").unwrap()));
        assert!(!lam.admits(&BitWord::parse("110000").unwrap()));
    }
}
