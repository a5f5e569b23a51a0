//! Packed binary vectors.
//!
//! A [`BitBlock`] holds codewords, received words, noise patterns and
//! reliability masks of up to 4096 bits. Bit index 0 is the leftmost
//! character in the text representation.

use std::fmt;
use std::str::FromStr;

use crate::rng::Rng;

/// Maximum supported block length in bits.
pub const MAX_LEN: usize = 4096;

/// Fixed-length packed binary vector.
///
/// Storage invariant: bits at positions >= `len` are zero in the backing
/// words, so word-wise equality, weight and zero tests are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitBlock {
    len: usize,
    words: Vec<u64>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("length {0} exceeds the {MAX_LEN}-bit limit")]
    TooLong(usize),
    #[error("invalid character {0:?} in bit string (expected '0' or '1')")]
    BadChar(char),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

impl BitBlock {
    /// All-zero block of `len` bits.
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_LEN, "block length {len} exceeds {MAX_LEN}");
        BitBlock {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Block with uniformly random bits, consuming one raw generator output
    /// per 64 bits. Bit `i` is bit `i % 64` of the `i / 64`-th output.
    pub fn random(len: usize, rng: &mut Rng) -> Self {
        let mut b = BitBlock::zeros(len);
        for w in &mut b.words {
            *w = rng.next_u64();
        }
        b.mask_tail();
        b
    }

    /// Block whose set positions are exactly `positions`.
    pub fn from_positions(len: usize, positions: &[usize]) -> Self {
        let mut b = BitBlock::zeros(len);
        for &i in positions {
            b.set(i, true);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let (w, b) = (i / 64, i % 64);
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    /// Number of set bits.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn xor(&self, other: &BitBlock) -> BitBlock {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn xor_assign(&mut self, other: &BitBlock) {
        assert_eq!(self.len, other.len, "xor length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&self, other: &BitBlock) -> BitBlock {
        assert_eq!(self.len, other.len, "and length mismatch");
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    /// `self AND NOT other`, within the block length.
    pub fn and_not(&self, other: &BitBlock) -> BitBlock {
        assert_eq!(self.len, other.len, "and_not length mismatch");
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        out.mask_tail();
        out
    }

    /// Parity of `self AND other` (dot product over GF(2)).
    pub fn dot(&self, other: &BitBlock) -> bool {
        assert_eq!(self.len, other.len, "dot length mismatch");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Backing words, least-significant bit first.
    pub fn as_words(&self) -> &[u64] {
        &self.words
    }

    fn mask_tail(&mut self) {
        let used = self.len % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
        if self.len == 0 {
            self.words.clear();
        }
    }
}

impl fmt::Display for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitBlock({self})")
    }
}

impl FromStr for BitBlock {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, BitsError> {
        if s.len() > MAX_LEN {
            return Err(BitsError::TooLong(s.len()));
        }
        let mut b = BitBlock::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => b.set(i, true),
                other => return Err(BitsError::BadChar(other)),
            }
        }
        Ok(b)
    }
}
