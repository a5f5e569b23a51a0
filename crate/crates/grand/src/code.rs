//! Binary linear block codes in systematic form.
//!
//! A [`LinearCode`] stores a k x n generator `[I | C]` together with the
//! parity block `C`, from which the check matrix `[C^T | I]` is implied. The
//! consistency invariant `H * G^T = 0` holds by construction. Membership
//! testing is the unit of decoding work ("one query") throughout the crate.

use std::fmt;

use crate::bits::BitBlock;
use crate::rng::Rng;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid code dimensions n={n}, k={k} (need 1 <= k < n <= 4096)")]
    BadDimensions { n: usize, k: usize },
    #[error("invalid Reed-Muller order r={r}, m={m} (need 0 <= r <= m <= 12)")]
    BadReedMuller { r: usize, m: usize },
    #[error("word length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("generator rows are not linearly independent (rank {rank} < k={k})")]
    RankDeficient { rank: usize, k: usize },
    #[error("malformed code file: {0}")]
    BadFormat(String),
}

/// An [n, k] binary linear code with systematic generator `[I | C]`.
#[derive(Clone)]
pub struct LinearCode {
    n: usize,
    k: usize,
    /// Parity block C, one row of n-k bits per message bit.
    parity: Vec<BitBlock>,
    label: String,
    /// Column permutation applied to reach systematic form, if any:
    /// `permutation[new_column] = original_column`.
    permutation: Option<Vec<u32>>,
}

impl LinearCode {
    /// Systematic code from its parity block `C` (k rows of n-k bits each).
    pub fn from_parity(parity: Vec<BitBlock>, label: impl Into<String>) -> Result<Self, CodeError> {
        let k = parity.len();
        let nk = parity.first().map_or(0, BitBlock::len);
        let n = k + nk;
        if k == 0 || nk == 0 || n > crate::bits::MAX_LEN {
            return Err(CodeError::BadDimensions { n, k });
        }
        if parity.iter().any(|row| row.len() != nk) {
            return Err(CodeError::BadFormat("ragged parity rows".into()));
        }
        Ok(LinearCode {
            n,
            k,
            parity,
            label: label.into(),
            permutation: None,
        })
    }

    /// Random systematic linear code: the entries of `C` are independent
    /// Bernoulli(1/2), drawn row-major from `rng` (64 bits per raw output,
    /// least significant bit first), so a seed fully determines the code.
    pub fn rlc(n: usize, k: usize, rng: &mut Rng) -> Result<Self, CodeError> {
        if k == 0 || k >= n || n > crate::bits::MAX_LEN {
            return Err(CodeError::BadDimensions { n, k });
        }
        let parity = (0..k).map(|_| BitBlock::random(n - k, rng)).collect();
        LinearCode::from_parity(parity, format!("RLC[{n},{k}]"))
    }

    /// Reed-Muller code RM(r, m): n = 2^m, k = sum of C(m, i) for i <= r.
    ///
    /// Generator rows are the evaluation vectors of the degree <= r monomials
    /// (variable i of evaluation point x is bit i of x). The result is row
    /// reduced to systematic form; when that requires reordering columns the
    /// permutation is recorded and the label gains a "/perm" suffix.
    pub fn reed_muller(r: usize, m: usize) -> Result<Self, CodeError> {
        if r > m || m > 12 {
            return Err(CodeError::BadReedMuller { r, m });
        }
        let n = 1usize << m;
        let mut rows = Vec::new();
        // monomial subsets of {0..m-1} in (degree, value) order
        let mut subsets: Vec<u32> = (0..(1u32 << m))
            .filter(|s| (s.count_ones() as usize) <= r)
            .collect();
        subsets.sort_by_key(|s| (s.count_ones(), *s));
        for s in subsets {
            let mut row = BitBlock::zeros(n);
            for x in 0..n {
                if (x as u32) & s == s {
                    row.set(x, true);
                }
            }
            rows.push(row);
        }
        let k = rows.len();
        if k >= n {
            // r = m gives the full space, which has no parity bits
            return Err(CodeError::BadDimensions { n, k });
        }
        let (parity, permutation) = systematize(rows, n)?;
        let label = if permutation.is_some() {
            format!("RM({r},{m})/perm")
        } else {
            format!("RM({r},{m})")
        };
        Ok(LinearCode {
            n,
            k,
            parity,
            label,
            permutation,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Column permutation applied during systematization, if any.
    pub fn column_permutation(&self) -> Option<&[u32]> {
        self.permutation.as_deref()
    }

    /// Parity rows `C` (row j holds the parity contribution of message bit j).
    pub fn parity_rows(&self) -> &[BitBlock] {
        &self.parity
    }

    /// Row i of the systematic generator `[I | C]`, as an n-bit block.
    pub fn generator_row(&self, i: usize) -> BitBlock {
        assert!(i < self.k);
        let mut row = BitBlock::zeros(self.n);
        row.set(i, true);
        for j in self.parity[i].ones() {
            row.set(self.k + j, true);
        }
        row
    }

    /// Systematic encoding: the first k bits equal `msg`, the rest are
    /// `msg * C`.
    pub fn encode(&self, msg: &BitBlock) -> Result<BitBlock, CodeError> {
        if msg.len() != self.k {
            return Err(CodeError::LengthMismatch {
                expected: self.k,
                got: msg.len(),
            });
        }
        let mut parity = BitBlock::zeros(self.n - self.k);
        for j in msg.ones() {
            parity.xor_assign(&self.parity[j]);
        }
        let mut word = BitBlock::zeros(self.n);
        for i in msg.ones() {
            word.set(i, true);
        }
        for j in parity.ones() {
            word.set(self.k + j, true);
        }
        Ok(word)
    }

    /// Code-book membership via the systematic shortcut: recompute the parity
    /// of the first k bits and compare with the trailing n-k bits.
    pub fn is_member(&self, word: &BitBlock) -> Result<bool, CodeError> {
        Ok(self.syndrome(word)?.is_zero())
    }

    /// Syndrome `H * word^T` with `H = [C^T | I]`, as an (n-k)-bit block.
    pub fn syndrome(&self, word: &BitBlock) -> Result<BitBlock, CodeError> {
        if word.len() != self.n {
            return Err(CodeError::LengthMismatch {
                expected: self.n,
                got: word.len(),
            });
        }
        let mut s = BitBlock::zeros(self.n - self.k);
        for i in word.ones() {
            if i < self.k {
                s.xor_assign(&self.parity[i]);
            } else {
                s.flip(i - self.k);
            }
        }
        Ok(s)
    }

    /// Membership via explicit check-matrix rows (one dot product per parity
    /// constraint). Slower than [`Self::is_member`]; kept as the independent
    /// route for cross-checking.
    pub fn is_member_by_check_rows(&self, word: &BitBlock) -> Result<bool, CodeError> {
        if word.len() != self.n {
            return Err(CodeError::LengthMismatch {
                expected: self.n,
                got: word.len(),
            });
        }
        for i in 0..self.n - self.k {
            let mut row = BitBlock::zeros(self.n);
            for (j, parity) in self.parity.iter().enumerate() {
                if parity.get(i) {
                    row.set(j, true);
                }
            }
            row.set(self.k + i, true);
            if word.dot(&row) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Plain-text export: first line "n k", then the k generator rows as
    /// '0'/'1' strings with bit index 0 leftmost.
    pub fn export(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for i in 0..self.k {
            out.push_str(&self.generator_row(i).to_string());
            out.push('\n');
        }
        out
    }

    /// Parse the plain-text format produced by [`Self::export`]. Arbitrary
    /// full-rank generators are accepted and brought to systematic form the
    /// same way as Reed-Muller construction.
    pub fn import(text: &str, label: impl Into<String>) -> Result<Self, CodeError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| CodeError::BadFormat("empty file".into()))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| CodeError::BadFormat("bad header".into()))?;
        let k: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| CodeError::BadFormat("bad header".into()))?;
        if k == 0 || k >= n || n > crate::bits::MAX_LEN {
            return Err(CodeError::BadDimensions { n, k });
        }
        let mut rows = Vec::with_capacity(k);
        for _ in 0..k {
            let line = lines
                .next()
                .ok_or_else(|| CodeError::BadFormat("missing generator row".into()))?;
            let row: BitBlock = line
                .trim()
                .parse()
                .map_err(|e| CodeError::BadFormat(format!("{e}")))?;
            if row.len() != n {
                return Err(CodeError::LengthMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            rows.push(row);
        }
        let (parity, permutation) = systematize(rows, n)?;
        let mut code = LinearCode::from_parity(parity, label)?;
        code.permutation = permutation;
        Ok(code)
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCode({} [{},{}])", self.label, self.n, self.k)
    }
}

/// Reduce `rows` to systematic form `[I | C]`, permuting columns when the
/// leading k x k block is singular. Pivot columns are chosen greedily left to
/// right; the returned permutation maps new column index to original index
/// (None when no reordering was needed).
fn systematize(
    mut rows: Vec<BitBlock>,
    n: usize,
) -> Result<(Vec<BitBlock>, Option<Vec<u32>>), CodeError> {
    let k = rows.len();
    let mut pivots: Vec<usize> = Vec::with_capacity(k);
    let mut rank = 0;
    for col in 0..n {
        if rank == k {
            break;
        }
        let Some(pivot_row) = (rank..k).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rank < k {
        return Err(CodeError::RankDeficient { rank, k });
    }
    let is_identity_front = pivots.iter().enumerate().all(|(i, &c)| i == c);
    let order: Vec<usize> = if is_identity_front {
        (0..n).collect()
    } else {
        let mut order = pivots.clone();
        order.extend((0..n).filter(|c| !pivots.contains(c)));
        order
    };
    let parity = rows
        .iter()
        .map(|row| {
            let mut p = BitBlock::zeros(n - k);
            for (new_col, &old_col) in order.iter().enumerate().skip(k) {
                if row.get(old_col) {
                    p.set(new_col - k, true);
                }
            }
            p
        })
        .collect();
    let permutation = if is_identity_front {
        None
    } else {
        Some(order.iter().map(|&c| c as u32).collect())
    };
    Ok((parity, permutation))
}
