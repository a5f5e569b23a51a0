//! Noise-guessing decoders: GRAND, GRANDAB, SRGRAND and SRGRANDAB.
//!
//! All four algorithms are one guessing loop parameterized by a position set
//! and a query budget. Candidate noise patterns over the positions are tried
//! in canonical ML order (nondecreasing weight, colex within a weight); the
//! first candidate whose removal from the received word lands in the
//! code-book is the decoding. GRAND is the loop over all n positions,
//! SRGRAND restricts it to the reliability mask, and the AB variants abandon
//! once the budget is spent. Every code-book membership test counts as one
//! query; the loop maintains the syndrome incrementally so a query costs a
//! couple of XORs.
//!
//! The canonical order is ML for i.i.d. flips with probability below 1/2;
//! for an anti-noise channel (p > 1/2) the complemented patterns would be
//! the ML order instead.

use num_bigint::BigUint;

use crate::bits::BitBlock;
use crate::channel::SrBscParams;
use crate::code::LinearCode;
use crate::guesswork::{patterns_up_to_weight, QueryCount};
use crate::ldp::binary_entropy;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("word length {got} does not match block length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("channel parameters required to resolve a MeanMask entropy budget")]
    MissingChannelParams,
    #[error("cannot derive a matched budget from this abandonment rule")]
    UnsupportedMatchedBudget,
}

/// Which block length multiplies the per-symbol entropy in an entropy-typical
/// query budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetScale {
    /// Full block length n.
    FullBlock,
    /// Mean number of potentially noise-impacted symbols, q * n.
    MeanMask,
    /// The realized mask weight of the transmission being decoded. Exposed
    /// for experiments only; no error-exponent claim is made for it.
    RealizedMask,
}

/// When to give up guessing and declare an error.
#[derive(Debug, Clone, PartialEq)]
pub enum AbandonmentRule {
    /// Never abandon; the all-codeword sweep always terminates.
    None,
    /// Stop after every pattern of weight at most w has been tried.
    MaxWeight(u32),
    /// Stop after exactly this many code-book queries.
    MaxQueries(QueryCount),
    /// Stop after ceil(2^(scale * (H + delta))) queries, the typical-set
    /// budget for the chosen scale.
    EntropyTypical {
        /// Noise entropy H in bits per potentially noise-impacted symbol.
        entropy_bits: f64,
        delta: f64,
        scale: BudgetScale,
    },
}

/// Default slack above the typical set, in bits per symbol.
pub const DEFAULT_ENTROPY_DELTA: f64 = 0.05;

impl AbandonmentRule {
    /// Entropy-typical rule with H = h2(p) taken from the channel parameters.
    pub fn entropy_typical(params: &SrBscParams, delta: f64, scale: BudgetScale) -> Self {
        AbandonmentRule::EntropyTypical {
            entropy_bits: binary_entropy(params.p),
            delta,
            scale,
        }
    }
}

/// A resolved query budget.
#[derive(Debug, Clone, PartialEq)]
pub enum Budget {
    Unlimited,
    Queries(QueryCount),
}

impl Budget {
    /// Budget as a saturating u64 loop bound. Budgets beyond 2^64 - 1
    /// queries are indistinguishable from unlimited in any feasible run.
    fn as_u64_saturating(&self) -> u64 {
        match self {
            Budget::Unlimited => u64::MAX,
            Budget::Queries(q) => {
                let digits = q.to_u64_digits();
                match digits.len() {
                    0 => 0,
                    1 => digits[0],
                    _ => u64::MAX,
                }
            }
        }
    }
}

/// Resolve an abandonment rule into a concrete query budget.
///
/// `mask_weight` is the length of the pattern space being searched: n for
/// GRAND, the reliability-mask weight for SRGRAND. MaxWeight budgets count
/// the patterns of the search space up to the weight cap; entropy-typical
/// budgets are ceil(2^(scale * (H + delta))), where the MeanMask scale
/// q * n needs the channel parameters.
pub fn resolve_budget(
    rule: &AbandonmentRule,
    n: usize,
    mask_weight: usize,
    params: Option<&SrBscParams>,
) -> Result<Budget, DecodeError> {
    match rule {
        AbandonmentRule::None => Ok(Budget::Unlimited),
        AbandonmentRule::MaxWeight(w) => Ok(Budget::Queries(patterns_up_to_weight(
            mask_weight as u64,
            *w as u64,
        ))),
        AbandonmentRule::MaxQueries(q) => Ok(Budget::Queries(q.clone())),
        AbandonmentRule::EntropyTypical {
            entropy_bits,
            delta,
            scale,
        } => {
            let scale_symbols = match scale {
                BudgetScale::FullBlock => n as f64,
                BudgetScale::MeanMask => {
                    let params = params.ok_or(DecodeError::MissingChannelParams)?;
                    params.q * n as f64
                }
                BudgetScale::RealizedMask => mask_weight as f64,
            };
            Ok(Budget::Queries(ceil_pow2(scale_symbols * (entropy_bits + delta))))
        }
    }
}

/// SRGRANDAB rule granting the same number of code-book queries as a GRANDAB
/// rule resolves to at block length n.
pub fn matched_budget_srgrandab(
    grandab_rule: &AbandonmentRule,
    n: usize,
) -> Result<AbandonmentRule, DecodeError> {
    match grandab_rule {
        AbandonmentRule::MaxWeight(w) => Ok(AbandonmentRule::MaxQueries(patterns_up_to_weight(
            n as u64, *w as u64,
        ))),
        AbandonmentRule::MaxQueries(q) => Ok(AbandonmentRule::MaxQueries(q.clone())),
        AbandonmentRule::None | AbandonmentRule::EntropyTypical { .. } => {
            Err(DecodeError::UnsupportedMatchedBudget)
        }
    }
}

/// ceil(2^x) as an exact big integer (relative precision ~1e-15 for large x).
fn ceil_pow2(x: f64) -> BigUint {
    if x <= 0.0 {
        return BigUint::from(1u32);
    }
    if x < 52.0 {
        return BigUint::from(x.exp2().ceil() as u64);
    }
    // split into integer and fractional parts; represent 2^frac in 52-bit
    // fixed point and shift
    let ip = x.floor();
    let frac = x - ip;
    let mantissa = (frac.exp2() * (1u64 << 52) as f64).ceil() as u64;
    BigUint::from(mantissa) << ((ip as u64) - 52)
}

/// Decoder verdict plus exact query accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    /// Number of code-book membership tests performed.
    pub queries: QueryCount,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecodeStatus {
    Decoded {
        /// The code-book element found.
        word: BitBlock,
        /// The noise pattern whose removal produced it.
        noise: BitBlock,
    },
    Abandoned,
}

impl DecodeOutcome {
    pub fn is_decoded(&self) -> bool {
        matches!(self.status, DecodeStatus::Decoded { .. })
    }

    pub fn word(&self) -> Option<&BitBlock> {
        match &self.status {
            DecodeStatus::Decoded { word, .. } => Some(word),
            DecodeStatus::Abandoned => None,
        }
    }

    pub fn noise(&self) -> Option<&BitBlock> {
        match &self.status {
            DecodeStatus::Decoded { noise, .. } => Some(noise),
            DecodeStatus::Abandoned => None,
        }
    }

    /// Query count as a u64 (counts above 2^64 are not reachable in practice).
    pub fn queries_u64(&self) -> u64 {
        let digits = self.queries.to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0],
            _ => u64::MAX,
        }
    }
}

/// Hard-detection GRAND: guess full-length noise patterns in canonical ML
/// order, return the first code-book member, or abandon when the budget is
/// exhausted. With `AbandonmentRule::None` the sweep always decodes, and the
/// result is an ML decoding for i.i.d. BSC noise.
pub fn grand(
    code: &LinearCode,
    received: &BitBlock,
    rule: &AbandonmentRule,
) -> Result<DecodeOutcome, DecodeError> {
    grand_with_params(code, received, rule, None)
}

/// [`grand`] with channel parameters available for entropy-typical budgets.
pub fn grand_with_params(
    code: &LinearCode,
    received: &BitBlock,
    rule: &AbandonmentRule,
    params: Option<&SrBscParams>,
) -> Result<DecodeOutcome, DecodeError> {
    let n = code.n();
    if received.len() != n {
        return Err(DecodeError::LengthMismatch {
            expected: n,
            got: received.len(),
        });
    }
    let positions: Vec<u32> = (0..n as u32).collect();
    let budget = resolve_budget(rule, n, n, params)?;
    Ok(guess_loop(code, received, &positions, &budget))
}

/// Symbol-reliability GRAND: guess only on the set positions of `mask`.
/// Under a truthful mask this is an ML decoding for the symbol-reliability
/// channel; if the masked subspace is exhausted without finding a member
/// (possible only with untruthful masks) the outcome is Abandoned with
/// queries = 2^weight(mask).
pub fn srgrand(
    code: &LinearCode,
    received: &BitBlock,
    mask: &BitBlock,
    rule: &AbandonmentRule,
) -> Result<DecodeOutcome, DecodeError> {
    srgrand_with_params(code, received, mask, rule, None)
}

/// [`srgrand`] with channel parameters available for entropy-typical budgets.
pub fn srgrand_with_params(
    code: &LinearCode,
    received: &BitBlock,
    mask: &BitBlock,
    rule: &AbandonmentRule,
    params: Option<&SrBscParams>,
) -> Result<DecodeOutcome, DecodeError> {
    let n = code.n();
    if received.len() != n {
        return Err(DecodeError::LengthMismatch {
            expected: n,
            got: received.len(),
        });
    }
    if mask.len() != n {
        return Err(DecodeError::LengthMismatch {
            expected: n,
            got: mask.len(),
        });
    }
    let positions: Vec<u32> = mask.ones().map(|i| i as u32).collect();
    let budget = resolve_budget(rule, n, positions.len(), params)?;
    Ok(guess_loop(code, received, &positions, &budget))
}

/// Syndrome word wide enough for one machine register.
trait SynWord: Copy + Eq {
    fn from_words(words: &[u64]) -> Self;
    fn xor(self, other: Self) -> Self;
    fn is_zero(self) -> bool;
}

impl SynWord for u64 {
    fn from_words(words: &[u64]) -> Self {
        words.first().copied().unwrap_or(0)
    }
    fn xor(self, other: Self) -> Self {
        self ^ other
    }
    fn is_zero(self) -> bool {
        self == 0
    }
}

impl SynWord for u128 {
    fn from_words(words: &[u64]) -> Self {
        let lo = words.first().copied().unwrap_or(0) as u128;
        let hi = words.get(1).copied().unwrap_or(0) as u128;
        lo | (hi << 64)
    }
    fn xor(self, other: Self) -> Self {
        self ^ other
    }
    fn is_zero(self) -> bool {
        self == 0
    }
}

/// The single guessing loop behind all four decoders.
fn guess_loop(
    code: &LinearCode,
    received: &BitBlock,
    positions: &[u32],
    budget: &Budget,
) -> DecodeOutcome {
    let nk = code.n() - code.k();
    let outcome = if nk <= 64 {
        guess_loop_packed::<u64>(code, received, positions, budget)
    } else if nk <= 128 {
        guess_loop_packed::<u128>(code, received, positions, budget)
    } else {
        guess_loop_wide(code, received, positions, budget)
    };
    if let DecodeStatus::Decoded { word, noise } = &outcome.status {
        debug_assert!(code.is_member(word).unwrap());
        debug_assert_eq!(received.xor(noise), *word);
    }
    outcome
}

/// Syndrome column of the check matrix [C^T | I] for a given bit position,
/// as backing words.
fn column_words(code: &LinearCode, pos: usize, out: &mut Vec<u64>) {
    let k = code.k();
    let nk_words = (code.n() - k).div_ceil(64);
    out.clear();
    if pos < k {
        out.extend_from_slice(code.parity_rows()[pos].as_words());
        out.resize(nk_words, 0);
    } else {
        out.resize(nk_words, 0);
        out[(pos - k) / 64] = 1u64 << ((pos - k) % 64);
    }
}

fn guess_loop_packed<W: SynWord>(
    code: &LinearCode,
    received: &BitBlock,
    positions: &[u32],
    budget: &Budget,
) -> DecodeOutcome {
    let l = positions.len();
    let mut scratch = Vec::new();
    let cols: Vec<W> = positions
        .iter()
        .map(|&p| {
            column_words(code, p as usize, &mut scratch);
            W::from_words(&scratch)
        })
        .collect();
    let base = W::from_words(code.syndrome(received).expect("length checked").as_words());
    let budget_cap = budget.as_u64_saturating();
    let mut queries: u64 = 0;

    // weight 0: the all-zero pattern
    if budget_cap >= 1 {
        queries = 1;
        if base.is_zero() {
            return finish(code, received, positions, &[], queries);
        }
    }

    let mut comb: Vec<u32> = Vec::with_capacity(l);
    for w in 1..=l {
        comb.clear();
        comb.extend(0..w as u32);
        let mut acc = base;
        for &c in &comb {
            acc = acc.xor(cols[c as usize]);
        }
        loop {
            if queries >= budget_cap {
                return DecodeOutcome {
                    status: DecodeStatus::Abandoned,
                    queries: BigUint::from(queries),
                };
            }
            queries += 1;
            if acc.is_zero() {
                return finish(code, received, positions, &comb, queries);
            }
            // colex successor, updating the syndrome with the changed columns
            let mut advanced = false;
            for i in 0..w {
                let next = if i + 1 < w { comb[i + 1] } else { l as u32 };
                if comb[i] + 1 < next {
                    if comb[i] > i as u32 {
                        for j in 0..i {
                            acc = acc.xor(cols[comb[j] as usize]).xor(cols[j]);
                            comb[j] = j as u32;
                        }
                    }
                    acc = acc.xor(cols[comb[i] as usize]);
                    comb[i] += 1;
                    acc = acc.xor(cols[comb[i] as usize]);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    // subspace exhausted without a member (untruthful masks only)
    DecodeOutcome {
        status: DecodeStatus::Abandoned,
        queries: BigUint::from(queries),
    }
}

/// Same loop for codes with more than 128 parity bits; the syndrome
/// accumulator is a word slice.
fn guess_loop_wide(
    code: &LinearCode,
    received: &BitBlock,
    positions: &[u32],
    budget: &Budget,
) -> DecodeOutcome {
    let l = positions.len();
    let words = (code.n() - code.k()).div_ceil(64);
    let mut scratch = Vec::new();
    let mut cols: Vec<u64> = Vec::with_capacity(l * words);
    for &p in positions {
        column_words(code, p as usize, &mut scratch);
        cols.extend_from_slice(&scratch);
    }
    let col = |i: usize| &cols[i * words..(i + 1) * words];
    let xor_into = |acc: &mut [u64], src: &[u64]| {
        for (a, b) in acc.iter_mut().zip(src) {
            *a ^= b;
        }
    };
    let mut base = code
        .syndrome(received)
        .expect("length checked")
        .as_words()
        .to_vec();
    base.resize(words, 0);
    let budget_cap = budget.as_u64_saturating();
    let mut queries: u64 = 0;

    if budget_cap >= 1 {
        queries = 1;
        if base.iter().all(|&w| w == 0) {
            return finish(code, received, positions, &[], queries);
        }
    }

    let mut comb: Vec<u32> = Vec::with_capacity(l);
    let mut acc = vec![0u64; words];
    for w in 1..=l {
        comb.clear();
        comb.extend(0..w as u32);
        acc.copy_from_slice(&base);
        for &c in &comb {
            xor_into(&mut acc, col(c as usize));
        }
        loop {
            if queries >= budget_cap {
                return DecodeOutcome {
                    status: DecodeStatus::Abandoned,
                    queries: BigUint::from(queries),
                };
            }
            queries += 1;
            if acc.iter().all(|&x| x == 0) {
                return finish(code, received, positions, &comb, queries);
            }
            let mut advanced = false;
            for i in 0..w {
                let next = if i + 1 < w { comb[i + 1] } else { l as u32 };
                if comb[i] + 1 < next {
                    if comb[i] > i as u32 {
                        for (j, cj) in comb.iter_mut().enumerate().take(i) {
                            let old = *cj as usize;
                            *cj = j as u32;
                            xor_into(&mut acc, col(old));
                            xor_into(&mut acc, col(j));
                        }
                    }
                    xor_into(&mut acc, col(comb[i] as usize));
                    comb[i] += 1;
                    xor_into(&mut acc, col(comb[i] as usize));
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    DecodeOutcome {
        status: DecodeStatus::Abandoned,
        queries: BigUint::from(queries),
    }
}

fn finish(
    code: &LinearCode,
    received: &BitBlock,
    positions: &[u32],
    comb: &[u32],
    queries: u64,
) -> DecodeOutcome {
    let mut noise = BitBlock::zeros(code.n());
    for &idx in comb {
        noise.set(positions[idx as usize] as usize, true);
    }
    let word = received.xor(&noise);
    DecodeOutcome {
        status: DecodeStatus::Decoded { word, noise },
        queries: BigUint::from(queries),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::transmit_srbsc;
    use crate::guesswork::{gather, rank_of_pattern, PatternEnumerator};
    use crate::rng::Rng;

    fn repetition_2_1() -> LinearCode {
        LinearCode::from_parity(vec!["1".parse().unwrap()], "REP[2,1]").unwrap()
    }

    fn all_ones(n: usize) -> BitBlock {
        let mut b = BitBlock::zeros(n);
        for i in 0..n {
            b.set(i, true);
        }
        b
    }

    #[test]
    fn codeword_decodes_on_first_query() {
        let mut rng = Rng::from_seed(1);
        let code = LinearCode::rlc(24, 12, &mut rng).unwrap();
        let word = code.encode(&BitBlock::random(12, &mut rng)).unwrap();
        let out = grand(&code, &word, &AbandonmentRule::None).unwrap();
        assert_eq!(out.queries, BigUint::from(1u32));
        assert_eq!(out.word(), Some(&word));
        assert!(out.noise().unwrap().is_zero());
    }

    #[test]
    fn repetition_code_hand_trace() {
        // received 01: z=00 fails, z=10 gives 11 which is a codeword
        let code = repetition_2_1();
        let received: BitBlock = "01".parse().unwrap();
        let out = grand(&code, &received, &AbandonmentRule::None).unwrap();
        assert_eq!(out.queries, BigUint::from(2u32));
        assert_eq!(out.word().unwrap().to_string(), "11");
        assert_eq!(out.noise().unwrap().to_string(), "10");
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let code = repetition_2_1();
        let received: BitBlock = "011".parse().unwrap();
        assert!(matches!(
            grand(&code, &received, &AbandonmentRule::None),
            Err(DecodeError::LengthMismatch { .. })
        ));
        let mask: BitBlock = "1".parse().unwrap();
        assert!(matches!(
            srgrand(&code, &"01".parse().unwrap(), &mask, &AbandonmentRule::None),
            Err(DecodeError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn full_mask_recovers_grand_exactly() {
        let mut rng = Rng::from_seed(2);
        let code = LinearCode::rlc(20, 9, &mut rng).unwrap();
        let params = SrBscParams::new(1.0, 0.2).unwrap();
        for _ in 0..500 {
            let x = code.encode(&BitBlock::random(9, &mut rng)).unwrap();
            let r = transmit_srbsc(&x, &params, &mut rng);
            let g = grand(&code, &r.received, &AbandonmentRule::None).unwrap();
            let s = srgrand(&code, &r.received, &all_ones(20), &AbandonmentRule::None).unwrap();
            assert_eq!(g, s);
        }
    }

    #[test]
    fn empty_mask_on_codeword_decodes_in_one_query() {
        let mut rng = Rng::from_seed(3);
        let code = LinearCode::rlc(16, 7, &mut rng).unwrap();
        let x = code.encode(&BitBlock::random(7, &mut rng)).unwrap();
        let out = srgrand(&code, &x, &BitBlock::zeros(16), &AbandonmentRule::None).unwrap();
        assert_eq!(out.queries, BigUint::from(1u32));
        assert_eq!(out.word(), Some(&x));
    }

    #[test]
    fn empty_mask_on_non_codeword_abandons_after_one_query() {
        // untruthful-mask exhaustion: 2^0 = 1 query, then Abandoned
        let mut rng = Rng::from_seed(4);
        let code = LinearCode::rlc(16, 7, &mut rng).unwrap();
        let mut word = code.encode(&BitBlock::random(7, &mut rng)).unwrap();
        word.flip(3);
        let out = srgrand(&code, &word, &BitBlock::zeros(16), &AbandonmentRule::None).unwrap();
        assert!(!out.is_decoded());
        assert_eq!(out.queries, BigUint::from(1u32));
    }

    #[test]
    fn untruthful_mask_exhaustion_counts_full_subspace() {
        // mask misses the flipped position entirely
        let mut rng = Rng::from_seed(5);
        let code = LinearCode::rlc(16, 7, &mut rng).unwrap();
        let x = code.encode(&BitBlock::random(7, &mut rng)).unwrap();
        let mut received = x.clone();
        received.flip(15);
        let mask: BitBlock = "1110000000000000".parse().unwrap();
        // no word with noise confined to positions {0,1,2} is a codeword
        // unless the code happens to contain one; check exhaustion count
        let out = srgrand(&code, &received, &mask, &AbandonmentRule::None).unwrap();
        if !out.is_decoded() {
            assert_eq!(out.queries, BigUint::from(8u32), "2^weight(mask)");
        }
    }

    #[test]
    fn decoded_outcome_satisfies_invariants() {
        let mut rng = Rng::from_seed(6);
        let code = LinearCode::rlc(32, 20, &mut rng).unwrap();
        let params = SrBscParams::new(0.4, 0.25).unwrap();
        for _ in 0..300 {
            let x = code.encode(&BitBlock::random(20, &mut rng)).unwrap();
            let r = transmit_srbsc(&x, &params, &mut rng);
            let out = srgrand(&code, &r.received, &r.mask, &AbandonmentRule::None).unwrap();
            let word = out.word().expect("truthful mask always decodes");
            assert!(code.is_member(word).unwrap());
            assert_eq!(r.received.xor(out.noise().unwrap()), *word);
            assert!(out.queries >= BigUint::from(1u32));
        }
    }

    #[test]
    fn queries_equal_rank_of_true_noise_when_found() {
        let mut rng = Rng::from_seed(7);
        let code = LinearCode::rlc(24, 10, &mut rng).unwrap();
        let params = SrBscParams::new(0.5, 0.2).unwrap();
        let mut checked = 0;
        for _ in 0..2000 {
            let x = code.encode(&BitBlock::random(10, &mut rng)).unwrap();
            let r = transmit_srbsc(&x, &params, &mut rng);
            let out = srgrand(&code, &r.received, &r.mask, &AbandonmentRule::None).unwrap();
            if out.noise() == Some(&r.true_noise) {
                let sub = gather(&r.mask, &r.true_noise);
                assert_eq!(out.queries, rank_of_pattern(&sub));
                checked += 1;
            }
        }
        assert!(checked > 1500, "true noise should usually be found");
    }

    #[test]
    fn correctness_race_no_earlier_member_exists() {
        // replay the enumeration for every decoded outcome on a small code
        let mut rng = Rng::from_seed(8);
        let code = LinearCode::rlc(12, 5, &mut rng).unwrap();
        let params = SrBscParams::new(0.6, 0.3).unwrap();
        for _ in 0..300 {
            let x = code.encode(&BitBlock::random(5, &mut rng)).unwrap();
            let r = transmit_srbsc(&x, &params, &mut rng);
            let out = grand(&code, &r.received, &AbandonmentRule::None).unwrap();
            let found = out.noise().unwrap();
            let mut e = PatternEnumerator::new(12);
            while let Some(z) = e.next_pattern() {
                if z == *found {
                    break;
                }
                assert!(
                    !code.is_member(&r.received.xor(&z)).unwrap(),
                    "pattern {z} precedes {found} but is a member"
                );
            }
        }
    }

    #[test]
    fn max_weight_budget_resolution() {
        let rule = AbandonmentRule::MaxWeight(4);
        assert_eq!(
            resolve_budget(&rule, 128, 128, None).unwrap(),
            Budget::Queries(BigUint::from(11_017_633u64))
        );
        // srgrand search space: the mask weight, not n
        assert_eq!(
            resolve_budget(&rule, 128, 10, None).unwrap(),
            Budget::Queries(BigUint::from(1u64 + 10 + 45 + 120 + 210))
        );
        assert_eq!(
            resolve_budget(&AbandonmentRule::None, 128, 128, None).unwrap(),
            Budget::Unlimited
        );
    }

    #[test]
    fn entropy_typical_budget_resolution() {
        // n=100, p=0.05, delta=0.01: ceil(2^(100 * 0.2964))
        let params = SrBscParams::new(0.3, 0.05).unwrap();
        let rule = AbandonmentRule::entropy_typical(&params, 0.01, BudgetScale::FullBlock);
        let Budget::Queries(q) = resolve_budget(&rule, 100, 100, Some(&params)).unwrap() else {
            panic!("expected a finite budget");
        };
        let expected_exponent = 100.0 * (binary_entropy(0.05) + 0.01);
        let got_exponent = (q.bits() - 1) as f64
            + ((q.to_u64_digits().last().copied().unwrap() as f64)
                / (1u64 << (63.min(q.bits() as usize - 1))) as f64)
                .log2();
        assert!(
            (got_exponent - expected_exponent).abs() < 1e-6,
            "exponent {got_exponent} vs {expected_exponent}"
        );

        // MeanMask needs params
        let rule = AbandonmentRule::EntropyTypical {
            entropy_bits: 0.5,
            delta: 0.05,
            scale: BudgetScale::MeanMask,
        };
        assert!(matches!(
            resolve_budget(&rule, 100, 100, None),
            Err(DecodeError::MissingChannelParams)
        ));
        let Budget::Queries(q) = resolve_budget(&rule, 100, 100, Some(&params)).unwrap() else {
            panic!()
        };
        // 2^(0.3 * 100 * 0.55) = 2^16.5
        assert_eq!(q, BigUint::from((2f64.powf(16.5)).ceil() as u64));

        // RealizedMask uses the mask weight
        let rule = AbandonmentRule::EntropyTypical {
            entropy_bits: 1.0,
            delta: 0.0,
            scale: BudgetScale::RealizedMask,
        };
        let Budget::Queries(q) = resolve_budget(&rule, 100, 12, None).unwrap() else {
            panic!()
        };
        assert_eq!(q, BigUint::from(4096u32));
    }

    #[test]
    fn ceil_pow2_small_and_large() {
        assert_eq!(ceil_pow2(-3.0), BigUint::from(1u32));
        assert_eq!(ceil_pow2(0.0), BigUint::from(1u32));
        assert_eq!(ceil_pow2(3.0), BigUint::from(8u32));
        assert_eq!(ceil_pow2(3.1), BigUint::from(9u32));
        let big = ceil_pow2(300.25);
        assert_eq!(big.bits(), 301);
    }

    #[test]
    fn matched_budget_examples() {
        let rule = matched_budget_srgrandab(&AbandonmentRule::MaxWeight(4), 128).unwrap();
        assert_eq!(
            rule,
            AbandonmentRule::MaxQueries(BigUint::from(11_017_633u64))
        );
        let rule = matched_budget_srgrandab(
            &AbandonmentRule::MaxQueries(BigUint::from(100u32)),
            128,
        )
        .unwrap();
        assert_eq!(rule, AbandonmentRule::MaxQueries(BigUint::from(100u32)));
        let rule = matched_budget_srgrandab(&AbandonmentRule::MaxWeight(0), 77).unwrap();
        assert_eq!(rule, AbandonmentRule::MaxQueries(BigUint::from(1u32)));
        assert!(matched_budget_srgrandab(&AbandonmentRule::None, 128).is_err());
    }

    #[test]
    fn abandonment_fires_exactly_at_budget() {
        let mut rng = Rng::from_seed(9);
        let code = LinearCode::rlc(20, 8, &mut rng).unwrap();
        let x = code.encode(&BitBlock::random(8, &mut rng)).unwrap();
        let mut received = x.clone();
        // five flips, beyond a MaxWeight(2) budget
        for i in [1, 4, 9, 13, 17] {
            received.flip(i);
        }
        let out = grand(&code, &received, &AbandonmentRule::MaxWeight(2)).unwrap();
        if !out.is_decoded() {
            assert_eq!(out.queries, patterns_up_to_weight(20, 2));
        }
        // a budget of one query tries only the zero pattern
        let out = grand(
            &code,
            &received,
            &AbandonmentRule::MaxQueries(BigUint::from(1u32)),
        )
        .unwrap();
        assert!(!out.is_decoded());
        assert_eq!(out.queries, BigUint::from(1u32));
    }

    #[test]
    fn abandonment_never_fires_below_weight_budget() {
        let mut rng = Rng::from_seed(10);
        let code = LinearCode::rlc(24, 12, &mut rng).unwrap();
        for _ in 0..500 {
            let x = code.encode(&BitBlock::random(12, &mut rng)).unwrap();
            let mut received = x.clone();
            let flips = (rng.next_u64() % 4) as usize; // 0..=3 flips
            let mut chosen = std::collections::HashSet::new();
            while chosen.len() < flips {
                chosen.insert((rng.next_u64() % 24) as usize);
            }
            for &i in &chosen {
                received.flip(i);
            }
            let out = grand(&code, &received, &AbandonmentRule::MaxWeight(3)).unwrap();
            assert!(out.is_decoded(), "true noise within budget weight");
        }
    }

    #[test]
    fn wide_syndrome_path_matches_narrow_semantics() {
        // n - k = 190 exercises the slice accumulator
        let mut rng = Rng::from_seed(11);
        let code = LinearCode::rlc(200, 10, &mut rng).unwrap();
        for flips in 0..3usize {
            let x = code.encode(&BitBlock::random(10, &mut rng)).unwrap();
            let mut received = x.clone();
            for i in 0..flips {
                received.flip(i * 37 + 5);
            }
            let out = grand(&code, &received, &AbandonmentRule::None).unwrap();
            assert!(out.is_decoded());
            let word = out.word().unwrap();
            assert!(code.is_member(word).unwrap());
            // distance to received cannot exceed the planted noise weight
            assert!(word.xor(&received).weight() <= flips);
        }
    }

    #[test]
    fn monotone_benefit_of_reliability_information() {
        // paired trials: srgrand never errs where grand succeeds, and its
        // mean query count is lower at 99% confidence
        let mut rng = Rng::from_seed(12);
        let params = SrBscParams::new(0.5, 0.25).unwrap();
        let code = LinearCode::rlc(24, 12, &mut rng).unwrap();
        let trials = 10_000;
        let (mut grand_err, mut sr_err) = (0u64, 0u64);
        let (mut dsum, mut dsq) = (0f64, 0f64);
        for _ in 0..trials {
            let x = code.encode(&BitBlock::random(12, &mut rng)).unwrap();
            let r = transmit_srbsc(&x, &params, &mut rng);
            let g = grand(&code, &r.received, &AbandonmentRule::None).unwrap();
            let s = srgrand(&code, &r.received, &r.mask, &AbandonmentRule::None).unwrap();
            grand_err += (g.word() != Some(&x)) as u64;
            sr_err += (s.word() != Some(&x)) as u64;
            let d = g.queries_u64() as f64 - s.queries_u64() as f64;
            dsum += d;
            dsq += d * d;
        }
        assert!(sr_err <= grand_err, "sr {sr_err} vs grand {grand_err}");
        let mean = dsum / trials as f64;
        let var = (dsq / trials as f64 - mean * mean).max(0.0);
        let z99 = 2.326;
        assert!(
            mean > z99 * (var / trials as f64).sqrt(),
            "mean query saving {mean} not significant"
        );
    }
}
