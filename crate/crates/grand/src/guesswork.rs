//! Maximum-likelihood ordering of candidate noise patterns.
//!
//! For i.i.d. Bernoulli(p < 1/2) noise the ML order is nondecreasing Hamming
//! weight; ties within a weight class are broken colexicographically on the
//! position sets, which gives an O(l)-state enumerator with amortized O(1)
//! successor cost. Query budgets are exact big integers: weight-bounded
//! budgets like sum of C(4096, w) overflow any machine word.

use num_bigint::BigUint;

use crate::bits::BitBlock;

/// Exact nonnegative query count / budget.
pub type QueryCount = BigUint;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GuessworkError {
    #[error("sub-pattern length {got} does not match mask weight {expected}")]
    MaskWeightMismatch { expected: usize, got: usize },
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut c = BigUint::from(1u32);
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

/// Number of length-`l` patterns with weight at most `w`: sum of C(l, i).
pub fn patterns_up_to_weight(l: u64, w: u64) -> QueryCount {
    let mut total = BigUint::from(0u32);
    for i in 0..=w.min(l) {
        total += binomial(l, i);
    }
    total
}

/// Advance a strictly increasing combination (subset of 0..l) to its colex
/// successor within the same weight class.
///
/// Returns the index whose entry was incremented (entries below it were reset
/// to 0..i), or `None` when `comb` was the colex-last combination {l-w..l}.
pub(crate) fn advance_colex(comb: &mut [u32], l: u32) -> Option<usize> {
    let w = comb.len();
    for i in 0..w {
        let next = if i + 1 < w { comb[i + 1] } else { l };
        if comb[i] + 1 < next {
            // entries 0..i form a run ending at comb[i]; reset them
            if comb[i] > i as u32 {
                for (j, c) in comb.iter_mut().enumerate().take(i) {
                    *c = j as u32;
                }
            }
            comb[i] += 1;
            return Some(i);
        }
    }
    None
}

/// Deterministic enumerator of all 2^l patterns in canonical ML order:
/// weights ascend 0, 1, 2, ...; within a weight the position sets advance in
/// colexicographic order.
#[derive(Debug, Clone)]
pub struct PatternEnumerator {
    length: usize,
    current_weight: usize,
    comb: Vec<u32>,
    /// set once the current combination has been emitted and needs advancing
    pending_advance: bool,
    exhausted: bool,
}

impl PatternEnumerator {
    pub fn new(length: usize) -> Self {
        PatternEnumerator {
            length,
            current_weight: 0,
            comb: Vec::new(),
            pending_advance: false,
            exhausted: false,
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn current_weight(&self) -> usize {
        self.current_weight
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Positions of the next pattern, or `None` after 2^l emissions.
    pub fn next_positions(&mut self) -> Option<&[u32]> {
        if self.exhausted {
            return None;
        }
        if self.pending_advance && advance_colex(&mut self.comb, self.length as u32).is_none() {
            self.current_weight += 1;
            if self.current_weight > self.length {
                self.exhausted = true;
                return None;
            }
            self.comb = (0..self.current_weight as u32).collect();
        }
        self.pending_advance = true;
        Some(&self.comb)
    }

    /// Next pattern as a bit block, or `None` once exhausted.
    pub fn next_pattern(&mut self) -> Option<BitBlock> {
        let length = self.length;
        self.next_positions().map(|positions| {
            let mut b = BitBlock::zeros(length);
            for &i in positions {
                b.set(i as usize, true);
            }
            b
        })
    }
}

/// Place the bits of `sub`, in order, at the set positions of `mask`; all
/// other positions are zero.
pub fn scatter(mask: &BitBlock, sub: &BitBlock) -> Result<BitBlock, GuessworkError> {
    let l = mask.weight();
    if sub.len() != l {
        return Err(GuessworkError::MaskWeightMismatch {
            expected: l,
            got: sub.len(),
        });
    }
    let mut out = BitBlock::zeros(mask.len());
    for (j, pos) in mask.ones().enumerate() {
        if sub.get(j) {
            out.set(pos, true);
        }
    }
    Ok(out)
}

/// Inverse of [`scatter`]: the bits of `z` at the set positions of `mask`.
pub fn gather(mask: &BitBlock, z: &BitBlock) -> BitBlock {
    assert_eq!(mask.len(), z.len(), "gather length mismatch");
    let mut out = BitBlock::zeros(mask.weight());
    for (j, pos) in mask.ones().enumerate() {
        if z.get(pos) {
            out.set(j, true);
        }
    }
    out
}

/// 1-based index of `z` in the canonical emission order over its own length:
/// all patterns of lower weight, plus the colex rank within the weight class,
/// plus one.
pub fn rank_of_pattern(z: &BitBlock) -> QueryCount {
    let w = z.weight() as u64;
    let l = z.len() as u64;
    let mut rank = patterns_up_to_weight(l, w.saturating_sub(1));
    if w == 0 {
        return BigUint::from(1u32);
    }
    for (j, pos) in z.ones().enumerate() {
        rank += binomial(pos as u64, j as u64 + 1);
    }
    rank + 1u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_patterns(l: usize) -> Vec<BitBlock> {
        let mut e = PatternEnumerator::new(l);
        let mut out = Vec::new();
        while let Some(p) = e.next_pattern() {
            out.push(p);
        }
        out
    }

    #[test]
    fn order_for_length_three() {
        let seq: Vec<String> = all_patterns(3).iter().map(|b| b.to_string()).collect();
        assert_eq!(
            seq,
            vec!["000", "100", "010", "001", "110", "101", "011", "111"]
        );
    }

    #[test]
    fn order_for_length_one() {
        let seq: Vec<String> = all_patterns(1).iter().map(|b| b.to_string()).collect();
        assert_eq!(seq, vec!["0", "1"]);
    }

    #[test]
    fn length_zero_emits_single_empty_pattern() {
        let mut e = PatternEnumerator::new(0);
        assert_eq!(e.next_pattern(), Some(BitBlock::zeros(0)));
        assert_eq!(e.next_pattern(), None);
    }

    #[test]
    fn weight_boundary_at_length_twenty() {
        // 1 + C(20,1) + C(20,2) = 211 patterns of weight <= 2
        let mut e = PatternEnumerator::new(20);
        let mut last = BitBlock::zeros(20);
        for _ in 0..211 {
            last = e.next_pattern().unwrap();
        }
        assert_eq!(last.weight(), 2);
        assert_eq!(last.ones().collect::<Vec<_>>(), vec![18, 19]);
        assert_eq!(e.next_pattern().unwrap().weight(), 3);
    }

    #[test]
    fn exhaustive_enumeration_small_lengths() {
        for l in 0..=12usize {
            let patterns = all_patterns(l);
            assert_eq!(patterns.len(), 1 << l, "l={l}");
            // weights nondecreasing
            for pair in patterns.windows(2) {
                assert!(pair[0].weight() <= pair[1].weight(), "l={l}");
            }
            // each pattern exactly once
            let mut seen: std::collections::HashSet<String> =
                std::collections::HashSet::new();
            for p in &patterns {
                assert!(seen.insert(p.to_string()), "duplicate at l={l}");
            }
            // rank_of_pattern inverts the emission order
            for (idx, p) in patterns.iter().enumerate() {
                assert_eq!(
                    rank_of_pattern(p),
                    BigUint::from(idx as u64 + 1),
                    "l={l} idx={idx}"
                );
            }
        }
    }

    #[test]
    fn emission_prefix_counts_match_budgets() {
        // exactly patterns_up_to_weight(l, w) patterns appear before the
        // first pattern of weight w + 1
        for l in [5usize, 9, 12] {
            let patterns = all_patterns(l);
            for w in 0..l {
                let prefix = patterns.iter().take_while(|p| p.weight() <= w).count();
                assert_eq!(
                    BigUint::from(prefix as u64),
                    patterns_up_to_weight(l as u64, w as u64),
                    "l={l} w={w}"
                );
            }
        }
    }

    #[test]
    fn patterns_up_to_weight_values() {
        assert_eq!(patterns_up_to_weight(77, 0), BigUint::from(1u32));
        assert_eq!(
            patterns_up_to_weight(128, 4),
            BigUint::from(11_017_633u64)
        );
        assert_eq!(patterns_up_to_weight(7, 7), BigUint::from(128u32));
        // exceeding the length clamps to the full space
        assert_eq!(patterns_up_to_weight(7, 20), BigUint::from(128u32));
    }

    #[test]
    fn budgets_stay_exact_beyond_machine_words() {
        // sum of C(4096, w) for w <= 64 far exceeds u64
        assert!(patterns_up_to_weight(4096, 64).bits() > 64);
        assert_eq!(
            patterns_up_to_weight(4096, 1),
            BigUint::from(4097u32)
        );
    }

    #[test]
    fn scatter_examples() {
        let mask: BitBlock = "11111".parse().unwrap();
        let sub: BitBlock = "01010".parse().unwrap();
        assert_eq!(scatter(&mask, &sub).unwrap(), sub);

        let empty_mask: BitBlock = "00000".parse().unwrap();
        assert!(scatter(&empty_mask, &BitBlock::zeros(0)).unwrap().is_zero());

        let mask: BitBlock = "10100".parse().unwrap();
        let sub: BitBlock = "11".parse().unwrap();
        assert_eq!(scatter(&mask, &sub).unwrap().to_string(), "10100");

        assert!(matches!(
            scatter(&mask, &BitBlock::zeros(3)),
            Err(GuessworkError::MaskWeightMismatch { .. })
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of_pattern(&BitBlock::zeros(17)), BigUint::from(1u32));
        let z: BitBlock = "001".parse().unwrap();
        assert_eq!(rank_of_pattern(&z), BigUint::from(4u32));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(128, 4), BigUint::from(10_668_000u64));
        assert_eq!(binomial(5, 7), BigUint::from(0u32));
        assert_eq!(binomial(0, 0), BigUint::from(1u32));
    }

    proptest! {
        #[test]
        fn scatter_gather_roundtrip(seed in any::<u64>(), len in 1usize..100) {
            let mut rng = crate::rng::Rng::from_seed(seed);
            let mask = BitBlock::random(len, &mut rng);
            let sub = BitBlock::random(mask.weight(), &mut rng);
            let z = scatter(&mask, &sub).unwrap();
            prop_assert_eq!(gather(&mask, &z), sub);
            prop_assert!(z.and_not(&mask).is_zero());
        }

        #[test]
        fn rank_respects_ml_order(seed in any::<u64>(), len in 1usize..60) {
            // for any p < 1/2, lower rank means no smaller probability,
            // i.e. no larger weight
            let mut rng = crate::rng::Rng::from_seed(seed);
            let a = BitBlock::random(len, &mut rng);
            let b = BitBlock::random(len, &mut rng);
            if rank_of_pattern(&a) < rank_of_pattern(&b) {
                prop_assert!(a.weight() <= b.weight());
            }
        }
    }
}
