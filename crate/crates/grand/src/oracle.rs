//! Exhaustive reference decoders.
//!
//! Brute-force ML decoding by full code-book enumeration, used to validate
//! the guessing decoders. These deliberately share nothing with the guessing
//! loop: candidates come from enumerating all 2^k messages through the
//! encoder, and the winner is chosen by explicit (weight, rank) comparison.

use num_bigint::BigUint;

use crate::bits::BitBlock;
use crate::code::LinearCode;
use crate::guesswork::rank_of_pattern;

/// Largest message size the exhaustive oracles accept (2^k codewords).
pub const MAX_ORACLE_K: usize = 20;

fn codewords(code: &LinearCode) -> impl Iterator<Item = BitBlock> + '_ {
    assert!(
        code.k() <= MAX_ORACLE_K,
        "exhaustive oracle limited to k <= {MAX_ORACLE_K}"
    );
    (0u64..(1 << code.k())).map(move |m| {
        let mut msg = BitBlock::zeros(code.k());
        for b in 0..code.k() {
            if m >> b & 1 == 1 {
                msg.set(b, true);
            }
        }
        code.encode(&msg).expect("message length matches k")
    })
}

/// Guess-order key of a noise pattern: lower compares earlier.
fn order_key(noise: &BitBlock) -> (usize, BigUint) {
    (noise.weight(), rank_of_pattern(noise))
}

/// Brute-force ML decoding: the codeword at minimum Hamming distance from
/// `received`, ties broken by guess order of the noise pattern (which is the
/// tie-break the sequential decoder realizes).
pub fn ml_decode_exhaustive(code: &LinearCode, received: &BitBlock) -> BitBlock {
    codewords(code)
        .min_by_key(|c| order_key(&received.xor(c)))
        .expect("code-book is nonempty")
}

/// Mask-constrained brute-force ML decoding: among codewords whose noise
/// pattern is confined to the mask, the one of minimum distance with the
/// guess-order tie-break. `None` when no codeword is reachable within the
/// mask (impossible under a truthful mask).
pub fn ml_decode_exhaustive_masked(
    code: &LinearCode,
    received: &BitBlock,
    mask: &BitBlock,
) -> Option<BitBlock> {
    codewords(code)
        .filter(|c| received.xor(c).and_not(mask).is_zero())
        .min_by_key(|c| order_key(&received.xor(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn oracle_picks_nearest_codeword() {
        let code = LinearCode::reed_muller(1, 3).unwrap();
        let mut rng = Rng::from_seed(1);
        let x = code.encode(&BitBlock::random(4, &mut rng)).unwrap();
        let mut received = x.clone();
        received.flip(2);
        // one flip is within half the minimum distance (4), so ML recovers x
        assert_eq!(ml_decode_exhaustive(&code, &received), x);
    }

    #[test]
    fn masked_oracle_respects_the_mask() {
        let code = LinearCode::reed_muller(1, 3).unwrap();
        let mut rng = Rng::from_seed(2);
        let x = code.encode(&BitBlock::random(4, &mut rng)).unwrap();
        let mut received = x.clone();
        received.flip(5);
        let mut mask = BitBlock::zeros(8);
        mask.set(5, true);
        mask.set(1, true);
        assert_eq!(
            ml_decode_exhaustive_masked(&code, &received, &mask),
            Some(x.clone())
        );
        // an empty mask reaches a codeword only if received is one
        let empty = BitBlock::zeros(8);
        assert_eq!(ml_decode_exhaustive_masked(&code, &received, &empty), None);
        let on_word = ml_decode_exhaustive_masked(&code, &x, &empty);
        assert_eq!(on_word, Some(x));
    }
}
