//! Universal noise-guessing forward-error-correction toolkit.
//!
//! Decoding by guessing noise: candidate noise patterns are tried in
//! maximum-likelihood order and removed from the received word until a
//! code-book member appears. Because only membership is queried, any binary
//! linear code works unchanged, including freshly drawn random linear codes.
//! Symbol reliability information turns the same loop into a masked search
//! over the unreliable positions only, improving both accuracy and query
//! cost.
//!
//! Modules:
//!
//! * [`bits`] / [`code`] / [`rng`] - packed binary vectors, systematic
//!   linear codes (random and Reed-Muller) with O(1)-per-query membership
//!   tests, and the seeded deterministic generator behind every experiment.
//! * [`channel`] - the symbol-reliability BSC and a BPSK/AWGN LLR-threshold
//!   quantizer producing (received, mask, true noise) triples.
//! * [`guesswork`] - the canonical ML pattern order (weights ascending,
//!   colex within a weight), combinatorial ranking and exact query budgets.
//! * [`decoder`] - GRAND, GRANDAB, SRGRAND and SRGRANDAB as one guessing
//!   loop parameterized by position set and abandonment rule.
//! * [`ldp`] - the large-deviations engine: entropies, sCGFs,
//!   Legendre-Fenchel transforms, capacities, error and complexity
//!   exponents.
//! * [`oracle`] - exhaustive brute-force ML references for validation.
//!
//! A round trip through the stack:
//!
//! ```
//! use grand::{AbandonmentRule, BitBlock, LinearCode, Rng, SrBscParams};
//!
//! let mut rng = Rng::from_seed(7);
//! let code = LinearCode::rlc(32, 20, &mut rng).unwrap();
//! let message = BitBlock::random(20, &mut rng);
//! let sent = code.encode(&message).unwrap();
//!
//! let channel = SrBscParams::from_epsilon(0.01).unwrap();
//! let received = grand::channel::transmit_srbsc(&sent, &channel, &mut rng);
//!
//! // guess noise only on the positions flagged unreliable
//! let out = grand::srgrand(&code, &received.received, &received.mask,
//!                          &AbandonmentRule::None).unwrap();
//! assert_eq!(out.word(), Some(&sent));
//! ```

pub mod bits;
pub mod channel;
pub mod code;
pub mod decoder;
pub mod guesswork;
pub mod ldp;
pub mod oracle;
pub mod rng;

pub use bits::BitBlock;
pub use channel::{ChannelRealization, SrBscParams};
pub use code::LinearCode;
pub use decoder::{
    grand, matched_budget_srgrandab, resolve_budget, srgrand, AbandonmentRule, Budget,
    BudgetScale, DecodeOutcome, DecodeStatus,
};
pub use guesswork::{patterns_up_to_weight, rank_of_pattern,scatter, PatternEnumerator, QueryCount};
pub use ldp::{ExponentCurve, LengthLaw, NoiseDistribution};
pub use rng::Rng;
