//! Stochastic channel simulation.
//!
//! Two channels produce (received word, reliability mask, true noise)
//! triples: the symbol-reliability BSC, where the mask is truthful by
//! construction, and a BPSK/AWGN quantizer whose mask comes from
//! thresholding the log-likelihood ratio and may miss flips.

use crate::bits::BitBlock;
use crate::rng::Rng;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ChannelError {
    #[error("probability {name}={value} outside [0, 1]")]
    BadProbability { name: &'static str, value: f64 },
}

/// Symbol-reliability BSC parameters: each bit is independently flagged
/// unreliable with probability `q`, and flipped with probability `p` given
/// the flag. The unconditional flip rate is `q * p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrBscParams {
    pub q: f64,
    pub p: f64,
}

impl SrBscParams {
    pub fn new(q: f64, p: f64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&q) || q.is_nan() {
            return Err(ChannelError::BadProbability { name: "q", value: q });
        }
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(ChannelError::BadProbability { name: "p", value: p });
        }
        Ok(SrBscParams { q, p })
    }

    /// Experimental protocol parameterization: unconditional flip rate
    /// `epsilon` with q = p = sqrt(epsilon).
    pub fn from_epsilon(epsilon: f64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&epsilon) || epsilon.is_nan() {
            return Err(ChannelError::BadProbability {
                name: "epsilon",
                value: epsilon,
            });
        }
        let s = epsilon.sqrt();
        SrBscParams::new(s, s)
    }

    /// Unconditional per-bit flip probability q * p.
    pub fn flip_rate(&self) -> f64 {
        self.q * self.p
    }
}

/// One channel use: what the receiver sees plus the ground truth for scoring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelRealization {
    /// y^n as observed by the receiver.
    pub received: BitBlock,
    /// s^n; a set bit marks a potentially noise-impacted position.
    pub mask: BitBlock,
    /// z^n, the actual noise (ground truth, not visible to decoders).
    pub true_noise: BitBlock,
    /// Whether a clear mask bit guarantees the position is noise-free.
    pub mask_truthful: bool,
}

impl ChannelRealization {
    /// Ground-truth consistency: received = transmitted xor noise, and a
    /// truthful mask covers every flip.
    pub fn verify(&self, transmitted: &BitBlock) -> bool {
        self.received.xor(&self.true_noise) == *transmitted
            && (!self.mask_truthful || self.true_noise.and_not(&self.mask).is_zero())
    }
}

/// Transmit `x` over the SR-BSC. Per position: the mask bit is
/// Bernoulli(q), and given the mask the noise bit is Bernoulli(p).
pub fn transmit_srbsc(x: &BitBlock, params: &SrBscParams, rng: &mut Rng) -> ChannelRealization {
    let n = x.len();
    let mut mask = BitBlock::zeros(n);
    let mut noise = BitBlock::zeros(n);
    for i in 0..n {
        if rng.bernoulli(params.q) {
            mask.set(i, true);
            if rng.bernoulli(params.p) {
                noise.set(i, true);
            }
        }
    }
    ChannelRealization {
        received: x.xor(&noise),
        mask,
        true_noise: noise,
        mask_truthful: true,
    }
}

/// Transmit `x` over BPSK/AWGN and quantize the soft output into a
/// reliability mask by LLR thresholding.
///
/// Bit 0 maps to +1, bit 1 to -1. Eb/N0 is per coded bit (no rate scaling),
/// so the noise deviation is sigma with sigma^2 = 1 / (2 * 10^(dB/10)). The
/// LLR is 2r/sigma^2 with the true sigma (genie knowledge); a position is
/// masked when |LLR| < `llr_threshold`. Flips can land outside the mask, so
/// `mask_truthful` is false.
pub fn transmit_bpsk_awgn(
    x: &BitBlock,
    ebno_db: f64,
    llr_threshold: f64,
    rng: &mut Rng,
) -> ChannelRealization {
    assert!(llr_threshold >= 0.0, "llr threshold must be nonnegative");
    let ebno = 10f64.powf(ebno_db / 10.0);
    let sigma2 = 1.0 / (2.0 * ebno);
    let sigma = sigma2.sqrt();
    let n = x.len();
    let mut received = BitBlock::zeros(n);
    let mut mask = BitBlock::zeros(n);
    for i in 0..n {
        let s = if x.get(i) { -1.0 } else { 1.0 };
        let r = s + sigma * rng.normal();
        if r < 0.0 {
            received.set(i, true);
        }
        let llr = 2.0 * r / sigma2;
        if llr.abs() < llr_threshold {
            mask.set(i, true);
        }
    }
    let true_noise = received.xor(x);
    ChannelRealization {
        received,
        mask,
        true_noise,
        mask_truthful: false,
    }
}

/// SR-BSC parameters fitted to a quantized AWGN channel, with bookkeeping
/// about how the fit was measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnFit {
    pub params: SrBscParams,
    /// False when no bit was ever masked, in which case `p` is reported as 0
    /// rather than 0/0.
    pub p_observed: bool,
    /// Empirical P(flip and not masked) per bit.
    pub false_negative_rate: f64,
    pub bits: u64,
}

/// Estimate (q, p) for the LLR-quantized AWGN channel by Monte Carlo:
/// q = P(mask), p = P(flip | mask), from `bits` simulated channel uses.
pub fn estimate_srbsc_from_awgn(
    ebno_db: f64,
    llr_threshold: f64,
    bits: u64,
    rng: &mut Rng,
) -> AwgnFit {
    // the channel is symmetric, so the all-zero word is representative
    let block = 4096u64;
    let x = BitBlock::zeros(block as usize);
    let mut masked = 0u64;
    let mut flipped_in_mask = 0u64;
    let mut flipped_outside = 0u64;
    let mut done = 0u64;
    while done < bits {
        let take = block.min(bits - done) as usize;
        let r = transmit_bpsk_awgn(&x, ebno_db, llr_threshold, rng);
        for i in 0..take {
            let m = r.mask.get(i);
            let f = r.true_noise.get(i);
            masked += m as u64;
            flipped_in_mask += (m && f) as u64;
            flipped_outside += (!m && f) as u64;
        }
        done += take as u64;
    }
    let q = masked as f64 / bits as f64;
    let p_observed = masked > 0;
    let p = if p_observed {
        flipped_in_mask as f64 / masked as f64
    } else {
        0.0
    };
    AwgnFit {
        params: SrBscParams { q, p },
        p_observed,
        false_negative_rate: flipped_outside as f64 / bits as f64,
        bits,
    }
}

/// Smallest LLR threshold whose measured false-negative rate (flip outside
/// the mask, per bit) is at most `target`, found by bisection on a `bits`-bit
/// Monte Carlo. Every probe replays the same channel realizations, so the
/// measured rate is exactly nonincreasing in the threshold and bisection is
/// noise-free relative to that sample.
pub fn calibrate_llr_threshold(ebno_db: f64, target: f64, bits: u64, rng: &mut Rng) -> f64 {
    let probe_seed = rng.next_u64();
    let rate_at = |t: f64| {
        estimate_srbsc_from_awgn(ebno_db, t, bits, &mut Rng::from_seed(probe_seed))
            .false_negative_rate
    };
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while rate_at(hi) > target {
        hi *= 2.0;
        if hi > 1e6 {
            return hi;
        }
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if rate_at(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_validation() {
        assert!(SrBscParams::new(0.3, 0.2).is_ok());
        assert!(matches!(
            SrBscParams::new(-0.1, 0.2),
            Err(ChannelError::BadProbability { name: "q", .. })
        ));
        assert!(SrBscParams::new(0.0, 1.5).is_err());
        let eps = SrBscParams::from_epsilon(0.01).unwrap();
        assert!((eps.q - 0.1).abs() < 1e-15);
        assert!((eps.p - 0.1).abs() < 1e-15);
        assert!((eps.flip_rate() - 0.01).abs() < 1e-15);
        assert!(SrBscParams::from_epsilon(2.0).is_err());
    }

    #[test]
    fn noiseless_when_q_zero() {
        let mut rng = Rng::from_seed(1);
        let x = BitBlock::random(512, &mut rng);
        let r = transmit_srbsc(&x, &SrBscParams::new(0.0, 0.7).unwrap(), &mut rng);
        assert!(r.mask.is_zero());
        assert!(r.true_noise.is_zero());
        assert_eq!(r.received, x);
        assert!(r.verify(&x));
    }

    #[test]
    fn fully_random_when_q_one_p_half() {
        let mut rng = Rng::from_seed(2);
        let params = SrBscParams::new(1.0, 0.5).unwrap();
        let block = 4000;
        let x = BitBlock::zeros(block);
        let (mut masked, mut flips) = (0usize, 0usize);
        let n = 100_000;
        for _ in 0..n / block {
            let r = transmit_srbsc(&x, &params, &mut rng);
            masked += r.mask.weight();
            flips += r.true_noise.weight();
        }
        assert_eq!(masked, n);
        let rate = flips as f64 / n as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((rate - 0.5).abs() < 3.0 * sigma, "rate {rate}");
    }

    #[test]
    fn empirical_moments_match_parameters() {
        // q = p = 0.1 gives unconditional flip rate 0.01
        let mut rng = Rng::from_seed(3);
        let params = SrBscParams::from_epsilon(0.01).unwrap();
        let n_total = 1_000_000usize;
        let block = 1000;
        let x = BitBlock::zeros(block);
        let (mut masked, mut flips, mut flips_in_mask) = (0u64, 0u64, 0u64);
        for _ in 0..n_total / block {
            let r = transmit_srbsc(&x, &params, &mut rng);
            masked += r.mask.weight() as u64;
            flips += r.true_noise.weight() as u64;
            flips_in_mask += r.true_noise.and(&r.mask).weight() as u64;
            assert!(r.verify(&x));
        }
        assert_eq!(flips, flips_in_mask, "truthful mask covers all flips");
        let nf = n_total as f64;
        let q_hat = masked as f64 / nf;
        let sigma_q = (params.q * (1.0 - params.q) / nf).sqrt();
        assert!((q_hat - params.q).abs() < 3.0 * sigma_q, "q_hat {q_hat}");
        let p_hat = flips as f64 / masked as f64;
        let sigma_p = (params.p * (1.0 - params.p) / masked as f64).sqrt();
        assert!((p_hat - params.p).abs() < 3.0 * sigma_p, "p_hat {p_hat}");
        let eps_hat = flips as f64 / nf;
        let sigma_eps = (0.01f64 * 0.99 / nf).sqrt();
        assert!((eps_hat - 0.01).abs() < 3.0 * sigma_eps, "eps_hat {eps_hat}");
    }

    #[test]
    fn identical_seeds_identical_realizations() {
        let params = SrBscParams::new(0.4, 0.2).unwrap();
        let x = BitBlock::random(256, &mut Rng::from_seed(77));
        let a = transmit_srbsc(&x, &params, &mut Rng::from_seed(5));
        let b = transmit_srbsc(&x, &params, &mut Rng::from_seed(5));
        assert_eq!(a, b);
        let c = transmit_bpsk_awgn(&x, 4.0, 2.0, &mut Rng::from_seed(5));
        let d = transmit_bpsk_awgn(&x, 4.0, 2.0, &mut Rng::from_seed(5));
        assert_eq!(c, d);
    }

    #[test]
    fn awgn_threshold_edges() {
        let mut rng = Rng::from_seed(8);
        let x = BitBlock::random(4096, &mut rng);
        let r = transmit_bpsk_awgn(&x, 3.0, 0.0, &mut rng);
        assert!(r.mask.is_zero(), "zero threshold means pure hard detection");
        assert!(r.verify(&x));
        let r = transmit_bpsk_awgn(&x, 3.0, f64::MAX, &mut rng);
        assert_eq!(r.mask.weight(), 4096, "huge threshold masks everything");
    }

    #[test]
    fn awgn_estimate_edges_and_monotonicity() {
        let mut rng = Rng::from_seed(9);
        let fit = estimate_srbsc_from_awgn(5.0, 0.0, 100_000, &mut rng);
        assert_eq!(fit.params.q, 0.0);
        assert!(!fit.p_observed);
        assert_eq!(fit.params.p, 0.0);

        // q is nondecreasing in the threshold
        let mut prev_q = 0.0;
        for t in [0.5, 1.0, 2.0, 4.0, 8.0, 1e9] {
            let fit = estimate_srbsc_from_awgn(5.0, t, 200_000, &mut Rng::from_seed(10));
            assert!(fit.params.q >= prev_q, "q not monotone at threshold {t}");
            prev_q = fit.params.q;
        }
        assert!((prev_q - 1.0).abs() < 1e-9);
    }

    /// Gaussian upper-tail probability by Simpson quadrature over phi, the
    /// standard normal density (independent of any library tail function).
    fn gaussian_tail_quadrature(a: f64) -> f64 {
        let b = a + 12.0;
        let steps = 200_000;
        let h = (b - a) / steps as f64;
        let phi = |t: f64| (-(t * t) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut acc = phi(a) + phi(b);
        for i in 1..steps {
            let t = a + i as f64 * h;
            acc += phi(t) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn full_mask_flip_rate_matches_gaussian_tail() {
        // with everything masked, p is the hard-BPSK flip rate Q(1/sigma)
        let ebno_db = 2.0;
        let ebno = 10f64.powf(ebno_db / 10.0);
        let expected = gaussian_tail_quadrature((2.0 * ebno).sqrt());
        let fit = estimate_srbsc_from_awgn(ebno_db, 1e12, 2_000_000, &mut Rng::from_seed(12));
        assert!((fit.params.q - 1.0).abs() < 1e-12);
        let sigma = (expected * (1.0 - expected) / 2_000_000f64).sqrt();
        assert!(
            (fit.params.p - expected).abs() < 4.0 * sigma,
            "p {} vs quadrature {expected}",
            fit.params.p
        );
    }

    #[test]
    fn calibrated_threshold_meets_false_negative_target() {
        // 6 dB: choose the threshold so that P(flip and unmasked) <= 1e-4
        let target = 1e-4;
        let mut rng = Rng::from_seed(13);
        let threshold = calibrate_llr_threshold(6.0, 0.8 * target, 2_000_000, &mut rng);
        assert!(threshold > 0.0);
        let fresh = estimate_srbsc_from_awgn(6.0, threshold, 4_000_000, &mut Rng::from_seed(14));
        assert!(
            fresh.false_negative_rate <= 1.3 * target,
            "rate {} at threshold {threshold}",
            fresh.false_negative_rate
        );
        // an unmasked channel at 6 dB misses far more flips than the target
        let bare = estimate_srbsc_from_awgn(6.0, 0.0, 2_000_000, &mut Rng::from_seed(15));
        assert!(bare.false_negative_rate > target);
    }
}
