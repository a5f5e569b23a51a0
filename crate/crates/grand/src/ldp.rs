//! Large-deviations analysis of noise guessing.
//!
//! Entropies, scaled cumulant generating functions (sCGFs), numerical
//! Legendre-Fenchel transforms, channel capacities, error exponents and
//! complexity exponents for the symbol-reliability BSC. Everything is in
//! bits per symbol: the alphabet is binary and all logs are base 2.
//!
//! Conventions for the binary noise law with flip probability p and a
//! Bernoulli(q) reliability mask:
//!
//! * `scgf_noise`:  Λ^N(α) = α·H_{1/(1+α)} for α > -1, -H_min for α <= -1
//! * `scgf_length`: Λ^L(α) = log2(1 - q + q·2^α)
//! * subordination: Λ^{N^L}(α) = Λ^L(Λ^N(α)), and the rate functions are the
//!   corresponding convex conjugates.

use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LdpError {
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
    #[error("function is not convex near alpha = {at} (second difference {second_diff})")]
    NotConvex { at: f64, second_diff: f64 },
    #[error("supremum did not stabilize inside the widened alpha window")]
    SupUnbounded,
    #[error("critical guesswork growth rate is undefined for p = {p}")]
    DegenerateGStar { p: f64 },
}

/// Binary Shannon entropy h2(p) in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Per-symbol law of the noise on a potentially noise-impacted position.
///
/// Binary alphabet: probs = [1-p, p] where p is the conditional flip
/// probability.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseDistribution {
    probs: Vec<f64>,
}

impl NoiseDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self, LdpError> {
        if probs.len() != 2 {
            return Err(LdpError::BadDistribution(format!(
                "only the binary alphabet is supported (got {} symbols)",
                probs.len()
            )));
        }
        if probs.iter().any(|&x| !(0.0..=1.0).contains(&x) || x.is_nan()) {
            return Err(LdpError::BadDistribution("probability outside [0,1]".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(LdpError::BadDistribution(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(NoiseDistribution { probs })
    }

    /// Noise that flips with probability p: probs = [1-p, p].
    pub fn bernoulli(p: f64) -> Result<Self, LdpError> {
        NoiseDistribution::new(vec![1.0 - p, p])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Flip probability p (the probability of the nonzero noise symbol).
    pub fn flip_prob(&self) -> f64 {
        self.probs[1]
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    /// Shannon entropy in bits per symbol.
    pub fn shannon_entropy(&self) -> f64 {
        self.probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }

    /// Renyi entropy H_alpha in bits; alpha = 1 delegates to Shannon.
    /// Computed in the log domain so large orders stay finite.
    pub fn renyi_entropy(&self, alpha: f64) -> f64 {
        if alpha == 1.0 {
            return self.shannon_entropy();
        }
        let pmax = self.probs.iter().cloned().fold(0.0, f64::max);
        if pmax >= 1.0 {
            return 0.0;
        }
        let scaled: f64 = self
            .probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| (alpha * (p / pmax).log2()).exp2())
            .sum();
        (alpha * pmax.log2() + scaled.log2()) / (1.0 - alpha)
    }

    /// Min-entropy H_min = -log2 max p, the alpha -> infinity limit.
    pub fn min_entropy(&self) -> f64 {
        -self.probs.iter().cloned().fold(0.0, f64::max).log2()
    }
}

/// Law of the number of potentially noise-impacted symbols per block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LengthLaw {
    /// Each position is masked independently with probability q.
    BernoulliMask { q: f64 },
}

impl LengthLaw {
    pub fn bernoulli_mask(q: f64) -> Result<Self, LdpError> {
        if !(0.0..=1.0).contains(&q) || q.is_nan() {
            return Err(LdpError::BadDistribution(format!("q = {q} outside [0,1]")));
        }
        Ok(LengthLaw::BernoulliMask { q })
    }

    /// Long-run mean fraction of masked symbols, mu^L.
    pub fn mean(&self) -> f64 {
        match self {
            LengthLaw::BernoulliMask { q } => *q,
        }
    }
}

/// sCGF of the scaled log-guesswork of the noise on masked symbols:
/// alpha * H_{1/(1+alpha)} for alpha > -1, and -H_min at and below -1.
pub fn scgf_noise(alpha: f64, d: &NoiseDistribution) -> f64 {
    if alpha <= -1.0 {
        return -d.min_entropy();
    }
    if alpha == 0.0 {
        return 0.0;
    }
    alpha * d.renyi_entropy(1.0 / (1.0 + alpha))
}

/// sCGF of the masked fraction: log2(1 - q + q*2^alpha) for a Bernoulli mask.
pub fn scgf_length(alpha: f64, law: &LengthLaw) -> f64 {
    match law {
        LengthLaw::BernoulliMask { q } => {
            if *q == 1.0 {
                alpha
            } else {
                (1.0 - q + q * alpha.exp2()).log2()
            }
        }
    }
}

/// sCGF of the subordinated guesswork: the composition Λ^L(Λ^N(alpha)).
pub fn scgf_subordinated(alpha: f64, d: &NoiseDistribution, law: &LengthLaw) -> f64 {
    scgf_length(scgf_noise(alpha, d), law)
}

/// Widest window the transform will grow to before giving up.
const MAX_ALPHA_WINDOW: f64 = 65536.0;
/// Default search window and argument tolerance for transforms.
pub const DEFAULT_ALPHA_WINDOW: (f64, f64) = (-5.0, 50.0);
pub const DEFAULT_TOL: f64 = 1e-8;

/// Numerical Legendre-Fenchel transform sup_alpha (x*alpha - f(alpha)) of a
/// convex f over a bracketing window.
///
/// Convexity is asserted by a second-difference check on a coarse grid; the
/// supremum is then located by golden-section refinement to `tol` in the
/// argument. If the maximizer touches the window boundary the window is
/// widened (doubling) up to a cap, after which a still-growing objective is
/// reported as unbounded.
pub fn legendre_transform(
    f: impl Fn(f64) -> f64,
    x: f64,
    alpha_window: (f64, f64),
    tol: f64,
) -> Result<f64, LdpError> {
    let (mut lo, mut hi) = alpha_window;
    assert!(lo < hi, "empty alpha window");
    loop {
        const GRID: usize = 128;
        let step = (hi - lo) / GRID as f64;
        let fs: Vec<f64> = (0..=GRID).map(|i| f(lo + i as f64 * step)).collect();
        let mut scale = 1.0f64;
        for v in &fs {
            scale = scale.max(v.abs());
        }
        for i in 1..GRID {
            let second = fs[i - 1] - 2.0 * fs[i] + fs[i + 1];
            if second < -1e-7 * scale {
                return Err(LdpError::NotConvex {
                    at: lo + i as f64 * step,
                    second_diff: second,
                });
            }
        }
        let g = |a: f64| x * a - f(a);
        let gs: Vec<f64> = (0..=GRID)
            .map(|i| x * (lo + i as f64 * step) - fs[i])
            .collect();
        let best = gs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        let at_edge = best == 0 || best == GRID;
        if at_edge && hi - lo < 2.0 * MAX_ALPHA_WINDOW {
            if best == 0 {
                lo -= hi - lo;
            } else {
                hi += hi - lo;
            }
            continue;
        }
        if at_edge {
            // window is capped; a converging tail has near-zero slope at the
            // boundary, a genuine divergence keeps rising at a bounded rate
            let edge = lo + best as f64 * step;
            let probe = 0.01 * (hi - lo);
            let inward = if best == 0 { edge + probe } else { edge - probe };
            let slope = (g(edge) - g(inward)) / probe;
            if slope > 1e-6 {
                return Err(LdpError::SupUnbounded);
            }
            return Ok(g(edge));
        }
        // golden-section refinement inside the bracketing grid cells
        let (mut a, mut b) = (lo + (best - 1) as f64 * step, lo + (best + 1) as f64 * step);
        let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut gc, mut gd) = (g(c), g(d));
        while b - a > tol {
            if gc > gd {
                b = d;
                d = c;
                gd = gc;
                c = b - inv_phi * (b - a);
                gc = g(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + inv_phi * (b - a);
                gd = g(d);
            }
        }
        return Ok(g(0.5 * (a + b)).max(gs[best]));
    }
}

/// Golden-section minimum of a unimodal function on [lo, hi]; endpoints are
/// compared as well.
fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    f(0.5 * (a + b)).min(f(lo)).min(f(hi))
}

/// Guesswork rate function I^N(x): the convex conjugate of `scgf_noise`.
/// Finite on [0, 1] with I^N(H) = 0 and I^N(0) = H_min.
pub fn rate_noise(x: f64, d: &NoiseDistribution) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return f64::INFINITY;
    }
    legendre_transform(|a| scgf_noise(a, d), x, DEFAULT_ALPHA_WINDOW, DEFAULT_TOL)
        .expect("the noise sCGF is convex and x in [0,1] keeps the supremum finite")
        .max(0.0)
}

/// Mask-fraction rate function I^L(l): the binary KL divergence between l
/// and q (the convex conjugate of `scgf_length`), infinite outside [0, 1].
pub fn rate_length(l: f64, law: &LengthLaw) -> f64 {
    let q = law.mean();
    if !(0.0..=1.0).contains(&l) {
        return f64::INFINITY;
    }
    let mut rate = 0.0;
    if l > 0.0 {
        if q == 0.0 {
            return f64::INFINITY;
        }
        rate += l * (l / q).log2();
    }
    if l < 1.0 {
        if q == 1.0 {
            return f64::INFINITY;
        }
        rate += (1.0 - l) * ((1.0 - l) / (1.0 - q)).log2();
    }
    rate.max(0.0)
}

/// Subordinated-guesswork rate function
/// I^{N^L}(g) = inf over l of (l * I^N(g/l) + I^L(l)), finite on [0, 1],
/// zero at mu^L * H.
pub fn rate_subordinated(g: f64, d: &NoiseDistribution, law: &LengthLaw) -> f64 {
    if !(0.0..=1.0).contains(&g) {
        return f64::INFINITY;
    }
    let objective = |l: f64| {
        if l <= 0.0 {
            return rate_length(0.0, law);
        }
        l * rate_noise(g / l, d) + rate_length(l, law)
    };
    // the objective is convex in l (perspective of I^N plus I^L); it is
    // finite only where g/l <= 1, i.e. l >= g
    let lo = g.max(1e-9);
    golden_min(objective, lo, 1.0, 1e-9).max(0.0)
}

/// Critical guesswork growth rate g*: the slope of Λ^N at alpha = 1 (the
/// point where dI^N/dg = 1). Undefined for degenerate flip probabilities.
pub fn g_star(d: &NoiseDistribution) -> Result<f64, LdpError> {
    let p = d.flip_prob();
    if !(0.0 < p && p < 0.5) {
        return Err(LdpError::DegenerateGStar { p });
    }
    let h = 1e-5;
    Ok((scgf_noise(1.0 + h, d) - scgf_noise(1.0 - h, d)) / (2.0 * h))
}

/// Verification route for [`g_star`]: solve dI^N/dg = 1 on the numeric rate
/// function by bisection with central differences.
pub fn g_star_via_rate_slope(d: &NoiseDistribution) -> Result<f64, LdpError> {
    let p = d.flip_prob();
    if !(0.0 < p && p < 0.5) {
        return Err(LdpError::DegenerateGStar { p });
    }
    let h = 1e-4;
    let slope = |g: f64| (rate_noise(g + h, d) - rate_noise(g - h, d)) / (2.0 * h);
    let mut lo = d.shannon_entropy();
    let mut hi = 1.0 - h;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Slope of the subordinated sCGF at alpha = 1; the error-exponent branch
/// boundary sits at R = 1 minus this value.
pub fn subordinated_critical_point(d: &NoiseDistribution, law: &LengthLaw) -> f64 {
    let h = 1e-5;
    (scgf_subordinated(1.0 + h, d, law) - scgf_subordinated(1.0 - h, d, law)) / (2.0 * h)
}

/// Symbol-reliability channel capacity 1 - q * h2(p), in bits per symbol.
pub fn capacity_sr(q: f64, p: f64) -> f64 {
    1.0 - q * binary_entropy(p)
}

/// Hard-detection capacity 1 - h2(q * p) of the equivalent BSC.
pub fn capacity_hard(q: f64, p: f64) -> f64 {
    1.0 - binary_entropy(q * p)
}

fn bernoulli_pair(q: f64, p: f64) -> (NoiseDistribution, LengthLaw) {
    (
        NoiseDistribution::bernoulli(p).expect("p validated by caller"),
        LengthLaw::bernoulli_mask(q).expect("q validated by caller"),
    )
}

/// Block-error exponent of SRGRAND with a rate-R random code-book:
///
/// * 1 - R - Λ^L(H_{1/2})    below the critical rate 1 - Λ^{N^L}'(1)
/// * I^{N^L}(1 - R)          between there and capacity
/// * 0                       at and above capacity 1 - q*h2(p)
///
/// The printed form of the first boundary in the source material
/// (1 - mu^L * g*) coincides with 1 - Λ^{N^L}'(1) only for q = 1; the
/// composed-slope form is the one consistent with the inf-form
/// [`error_exponent_inf_form`] and the conditional-exponent projection,
/// which the tests verify.
pub fn error_exponent(rate: f64, q: f64, p: f64) -> f64 {
    let (d, law) = bernoulli_pair(q, p);
    let capacity_gap = 1.0 - law.mean() * d.shannon_entropy();
    if rate >= capacity_gap {
        return 0.0;
    }
    let u_star = subordinated_critical_point(&d, &law);
    if rate <= 1.0 - u_star {
        1.0 - rate - scgf_subordinated(1.0, &d, &law)
    } else {
        rate_subordinated(1.0 - rate, &d, &law)
    }
}

/// Independent route to the same exponent: the variational form
/// inf over u in [mu*H, 1-R] of (1 - R - u) + I^{N^L}(u).
pub fn error_exponent_inf_form(rate: f64, q: f64, p: f64) -> f64 {
    let (d, law) = bernoulli_pair(q, p);
    let mu_h = law.mean() * d.shannon_entropy();
    if rate >= 1.0 - mu_h {
        return 0.0;
    }
    let f = |u: f64| (1.0 - rate - u) + rate_subordinated(u, &d, &law);
    golden_min(f, mu_h, 1.0 - rate, 1e-9).max(0.0)
}

/// Error exponent conditioned on the realized masked fraction l:
///
/// * I^L(l) + 1 - R - l*H_{1/2}       for R <= 1 - l*g*
/// * I^L(l) + l * I^N((1-R)/l)        for 1 - l*g* <= R <= 1 - l*H
/// * I^L(l)                           for R > 1 - l*H
pub fn error_exponent_conditional(rate: f64, l: f64, q: f64, p: f64) -> f64 {
    assert!(l > 0.0 && l <= 1.0, "masked fraction must be in (0, 1]");
    let (d, law) = bernoulli_pair(q, p);
    let il = rate_length(l, &law);
    if rate > 1.0 - l * d.shannon_entropy() {
        return il;
    }
    // with no slope-1 point on I^N (p = 1/2 degenerate) the first branch is
    // never active
    let first_branch_edge = g_star(&d).map(|g| 1.0 - l * g).unwrap_or(f64::NEG_INFINITY);
    if rate <= first_branch_edge {
        il + 1.0 - rate - d.renyi_entropy(0.5) * l
    } else {
        il + l * rate_noise((1.0 - rate) / l, &d)
    }
}

/// Both terms of the SRGRANDAB exponent, kept separate for inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbandonmentExponentParts {
    /// The ML-race term, `error_exponent(R)`.
    pub ml: f64,
    /// Exponent of the abandonment event itself.
    pub abandonment: f64,
}

impl AbandonmentExponentParts {
    pub fn value(&self) -> f64 {
        self.ml.min(self.abandonment)
    }
}

/// SRGRANDAB error exponent min(eps(R), I^{N^L}(mu^L*H + delta)) for the
/// budget |A|^(n(mu^L*H + delta)).
pub fn abandonment_exponent_parts(rate: f64, q: f64, p: f64, delta: f64) -> AbandonmentExponentParts {
    assert!(delta > 0.0, "delta must be positive");
    let (d, law) = bernoulli_pair(q, p);
    AbandonmentExponentParts {
        ml: error_exponent(rate, q, p),
        abandonment: rate_subordinated(law.mean() * d.shannon_entropy() + delta, &d, &law),
    }
}

pub fn abandonment_exponent(rate: f64, q: f64, p: f64, delta: f64) -> f64 {
    abandonment_exponent_parts(rate, q, p, delta).value()
}

/// Literal published shorthand with the unscaled entropy argument,
/// min(eps(R), I^{N^L}(H + delta)). The mean-scaled form matches the
/// SRGRANDAB budget definition and is the authoritative one.
pub fn abandonment_exponent_unscaled(rate: f64, q: f64, p: f64, delta: f64) -> f64 {
    assert!(delta > 0.0, "delta must be positive");
    let (d, law) = bernoulli_pair(q, p);
    error_exponent(rate, q, p).min(rate_subordinated(d.shannon_entropy() + delta, &d, &law))
}

/// Exponential growth rate of the expected SRGRAND query count:
/// min(Λ^L(H_{1/2}), 1 - R).
pub fn complexity_exponent(rate: f64, q: f64, p: f64) -> f64 {
    let (d, law) = bernoulli_pair(q, p);
    scgf_subordinated(1.0, &d, &law).min(1.0 - rate)
}

/// SRGRANDAB counterpart: min(Λ^L(H_{1/2}), 1 - R, mu^L*H + delta).
pub fn complexity_exponent_ab(rate: f64, q: f64, p: f64, delta: f64) -> f64 {
    let (d, law) = bernoulli_pair(q, p);
    complexity_exponent(rate, q, p).min(law.mean() * d.shannon_entropy() + delta)
}

/// Finite-blocklength approximation 2^(-n*eps(R)) of the ML block error
/// probability. Above capacity the formula degenerates; the value is clamped
/// to 1 and flagged.
pub fn approx_bler(n: usize, rate: f64, q: f64, p: f64) -> (f64, bool) {
    if rate >= capacity_sr(q, p) {
        return (1.0, true);
    }
    ((-(n as f64) * error_exponent(rate, q, p)).exp2(), false)
}

/// Approximate SRGRAND guesses per bit, 2^(n*min(1-R, Λ^L(H_{1/2}))) / n.
pub fn approx_queries_per_bit(n: usize, rate: f64, q: f64, p: f64) -> f64 {
    ((n as f64) * complexity_exponent(rate, q, p)).exp2() / n as f64
}

/// Conditional-probability computations per bit, 2^(n*min(R, 1-R)) / n, for
/// the brute-force ML comparison curve.
pub fn approx_ml_computations_per_bit(n: usize, rate: f64) -> f64 {
    ((n as f64) * rate.min(1.0 - rate)).exp2() / n as f64
}

/// A sampled (x, exponent) curve with its channel labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentCurve {
    pub label: String,
    pub kind: String,
    pub q: f64,
    pub p: f64,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl ExponentCurve {
    pub fn sample(
        label: impl Into<String>,
        kind: impl Into<String>,
        q: f64,
        p: f64,
        xs: Vec<f64>,
        f: impl Fn(f64) -> f64,
    ) -> Self {
        let ys = xs.iter().map(|&x| f(x)).collect();
        ExponentCurve {
            label: label.into(),
            kind: kind.into(),
            q,
            p,
            xs,
            ys,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.ys.iter().all(|y| y.is_finite())
    }

    /// Most negative second difference over the sampled grid; a convex curve
    /// on a uniform grid keeps this above a small negative tolerance.
    pub fn max_convexity_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for w in self.ys.windows(3) {
            worst = worst.min(w[0] - 2.0 * w[1] + w[2]);
        }
        worst
    }
}

impl fmt::Display for ExponentCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} points, q={}, p={})",
            self.label,
            self.xs.len(),
            self.q,
            self.p
        )
    }
}
