//! Experiment configuration: code, channel grid, decoders, budgets.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use grand::code::{CodeError, LinearCode};
use grand::rng::Rng;
use num_bigint::BigUint;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn config(msg: impl Into<String>) -> Self {
        HarnessError::Config(msg.into())
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for configuration problems, 2 for i/o.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config(_) => 1,
            HarnessError::Io { .. } => 2,
        }
    }
}

impl From<CodeError> for HarnessError {
    fn from(e: CodeError) -> Self {
        HarnessError::Config(e.to_string())
    }
}

/// Which code to decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSpec {
    Rlc { n: usize, k: usize },
    Rm { r: usize, m: usize },
    File(PathBuf),
}

impl CodeSpec {
    /// Materialize the code. Random codes draw their parity block from `rng`.
    pub fn build(&self, rng: &mut Rng) -> Result<LinearCode, HarnessError> {
        match self {
            CodeSpec::Rlc { n, k } => Ok(LinearCode::rlc(*n, *k, rng)?),
            CodeSpec::Rm { r, m } => Ok(LinearCode::reed_muller(*r, *m)?),
            CodeSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| HarnessError::io(path.display().to_string(), e))?;
                let label = format!("file:{}", path.display());
                Ok(LinearCode::import(&text, label)?)
            }
        }
    }

    pub fn is_rlc(&self) -> bool {
        matches!(self, CodeSpec::Rlc { .. })
    }
}

impl FromStr for CodeSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| HarnessError::config(format!("bad code spec {s:?} (rlc:n,k | rm:r,m | file:path)")))?;
        match kind {
            "rlc" => {
                let (n, k) = parse_pair(rest)
                    .ok_or_else(|| HarnessError::config(format!("bad rlc spec {rest:?}")))?;
                Ok(CodeSpec::Rlc { n, k })
            }
            "rm" => {
                let (r, m) = parse_pair(rest)
                    .ok_or_else(|| HarnessError::config(format!("bad rm spec {rest:?}")))?;
                Ok(CodeSpec::Rm { r, m })
            }
            "file" => Ok(CodeSpec::File(PathBuf::from(rest))),
            other => Err(HarnessError::config(format!("unknown code kind {other:?}"))),
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSpec::Rlc { n, k } => write!(f, "rlc:{n},{k}"),
            CodeSpec::Rm { r, m } => write!(f, "rm:{r},{m}"),
            CodeSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

fn parse_pair(s: &str) -> Option<(usize, usize)> {
    let (a, b) = s.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// One grid point of the channel sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelPoint {
    /// SR-BSC with the given parameters; `epsilon` is the unconditional flip
    /// rate q*p and is what lands in the CSV x column.
    SrBsc { epsilon: f64, q: f64, p: f64 },
    /// Quantized BPSK/AWGN; the CSV x column carries Eb/N0 in dB and the
    /// (q, p) columns are NaN (the mask law is not Bernoulli-exact here).
    BpskAwgn { ebno_db: f64, llr_threshold: f64 },
}

impl ChannelPoint {
    pub fn from_epsilon(epsilon: f64) -> Result<Self, HarnessError> {
        let params = grand::channel::SrBscParams::from_epsilon(epsilon)
            .map_err(|e| HarnessError::config(e.to_string()))?;
        Ok(ChannelPoint::SrBsc {
            epsilon,
            q: params.q,
            p: params.p,
        })
    }

    pub fn from_qp(q: f64, p: f64) -> Result<Self, HarnessError> {
        let params = grand::channel::SrBscParams::new(q, p)
            .map_err(|e| HarnessError::config(e.to_string()))?;
        Ok(ChannelPoint::SrBsc {
            epsilon: params.flip_rate(),
            q,
            p,
        })
    }

    /// Value for the CSV `epsilon` column.
    pub fn x_value(&self) -> f64 {
        match self {
            ChannelPoint::SrBsc { epsilon, .. } => *epsilon,
            ChannelPoint::BpskAwgn { ebno_db, .. } => *ebno_db,
        }
    }

    pub fn qp(&self) -> (f64, f64) {
        match self {
            ChannelPoint::SrBsc { q, p, .. } => (*q, *p),
            ChannelPoint::BpskAwgn { .. } => (f64::NAN, f64::NAN),
        }
    }
}

/// Abandonment rule as written on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleSpec {
    /// w<k>: all patterns up to this weight.
    MaxWeight(u32),
    /// q<n>: a flat query budget.
    MaxQueries(u64),
    /// e<delta>: typical-set budget with slack delta; the entropy comes from
    /// the channel point (h2(p)), the scale from the decoder kind (full
    /// block for grandab, mean mask for srgrandab).
    EntropyTypical(f64),
    /// er<delta>: as above but scaled by the realized mask weight of each
    /// transmission (srgrandab only).
    EntropyTypicalRealized(f64),
}

impl RuleSpec {
    /// Concrete rule for a decoder searching with (`masked`) or without a
    /// reliability mask. Entropy rules need the channel's (q, p).
    pub fn to_rule(
        &self,
        masked: bool,
        params: Option<&grand::channel::SrBscParams>,
    ) -> Result<grand::AbandonmentRule, HarnessError> {
        let entropy = |delta: f64, scale| {
            let params = params.ok_or_else(|| {
                HarnessError::config("entropy-typical rules need an SR-BSC channel point")
            })?;
            Ok(grand::AbandonmentRule::entropy_typical(params, delta, scale))
        };
        match self {
            RuleSpec::MaxWeight(w) => Ok(grand::AbandonmentRule::MaxWeight(*w)),
            RuleSpec::MaxQueries(q) => Ok(grand::AbandonmentRule::MaxQueries(BigUint::from(*q))),
            RuleSpec::EntropyTypical(delta) => entropy(
                *delta,
                if masked {
                    grand::BudgetScale::MeanMask
                } else {
                    grand::BudgetScale::FullBlock
                },
            ),
            RuleSpec::EntropyTypicalRealized(delta) => {
                if !masked {
                    return Err(HarnessError::config(
                        "realized-mask budgets only apply to srgrandab",
                    ));
                }
                entropy(*delta, grand::BudgetScale::RealizedMask)
            }
        }
    }
}

impl FromStr for RuleSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        if let Some(w) = s.strip_prefix('w') {
            return w
                .parse()
                .map(RuleSpec::MaxWeight)
                .map_err(|_| HarnessError::config(format!("bad weight rule {s:?}")));
        }
        if let Some(q) = s.strip_prefix('q') {
            return q
                .parse()
                .map(RuleSpec::MaxQueries)
                .map_err(|_| HarnessError::config(format!("bad query rule {s:?}")));
        }
        if let Some(d) = s.strip_prefix("er") {
            return d
                .parse()
                .map(RuleSpec::EntropyTypicalRealized)
                .map_err(|_| HarnessError::config(format!("bad entropy rule {s:?}")));
        }
        if let Some(d) = s.strip_prefix('e') {
            return d
                .parse()
                .map(RuleSpec::EntropyTypical)
                .map_err(|_| HarnessError::config(format!("bad entropy rule {s:?}")));
        }
        Err(HarnessError::config(format!(
            "bad abandonment rule {s:?} (w<weight> | q<queries> | e<delta> | er<delta>)"
        )))
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSpec::MaxWeight(w) => write!(f, "w{w}"),
            RuleSpec::MaxQueries(q) => write!(f, "q{q}"),
            RuleSpec::EntropyTypical(d) => write!(f, "e{d}"),
            RuleSpec::EntropyTypicalRealized(d) => write!(f, "er{d}"),
        }
    }
}

/// A decoder selection: grand | grandab:<rule> | srgrand |
/// srgrandab:<rule|matched>.
#[derive(Debug, Clone, PartialEq)]
pub enum DecoderSpec {
    Grand,
    GrandAb(RuleSpec),
    SrGrand,
    /// None means "matched": the same resolved query budget as the GRANDAB
    /// decoder in the same sweep.
    SrGrandAb(Option<RuleSpec>),
}

impl DecoderSpec {
    pub fn uses_mask(&self) -> bool {
        matches!(self, DecoderSpec::SrGrand | DecoderSpec::SrGrandAb(_))
    }
}

impl FromStr for DecoderSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "grand" => return Ok(DecoderSpec::Grand),
            "srgrand" => return Ok(DecoderSpec::SrGrand),
            _ => {}
        }
        if let Some(rule) = s.strip_prefix("grandab:") {
            return Ok(DecoderSpec::GrandAb(rule.parse()?));
        }
        if let Some(rule) = s.strip_prefix("srgrandab:") {
            if rule == "matched" {
                return Ok(DecoderSpec::SrGrandAb(None));
            }
            return Ok(DecoderSpec::SrGrandAb(Some(rule.parse()?)));
        }
        Err(HarnessError::config(format!("unknown decoder {s:?}")))
    }
}

impl fmt::Display for DecoderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoderSpec::Grand => write!(f, "grand"),
            DecoderSpec::GrandAb(r) => write!(f, "grandab:{r}"),
            DecoderSpec::SrGrand => write!(f, "srgrand"),
            DecoderSpec::SrGrandAb(None) => write!(f, "srgrandab:matched"),
            DecoderSpec::SrGrandAb(Some(r)) => write!(f, "srgrandab:{r}"),
        }
    }
}

/// Everything a sweep needs besides the channel grid.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub code: CodeSpec,
    pub decoders: Vec<DecoderSpec>,
    /// Trial cap per grid point.
    pub trials: u64,
    /// Early stop once every decoder has this many block errors (0 = never).
    pub stop_at_errors: u64,
    /// Draw a fresh random code every trial (RLC only).
    pub rerandomize_code: bool,
    pub seed: u64,
    /// Hard per-decode query cap, independent of decoder semantics.
    pub max_queries_valve: Option<u64>,
    /// When a masked decoder exhausts an untruthful mask's subspace without
    /// finding a member, retry over the full block with the same rule. Off by
    /// default: exhaustion is reported as abandonment.
    pub fallback_full: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::config("trials must be at least 1"));
        }
        if self.decoders.is_empty() {
            return Err(HarnessError::config("at least one decoder is required"));
        }
        if self.rerandomize_code && !self.code.is_rlc() {
            return Err(HarnessError::config(
                "rerandomize_code requires an rlc code spec",
            ));
        }
        let wants_matched = self
            .decoders
            .iter()
            .any(|d| matches!(d, DecoderSpec::SrGrandAb(None)));
        let has_grandab = self
            .decoders
            .iter()
            .any(|d| matches!(d, DecoderSpec::GrandAb(_)));
        if wants_matched && !has_grandab {
            return Err(HarnessError::config(
                "srgrandab:matched needs a grandab decoder in the same sweep",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_spec_parsing() {
        assert_eq!(
            "rlc:128,99".parse::<CodeSpec>().unwrap(),
            CodeSpec::Rlc { n: 128, k: 99 }
        );
        assert_eq!(
            "rm:4,7".parse::<CodeSpec>().unwrap(),
            CodeSpec::Rm { r: 4, m: 7 }
        );
        assert!(matches!(
            "file:x.txt".parse::<CodeSpec>().unwrap(),
            CodeSpec::File(_)
        ));
        assert!("rlc:128".parse::<CodeSpec>().is_err());
        assert!("nope:1,2".parse::<CodeSpec>().is_err());
        assert_eq!("rlc:128,99".parse::<CodeSpec>().unwrap().to_string(), "rlc:128,99");
    }

    #[test]
    fn decoder_spec_parsing() {
        assert_eq!("grand".parse::<DecoderSpec>().unwrap(), DecoderSpec::Grand);
        assert_eq!(
            "grandab:w4".parse::<DecoderSpec>().unwrap(),
            DecoderSpec::GrandAb(RuleSpec::MaxWeight(4))
        );
        assert_eq!(
            "srgrandab:matched".parse::<DecoderSpec>().unwrap(),
            DecoderSpec::SrGrandAb(None)
        );
        assert_eq!(
            "srgrandab:q500".parse::<DecoderSpec>().unwrap(),
            DecoderSpec::SrGrandAb(Some(RuleSpec::MaxQueries(500)))
        );
        assert!("grandab:z3".parse::<DecoderSpec>().is_err());
        assert!("turbo".parse::<DecoderSpec>().is_err());
        assert_eq!(
            "grandab:e0.05".parse::<DecoderSpec>().unwrap(),
            DecoderSpec::GrandAb(RuleSpec::EntropyTypical(0.05))
        );
        assert_eq!(
            "srgrandab:er0.1".parse::<DecoderSpec>().unwrap(),
            DecoderSpec::SrGrandAb(Some(RuleSpec::EntropyTypicalRealized(0.1)))
        );
        for s in [
            "grand",
            "grandab:w4",
            "srgrand",
            "srgrandab:matched",
            "srgrandab:q12",
            "grandab:e0.05",
            "srgrandab:er0.1",
        ] {
            assert_eq!(s.parse::<DecoderSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn entropy_rules_resolve_against_channel_params() {
        let params = grand::channel::SrBscParams::new(0.3, 0.1).unwrap();
        let rule = RuleSpec::EntropyTypical(0.05)
            .to_rule(true, Some(&params))
            .unwrap();
        assert!(matches!(
            rule,
            grand::AbandonmentRule::EntropyTypical {
                scale: grand::BudgetScale::MeanMask,
                ..
            }
        ));
        let rule = RuleSpec::EntropyTypical(0.05)
            .to_rule(false, Some(&params))
            .unwrap();
        assert!(matches!(
            rule,
            grand::AbandonmentRule::EntropyTypical {
                scale: grand::BudgetScale::FullBlock,
                ..
            }
        ));
        assert!(RuleSpec::EntropyTypical(0.05).to_rule(false, None).is_err());
        assert!(RuleSpec::EntropyTypicalRealized(0.05)
            .to_rule(false, Some(&params))
            .is_err());
    }

    #[test]
    fn config_validation() {
        let base = ExperimentConfig {
            code: CodeSpec::Rlc { n: 16, k: 8 },
            decoders: vec![DecoderSpec::Grand],
            trials: 10,
            stop_at_errors: 0,
            rerandomize_code: false,
            seed: 1,
            max_queries_valve: None,
            fallback_full: false,
        };
        assert!(base.validate().is_ok());
        let mut bad = base.clone();
        bad.trials = 0;
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.decoders.clear();
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.code = CodeSpec::Rm { r: 1, m: 4 };
        bad.rerandomize_code = true;
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.decoders = vec![DecoderSpec::SrGrandAb(None)];
        assert!(bad.validate().is_err(), "matched budget needs grandab");
        let mut ok = base;
        ok.decoders = vec![
            DecoderSpec::GrandAb(RuleSpec::MaxWeight(3)),
            DecoderSpec::SrGrandAb(None),
        ];
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn channel_points() {
        let p = ChannelPoint::from_epsilon(0.01).unwrap();
        let (q, pp) = p.qp();
        assert!((q - 0.1).abs() < 1e-12 && (pp - 0.1).abs() < 1e-12);
        assert_eq!(p.x_value(), 0.01);
        assert!(ChannelPoint::from_epsilon(-0.5).is_err());
        assert!(ChannelPoint::from_qp(0.4, 1.4).is_err());
        let a = ChannelPoint::BpskAwgn {
            ebno_db: 6.0,
            llr_threshold: 2.0,
        };
        assert!(a.qp().0.is_nan());
    }
}
