//! Seeded Monte Carlo block-error-rate and complexity sweeps.
//!
//! Every trial derives its own generator from (seed, point index, trial
//! index), so results are independent of thread scheduling and of which
//! decoders share the sweep: all decoders at a grid point score byte-identical
//! channel realizations, and two sweeps with the same seed are paired trial
//! for trial even across different codes of the same length. Accumulators
//! are exact integers, which keeps re-runs byte-identical in the CSV.

use grand::bits::BitBlock;
use grand::channel::{transmit_bpsk_awgn, transmit_srbsc, SrBscParams};
use grand::code::LinearCode;
use grand::decoder::{
    grand_with_params, matched_budget_srgrandab, resolve_budget, srgrand_with_params,
    AbandonmentRule, Budget,
};
use grand::rng::{fork_seed, Rng};
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::config::{ChannelPoint, DecoderSpec, ExperimentConfig, HarnessError};

/// Aggregated statistics for one (grid point, decoder) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub point: ChannelPoint,
    pub decoder: String,
    pub code_label: String,
    pub n: usize,
    pub k: usize,
    pub trials_run: u64,
    pub block_errors: u64,
    pub abandoned: u64,
    pub total_queries: u128,
    pub seed: u64,
}

impl PointResult {
    pub fn bler(&self) -> f64 {
        self.block_errors as f64 / self.trials_run as f64
    }

    /// Wilson 95% score interval for the block error rate.
    pub fn bler_ci(&self) -> (f64, f64) {
        wilson_interval(self.block_errors, self.trials_run)
    }

    pub fn mean_queries_per_bit(&self) -> f64 {
        self.total_queries as f64 / self.trials_run as f64 / self.n as f64
    }

    pub fn abandon_rate(&self) -> f64 {
        self.abandoned as f64 / self.trials_run as f64
    }
}

/// Results for a whole sweep, grid-point major, decoder order as configured.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<PointResult>,
}

pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // rounding at the extremes must not push the interval off the estimate
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

/// Per-trial outcome for one decoder.
#[derive(Clone, Copy, Default)]
struct TrialStat {
    error: bool,
    abandoned: bool,
    queries: u64,
}

#[derive(Clone, Copy, Default)]
struct Accum {
    errors: u64,
    abandoned: u64,
    queries: u128,
}

impl Accum {
    fn add(&mut self, t: TrialStat) {
        self.errors += t.error as u64;
        self.abandoned += t.abandoned as u64;
        self.queries += t.queries as u128;
    }
}

/// A decoder with its abandonment rule pinned down for one grid point.
struct Runner {
    name: String,
    masked: bool,
    rule: AbandonmentRule,
}

fn budget_to_rule(budget: Budget) -> AbandonmentRule {
    match budget {
        Budget::Unlimited => AbandonmentRule::None,
        Budget::Queries(q) => AbandonmentRule::MaxQueries(q),
    }
}

/// Resolve decoder specs against the block length, the matched-budget
/// convention and the query valve. Rules that do not depend on the realized
/// mask are pre-resolved to flat query budgets.
fn build_runners(
    cfg: &ExperimentConfig,
    n: usize,
    params: Option<&SrBscParams>,
) -> Result<Vec<Runner>, HarnessError> {
    let grandab_rule = cfg
        .decoders
        .iter()
        .find_map(|d| match d {
            DecoderSpec::GrandAb(r) => Some(r.to_rule(false, params)),
            _ => None,
        })
        .transpose()?;
    let valve = |rule: AbandonmentRule, search_len: Option<usize>| -> Result<AbandonmentRule, HarnessError> {
        let Some(cap) = cfg.max_queries_valve else {
            return Ok(rule);
        };
        let cap = BigUint::from(cap);
        match search_len {
            // mask-dependent rules keep their shape; the valve is applied
            // per trial inside the decode call
            None => Ok(rule),
            Some(l) => {
                let resolved = resolve_budget(&rule, n, l, params)
                    .map_err(|e| HarnessError::config(e.to_string()))?;
                Ok(match resolved {
                    Budget::Unlimited => AbandonmentRule::MaxQueries(cap),
                    Budget::Queries(q) => AbandonmentRule::MaxQueries(q.min(cap)),
                })
            }
        }
    };
    cfg.decoders
        .iter()
        .map(|spec| {
            let name = spec.to_string();
            match spec {
                DecoderSpec::Grand => Ok(Runner {
                    name,
                    masked: false,
                    rule: valve(AbandonmentRule::None, Some(n))?,
                }),
                DecoderSpec::GrandAb(r) => {
                    let budget = resolve_budget(&r.to_rule(false, params)?, n, n, params)
                        .map_err(|e| HarnessError::config(e.to_string()))?;
                    Ok(Runner {
                        name,
                        masked: false,
                        rule: valve(budget_to_rule(budget), Some(n))?,
                    })
                }
                DecoderSpec::SrGrand => Ok(Runner {
                    name,
                    masked: true,
                    rule: AbandonmentRule::None,
                }),
                DecoderSpec::SrGrandAb(rule) => {
                    let rule = match rule {
                        None => {
                            let g = grandab_rule
                                .as_ref()
                                .expect("validated: matched needs grandab");
                            matched_budget_srgrandab(g, n)
                                .map_err(|e| HarnessError::config(e.to_string()))?
                        }
                        Some(r) => r.to_rule(true, params)?,
                    };
                    // flat budgets can take the valve now
                    let rule = match &rule {
                        AbandonmentRule::MaxQueries(_) => valve(rule, Some(n))?,
                        _ => rule,
                    };
                    Ok(Runner {
                        name,
                        masked: true,
                        rule,
                    })
                }
            }
        })
        .collect()
}

/// Transmitted word and channel realization for one trial of `code`.
///
/// Stream layout: fork 0 is reserved for code rerandomization, fork 1 draws
/// the message, fork 2 drives the channel — so realizations are identical
/// across decoders and across sweeps sharing a seed, whatever the code.
fn realize_trial(
    code: &LinearCode,
    point: &ChannelPoint,
    trial_seed: u64,
) -> (BitBlock, grand::ChannelRealization) {
    let mut msg_rng = Rng::from_seed(fork_seed(trial_seed, 1));
    let msg = BitBlock::random(code.k(), &mut msg_rng);
    let x = code.encode(&msg).expect("message length matches k");
    let mut chan_rng = Rng::from_seed(fork_seed(trial_seed, 2));
    let realization = match point {
        ChannelPoint::SrBsc { q, p, .. } => {
            let params = SrBscParams::new(*q, *p).expect("validated grid point");
            transmit_srbsc(&x, &params, &mut chan_rng)
        }
        ChannelPoint::BpskAwgn {
            ebno_db,
            llr_threshold,
        } => transmit_bpsk_awgn(&x, *ebno_db, *llr_threshold, &mut chan_rng),
    };
    (x, realization)
}

/// Run the full sweep: for every grid point, paired trials across all
/// decoders with early stopping once every decoder has `stop_at_errors`
/// block errors (or the trial cap is reached).
pub fn run_sweep(
    cfg: &ExperimentConfig,
    grid: &[ChannelPoint],
) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    if grid.is_empty() {
        return Err(HarnessError::config("empty channel grid"));
    }
    // the template code: fixed codes are built once, rerandomized codes only
    // provide (n, k) here
    let mut template_rng = Rng::from_seed(fork_seed(cfg.seed, u64::MAX));
    let template = cfg.code.build(&mut template_rng)?;
    let n = template.n();
    let k = template.k();
    let mut rows = Vec::new();

    for (point_idx, point) in grid.iter().enumerate() {
        let params = match point {
            ChannelPoint::SrBsc { q, p, .. } => Some(SrBscParams::new(*q, *p).unwrap()),
            ChannelPoint::BpskAwgn { .. } => None,
        };
        let runners = build_runners(cfg, n, params.as_ref())?;
        let point_seed = fork_seed(cfg.seed, point_idx as u64);
        let mut accums = vec![Accum::default(); runners.len()];
        let mut trials_run = 0u64;

        const CHUNK: u64 = 1024;
        while trials_run < cfg.trials {
            let take = CHUNK.min(cfg.trials - trials_run);
            let chunk: Vec<Vec<TrialStat>> = (trials_run..trials_run + take)
                .into_par_iter()
                .map(|trial| {
                    let trial_seed = fork_seed(point_seed, trial);
                    let fresh;
                    let code = if cfg.rerandomize_code {
                        let mut code_rng = Rng::from_seed(fork_seed(trial_seed, 0));
                        fresh = LinearCode::rlc(n, k, &mut code_rng)
                            .expect("dimensions already validated");
                        &fresh
                    } else {
                        &template
                    };
                    let (x, r) = realize_trial(code, point, trial_seed);
                    runners
                        .iter()
                        .map(|runner| run_one(runner, code, &x, &r, params.as_ref(), cfg))
                        .collect()
                })
                .collect();
            for stats in &chunk {
                for (acc, &stat) in accums.iter_mut().zip(stats) {
                    acc.add(stat);
                }
            }
            trials_run += take;
            if cfg.stop_at_errors > 0
                && accums.iter().all(|a| a.errors >= cfg.stop_at_errors)
            {
                break;
            }
        }

        for (runner, acc) in runners.iter().zip(&accums) {
            rows.push(PointResult {
                point: *point,
                decoder: runner.name.clone(),
                code_label: template.label().to_string(),
                n,
                k,
                trials_run,
                block_errors: acc.errors,
                abandoned: acc.abandoned,
                total_queries: acc.queries,
                seed: cfg.seed,
            });
        }
    }
    Ok(SweepResult { rows })
}

fn run_one(
    runner: &Runner,
    code: &LinearCode,
    x: &BitBlock,
    r: &grand::ChannelRealization,
    params: Option<&SrBscParams>,
    cfg: &ExperimentConfig,
) -> TrialStat {
    // mask-dependent rules meet the valve here
    let effective;
    let rule = match cfg.max_queries_valve {
        Some(cap) if runner.masked => {
            let l = r.mask.weight();
            let budget = resolve_budget(&runner.rule, code.n(), l, params)
                .expect("rule resolved during runner construction");
            let cap = BigUint::from(cap);
            effective = match budget {
                Budget::Unlimited => AbandonmentRule::MaxQueries(cap),
                Budget::Queries(q) => AbandonmentRule::MaxQueries(q.min(cap)),
            };
            &effective
        }
        _ => &runner.rule,
    };
    let outcome = if runner.masked {
        srgrand_with_params(code, &r.received, &r.mask, rule, params)
    } else {
        grand_with_params(code, &r.received, rule, params)
    }
    .expect("lengths are consistent by construction");

    // Abandoned with exactly 2^l queries means the masked subspace was
    // searched completely and holds no code-book member (only untruthful
    // masks can do this); with the fallback enabled, retry over the full
    // block under the same rule, accounting for all queries made.
    let l = r.mask.weight();
    if cfg.fallback_full
        && runner.masked
        && !outcome.is_decoded()
        && l < 64
        && outcome.queries == BigUint::from(1u128 << l)
    {
        let retry = grand_with_params(code, &r.received, rule, params)
            .expect("lengths are consistent by construction");
        return TrialStat {
            error: retry.word() != Some(x),
            abandoned: !retry.is_decoded(),
            queries: outcome.queries_u64().saturating_add(retry.queries_u64()),
        };
    }
    TrialStat {
        error: outcome.word() != Some(x),
        abandoned: !outcome.is_decoded(),
        queries: outcome.queries_u64(),
    }
}
