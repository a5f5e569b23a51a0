//! Command-line entry point.
//!
//! Subcommands: `sweep` (Monte Carlo BLER/complexity), `curves` (analytical
//! families), `quantize` (fit SR-BSC parameters to a quantized AWGN
//! channel), `codegen` (export a code in the plain-text format).
//! Exit codes: 0 success, 1 configuration error, 2 i/o error.

use std::fs;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use grand::channel::{calibrate_llr_threshold, estimate_srbsc_from_awgn};
use grand::rng::Rng;
use grand_cli::config::{ChannelPoint, CodeSpec, DecoderSpec, ExperimentConfig, HarnessError};
use grand_cli::csvout::{sweep_csv_string, write_curves_csv};
use grand_cli::curves::{self, CurveSet};
use grand_cli::svg::{render_svg, SvgOptions};
use grand_cli::sweep::run_sweep;

#[derive(Parser)]
#[command(
    name = "grand",
    about = "Noise-guessing decoders over binary linear codes: Monte Carlo sweeps and analysis curves",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo block-error-rate and query-count sweep over a channel grid
    Sweep(SweepArgs),
    /// Analytical exponent / performance / capacity curve families
    Curves(CurvesArgs),
    /// Fit SR-BSC (q, p) to an LLR-thresholded BPSK/AWGN channel
    Quantize(QuantizeArgs),
    /// Export a code to the plain-text generator format
    Codegen(CodegenArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Code spec: rlc:n,k | rm:r,m | file:path
    #[arg(long)]
    code: String,
    /// Comma-separated unconditional flip rates (q = p = sqrt(eps) per point)
    #[arg(long)]
    epsilons: Option<String>,
    /// Comma-separated q:p pairs, e.g. 0.4:0.1,0.3:0.2
    #[arg(long)]
    qp: Option<String>,
    /// Comma-separated Eb/N0 values in dB for a quantized AWGN sweep
    #[arg(long)]
    awgn_ebno: Option<String>,
    /// LLR threshold for the AWGN mask (with --awgn-ebno)
    #[arg(long, default_value_t = 4.0)]
    llr_threshold: f64,
    /// Comma-separated decoders: grand | grandab:w4 | grandab:qN |
    /// grandab:e<delta> | srgrand | srgrandab:matched | srgrandab:w4 |
    /// srgrandab:qN | srgrandab:e<delta> | srgrandab:er<delta>
    #[arg(long)]
    decoders: String,
    /// Trial cap per grid point
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Early stop once every decoder has this many block errors (0 = never)
    #[arg(long, default_value_t = 100)]
    stop_at_errors: u64,
    /// Fresh random code each trial (RLC only)
    #[arg(long)]
    rerandomize: bool,
    /// Hard per-decode query cap, a wall-clock safety valve
    #[arg(long)]
    max_queries: Option<u64>,
    /// Retry over the full block when an untruthful mask's subspace is
    /// exhausted without a member (otherwise reported as abandonment)
    #[arg(long)]
    fallback_full: bool,
    /// Base seed; the sweep is a pure function of (seed, config)
    #[arg(long)]
    seed: u64,
    /// Output CSV path (- for stdout)
    #[arg(long, default_value = "-")]
    out: String,
    /// Optional SVG chart of BLER versus the grid
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Args)]
struct CurvesArgs {
    /// error-exponents | approx-perf | capacity | complexity
    #[arg(long)]
    kind: String,
    /// Product pq held constant across the family
    #[arg(long, default_value_t = 0.05)]
    pq: f64,
    /// Comma-separated q values for the family
    #[arg(long, default_value = "1,0.5,0.25,0.1")]
    qs: String,
    /// Comma-separated p values (capacity curves only)
    #[arg(long, default_value = "0.05,0.1,0.3")]
    ps: String,
    /// Rate grid: min,max,steps
    #[arg(long, default_value = "0.02,0.98,96")]
    rates: String,
    /// Block length for approx-perf
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Target block error rate for approx-perf diamonds
    #[arg(long, default_value_t = 1e-2)]
    target_bler: f64,
    /// Typical-set slack for complexity-ab curves
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Output CSV path (- for stdout)
    #[arg(long, default_value = "-")]
    out: String,
    /// Optional SVG chart
    #[arg(long)]
    svg: Option<String>,
    /// Log-scale y axis in the SVG
    #[arg(long)]
    log_y: bool,
}

#[derive(Args)]
struct QuantizeArgs {
    #[arg(long)]
    ebno_db: f64,
    /// LLR threshold; omit to calibrate one against --target-fn
    #[arg(long)]
    llr_threshold: Option<f64>,
    /// Calibrate the smallest threshold with false-negative rate below this
    #[arg(long, default_value_t = 1e-4)]
    target_fn: f64,
    /// Monte Carlo size in bits
    #[arg(long, default_value_t = 1_000_000)]
    bits: u64,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct CodegenArgs {
    /// Code spec: rlc:n,k | rm:r,m
    #[arg(long)]
    code: String,
    /// Seed for random code construction
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (- for stdout)
    #[arg(long, default_value = "-")]
    out: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Curves(args) => cmd_curves(args),
        Command::Quantize(args) => cmd_quantize(args),
        Command::Codegen(args) => cmd_codegen(args),
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, HarnessError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| HarnessError::config(format!("bad {what} value {t:?}")))
        })
        .collect()
}

fn write_out(path: &str, contents: &str) -> Result<(), HarnessError> {
    if path == "-" {
        print!("{contents}");
        Ok(())
    } else {
        fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), HarnessError> {
    let code: CodeSpec = args.code.parse()?;
    let decoders: Vec<DecoderSpec> = args
        .decoders
        .split(',')
        .map(|d| d.trim().parse())
        .collect::<Result<_, _>>()?;
    let mut grid: Vec<ChannelPoint> = Vec::new();
    if let Some(eps) = &args.epsilons {
        for e in parse_list(eps, "epsilon")? {
            grid.push(ChannelPoint::from_epsilon(e)?);
        }
    }
    if let Some(qp) = &args.qp {
        for pair in qp.split(',') {
            let (q, p) = pair
                .split_once(':')
                .ok_or_else(|| HarnessError::config(format!("bad q:p pair {pair:?}")))?;
            let q = q
                .trim()
                .parse()
                .map_err(|_| HarnessError::config(format!("bad q {q:?}")))?;
            let p = p
                .trim()
                .parse()
                .map_err(|_| HarnessError::config(format!("bad p {p:?}")))?;
            grid.push(ChannelPoint::from_qp(q, p)?);
        }
    }
    if let Some(ebnos) = &args.awgn_ebno {
        for e in parse_list(ebnos, "ebno")? {
            grid.push(ChannelPoint::BpskAwgn {
                ebno_db: e,
                llr_threshold: args.llr_threshold,
            });
        }
    }
    if grid.is_empty() {
        return Err(HarnessError::config(
            "no channel grid: pass --epsilons, --qp or --awgn-ebno",
        ));
    }
    let cfg = ExperimentConfig {
        code,
        decoders,
        trials: args.trials,
        stop_at_errors: args.stop_at_errors,
        rerandomize_code: args.rerandomize,
        seed: args.seed,
        max_queries_valve: args.max_queries,
        fallback_full: args.fallback_full,
    };
    let result = run_sweep(&cfg, &grid)?;
    write_out(&args.out, &sweep_csv_string(&result))?;
    if let Some(svg_path) = &args.svg {
        let mut set = CurveSet::default();
        for decoder in cfg.decoders.iter().map(|d| d.to_string()) {
            let rows: Vec<_> = result.rows.iter().filter(|r| r.decoder == decoder).collect();
            set.curves.push(grand::ldp::ExponentCurve {
                label: decoder.clone(),
                kind: "bler".into(),
                q: f64::NAN,
                p: f64::NAN,
                xs: rows.iter().map(|r| r.point.x_value()).collect(),
                ys: rows.iter().map(|r| r.bler()).collect(),
            });
        }
        let svg = render_svg(
            &set,
            &SvgOptions {
                title: format!("BLER, {} (seed {})", args.code, args.seed),
                x_label: "channel grid".into(),
                y_label: "block error rate".into(),
                log_y: true,
            },
        );
        write_out(svg_path, &svg)?;
    }
    Ok(())
}

fn cmd_curves(args: CurvesArgs) -> Result<(), HarnessError> {
    let qs = parse_list(&args.qs, "q")?;
    let rate_spec = parse_list(&args.rates, "rate grid")?;
    if rate_spec.len() != 3 {
        return Err(HarnessError::config("--rates wants min,max,steps"));
    }
    let rates = curves::grid(rate_spec[0], rate_spec[1], rate_spec[2] as usize);
    let (set, y_label, log_y) = match args.kind.as_str() {
        "error-exponents" => (
            curves::error_exponent_curves(args.pq, &qs, &rates)?,
            "error exponent (bits/symbol)".to_string(),
            false,
        ),
        "approx-perf" => (
            curves::approx_perf_curves(args.n, args.pq, &qs, &rates, args.target_bler)?,
            format!("approx BLER / queries per bit at n={}", args.n),
            true,
        ),
        "capacity" => (
            curves::capacity_curves(&parse_list(&args.ps, "p")?, &curves::grid(0.0, 1.0, 100))?,
            "capacity (bits/symbol)".to_string(),
            false,
        ),
        "complexity" => (
            curves::complexity_curves(args.pq, &qs, &rates, args.delta)?,
            "complexity exponent (bits/symbol)".to_string(),
            false,
        ),
        other => {
            return Err(HarnessError::config(format!(
                "unknown curve kind {other:?} (error-exponents | approx-perf | capacity | complexity)"
            )))
        }
    };
    let mut buf = Vec::new();
    write_curves_csv(&set, &mut buf).expect("memory write");
    write_out(&args.out, &String::from_utf8(buf).expect("ascii"))?;
    if let Some(svg_path) = &args.svg {
        let svg = render_svg(
            &set,
            &SvgOptions {
                title: format!("{} (pq={})", args.kind, args.pq),
                x_label: if args.kind == "capacity" { "q" } else { "code-book rate R" }.into(),
                y_label,
                log_y: args.log_y || log_y,
            },
        );
        write_out(svg_path, &svg)?;
    }
    Ok(())
}

fn cmd_quantize(args: QuantizeArgs) -> Result<(), HarnessError> {
    if args.bits == 0 {
        return Err(HarnessError::config("--bits must be positive"));
    }
    let mut rng = Rng::from_seed(args.seed);
    let threshold = match args.llr_threshold {
        Some(t) if t >= 0.0 => t,
        Some(t) => return Err(HarnessError::config(format!("negative threshold {t}"))),
        None => calibrate_llr_threshold(args.ebno_db, args.target_fn, args.bits, &mut rng),
    };
    let fit = estimate_srbsc_from_awgn(args.ebno_db, threshold, args.bits, &mut rng);
    println!("ebno_db,llr_threshold,q,p,p_observed,false_negative_rate,bits");
    println!(
        "{},{},{},{},{},{},{}",
        grand_cli::csvout::fmt_real(args.ebno_db),
        grand_cli::csvout::fmt_real(threshold),
        grand_cli::csvout::fmt_real(fit.params.q),
        grand_cli::csvout::fmt_real(fit.params.p),
        fit.p_observed,
        grand_cli::csvout::fmt_real(fit.false_negative_rate),
        fit.bits,
    );
    Ok(())
}

fn cmd_codegen(args: CodegenArgs) -> Result<(), HarnessError> {
    let spec: CodeSpec = args.code.parse()?;
    if matches!(spec, CodeSpec::File(_)) {
        return Err(HarnessError::config("codegen wants rlc: or rm:, not file:"));
    }
    let mut rng = Rng::from_seed(args.seed);
    let code = spec.build(&mut rng)?;
    write_out(&args.out, &code.export())
}
