//! CSV emission with a lossless, byte-stable number format.
//!
//! Reals are serialized with 17 significant digits, which round-trips f64
//! exactly; re-running a sweep with the same seed and config reproduces the
//! file byte for byte.

use std::io::{self, Write};

use crate::config::HarnessError;
use crate::curves::CurveSet;
use crate::sweep::SweepResult;

pub const SWEEP_HEADER: &str = "epsilon,q,p,decoder,code,n,k,trials,block_errors,bler,bler_ci_lo,bler_ci_hi,mean_queries_per_bit,abandon_rate,seed";

pub const CURVES_HEADER: &str = "kind,label,q,p,x,y";

/// 17-significant-digit decimal form; parses back to the identical f64.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Quote a text field when it contains a comma or a quote (code labels like
/// "RLC[128,99]" do), doubling embedded quotes.
fn quote_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Split one CSV line honoring the quoting above.
fn split_fields(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if in_quotes && chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            '"' => in_quotes = !in_quotes,
            ',' if !in_quotes => {
                fields.push(std::mem::take(&mut cur));
            }
            other => cur.push(other),
        }
    }
    fields.push(cur);
    fields
}

pub fn write_sweep_csv<W: Write>(result: &SweepResult, mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for row in &result.rows {
        let (q, p) = row.point.qp();
        let (ci_lo, ci_hi) = row.bler_ci();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_real(row.point.x_value()),
            fmt_real(q),
            fmt_real(p),
            quote_field(&row.decoder),
            quote_field(&row.code_label),
            row.n,
            row.k,
            row.trials_run,
            row.block_errors,
            fmt_real(row.bler()),
            fmt_real(ci_lo),
            fmt_real(ci_hi),
            fmt_real(row.mean_queries_per_bit()),
            fmt_real(row.abandon_rate()),
            row.seed,
        )?;
    }
    Ok(())
}

pub fn sweep_csv_string(result: &SweepResult) -> String {
    let mut buf = Vec::new();
    write_sweep_csv(result, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv is ascii")
}

/// A parsed sweep row; used to verify the lossless round-trip.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCsvRow {
    pub epsilon: f64,
    pub q: f64,
    pub p: f64,
    pub decoder: String,
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub bler_ci_lo: f64,
    pub bler_ci_hi: f64,
    pub mean_queries_per_bit: f64,
    pub abandon_rate: f64,
    pub seed: u64,
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepCsvRow>, HarnessError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| HarnessError::config("empty csv"))?;
    if header != SWEEP_HEADER {
        return Err(HarnessError::config(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let fields = split_fields(line);
        if fields.len() != 15 {
            return Err(HarnessError::config(format!(
                "row {idx} has {} fields, expected 15",
                fields.len()
            )));
        }
        let real = |i: usize| -> Result<f64, HarnessError> {
            fields[i]
                .parse()
                .map_err(|_| HarnessError::config(format!("row {idx} field {i} not a real")))
        };
        let int = |i: usize| -> Result<u64, HarnessError> {
            fields[i]
                .parse()
                .map_err(|_| HarnessError::config(format!("row {idx} field {i} not an integer")))
        };
        rows.push(SweepCsvRow {
            epsilon: real(0)?,
            q: real(1)?,
            p: real(2)?,
            decoder: fields[3].to_string(),
            code: fields[4].to_string(),
            n: int(5)? as usize,
            k: int(6)? as usize,
            trials: int(7)?,
            block_errors: int(8)?,
            bler: real(9)?,
            bler_ci_lo: real(10)?,
            bler_ci_hi: real(11)?,
            mean_queries_per_bit: real(12)?,
            abandon_rate: real(13)?,
            seed: int(14)?,
        });
    }
    Ok(rows)
}

pub fn write_curves_csv<W: Write>(set: &CurveSet, mut out: W) -> io::Result<()> {
    writeln!(out, "{CURVES_HEADER}")?;
    for curve in &set.curves {
        for (x, y) in curve.xs.iter().zip(&curve.ys) {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                quote_field(&curve.kind),
                quote_field(&curve.label),
                fmt_real(curve.q),
                fmt_real(curve.p),
                fmt_real(*x),
                fmt_real(*y),
            )?;
        }
    }
    for m in &set.markers {
        writeln!(
            out,
            "marker,{},{},{},{},{}",
            quote_field(&m.label),
            fmt_real(m.q),
            fmt_real(m.p),
            fmt_real(m.x),
            fmt_real(m.y),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ChannelPoint, CodeSpec, DecoderSpec, ExperimentConfig};
    use crate::sweep::run_sweep;

    #[test]
    fn real_format_roundtrips_exactly() {
        for x in [
            0.0,
            1.0 / 3.0,
            0.953_100_440_641_071_9,
            1.7e-300,
            2f64.powi(510),
            -0.125,
        ] {
            let s = fmt_real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert!(fmt_real(f64::NAN).parse::<f64>().unwrap().is_nan());
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let result = SweepResult { rows: vec![] };
        assert_eq!(sweep_csv_string(&result), format!("{SWEEP_HEADER}\n"));
    }

    #[test]
    fn csv_roundtrip_reproduces_numerics() {
        let cfg = ExperimentConfig {
            code: CodeSpec::Rlc { n: 16, k: 8 },
            decoders: vec![DecoderSpec::Grand, DecoderSpec::SrGrand],
            trials: 300,
            stop_at_errors: 0,
            rerandomize_code: false,
            seed: 5,
            max_queries_valve: None,
            fallback_full: false,
        };
        let grid = [ChannelPoint::from_epsilon(0.04).unwrap()];
        let result = run_sweep(&cfg, &grid).unwrap();
        let text = sweep_csv_string(&result);
        let rows = parse_sweep_csv(&text).unwrap();
        assert_eq!(rows.len(), result.rows.len());
        for (parsed, orig) in rows.iter().zip(&result.rows) {
            assert_eq!(parsed.epsilon, orig.point.x_value());
            assert_eq!(parsed.bler, orig.bler());
            assert_eq!(parsed.bler_ci_lo, orig.bler_ci().0);
            assert_eq!(parsed.bler_ci_hi, orig.bler_ci().1);
            assert_eq!(parsed.mean_queries_per_bit, orig.mean_queries_per_bit());
            assert_eq!(parsed.trials, orig.trials_run);
            assert_eq!(parsed.block_errors, orig.block_errors);
            assert_eq!(parsed.decoder, orig.decoder);
        }
        assert!(parse_sweep_csv("bogus\n1,2\n").is_err());
    }
}
