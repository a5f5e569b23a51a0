//! Analytical curve families: error exponents, approximate finite-length
//! performance, and capacities, across (q, p) pairs with a fixed product.

use grand::ldp::{
    self, approx_bler, approx_ml_computations_per_bit, approx_queries_per_bit, capacity_hard,
    capacity_sr, error_exponent, subordinated_critical_point, ExponentCurve, LengthLaw,
    NoiseDistribution,
};

use crate::config::HarnessError;

/// A point annotation (critical-rate circles, target-BLER diamonds).
#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub label: String,
    pub q: f64,
    pub p: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveSet {
    pub curves: Vec<ExponentCurve>,
    pub markers: Vec<Marker>,
}

/// Uniform grid of `steps + 1` points over [lo, hi].
pub fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect()
}

/// (q, p) pairs with constant product pq for each requested q.
fn family(pq: f64, qs: &[f64]) -> Result<Vec<(f64, f64)>, HarnessError> {
    qs.iter()
        .map(|&q| {
            if !(0.0 < q && q <= 1.0) {
                return Err(HarnessError::config(format!("q = {q} outside (0, 1]")));
            }
            let p = pq / q;
            if !(0.0..=1.0).contains(&p) {
                return Err(HarnessError::config(format!(
                    "pq = {pq} with q = {q} needs p = {p} > 1"
                )));
            }
            Ok((q, p))
        })
        .collect()
}

/// Block-error exponents versus code-book rate for a constant-pq family,
/// with a circle marker at each curve's critical rate (the kink where the
/// straight-line branch ends).
pub fn error_exponent_curves(
    pq: f64,
    qs: &[f64],
    rates: &[f64],
) -> Result<CurveSet, HarnessError> {
    let mut set = CurveSet::default();
    for (q, p) in family(pq, qs)? {
        let label = format!("q={q},p={p}");
        set.curves.push(ExponentCurve::sample(
            label.clone(),
            "error_exponent",
            q,
            p,
            rates.to_vec(),
            |r| error_exponent(r, q, p),
        ));
        let d = NoiseDistribution::bernoulli(p).map_err(|e| HarnessError::config(e.to_string()))?;
        let law = LengthLaw::bernoulli_mask(q).map_err(|e| HarnessError::config(e.to_string()))?;
        let critical_rate = 1.0 - subordinated_critical_point(&d, &law);
        if (0.0..=1.0).contains(&critical_rate) {
            set.markers.push(Marker {
                label: format!("critical_rate {label}"),
                q,
                p,
                x: critical_rate,
                y: error_exponent(critical_rate, q, p),
            });
        }
    }
    Ok(set)
}

/// Approximate block error probability and guesses-per-bit curves at block
/// length n for a constant-pq family, plus the conditional-probability
/// comparison line. Diamond markers sit at the largest rate whose
/// approximate BLER stays within `target_bler`.
pub fn approx_perf_curves(
    n: usize,
    pq: f64,
    qs: &[f64],
    rates: &[f64],
    target_bler: f64,
) -> Result<CurveSet, HarnessError> {
    let mut set = CurveSet::default();
    for (q, p) in family(pq, qs)? {
        let label = format!("q={q},p={p}");
        set.curves.push(ExponentCurve::sample(
            label.clone(),
            "approx_bler",
            q,
            p,
            rates.to_vec(),
            |r| approx_bler(n, r, q, p).0,
        ));
        set.curves.push(ExponentCurve::sample(
            label.clone(),
            "approx_queries_per_bit",
            q,
            p,
            rates.to_vec(),
            |r| approx_queries_per_bit(n, r, q, p),
        ));
        let within = rates
            .iter()
            .filter(|&&r| {
                let (bler, clamped) = approx_bler(n, r, q, p);
                !clamped && bler <= target_bler
            })
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        if within.is_finite() {
            set.markers.push(Marker {
                label: format!("target_rate {label}"),
                q,
                p,
                x: within,
                y: target_bler,
            });
        }
    }
    set.curves.push(ExponentCurve::sample(
        "conditional-probability decoding",
        "ml_computations_per_bit",
        f64::NAN,
        f64::NAN,
        rates.to_vec(),
        |r| approx_ml_computations_per_bit(n, r),
    ));
    Ok(set)
}

/// Symbol-reliability and hard-detection capacities versus q, one pair of
/// curves per conditional flip probability p.
pub fn capacity_curves(ps: &[f64], q_grid: &[f64]) -> Result<CurveSet, HarnessError> {
    let mut set = CurveSet::default();
    for &p in ps {
        if !(0.0..=1.0).contains(&p) {
            return Err(HarnessError::config(format!("p = {p} outside [0, 1]")));
        }
        set.curves.push(ExponentCurve::sample(
            format!("C_sr p={p}"),
            "capacity_sr",
            f64::NAN,
            p,
            q_grid.to_vec(),
            |q| capacity_sr(q, p),
        ));
        set.curves.push(ExponentCurve::sample(
            format!("C_hard p={p}"),
            "capacity_hard",
            f64::NAN,
            p,
            q_grid.to_vec(),
            |q| capacity_hard(q, p),
        ));
    }
    Ok(set)
}

/// Complexity exponent curves (expected-queries growth rates), SRGRAND and
/// SRGRANDAB, for a constant-pq family.
pub fn complexity_curves(
    pq: f64,
    qs: &[f64],
    rates: &[f64],
    delta: f64,
) -> Result<CurveSet, HarnessError> {
    let mut set = CurveSet::default();
    for (q, p) in family(pq, qs)? {
        let label = format!("q={q},p={p}");
        set.curves.push(ExponentCurve::sample(
            label.clone(),
            "complexity_exponent",
            q,
            p,
            rates.to_vec(),
            |r| ldp::complexity_exponent(r, q, p),
        ));
        set.curves.push(ExponentCurve::sample(
            label,
            "complexity_exponent_ab",
            q,
            p,
            rates.to_vec(),
            |r| ldp::complexity_exponent_ab(r, q, p, delta),
        ));
    }
    Ok(set)
}
