//! Shannon entropies in nats.
//!
//! Differential entropies use the plug-in histogram estimator
//! `-Σ P ln(P / Δ)` without bias correction. For count data the plug-in
//! value is biased low by roughly `(occupied bins - 1) / (2 N)`.
//! Empty bins contribute nothing, and conditionals on zero-probability
//! outcomes carry zero weight.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::griddist::{Axis, Density, NORMALIZATION_TOL};
use crate::Sign;

/// How an entropy value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    ExactAnalytic,
    HistogramPlugin,
}

fn check_normalized<'a>(values: impl IntoIterator<Item = &'a f64>) -> Result<()> {
    let mut total = 0.0;
    for &p in values {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidDistribution(format!("entry {p} is not a probability")));
        }
        total += p;
    }
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidDistribution(format!("total probability {total} != 1")));
    }
    Ok(())
}

#[inline]
fn surprisal_sum<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
    // `+ 0.0` turns the -0.0 of a point mass into +0.0.
    values.into_iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum::<f64>() + 0.0
}

/// `-Σ p ln p`.
pub fn shannon_discrete(p: &[f64]) -> Result<f64> {
    check_normalized(p)?;
    Ok(surprisal_sum(p))
}

/// Differential entropy of a histogram with bin width `width`.
pub fn differential_from_histogram(bins: &[f64], width: f64) -> Result<f64> {
    if !width.is_finite() || width <= 0.0 {
        return Err(Error::InvalidArgument(format!("bin width must be positive, got {width}")));
    }
    Ok(shannon_discrete(bins)? + width.ln())
}

/// Differential entropy of a [`Density`], using its axis step as bin width.
pub fn differential_of(d: &Density) -> Result<f64> {
    differential_from_histogram(d.probs(), d.axis().step())
}

/// `H(a | b)` for a joint whose rows index the conditioning outcome `b`
/// and whose columns index `a`.
pub fn conditional_discrete(joint: ArrayView2<'_, f64>) -> Result<f64> {
    check_normalized(joint.iter())?;
    let mut h = 0.0;
    for row in joint.outer_iter() {
        let pb: f64 = row.sum();
        if pb <= 0.0 {
            continue;
        }
        h += row.iter().filter(|&&p| p > 0.0).map(|&p| -p * (p / pb).ln()).sum::<f64>();
    }
    Ok(h)
}

/// `h(a | b)` for a histogram joint laid out as in [`conditional_discrete`],
/// with bin widths `width_a` (columns) and `width_b` (rows).
pub fn conditional_differential(joint: ArrayView2<'_, f64>, width_a: f64, width_b: f64) -> Result<f64> {
    for w in [width_a, width_b] {
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::InvalidArgument(format!("bin width must be positive, got {w}")));
        }
    }
    Ok(conditional_discrete(joint)? + width_a.ln())
}

/// Histogram of `s1 ± s2` for independent `s1 ~ p1`, `s2 ~ p2` sharing a
/// bin width. The result has `len(p1) + len(p2) - 1` bins.
pub fn convolve_densities(p1: &Density, p2: &Density, sign: Sign) -> Result<Density> {
    let w1 = p1.axis().step();
    let w2 = p2.axis().step();
    if (w1 - w2).abs() > 1e-9 * w1.max(w2) {
        return Err(Error::MismatchedWidths(w1, w2));
    }
    let (a, b) = (p1.probs(), p2.probs());
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let k = match sign {
                Sign::Plus => i + j,
                Sign::Minus => i + (b.len() - 1 - j),
            };
            out[k] += x * y;
        }
    }
    let start = match sign {
        Sign::Plus => p1.axis().start() + p2.axis().start(),
        Sign::Minus => p1.axis().start() - p2.axis().coord(b.len() - 1),
    };
    let axis = Axis::new(p1.axis().kind(), start, w1, out.len())?;
    Density::new(axis, out)
}
