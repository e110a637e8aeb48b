//! Modular decomposition of positions and momenta.
//!
//! A position splits as `x = n ℓ + r` and a momentum as `p = m / ℓ + s`,
//! with the integer part chosen so that the remainder lies in the centered
//! half-open cell `[-period/2, period/2)`. Folding a two-particle grid
//! yields the integer joint `(n1, n2)`, a binned remainder joint
//! `(r1, r2)` (or `(s1, s2)`), and the pushforwards onto the global
//! combinations `N± = n1 ± n2` and `R± = r1 ± r2` (or `M±`, `S±`).
//! Remainder sums are not wrapped back into the base cell.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::entropy;
use crate::error::{Error, Result};
use crate::griddist::{Axis, AxisKind, Density, JointDistribution, Party};
use crate::Sign;

/// Default number of remainder bins per modular period.
pub const DEFAULT_BINS: usize = 64;

/// Relative slack allowed before a grid is reported as incommensurate
/// with the modular period.
const COMMENSURATE_TOL: f64 = 0.01;

/// Split `value` into `(k, rem)` with `value = k * period + rem` and
/// `-period/2 <= rem < period/2`.
pub fn decompose(value: f64, period: f64) -> (i64, f64) {
    let half = 0.5 * period;
    let mut shifted = (value + half).rem_euclid(period);
    if shifted >= period {
        shifted -= period;
    }
    let rem = shifted - half;
    let k = ((value - rem) / period).round() as i64;
    (k, rem)
}

fn check_scale(ell: f64) -> Result<()> {
    if !ell.is_finite() || ell <= 0.0 {
        return Err(Error::InvalidArgument(format!("scale factor must be positive, got {ell}")));
    }
    Ok(())
}

/// `x = n ℓ + r`, `-ℓ/2 <= r < ℓ/2`.
pub fn decompose_position(x: f64, ell: f64) -> Result<(i64, f64)> {
    check_scale(ell)?;
    if !x.is_finite() {
        return Err(Error::NonFinite("position"));
    }
    Ok(decompose(x, ell))
}

/// `p = m / ℓ + s`, `-1/(2ℓ) <= s < 1/(2ℓ)`.
pub fn decompose_momentum(p: f64, ell: f64) -> Result<(i64, f64)> {
    check_scale(ell)?;
    if !p.is_finite() {
        return Err(Error::NonFinite("momentum"));
    }
    Ok(decompose(p, 1.0 / ell))
}

/// Modular period of a variable of the given kind: `ℓ` for positions,
/// `1/ℓ` for momenta.
pub fn period_for(kind: AxisKind, ell: f64) -> f64 {
    match kind {
        AxisKind::Position => ell,
        AxisKind::Momentum => 1.0 / ell,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModularConfig {
    /// Scale factor ℓ in mm.
    pub ell: f64,
    /// Remainder histogram bins per period.
    pub bins: usize,
}

impl ModularConfig {
    pub fn new(ell: f64, bins: usize) -> Result<Self> {
        check_scale(ell)?;
        if bins < 4 {
            return Err(Error::InvalidArgument(format!("need at least 4 remainder bins, got {bins}")));
        }
        Ok(Self { ell, bins })
    }
}

/// Probability distribution over consecutive integers starting at `offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerDist {
    offset: i64,
    probs: Vec<f64>,
}

impl IntegerDist {
    pub fn new(offset: i64, probs: Vec<f64>) -> Self {
        Self { offset, probs }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.probs.len()).map(move |i| self.offset + i as i64)
    }

    pub fn prob(&self, n: i64) -> f64 {
        usize::try_from(n - self.offset)
            .ok()
            .and_then(|i| self.probs.get(i).copied())
            .unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.values().zip(&self.probs).map(|(n, p)| n as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.values()
            .zip(&self.probs)
            .map(|(n, p)| p * (n as f64 - mean) * (n as f64 - mean))
            .sum()
    }

    /// Discrete Shannon entropy in nats.
    pub fn entropy(&self) -> Result<f64> {
        entropy::shannon_discrete(&self.probs)
    }
}

/// Joint distribution of the two integer parts.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerJoint {
    offset1: i64,
    offset2: i64,
    probs: Array2<f64>,
}

impl IntegerJoint {
    pub fn offsets(&self) -> (i64, i64) {
        (self.offset1, self.offset2)
    }

    /// Rows index the first particle, columns the second.
    pub fn probs(&self) -> &Array2<f64> {
        &self.probs
    }

    pub fn prob(&self, n1: i64, n2: i64) -> f64 {
        let (Ok(i), Ok(j)) = (usize::try_from(n1 - self.offset1), usize::try_from(n2 - self.offset2)) else {
            return 0.0;
        };
        self.probs.get((i, j)).copied().unwrap_or(0.0)
    }

    pub fn marginal(&self, which: Party) -> IntegerDist {
        match which {
            Party::First => IntegerDist::new(self.offset1, self.probs.sum_axis(ndarray::Axis(1)).to_vec()),
            Party::Second => IntegerDist::new(self.offset2, self.probs.sum_axis(ndarray::Axis(0)).to_vec()),
        }
    }
}

/// A two-particle distribution expressed in modular variables.
#[derive(Debug, Clone)]
pub struct ModularJoint {
    kind: AxisKind,
    config: ModularConfig,
    integer_joint: IntegerJoint,
    remainder_axis: Axis,
    remainder_joint: Array2<f64>,
    int_plus: IntegerDist,
    int_minus: IntegerDist,
    rem_plus: Density,
    rem_minus: Density,
    warnings: Vec<String>,
}

impl ModularJoint {
    pub fn kind(&self) -> AxisKind {
        self.kind
    }

    pub fn ell(&self) -> f64 {
        self.config.ell
    }

    pub fn bins(&self) -> usize {
        self.config.bins
    }

    pub fn config(&self) -> &ModularConfig {
        &self.config
    }

    /// `ℓ` for positions, `1/ℓ` for momenta.
    pub fn period(&self) -> f64 {
        period_for(self.kind, self.config.ell)
    }

    /// Width of one remainder bin.
    pub fn bin_width(&self) -> f64 {
        self.remainder_axis.step()
    }

    pub fn integer_joint(&self) -> &IntegerJoint {
        &self.integer_joint
    }

    /// Bin centers of the base remainder cell.
    pub fn remainder_axis(&self) -> &Axis {
        &self.remainder_axis
    }

    /// `B x B` remainder probabilities, rows for particle 1.
    pub fn remainder_joint(&self) -> &Array2<f64> {
        &self.remainder_joint
    }

    pub fn integer_marginal(&self, which: Party) -> IntegerDist {
        self.integer_joint.marginal(which)
    }

    pub fn remainder_marginal(&self, which: Party) -> Density {
        let sums = match which {
            Party::First => self.remainder_joint.sum_axis(ndarray::Axis(1)),
            Party::Second => self.remainder_joint.sum_axis(ndarray::Axis(0)),
        };
        Density::new(self.remainder_axis, sums.to_vec()).expect("marginal of a normalized joint")
    }

    /// Distribution of `N±` (or `M±`).
    pub fn combo_int(&self, sign: Sign) -> &IntegerDist {
        match sign {
            Sign::Plus => &self.int_plus,
            Sign::Minus => &self.int_minus,
        }
    }

    /// Histogram of `R±` (or `S±`) on the doubled interval, `2B - 1` bins.
    pub fn combo_rem(&self, sign: Sign) -> &Density {
        match sign {
            Sign::Plus => &self.rem_plus,
            Sign::Minus => &self.rem_minus,
        }
    }

    /// Grid/period mismatches noticed while folding.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

struct CellIndex {
    n: Vec<i64>,
    bin: Vec<usize>,
    offset: i64,
    span: usize,
}

fn index_axis(axis: &Axis, period: f64, bins: usize) -> CellIndex {
    let width = period / bins as f64;
    let half = 0.5 * period;
    let mut n = Vec::with_capacity(axis.count());
    let mut bin = Vec::with_capacity(axis.count());
    for c in axis.coords() {
        let (k, rem) = decompose(c, period);
        n.push(k);
        bin.push((((rem + half) / width).floor() as usize).min(bins - 1));
    }
    let lo = *n.iter().min().expect("axis has cells");
    let hi = *n.iter().max().expect("axis has cells");
    CellIndex { n, bin, offset: lo, span: (hi - lo + 1) as usize }
}

fn commensurate(ratio: f64) -> bool {
    ratio >= 1.0 - COMMENSURATE_TOL && (ratio - ratio.round()).abs() <= COMMENSURATE_TOL
}

/// Bins narrower than a cell would stay empty and bias every entropy low.
fn check_resolution(axis: &Axis, period: f64, bins: usize) -> Result<()> {
    let step = axis.step();
    if period < 2.0 * step {
        return Err(Error::GridTooCoarse { step, period });
    }
    let width = period / bins as f64;
    if step > width * (1.0 + COMMENSURATE_TOL) {
        return Err(Error::BinsTooFine { step, width });
    }
    Ok(())
}

/// Fold a joint grid into modular variables. Each cell's probability is
/// assigned to the modular bin containing the cell center.
pub fn fold_joint(joint: &JointDistribution, cfg: &ModularConfig) -> Result<ModularJoint> {
    let kind = joint.kind();
    let period = period_for(kind, cfg.ell);
    let bins = cfg.bins;
    let width = period / bins as f64;
    let mut warnings = Vec::new();
    for (name, axis) in [("axis1", joint.axis1()), ("axis2", joint.axis2())] {
        check_resolution(axis, period, bins)?;
        let cells_per_period = period / axis.step();
        if !commensurate(cells_per_period) {
            warnings.push(format!(
                "{name}: step {} does not divide the period {period} ({cells_per_period:.3} cells per period)",
                axis.step()
            ));
        }
        let cells_per_bin = width / axis.step();
        if !commensurate(cells_per_bin) {
            warnings.push(format!(
                "{name}: {cells_per_bin:.3} cells per remainder bin; bins receive unequal cell counts"
            ));
        }
    }

    let idx1 = index_axis(joint.axis1(), period, bins);
    let idx2 = index_axis(joint.axis2(), period, bins);
    let mut int_joint = Array2::<f64>::zeros((idx1.span, idx2.span));
    let mut rem_joint = Array2::<f64>::zeros((bins, bins));
    for (i, row) in joint.probs().outer_iter().enumerate() {
        let a = (idx1.n[i] - idx1.offset) as usize;
        let b1 = idx1.bin[i];
        for (j, &p) in row.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            int_joint[[a, (idx2.n[j] - idx2.offset) as usize]] += p;
            rem_joint[[b1, idx2.bin[j]]] += p;
        }
    }

    let (o1, o2) = (idx1.offset, idx2.offset);
    let (s1, s2) = (idx1.span, idx2.span);
    let mut plus = vec![0.0; s1 + s2 - 1];
    let mut minus = vec![0.0; s1 + s2 - 1];
    for ((a, b), &p) in int_joint.indexed_iter() {
        plus[a + b] += p;
        minus[a + (s2 - 1 - b)] += p;
    }
    let int_plus = IntegerDist::new(o1 + o2, plus);
    let int_minus = IntegerDist::new(o1 - (o2 + s2 as i64 - 1), minus);

    let mut rplus = vec![0.0; 2 * bins - 1];
    let mut rminus = vec![0.0; 2 * bins - 1];
    for ((a, b), &p) in rem_joint.indexed_iter() {
        rplus[a + b] += p;
        rminus[a + bins - 1 - b] += p;
    }
    let remainder_axis = Axis::from_window(kind, -0.5 * period, width, bins)?;
    let plus_axis = Axis::new(kind, -period + width, width, 2 * bins - 1)?;
    let minus_axis = Axis::new(kind, -((bins - 1) as f64) * width, width, 2 * bins - 1)?;

    Ok(ModularJoint {
        kind,
        config: *cfg,
        integer_joint: IntegerJoint { offset1: o1, offset2: o2, probs: int_joint },
        remainder_axis,
        remainder_joint: rem_joint,
        int_plus,
        int_minus,
        rem_plus: Density::new(plus_axis, rplus)?,
        rem_minus: Density::new(minus_axis, rminus)?,
        warnings,
    })
}

/// Single-particle fold: distribution of the integer part and histogram of
/// the remainder over the base cell.
pub fn fold_density(density: &Density, cfg: &ModularConfig) -> Result<(IntegerDist, Density)> {
    let axis = density.axis();
    let period = period_for(axis.kind(), cfg.ell);
    check_resolution(axis, period, cfg.bins)?;
    let idx = index_axis(axis, period, cfg.bins);
    let mut ints = vec![0.0; idx.span];
    let mut rems = vec![0.0; cfg.bins];
    for (k, &p) in density.probs().iter().enumerate() {
        ints[(idx.n[k] - idx.offset) as usize] += p;
        rems[idx.bin[k]] += p;
    }
    let rem_axis = Axis::from_window(axis.kind(), -0.5 * period, period / cfg.bins as f64, cfg.bins)?;
    Ok((IntegerDist::new(idx.offset, ints), Density::new(rem_axis, rems)?))
}
