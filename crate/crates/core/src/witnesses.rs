//! Entanglement and EPR-steering criteria on folded near/far-field data.
//!
//! Every criterion reports `violation = lhs - threshold`; a negative value
//! means the inequality is violated and the correlation is detected.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use ndarray::{Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy;
use crate::error::{Error, Result};
use crate::griddist::{normalize_counts, AxisKind, CountsMap, JointDistribution};
use crate::modular::{fold_joint, ModularConfig, ModularJoint, DEFAULT_BINS};
use crate::spectral;
use crate::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    VarEnt,
    EntEnt,
    VarSteer,
    EntSteer,
    CoarseGrained,
}

impl Criterion {
    pub const ALL: [Criterion; 5] =
        [Criterion::VarEnt, Criterion::EntEnt, Criterion::VarSteer, Criterion::EntSteer, Criterion::CoarseGrained];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::VarEnt => "var_ent",
            Criterion::EntEnt => "ent_ent",
            Criterion::VarSteer => "var_steer",
            Criterion::EntSteer => "ent_steer",
            Criterion::CoarseGrained => "coarse_grained",
        }
    }

    /// Steering criteria take no pairing.
    pub fn uses_pairing(self) -> bool {
        !matches!(self, Criterion::VarSteer | Criterion::EntSteer)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    /// Accepts `var_ent` as well as `var-ent`.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        Criterion::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown criterion `{s}`")))
    }
}

/// Which integer combination is paired with which remainder combination.
/// The other two pairings hold for every state and are not offered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Pairing {
    #[default]
    #[serde(rename = "N-S+")]
    NMinusSPlus,
    #[serde(rename = "N+S-")]
    NPlusSMinus,
}

impl Pairing {
    pub fn integer_sign(self) -> Sign {
        match self {
            Pairing::NMinusSPlus => Sign::Minus,
            Pairing::NPlusSMinus => Sign::Plus,
        }
    }

    pub fn remainder_sign(self) -> Sign {
        self.integer_sign().other()
    }

    fn suffixes(self) -> (&'static str, &'static str) {
        match self {
            Pairing::NMinusSPlus => ("n_minus", "s_plus"),
            Pairing::NPlusSMinus => ("n_plus", "s_minus"),
        }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pairing::NMinusSPlus => "N-S+",
            Pairing::NPlusSMinus => "N+S-",
        })
    }
}

impl FromStr for Pairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N-S+" | "n-s+" | "minus-plus" => Ok(Pairing::NMinusSPlus),
            "N+S-" | "n+s-" | "plus-minus" => Ok(Pairing::NPlusSMinus),
            _ => Err(Error::InvalidArgument(format!("unknown pairing `{s}`"))),
        }
    }
}

/// Which party is inferred from the other in the steering criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteeringDirection {
    /// Infer particle 1 from measurements on particle 2.
    #[default]
    FirstFromSecond,
    SecondFromFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub criterion: Criterion,
    pub pairing: Option<Pairing>,
    pub lhs: f64,
    pub threshold: f64,
    pub violation: f64,
    pub components: BTreeMap<String, f64>,
    pub sd: Option<f64>,
}

impl WitnessResult {
    fn new(
        criterion: Criterion,
        pairing: Option<Pairing>,
        lhs: f64,
        threshold: f64,
        components: BTreeMap<String, f64>,
    ) -> Self {
        Self { criterion, pairing, lhs, threshold, violation: lhs - threshold, components, sd: None }
    }

    pub fn detected(&self) -> bool {
        self.violation < 0.0
    }
}

/// `C` at the default truncation, computed once per process.
pub fn default_c() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| spectral::constant_c(spectral::DEFAULT_NMAX).c_value)
}

/// Checks plane kinds and the shared scale factor, returning `ℓ`.
fn check_pair(near: &ModularJoint, far: &ModularJoint) -> Result<f64> {
    if near.kind() != AxisKind::Position {
        return Err(Error::InvalidAxis("near-field input must be position data".into()));
    }
    if far.kind() != AxisKind::Momentum {
        return Err(Error::InvalidAxis("far-field input must be momentum data".into()));
    }
    let (a, b) = (near.ell(), far.ell());
    if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
        return Err(Error::MismatchedScale { near: a, far: b });
    }
    Ok(a)
}

fn components<const N: usize>(items: [(&str, f64); N]) -> BTreeMap<String, f64> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// `Δ²N± + ℓ²Δ²S∓ >= 2C` for separable states.
pub fn variance_entanglement(
    near: &ModularJoint,
    far: &ModularJoint,
    c: f64,
    pairing: Pairing,
) -> Result<WitnessResult> {
    let ell = check_pair(near, far)?;
    let var_n = near.combo_int(pairing.integer_sign()).variance();
    let scaled_var_s = ell * ell * far.combo_rem(pairing.remainder_sign()).variance();
    let (n, s) = pairing.suffixes();
    let comps = components([(&format!("var_{n}"), var_n), (&format!("scaled_var_{s}"), scaled_var_s), ("c", c)]);
    Ok(WitnessResult::new(Criterion::VarEnt, Some(pairing), var_n + scaled_var_s, 2.0 * c, comps))
}

/// `H(N±) + h(S∓) >= ln(√2/ℓ)` for separable states.
pub fn entropic_entanglement(near: &ModularJoint, far: &ModularJoint, pairing: Pairing) -> Result<WitnessResult> {
    let ell = check_pair(near, far)?;
    let h_n = near.combo_int(pairing.integer_sign()).entropy()?;
    let h_s = entropy::differential_of(far.combo_rem(pairing.remainder_sign()))?;
    let (n, s) = pairing.suffixes();
    let comps = components([(&format!("h_{n}"), h_n), (&format!("h_{s}"), h_s)]);
    Ok(WitnessResult::new(
        Criterion::EntEnt,
        Some(pairing),
        h_n + h_s,
        (std::f64::consts::SQRT_2 / ell).ln(),
        comps,
    ))
}

/// `Σ_{b,a} P(a, b) (a - estimate(b))²` for a joint with rows indexed by
/// the conditioning outcome `b` and columns by `a`, at values `a_values`.
pub fn inferred_variance_with(
    joint: ArrayView2<'_, f64>,
    a_values: &[f64],
    estimate: impl Fn(usize) -> f64,
) -> f64 {
    joint
        .outer_iter()
        .enumerate()
        .map(|(b, row)| {
            let est = estimate(b);
            row.iter().zip(a_values).map(|(&p, &a)| p * (a - est) * (a - est)).sum::<f64>()
        })
        .sum()
}

/// Conditional mean of `a` for each row `b`; zero-probability rows get 0.
pub fn conditional_means(joint: ArrayView2<'_, f64>, a_values: &[f64]) -> Vec<f64> {
    joint
        .outer_iter()
        .map(|row| {
            let pb: f64 = row.sum();
            if pb > 0.0 {
                row.iter().zip(a_values).map(|(&p, &a)| p * a).sum::<f64>() / pb
            } else {
                0.0
            }
        })
        .collect()
}

/// Inferred variance with the conditional-mean estimator, which minimizes
/// it over all estimators.
pub fn inferred_variance(joint: ArrayView2<'_, f64>, a_values: &[f64]) -> f64 {
    let means = conditional_means(joint, a_values);
    inferred_variance_with(joint, a_values, |b| means[b])
}

/// Joints laid out with rows for the conditioning party.
fn oriented(j: &Array2<f64>, direction: SteeringDirection) -> ArrayView2<'_, f64> {
    match direction {
        SteeringDirection::FirstFromSecond => j.t(),
        SteeringDirection::SecondFromFirst => j.view(),
    }
}

fn integer_values(near: &ModularJoint, direction: SteeringDirection) -> Vec<f64> {
    let ij = near.integer_joint();
    let (o1, o2) = ij.offsets();
    let (rows, cols) = ij.probs().dim();
    let (offset, len) = match direction {
        SteeringDirection::FirstFromSecond => (o1, rows),
        SteeringDirection::SecondFromFirst => (o2, cols),
    };
    (0..len).map(|k| (offset + k as i64) as f64).collect()
}

/// `Δ²_inf(n) + ℓ²Δ²_inf(s) >= C` for states without EPR steering.
pub fn variance_steering(
    near: &ModularJoint,
    far: &ModularJoint,
    c: f64,
    direction: SteeringDirection,
) -> Result<WitnessResult> {
    let ell = check_pair(near, far)?;
    let n_values = integer_values(near, direction);
    let var_n = inferred_variance(oriented(near.integer_joint().probs(), direction), &n_values);
    let s_values: Vec<f64> = far.remainder_axis().coords().collect();
    let var_s = inferred_variance(oriented(far.remainder_joint(), direction), &s_values);
    let scaled = ell * ell * var_s;
    let comps = components([("inferred_var_n", var_n), ("scaled_inferred_var_s", scaled), ("c", c)]);
    Ok(WitnessResult::new(Criterion::VarSteer, None, var_n + scaled, c, comps))
}

/// `H(n₁|n₂) + h(s₁|s₂) >= -ln ℓ` for states without EPR steering.
pub fn entropic_steering(
    near: &ModularJoint,
    far: &ModularJoint,
    direction: SteeringDirection,
) -> Result<WitnessResult> {
    let ell = check_pair(near, far)?;
    let h_n = entropy::conditional_discrete(oriented(near.integer_joint().probs(), direction))?;
    let w = far.bin_width();
    let h_s = entropy::conditional_differential(oriented(far.remainder_joint(), direction), w, w)?;
    let comps = components([("h_n_cond", h_n), ("h_s_cond", h_s)]);
    Ok(WitnessResult::new(Criterion::EntSteer, None, h_n + h_s, -ell.ln(), comps))
}

/// Precision of the `N±` measurement for slit separation `d`. Integers
/// are resolved exactly when `ℓ <= d`; above that a cell of width `ℓ`
/// spans `ℓ/d` slit periods.
pub fn integer_precision(ell: f64, separation: f64) -> f64 {
    (ell / separation).max(1.0)
}

/// Coarse-grained entropic witness with both entropies discrete:
/// `H(N±) + H(S∓) >= ln(√2 / (δ_N δ_S ℓ))`, with `δ_S` the far-field
/// remainder bin width.
pub fn coarse_grained_entropic(
    near: &ModularJoint,
    far: &ModularJoint,
    separation: f64,
    pairing: Pairing,
) -> Result<WitnessResult> {
    let ell = check_pair(near, far)?;
    if !(separation.is_finite() && separation > 0.0) {
        return Err(Error::InvalidArgument(format!("slit separation must be positive, got {separation}")));
    }
    let delta_n = integer_precision(ell, separation);
    let delta_s = far.bin_width();
    let h_n = near.combo_int(pairing.integer_sign()).entropy()?;
    let h_s = entropy::shannon_discrete(far.combo_rem(pairing.remainder_sign()).probs())?;
    let threshold = (std::f64::consts::SQRT_2 / (delta_n * delta_s * ell)).ln();
    let (n, s) = pairing.suffixes();
    let comps = components([
        (&format!("h_{n}"), h_n),
        (&format!("h_discrete_{s}"), h_s),
        ("delta_n", delta_n),
        ("delta_s", delta_s),
    ]);
    Ok(WitnessResult::new(Criterion::CoarseGrained, Some(pairing), h_n + h_s, threshold, comps))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCurve {
    pub ratios: Vec<f64>,
    pub violations: Vec<f64>,
    pub argmin_ratio: f64,
}

/// `count` ratios from `start` in steps of `step`.
pub fn ratio_grid(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start + k as f64 * step).collect()
}

/// Coarse-grained violation as a function of `ℓ/d`.
pub fn scan_ell(
    near: &JointDistribution,
    far: &JointDistribution,
    separation: f64,
    ratios: &[f64],
    bins: usize,
    pairing: Pairing,
) -> Result<ScanCurve> {
    if ratios.is_empty() {
        return Err(Error::InvalidArgument("empty ratio list".into()));
    }
    if let Some(r) = ratios.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::InvalidArgument(format!("ratios must be positive, got {r}")));
    }
    let violations = ratios
        .par_iter()
        .map(|&r| {
            let cfg = ModularConfig::new(r * separation, bins)?;
            let n = fold_joint(near, &cfg)?;
            let f = fold_joint(far, &cfg)?;
            Ok(coarse_grained_entropic(&n, &f, separation, pairing)?.violation)
        })
        .collect::<Result<Vec<f64>>>()?;
    let argmin = violations
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty");
    Ok(ScanCurve { ratios: ratios.to_vec(), argmin_ratio: ratios[argmin], violations })
}

/// Everything needed to evaluate one criterion on a near/far pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub criterion: Criterion,
    pub ell: f64,
    pub bins: usize,
    pub pairing: Pairing,
    pub direction: SteeringDirection,
    /// Lower bound `C`; used by the variance criteria.
    pub c: f64,
    /// Slit separation for the coarse-grained criterion; `ℓ` when absent.
    pub separation: Option<f64>,
}

impl Evaluation {
    pub fn new(criterion: Criterion, ell: f64) -> Self {
        Self {
            criterion,
            ell,
            bins: DEFAULT_BINS,
            pairing: Pairing::default(),
            direction: SteeringDirection::default(),
            c: default_c(),
            separation: None,
        }
    }

    pub fn config(&self) -> Result<ModularConfig> {
        ModularConfig::new(self.ell, self.bins)
    }

    /// Evaluate on already folded data.
    pub fn apply(&self, near: &ModularJoint, far: &ModularJoint) -> Result<WitnessResult> {
        match self.criterion {
            Criterion::VarEnt => variance_entanglement(near, far, self.c, self.pairing),
            Criterion::EntEnt => entropic_entanglement(near, far, self.pairing),
            Criterion::VarSteer => variance_steering(near, far, self.c, self.direction),
            Criterion::EntSteer => entropic_steering(near, far, self.direction),
            Criterion::CoarseGrained => {
                coarse_grained_entropic(near, far, self.separation.unwrap_or(self.ell), self.pairing)
            }
        }
    }

    pub fn evaluate(&self, near: &JointDistribution, far: &JointDistribution) -> Result<WitnessResult> {
        let cfg = self.config()?;
        let n = fold_joint(near, &cfg)?;
        let f = fold_joint(far, &cfg)?;
        for w in n.warnings().iter().chain(f.warnings()) {
            log::warn!("{w}");
        }
        self.apply(&n, &f)
    }
}

/// Redraw every cell from a Poisson law whose mean is the observed count.
pub fn resample_poisson<R: Rng + ?Sized>(map: &CountsMap, rng: &mut R) -> Result<CountsMap> {
    let counts = map.counts().mapv(|c| {
        if c == 0 {
            0
        } else {
            let law = Poisson::new(c as f64).expect("positive mean");
            law.sample(rng) as u64
        }
    });
    map.with_counts(counts)
}

/// [`resample_poisson`] driven by a ChaCha8 generator seeded with `seed`.
pub fn resample_poisson_seeded(map: &CountsMap, seed: u64) -> Result<CountsMap> {
    resample_poisson(map, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Poisson resampling of both count maps. Trial `k` uses stream `k` of a
/// ChaCha8 generator seeded with `seed`, so results do not depend on the
/// thread schedule. Returns the sample mean and standard deviation of the
/// violation.
pub fn poisson_uncertainty(
    near: &CountsMap,
    far: &CountsMap,
    eval: &Evaluation,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if trials < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 trials, got {trials}")));
    }
    if near.total() == 0 || far.total() == 0 {
        return Err(Error::EmptyMap);
    }
    let values = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let n = normalize_counts(&resample_poisson(near, &mut rng)?)?;
            let f = normalize_counts(&resample_poisson(far, &mut rng)?)?;
            Ok(eval.evaluate(&n, &f)?.violation)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = values.iter().sum::<f64>() / trials as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (trials - 1) as f64;
    Ok((mean, var.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::griddist::{Axis, DetectorPlane, OpticsConfig};
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    /// Independent uniform near (one period) and far (one period) grids.
    fn uniform_pair(ell: f64, cells: usize) -> (ModularJoint, ModularJoint) {
        let near_axis = Axis::from_window(AxisKind::Position, -0.5 * ell, ell / cells as f64, cells).unwrap();
        let far_axis = Axis::from_window(AxisKind::Momentum, -0.5 / ell, 1.0 / (ell * cells as f64), cells).unwrap();
        let w = Array2::from_elem((cells, cells), 1.0);
        let cfg = ModularConfig::new(ell, cells).unwrap();
        let near = fold_joint(&JointDistribution::from_weights(near_axis, near_axis, w.clone()).unwrap(), &cfg).unwrap();
        let far = fold_joint(&JointDistribution::from_weights(far_axis, far_axis, w).unwrap(), &cfg).unwrap();
        (near, far)
    }

    #[test]
    fn names_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(c.name().parse::<Criterion>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{}\"", c.name()));
        }
        assert_eq!("ent-ent".parse::<Criterion>().unwrap(), Criterion::EntEnt);
        assert!("bell".parse::<Criterion>().is_err());
        assert_eq!(serde_json::to_string(&Pairing::NMinusSPlus).unwrap(), "\"N-S+\"");
        assert_eq!("N+S-".parse::<Pairing>().unwrap(), Pairing::NPlusSMinus);
        assert_eq!(Pairing::NPlusSMinus.remainder_sign(), Sign::Minus);
    }

    #[test]
    fn violation_is_lhs_minus_threshold() {
        let (near, far) = uniform_pair(0.5, 16);
        let c = default_c();
        let results = [
            variance_entanglement(&near, &far, c, Pairing::NMinusSPlus).unwrap(),
            entropic_entanglement(&near, &far, Pairing::NPlusSMinus).unwrap(),
            variance_steering(&near, &far, c, SteeringDirection::FirstFromSecond).unwrap(),
            entropic_steering(&near, &far, SteeringDirection::SecondFromFirst).unwrap(),
            coarse_grained_entropic(&near, &far, 0.5, Pairing::NMinusSPlus).unwrap(),
        ];
        for r in results {
            assert_eq!(r.violation, r.lhs - r.threshold);
            assert!(!r.detected(), "{r:?}");
        }
    }

    #[test]
    fn independent_uniform_steering() {
        let ell = 0.25;
        let cells = 64;
        let (near, far) = uniform_pair(ell, cells);
        let r = variance_steering(&near, &far, default_c(), SteeringDirection::FirstFromSecond).unwrap();
        // discrete uniform over `cells` bin centers: (1 - 1/cells²) / 12
        let expected = (1.0 - 1.0 / (cells * cells) as f64) / 12.0;
        assert_abs_diff_eq!(r.components["scaled_inferred_var_s"], expected, epsilon = 1e-12);
        assert_eq!(r.components["inferred_var_n"], 0.0);
        let e = entropic_steering(&near, &far, SteeringDirection::FirstFromSecond).unwrap();
        assert_abs_diff_eq!(e.violation, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn scale_mismatch_is_rejected() {
        let (near, _) = uniform_pair(0.5, 8);
        let (_, far) = uniform_pair(0.25, 8);
        let err = entropic_entanglement(&near, &far, Pairing::default()).unwrap_err();
        assert!(matches!(err, Error::MismatchedScale { .. }));
        assert!(matches!(entropic_steering(&far, &near, SteeringDirection::default()), Err(Error::InvalidAxis(_))));
        let (n2, f2) = uniform_pair(0.5, 8);
        assert!(coarse_grained_entropic(&n2, &f2, 0.0, Pairing::default()).is_err());
    }

    #[test]
    fn conditional_mean_is_optimal() {
        let joint = array![[0.1, 0.2, 0.0], [0.05, 0.05, 0.3], [0.0, 0.0, 0.0], [0.2, 0.0, 0.1]];
        let a = [-1.0, 0.5, 2.0];
        let best = inferred_variance(joint.view(), &a);
        let means = conditional_means(joint.view(), &a);
        for shift in [-0.3, -0.01, 0.01, 0.2, 1.0] {
            let v = inferred_variance_with(joint.view(), &a, |b| means[b] + shift);
            assert!(v >= best);
        }
        // hand computation: Σ_b P(b) Var(a | b)
        let mut manual = 0.0;
        for row in joint.outer_iter() {
            let pb: f64 = row.sum();
            if pb == 0.0 {
                continue;
            }
            let m: f64 = row.iter().zip(&a).map(|(p, x)| p * x).sum::<f64>() / pb;
            manual += row.iter().zip(&a).map(|(p, x)| p * (x - m) * (x - m)).sum::<f64>();
        }
        assert_abs_diff_eq!(best, manual, epsilon = 1e-15);
    }

    #[test]
    fn scan_rejects_bad_ratios() {
        let axis = Axis::from_window(AxisKind::Position, -1.0, 0.125, 16).unwrap();
        let faxis = Axis::from_window(AxisKind::Momentum, -1.0, 0.125, 16).unwrap();
        let w = Array2::from_elem((16, 16), 1.0);
        let near = JointDistribution::from_weights(axis, axis, w.clone()).unwrap();
        let far = JointDistribution::from_weights(faxis, faxis, w).unwrap();
        assert!(scan_ell(&near, &far, 1.0, &[], 4, Pairing::default()).is_err());
        assert!(scan_ell(&near, &far, 1.0, &[1.0, -1.0], 4, Pairing::default()).is_err());
        let curve = scan_ell(&near, &far, 1.0, &[0.5, 1.0], 4, Pairing::default()).unwrap();
        assert_eq!(curve.violations.len(), 2);
        assert!(curve.ratios.contains(&curve.argmin_ratio));
        assert_eq!(ratio_grid(0.5, 0.025, 61).len(), 61);
    }

    fn small_map(plane: DetectorPlane, scale: u64) -> CountsMap {
        let rho: Vec<f64> = (0..8).map(|k| k as f64 * 0.1).collect();
        let counts = Array2::from_shape_fn((8, 8), |(i, j)| scale * (1 + ((i * 3 + j * 5) % 7) as u64));
        CountsMap::new(rho.clone(), rho, counts, plane, OpticsConfig::default()).unwrap()
    }

    #[test]
    fn resampling_is_deterministic() {
        let near = small_map(DetectorPlane::Near, 50);
        let far = small_map(DetectorPlane::Far, 50);
        let mut eval = Evaluation::new(Criterion::EntEnt, 0.2);
        eval.bins = 4;
        let a = poisson_uncertainty(&near, &far, &eval, 20, 7).unwrap();
        let b = poisson_uncertainty(&near, &far, &eval, 20, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.1 > 0.0);
        let c = poisson_uncertainty(&near, &far, &eval, 20, 8).unwrap();
        assert_ne!(a, c);
        assert!(poisson_uncertainty(&near, &far, &eval, 1, 7).is_err());
    }
}
