//! Uniform grids, normalized joint distributions over two particles, and
//! ingestion of detector coincidence-count maps.
//!
//! Probabilities are stored per cell (already integrated over the cell).
//! Axis coordinates are cell centers; cell `i` covers
//! `[start + (i - 1/2) step, start + (i + 1/2) step)`.
//!
//! Internal units: lengths in mm, momenta in mm⁻¹. The detector plane
//! conversions are `x = rho / M` (near field) and `p = rho / (f λ)` (far
//! field), with λ given in nm.

mod csv;

pub use self::csv::{load_coincidence_csv, parse_coincidence_csv, render_coincidence_csv, save_coincidence_csv};

use ndarray::{Array2, Axis as NdAxis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total probability of any normalized collection.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Relative tolerance on the spacing of detector scan positions.
pub const UNIFORMITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisKind {
    Position,
    Momentum,
}

/// A uniform one-dimensional grid of cell centers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    kind: AxisKind,
    start: f64,
    step: f64,
    count: usize,
}

impl Axis {
    pub fn new(kind: AxisKind, start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !step.is_finite() {
            return Err(Error::NonFinite("axis start/step"));
        }
        if step <= 0.0 {
            return Err(Error::InvalidAxis(format!("step must be positive, got {step}")));
        }
        if count < 2 {
            return Err(Error::InvalidAxis(format!("need at least 2 cells, got {count}")));
        }
        Ok(Self { kind, start, step, count })
    }

    /// Axis whose cells tile `[lo, lo + count * step)` exactly.
    pub fn from_window(kind: AxisKind, lo: f64, step: f64, count: usize) -> Result<Self> {
        Self::new(kind, lo + 0.5 * step, step, count)
    }

    pub fn kind(&self) -> AxisKind {
        self.kind
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn coords(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.coord(i))
    }

    /// Outer edges of the first and last cell.
    pub fn window(&self) -> (f64, f64) {
        (
            self.start - 0.5 * self.step,
            self.start + (self.count as f64 - 0.5) * self.step,
        )
    }
}

/// Which detection plane a counts map was recorded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorPlane {
    /// Image of the slit plane; coordinates are positions.
    Near,
    /// Fourier plane of the slits; coordinates are momenta.
    Far,
}

impl DetectorPlane {
    pub fn axis_kind(self) -> AxisKind {
        match self {
            DetectorPlane::Near => AxisKind::Position,
            DetectorPlane::Far => AxisKind::Momentum,
        }
    }
}

/// Imaging optics between the slits and the detectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticsConfig {
    pub magnification: f64,
    pub focal_mm: f64,
    pub wavelength_nm: f64,
}

impl Default for OpticsConfig {
    /// Magnification 3.6, f = 300 mm, λ = 810 nm.
    fn default() -> Self {
        Self { magnification: 3.6, focal_mm: 300.0, wavelength_nm: 810.0 }
    }
}

impl OpticsConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("magnification", self.magnification),
            ("focal_mm", self.focal_mm),
            ("wavelength_nm", self.wavelength_nm),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidOptics(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// f·λ in mm².
    pub fn fourier_scale_mm2(&self) -> f64 {
        self.focal_mm * self.wavelength_nm * 1e-6
    }
}

/// Convert a detector displacement (mm) into a position (mm, near plane)
/// or a momentum (mm⁻¹, far plane).
pub fn convert_detector_coord(rho: f64, plane: DetectorPlane, optics: &OpticsConfig) -> Result<f64> {
    if !rho.is_finite() {
        return Err(Error::NonFinite("detector position"));
    }
    optics.validate()?;
    Ok(match plane {
        DetectorPlane::Near => rho / optics.magnification,
        DetectorPlane::Far => rho / optics.fourier_scale_mm2(),
    })
}

/// Inverse of [`convert_detector_coord`].
pub fn detector_coord_from(value: f64, plane: DetectorPlane, optics: &OpticsConfig) -> f64 {
    match plane {
        DetectorPlane::Near => value * optics.magnification,
        DetectorPlane::Far => value * optics.fourier_scale_mm2(),
    }
}

/// Two-dimensional coincidence-count scan.
#[derive(Debug, Clone, PartialEq)]
pub struct CountsMap {
    rho1: Vec<f64>,
    rho2: Vec<f64>,
    counts: Array2<u64>,
    plane: DetectorPlane,
    optics: OpticsConfig,
    flip: bool,
}

impl CountsMap {
    pub fn new(
        rho1: Vec<f64>,
        rho2: Vec<f64>,
        counts: Array2<u64>,
        plane: DetectorPlane,
        optics: OpticsConfig,
    ) -> Result<Self> {
        optics.validate()?;
        check_uniform(&rho1, "rho1")?;
        check_uniform(&rho2, "rho2")?;
        if counts.dim() != (rho1.len(), rho2.len()) {
            return Err(Error::IncompleteGrid(format!(
                "counts are {:?} but positions are {}x{}",
                counts.dim(),
                rho1.len(),
                rho2.len()
            )));
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(Error::EmptyMap);
        }
        Ok(Self { rho1, rho2, counts, plane, optics, flip: false })
    }

    /// Reverse the sign of converted coordinates.
    pub fn with_flip(mut self, flip: bool) -> Self {
        self.flip = flip;
        self
    }

    /// Same positions and optics with different counts.
    pub fn with_counts(&self, counts: Array2<u64>) -> Result<Self> {
        if counts.dim() != self.counts.dim() {
            return Err(Error::IncompleteGrid(format!(
                "replacement counts are {:?}, expected {:?}",
                counts.dim(),
                self.counts.dim()
            )));
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(Error::EmptyMap);
        }
        Ok(Self { counts, ..self.clone() })
    }

    pub fn rho1(&self) -> &[f64] {
        &self.rho1
    }

    pub fn rho2(&self) -> &[f64] {
        &self.rho2
    }

    pub fn counts(&self) -> &Array2<u64> {
        &self.counts
    }

    pub fn plane(&self) -> DetectorPlane {
        self.plane
    }

    pub fn optics(&self) -> &OpticsConfig {
        &self.optics
    }

    pub fn flip(&self) -> bool {
        self.flip
    }

    pub fn total(&self) -> u64 {
        self.counts.sum()
    }

    /// Expected counts `round(p · total)` of a distribution, placed at the
    /// detector positions of its cell centers.
    pub fn from_distribution(joint: &JointDistribution, optics: OpticsConfig, total: u64) -> Result<Self> {
        let plane = match joint.kind() {
            AxisKind::Position => DetectorPlane::Near,
            AxisKind::Momentum => DetectorPlane::Far,
        };
        let rho = |a: &Axis| a.coords().map(|v| detector_coord_from(v, plane, &optics)).collect::<Vec<_>>();
        let counts = joint.probs().mapv(|p| (p * total as f64).round() as u64);
        Self::new(rho(joint.axis1()), rho(joint.axis2()), counts, plane, optics)
    }
}

fn check_uniform(pos: &[f64], name: &str) -> Result<()> {
    if pos.len() < 2 {
        return Err(Error::InvalidAxis(format!("{name} needs at least 2 positions")));
    }
    if pos.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("detector position"));
    }
    let mean = (pos[pos.len() - 1] - pos[0]) / (pos.len() - 1) as f64;
    if mean <= 0.0 {
        return Err(Error::NonUniformGrid(format!("{name} positions must be strictly increasing")));
    }
    for w in pos.windows(2) {
        let gap = w[1] - w[0];
        if gap <= 0.0 {
            return Err(Error::NonUniformGrid(format!("{name} positions must be strictly increasing")));
        }
        if (gap - mean).abs() > UNIFORMITY_TOL * mean {
            return Err(Error::NonUniformGrid(format!(
                "{name} spacing {gap} deviates from mean {mean}"
            )));
        }
    }
    Ok(())
}

fn axis_from_positions(pos: &[f64], plane: DetectorPlane, optics: &OpticsConfig, flip: bool) -> Result<Axis> {
    let sign = if flip { -1.0 } else { 1.0 };
    let first = sign * convert_detector_coord(pos[0], plane, optics)?;
    let last = sign * convert_detector_coord(pos[pos.len() - 1], plane, optics)?;
    let (lo, hi) = if flip { (last, first) } else { (first, last) };
    Axis::new(plane.axis_kind(), lo, (hi - lo) / (pos.len() - 1) as f64, pos.len())
}

/// Normalized probability grid over the coordinates of both particles.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    axis1: Axis,
    axis2: Axis,
    probs: Array2<f64>,
}

impl JointDistribution {
    /// Wrap an already-normalized grid of cell probabilities.
    pub fn new(axis1: Axis, axis2: Axis, probs: Array2<f64>) -> Result<Self> {
        if axis1.kind() != axis2.kind() {
            return Err(Error::InvalidDistribution("axes must be of the same kind".into()));
        }
        if probs.dim() != (axis1.count(), axis2.count()) {
            return Err(Error::InvalidDistribution(format!(
                "grid is {:?}, axes are {}x{}",
                probs.dim(),
                axis1.count(),
                axis2.count()
            )));
        }
        check_probabilities(probs.iter().copied())?;
        Ok(Self { axis1, axis2, probs })
    }

    /// Normalize non-negative weights into a distribution.
    pub fn from_weights(axis1: Axis, axis2: Axis, weights: Array2<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution("weights must be finite and non-negative".into()));
        }
        let total = weights.sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Self::new(axis1, axis2, weights / total)
    }

    /// Product distribution of two independent single-particle densities.
    pub fn product(first: &Density, second: &Density) -> Result<Self> {
        let a = ndarray::ArrayView1::from(first.probs());
        let b = ndarray::ArrayView1::from(second.probs());
        let outer = &a.view().insert_axis(NdAxis(1)) * &b.view().insert_axis(NdAxis(0));
        Self::from_weights(*first.axis(), *second.axis(), outer)
    }

    pub fn axis1(&self) -> &Axis {
        &self.axis1
    }

    pub fn axis2(&self) -> &Axis {
        &self.axis2
    }

    pub fn kind(&self) -> AxisKind {
        self.axis1.kind()
    }

    pub fn probs(&self) -> &Array2<f64> {
        &self.probs
    }

    /// Exchange the roles of the two particles.
    pub fn swapped(&self) -> Self {
        Self {
            axis1: self.axis2,
            axis2: self.axis1,
            probs: self.probs.t().to_owned(),
        }
    }
}

fn check_probabilities(values: impl Iterator<Item = f64>) -> Result<()> {
    let mut total = 0.0;
    for p in values {
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

/// Per-bin probabilities on a single axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    axis: Axis,
    probs: Vec<f64>,
}

impl Density {
    pub fn new(axis: Axis, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != axis.count() {
            return Err(Error::InvalidDistribution(format!(
                "{} probabilities for {} cells",
                probs.len(),
                axis.count()
            )));
        }
        check_probabilities(probs.iter().copied())?;
        Ok(Self { axis, probs })
    }

    pub fn from_weights(axis: Axis, weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution("weights must be finite and non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Self::new(axis, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.axis.coords().zip(&self.probs).map(|(c, p)| p * c).sum()
    }

    /// Variance over bin centers.
    pub fn variance(&self) -> f64 {
        variance_of(self)
    }
}

/// Grid, normalized distribution and counts for one detector plane.
pub fn normalize_counts(map: &CountsMap) -> Result<JointDistribution> {
    let total = map.total();
    if total == 0 {
        return Err(Error::EmptyMap);
    }
    let axis1 = axis_from_positions(&map.rho1, map.plane, &map.optics, map.flip)?;
    let axis2 = axis_from_positions(&map.rho2, map.plane, &map.optics, map.flip)?;
    let norm = total as f64;
    let mut probs = map.counts.mapv(|c| c as f64 / norm);
    if map.flip {
        probs.invert_axis(NdAxis(0));
        probs.invert_axis(NdAxis(1));
    }
    JointDistribution::new(axis1, axis2, probs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    First,
    Second,
}

/// Single-particle marginal obtained by summing out the other particle.
pub fn marginal(joint: &JointDistribution, which: Party) -> Density {
    let (axis, sums) = match which {
        Party::First => (joint.axis1, joint.probs.sum_axis(NdAxis(1))),
        Party::Second => (joint.axis2, joint.probs.sum_axis(NdAxis(0))),
    };
    Density { axis, probs: sums.to_vec() }
}

/// `Σ p c² - (Σ p c)²` over bin centers.
pub fn variance_of(d: &Density) -> f64 {
    let mean = d.mean();
    d.axis
        .coords()
        .zip(&d.probs)
        .map(|(c, p)| p * (c - mean) * (c - mean))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn pos_axis(start: f64, step: f64, n: usize) -> Axis {
        Axis::new(AxisKind::Position, start, step, n).unwrap()
    }

    fn map(counts: Array2<u64>) -> CountsMap {
        let (r, c) = counts.dim();
        let rho1 = (0..r).map(|i| i as f64 * 0.1).collect();
        let rho2 = (0..c).map(|i| i as f64 * 0.1).collect();
        CountsMap::new(rho1, rho2, counts, DetectorPlane::Near, OpticsConfig::default()).unwrap()
    }

    #[test]
    fn detector_conversions() {
        let optics = OpticsConfig::default();
        let x = convert_detector_coord(3.6, DetectorPlane::Near, &optics).unwrap();
        assert_abs_diff_eq!(x, 1.0, epsilon = 1e-15);
        let p0 = convert_detector_coord(0.0, DetectorPlane::Far, &optics).unwrap();
        assert_eq!(p0, 0.0);
        let p = convert_detector_coord(0.243, DetectorPlane::Far, &optics).unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
        assert!(convert_detector_coord(f64::NAN, DetectorPlane::Near, &optics).is_err());
        assert!(convert_detector_coord(f64::INFINITY, DetectorPlane::Far, &optics).is_err());
    }

    #[test]
    fn conversion_is_linear() {
        let optics = OpticsConfig { magnification: 2.5, focal_mm: 120.0, wavelength_nm: 633.0 };
        for plane in [DetectorPlane::Near, DetectorPlane::Far] {
            let a = convert_detector_coord(1.7, plane, &optics).unwrap();
            let b = convert_detector_coord(-0.4, plane, &optics).unwrap();
            let ab = convert_detector_coord(1.7 * 3.0 - 0.4 * 2.0, plane, &optics).unwrap();
            assert_abs_diff_eq!(ab, 3.0 * a + 2.0 * b, epsilon = 1e-12);
        }
    }

    #[test]
    fn invalid_optics() {
        let optics = OpticsConfig { magnification: 0.0, ..Default::default() };
        assert!(convert_detector_coord(1.0, DetectorPlane::Near, &optics).is_err());
    }

    #[test]
    fn normalize_examples() {
        let j = normalize_counts(&map(array![[1, 1], [1, 1]])).unwrap();
        assert!(j.probs().iter().all(|&p| p == 0.25));
        let j = normalize_counts(&map(array![[2, 0], [0, 2]])).unwrap();
        assert_eq!(j.probs(), &array![[0.5, 0.0], [0.0, 0.5]]);
        let j = normalize_counts(&map(array![[3, 1], [0, 0]])).unwrap();
        assert_eq!(j.probs(), &array![[0.75, 0.25], [0.0, 0.0]]);
        assert_eq!(j.axis1().kind(), AxisKind::Position);
        assert_abs_diff_eq!(j.axis1().step(), 0.1 / 3.6, epsilon = 1e-15);
    }

    #[test]
    fn empty_map_rejected() {
        let r = CountsMap::new(
            vec![0.0, 0.1],
            vec![0.0, 0.1],
            Array2::zeros((2, 2)),
            DetectorPlane::Near,
            OpticsConfig::default(),
        );
        assert!(matches!(r, Err(Error::EmptyMap)));
        assert_eq!(Error::EmptyMap.to_string(), "empty map");
    }

    #[test]
    fn non_uniform_positions_rejected() {
        let r = CountsMap::new(
            vec![0.0, 0.1, 0.25],
            vec![0.0, 0.1],
            Array2::ones((3, 2)),
            DetectorPlane::Near,
            OpticsConfig::default(),
        );
        assert!(matches!(r, Err(Error::NonUniformGrid(_))));
        let r = CountsMap::new(
            vec![0.1, 0.0],
            vec![0.0, 0.1],
            Array2::ones((2, 2)),
            DetectorPlane::Near,
            OpticsConfig::default(),
        );
        assert!(matches!(r, Err(Error::NonUniformGrid(_))));
    }

    #[test]
    fn flip_reverses_coordinates() {
        let m = CountsMap::new(
            vec![0.0, 0.243],
            vec![0.0, 0.243],
            array![[3, 1], [0, 0]],
            DetectorPlane::Far,
            OpticsConfig::default(),
        )
        .unwrap()
        .with_flip(true);
        let j = normalize_counts(&m).unwrap();
        assert_abs_diff_eq!(j.axis1().start(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(j.axis1().step(), 1.0, epsilon = 1e-12);
        // the (rho=0, rho=0) cell now sits at (p=0, p=0), the last cell
        assert_eq!(j.probs()[[1, 1]], 0.75);
        assert_eq!(j.probs()[[1, 0]], 0.25);
    }

    #[test]
    fn expected_counts_round_trip() {
        let a = Axis::new(AxisKind::Momentum, -0.5, 0.25, 4).unwrap();
        let w = Array2::from_shape_fn((4, 4), |(i, j)| (1 + i + 2 * j) as f64);
        let j = JointDistribution::from_weights(a, a, w).unwrap();
        let m = CountsMap::from_distribution(&j, OpticsConfig::default(), 1_000_000).unwrap();
        assert_eq!(m.plane(), DetectorPlane::Far);
        let back = normalize_counts(&m).unwrap();
        assert_abs_diff_eq!(back.axis1().start(), -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(back.axis1().step(), 0.25, epsilon = 1e-12);
        for (x, y) in back.probs().iter().zip(j.probs()) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-6);
        }
    }

    #[test]
    fn marginal_examples() {
        let a = pos_axis(0.0, 1.0, 2);
        let j = JointDistribution::new(a, a, array![[0.5, 0.0], [0.0, 0.5]]).unwrap();
        assert_eq!(marginal(&j, Party::First).probs(), &[0.5, 0.5]);
        let j = JointDistribution::new(a, a, array![[0.75, 0.25], [0.0, 0.0]]).unwrap();
        assert_eq!(marginal(&j, Party::First).probs(), &[1.0, 0.0]);
        assert_eq!(marginal(&j, Party::Second).probs(), &[0.75, 0.25]);
    }

    #[test]
    fn marginal_of_product_is_factor() {
        let a = pos_axis(-1.0, 0.5, 4);
        let b = pos_axis(0.0, 0.25, 3);
        let f1 = Density::new(a, vec![0.125, 0.5, 0.25, 0.125]).unwrap();
        let f2 = Density::new(b, vec![0.5, 0.25, 0.25]).unwrap();
        let j = JointDistribution::product(&f1, &f2).unwrap();
        assert_eq!(marginal(&j, Party::First).probs(), f1.probs());
        assert_eq!(marginal(&j, Party::Second).probs(), f2.probs());
    }

    #[test]
    fn variance_examples() {
        // uniform over [-1/2, 1/2) with 100 bins
        let n = 100;
        let a = Axis::from_window(AxisKind::Position, -0.5, 1.0 / n as f64, n).unwrap();
        let d = Density::new(a, vec![1.0 / n as f64; n]).unwrap();
        let step2 = a.step() * a.step();
        assert!((variance_of(&d) - 1.0 / 12.0).abs() <= step2 / 12.0 + 1e-15);

        let a3 = pos_axis(-1.0, 1.0, 3);
        assert_eq!(variance_of(&Density::new(a3, vec![0.0, 1.0, 0.0]).unwrap()), 0.0);
        assert_abs_diff_eq!(
            variance_of(&Density::new(a3, vec![0.5, 0.0, 0.5]).unwrap()),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn joint_validation() {
        let a = pos_axis(0.0, 1.0, 2);
        assert!(JointDistribution::new(a, a, array![[0.5, 0.0], [0.0, 0.4]]).is_err());
        assert!(JointDistribution::new(a, a, array![[1.5, -0.5], [0.0, 0.0]]).is_err());
        let m = Axis::new(AxisKind::Momentum, 0.0, 1.0, 2).unwrap();
        assert!(JointDistribution::new(a, m, array![[0.5, 0.0], [0.0, 0.5]]).is_err());
    }

    #[test]
    fn axis_validation() {
        assert!(Axis::new(AxisKind::Position, 0.0, 0.0, 4).is_err());
        assert!(Axis::new(AxisKind::Position, 0.0, 1.0, 1).is_err());
        assert!(Axis::new(AxisKind::Position, f64::NAN, 1.0, 4).is_err());
        let a = Axis::from_window(AxisKind::Position, -1.0, 0.5, 4).unwrap();
        assert_eq!(a.window(), (-1.0, 1.0));
        assert_eq!(a.coords().collect::<Vec<_>>(), vec![-0.75, -0.25, 0.25, 0.75]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn normalized_and_idempotent(counts in prop::collection::vec(0u64..1000, 12)) {
                prop_assume!(counts.iter().any(|&c| c > 0));
                let grid = Array2::from_shape_vec((3, 4), counts).unwrap();
                let m = CountsMap::new(
                    vec![0.0, 0.2, 0.4],
                    vec![-0.3, -0.1, 0.1, 0.3],
                    grid,
                    DetectorPlane::Far,
                    OpticsConfig::default(),
                ).unwrap();
                let j = normalize_counts(&m).unwrap();
                prop_assert!((j.probs().sum() - 1.0).abs() <= NORMALIZATION_TOL);
                let again = JointDistribution::from_weights(*j.axis1(), *j.axis2(), j.probs().clone()).unwrap();
                for (a, b) in again.probs().iter().zip(j.probs().iter()) {
                    prop_assert!((a - b).abs() <= 1e-15);
                }
            }
        }
    }
}
