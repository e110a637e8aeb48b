//! Ideal two-photon D-slit states and single-photon slit superpositions.
//!
//! Both photons pass through the same slit: `|Ψ⟩ = D^{-1/2} Σ_j |ψ_j⟩|ψ_j⟩`
//! with top-hat slit profiles `ψ_j`. Slit centers sit on integer multiples
//! of the separation `d`, so that with `ℓ = d` every slit lies inside a
//! single modular cell. The far field uses the Fourier kernel `e^{2πixp}`.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::griddist::{Axis, AxisKind, Density, JointDistribution};

/// Slit aperture geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlitSpec {
    pub slits: usize,
    /// Slit width `a` in mm.
    pub width: f64,
    /// Center-to-center separation `d` in mm.
    pub separation: f64,
}

impl SlitSpec {
    pub fn new(slits: usize, width: f64, separation: f64) -> Result<Self> {
        if slits < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 slits, got {slits}")));
        }
        if !(width > 0.0 && width < separation && separation.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < width < separation, got width {width}, separation {separation}"
            )));
        }
        Ok(Self { slits, width, separation })
    }

    /// Apertures used in the experiment: `a = 0.08, d = 0.16` mm for D = 2
    /// and 4, `a = 0.04, d = 0.125` mm for D = 3.
    pub fn experimental(slits: usize) -> Option<Self> {
        match slits {
            2 | 4 => Some(Self { slits, width: 0.08, separation: 0.16 }),
            3 => Some(Self { slits, width: 0.04, separation: 0.125 }),
            _ => None,
        }
    }

    /// Slit labels `j` such that slit `j` is centered at `j d`.
    pub fn indices(&self) -> impl Iterator<Item = i64> {
        let lo = -(((self.slits - 1) / 2) as i64);
        lo..lo + self.slits as i64
    }

    pub fn centers(&self) -> Vec<f64> {
        self.indices().map(|j| j as f64 * self.separation).collect()
    }

    fn contains(&self, center: f64, x: f64) -> bool {
        x >= center - 0.5 * self.width && x < center + 0.5 * self.width
    }
}

/// Far-field envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FarFieldMode {
    /// Constant envelope; the reference for the closed-form values.
    #[default]
    Comb,
    /// Squared single-slit envelope `sin²(πap) / (πp)²`.
    Physical,
}

impl FarFieldMode {
    fn envelope(self, width: f64, p: f64) -> f64 {
        match self {
            FarFieldMode::Comb => 1.0,
            FarFieldMode::Physical => {
                let x = PI * p;
                if x.abs() < 1e-12 {
                    width * width
                } else {
                    let s = (x * width).sin();
                    s * s / (x * x)
                }
            }
        }
    }
}

/// Simulation grid expressed in units of the slit separation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimGrid {
    /// Cells per separation `d` (near field) and per `1/d` (far field).
    pub cells_per_period: usize,
    /// The window spans `±half_periods` periods, widened in the near field
    /// when the slits plus one period of margin do not fit.
    pub half_periods: usize,
}

impl Default for SimGrid {
    /// 1024 cells per axis: 128 cells per period over `±4` periods.
    fn default() -> Self {
        Self { cells_per_period: 128, half_periods: 4 }
    }
}

impl SimGrid {
    /// Grid with `cells` per axis over the default `±4` periods.
    pub fn with_cells(cells: usize) -> Result<Self> {
        let half_periods = Self::default().half_periods;
        let per = 2 * half_periods;
        if cells == 0 || !cells.is_multiple_of(2 * per) {
            return Err(Error::InvalidArgument(format!(
                "grid size must be a positive multiple of {}, got {cells}",
                2 * per
            )));
        }
        Ok(Self { cells_per_period: cells / per, half_periods })
    }

    fn validate(&self) -> Result<()> {
        if self.cells_per_period < 2 || !self.cells_per_period.is_multiple_of(2) || self.half_periods == 0 {
            return Err(Error::InvalidArgument(format!("invalid simulation grid {self:?}")));
        }
        Ok(())
    }

    pub fn near_axis(&self, spec: &SlitSpec) -> Result<Axis> {
        self.validate()?;
        let d = spec.separation;
        let reach = spec.indices().map(|j| j.unsigned_abs() as f64).fold(0.0, f64::max) + 0.5 * spec.width / d + 1.0;
        let half = self.half_periods.max(reach.ceil() as usize);
        let step = d / self.cells_per_period as f64;
        Axis::from_window(AxisKind::Position, -(half as f64) * d, step, 2 * half * self.cells_per_period)
    }

    pub fn far_axis(&self, spec: &SlitSpec) -> Result<Axis> {
        self.validate()?;
        let inv_d = 1.0 / spec.separation;
        let step = inv_d / self.cells_per_period as f64;
        let half = self.half_periods;
        Axis::from_window(AxisKind::Momentum, -(half as f64) * inv_d, step, 2 * half * self.cells_per_period)
    }
}

fn require_kind(axis: &Axis, kind: AxisKind) -> Result<()> {
    if axis.kind() != kind {
        return Err(Error::InvalidAxis(format!("expected a {kind:?} axis, got {:?}", axis.kind())));
    }
    Ok(())
}

/// Indicator masks of each slit over the axis cell centers.
fn slit_masks(spec: &SlitSpec, axis: &Axis) -> Result<Vec<Vec<bool>>> {
    require_kind(axis, AxisKind::Position)?;
    let (lo, hi) = axis.window();
    let centers = spec.centers();
    let first = centers[0] - 0.5 * spec.width;
    let last = centers[centers.len() - 1] + 0.5 * spec.width;
    if first < lo || last > hi {
        return Err(Error::InvalidAxis(format!(
            "axis window [{lo}, {hi}) does not cover the slits [{first}, {last}]"
        )));
    }
    centers
        .iter()
        .map(|&c| {
            let mask: Vec<bool> = axis.coords().map(|x| spec.contains(c, x)).collect();
            if !mask.iter().any(|&m| m) {
                return Err(Error::InvalidAxis(format!("no grid cell falls inside the slit at {c}")));
            }
            Ok(mask)
        })
        .collect()
}

fn check_fringe_resolution(spec: &SlitSpec, axis: &Axis) -> Result<()> {
    require_kind(axis, AxisKind::Momentum)?;
    let fringe = 1.0 / (spec.slits as f64 * spec.separation);
    if axis.step() > 0.5 * fringe {
        return Err(Error::InvalidAxis(format!(
            "momentum step {} cannot resolve the fringe period {fringe}",
            axis.step()
        )));
    }
    Ok(())
}

/// Near-field joint distribution of the ideal state.
pub fn ideal_near_field(spec: &SlitSpec, axis: &Axis) -> Result<JointDistribution> {
    let masks = slit_masks(spec, axis)?;
    let n = axis.count();
    let mut w = Array2::<f64>::zeros((n, n));
    for mask in &masks {
        let inside: Vec<usize> = mask.iter().enumerate().filter(|(_, m)| **m).map(|(i, _)| i).collect();
        for &i in &inside {
            for &j in &inside {
                w[[i, j]] += 1.0;
            }
        }
    }
    JointDistribution::from_weights(*axis, *axis, w)
}

/// `|Σ_j c_j e^{2πi x_j t}|²`.
fn interference(positions: &[f64], amplitudes: &[Complex64], t: f64) -> f64 {
    positions
        .iter()
        .zip(amplitudes)
        .map(|(&x, &c)| c * Complex64::from_polar(1.0, 2.0 * PI * x * t))
        .sum::<Complex64>()
        .norm_sqr()
}

/// Far-field joint distribution of the ideal state. The amplitude depends
/// on `p1 + p2` only, through the D-term Dirichlet factor.
pub fn ideal_far_field(spec: &SlitSpec, axis: &Axis, mode: FarFieldMode) -> Result<JointDistribution> {
    check_fringe_resolution(spec, axis)?;
    let n = axis.count();
    let centers = spec.centers();
    let ones = vec![Complex64::new(1.0, 0.0); centers.len()];
    let fringe: Vec<f64> = (0..2 * n - 1)
        .map(|k| interference(&centers, &ones, 2.0 * axis.start() + k as f64 * axis.step()))
        .collect();
    let env: Vec<f64> = axis.coords().map(|p| mode.envelope(spec.width, p)).collect();
    let w = Array2::from_shape_fn((n, n), |(i, j)| env[i] * env[j] * fringe[i + j]);
    JointDistribution::from_weights(*axis, *axis, w)
}

/// `ℓ²⟨Δ²S₊⟩ = 1/6 - π⁻² Σ_{j=1}^{D-1} (D - j) / (D j²)` for the ideal
/// state with `ℓ = d`. The scaled variance does not depend on `ℓ`.
pub fn theory_scaled_variance_s_plus(slits: usize) -> f64 {
    let d = slits as f64;
    let sum: f64 = (1..slits).map(|j| (d - j as f64) / (d * (j * j) as f64)).sum();
    1.0 / 6.0 - sum / (PI * PI)
}

/// `⟨Δ²S₊⟩` in mm⁻² for the ideal state at scale factor `ell`.
pub fn theory_variance_s_plus(slits: usize, ell: f64) -> f64 {
    theory_scaled_variance_s_plus(slits) / (ell * ell)
}

/// Mix a uniform background over the grid window into `joint`.
pub fn add_background(joint: &JointDistribution, fraction: f64) -> Result<JointDistribution> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidArgument(format!("background fraction must be in [0, 1], got {fraction}")));
    }
    let cells = joint.probs().len() as f64;
    let probs = joint.probs().mapv(|p| (1.0 - fraction) * p + fraction / cells);
    JointDistribution::from_weights(*joint.axis1(), *joint.axis2(), probs)
}

/// A single photon in a coherent superposition of the slits of `spec`.
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePhoton {
    spec: SlitSpec,
    amplitudes: Vec<Complex64>,
}

impl SinglePhoton {
    /// Amplitudes are indexed like [`SlitSpec::indices`] and normalized here.
    pub fn new(spec: SlitSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != spec.slits {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes for {} slits",
                amplitudes.len(),
                spec.slits
            )));
        }
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidArgument("amplitudes must not all vanish".into()));
        }
        Ok(Self { spec, amplitudes: amplitudes.into_iter().map(|c| c / norm).collect() })
    }

    /// Photon localized in slit number `slot` (0-based).
    pub fn single_slit(spec: SlitSpec, slot: usize) -> Result<Self> {
        let amps = (0..spec.slits)
            .map(|k| if k == slot { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
            .collect();
        Self::new(spec, amps)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Slit populations spread uniformly over each slit.
    pub fn near_density(&self, axis: &Axis) -> Result<Density> {
        let masks = slit_masks(&self.spec, axis)?;
        let mut w = vec![0.0; axis.count()];
        for (mask, c) in masks.iter().zip(&self.amplitudes) {
            let cells = mask.iter().filter(|m| **m).count() as f64;
            for (wi, _) in w.iter_mut().zip(mask).filter(|(_, m)| **m) {
                *wi += c.norm_sqr() / cells;
            }
        }
        Density::from_weights(*axis, w)
    }

    pub fn far_density(&self, axis: &Axis, mode: FarFieldMode) -> Result<Density> {
        check_fringe_resolution(&self.spec, axis)?;
        let centers = self.spec.centers();
        let w = axis
            .coords()
            .map(|p| mode.envelope(self.spec.width, p) * interference(&centers, &self.amplitudes, p))
            .collect();
        Density::from_weights(*axis, w)
    }
}
