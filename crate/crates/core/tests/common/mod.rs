//! Shared fixtures: quadrature oracles for the ideal D-slit state and a
//! generator of random separable states.
#![allow(dead_code)]

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use modvar::griddist::{Axis, JointDistribution};
use modvar::modular::{fold_joint, ModularConfig, ModularJoint};
use modvar::states::{ideal_far_field, ideal_near_field, FarFieldMode, SimGrid, SinglePhoton, SlitSpec};

/// Values from an independent adaptive-quadrature computation, frozen
/// before the library was written. Index 0, 1, 2 is D = 2, 3, 4.
pub mod frozen {
    /// `h(u) - ln √2` for `u = ℓS₊` with density `(1 - |u|) K(u)`.
    pub const ENT_ENT: [f64; 3] = [-0.27692, -0.60558, -0.86153];
    /// `ℓ²Δ²S₊`.
    pub const SCALED_VAR_S_PLUS: [f64; 3] = [0.116006, 0.090676, 0.075196];
    /// `ℓ²Δ²S₊ - 2C`.
    pub const VAR_ENT: [f64; 3] = [-0.040464, -0.065794, -0.081274];
    /// `h(u₁|u₂) = -∫₀¹ K ln K`.
    pub const ENT_STEER: [f64; 3] = [-0.306853, -0.568054, -0.780372];
    /// Inferred variance of `u₁` given `u₂`, conditional-mean estimator.
    pub const VAR_STEER_LHS: [f64; 3] = [0.0706682, 0.0594103, 0.0513187];
    pub const C: f64 = 0.0782350874;
}

/// Normalized Dirichlet fringe `sin²(πDu) / (D sin²(πu))`, unit mean.
pub fn dirichlet(slits: usize, u: f64) -> f64 {
    let d = slits as f64;
    let den = (PI * u).sin();
    if den.abs() < 1e-12 {
        return d;
    }
    let num = (PI * d * u).sin();
    num * num / (d * den * den)
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn xlogx(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

pub mod oracle {
    use super::*;

    fn s_plus_density(slits: usize, u: f64) -> f64 {
        (1.0 - u.abs()) * dirichlet(slits, u)
    }

    pub fn ent_ent(slits: usize) -> f64 {
        let h = -simpson(|u| xlogx(s_plus_density(slits, u)), -1.0, 1.0, 400_000);
        h - std::f64::consts::SQRT_2.ln()
    }

    pub fn scaled_var_s_plus(slits: usize) -> f64 {
        simpson(|u| u * u * s_plus_density(slits, u), -1.0, 1.0, 400_000)
    }

    pub fn ent_steer(slits: usize) -> f64 {
        -simpson(|u| xlogx(dirichlet(slits, u)), 0.0, 1.0, 200_000)
    }

    /// `1/12 - ∫ m(u₂)² du₂` with `m(u₂) = ∫ u₁ K(u₁ + u₂) du₁`.
    pub fn var_steer_lhs(slits: usize) -> f64 {
        let n = 2000;
        let m = |u2: f64| simpson(|u1| u1 * dirichlet(slits, u1 + u2), -0.5, 0.5, n);
        1.0 / 12.0 - simpson(|u2| m(u2).powi(2), -0.5, 0.5, n)
    }
}

/// Ideal near and far fields on the default grid, comb-mode far field.
pub fn ideal_pair(slits: usize) -> (SlitSpec, JointDistribution, JointDistribution) {
    let spec = SlitSpec::experimental(slits).expect("D in 2..=4");
    let grid = SimGrid::default();
    let near = ideal_near_field(&spec, &grid.near_axis(&spec).unwrap()).unwrap();
    let far = ideal_far_field(&spec, &grid.far_axis(&spec).unwrap(), FarFieldMode::Comb).unwrap();
    (spec, near, far)
}

pub fn fold_pair(near: &JointDistribution, far: &JointDistribution, ell: f64, bins: usize) -> (ModularJoint, ModularJoint) {
    let cfg = ModularConfig::new(ell, bins).unwrap();
    (fold_joint(near, &cfg).unwrap(), fold_joint(far, &cfg).unwrap())
}

fn random_photon(spec: SlitSpec, rng: &mut ChaCha8Rng) -> SinglePhoton {
    match rng.random_range(0..3) {
        0 => SinglePhoton::single_slit(spec, rng.random_range(0..spec.slits)).unwrap(),
        1 => {
            // two adjacent slits with a random relative phase
            let k = rng.random_range(0..spec.slits - 1);
            let phase = rng.random_range(0.0..2.0 * PI);
            let amps = (0..spec.slits)
                .map(|j| match j {
                    _ if j == k => Complex64::new(1.0, 0.0),
                    _ if j == k + 1 => Complex64::from_polar(rng.random_range(0.2..1.0), phase),
                    _ => Complex64::new(0.0, 0.0),
                })
                .collect();
            SinglePhoton::new(spec, amps).unwrap()
        }
        _ => {
            let amps = (0..spec.slits)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            SinglePhoton::new(spec, amps).unwrap()
        }
    }
}

/// A random separable state: a convex mixture of 1 to 3 products of
/// single-photon slit superpositions. Returns near and far joints.
pub fn random_separable(
    spec: SlitSpec,
    near_axis: &Axis,
    far_axis: &Axis,
    rng: &mut ChaCha8Rng,
) -> (JointDistribution, JointDistribution) {
    let terms = rng.random_range(1..=3);
    let n = near_axis.count();
    let m = far_axis.count();
    let mut near = Array2::<f64>::zeros((n, n));
    let mut far = Array2::<f64>::zeros((m, m));
    for _ in 0..terms {
        let w: f64 = rng.random_range(0.1..1.0);
        let a = random_photon(spec, rng);
        let b = random_photon(spec, rng);
        let pn = JointDistribution::product(&a.near_density(near_axis).unwrap(), &b.near_density(near_axis).unwrap())
            .unwrap();
        let pf = JointDistribution::product(
            &a.far_density(far_axis, FarFieldMode::Comb).unwrap(),
            &b.far_density(far_axis, FarFieldMode::Comb).unwrap(),
        )
        .unwrap();
        near.scaled_add(w, pn.probs());
        far.scaled_add(w, pf.probs());
    }
    (
        JointDistribution::from_weights(*near_axis, *near_axis, near).unwrap(),
        JointDistribution::from_weights(*far_axis, *far_axis, far).unwrap(),
    )
}
