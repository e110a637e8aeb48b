//! The constant `C` bounding `Δ²n + ℓ²Δ²s` from below.
//!
//! `C` is the smallest eigenvalue of `n̂² + ℓ²ŝ²`. In the integer basis
//! `√ℓ e^{2πinℓs}` on the base cell, `n̂²` is diagonal and `ℓ²ŝ²` is the
//! Toeplitz matrix with `1/12` on the diagonal and `(-1)^k / (2π²k²)` at
//! offset `k`. Both are independent of `ℓ`, so the basis is truncated to
//! `|n| <= n_max` and solved as a dense symmetric eigenproblem.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

pub const DEFAULT_NMAX: usize = 64;

/// `convergence_delta` below this is treated as converged.
pub const CONVERGENCE_TOL: f64 = 1e-7;

/// Truncation step used to estimate convergence.
const CONVERGENCE_STRIDE: usize = 8;

/// `⟨n| ℓ²ŝ² |n'⟩`.
pub fn s_squared_element(n: i64, n_prime: i64) -> f64 {
    let k = n - n_prime;
    if k == 0 {
        return 1.0 / 12.0;
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign / (2.0 * PI * PI * (k * k) as f64)
}

/// Matrix of `n̂² + ℓ²ŝ²` on the basis `n = -n_max ..= n_max`.
pub fn operator_matrix(n_max: usize) -> DMatrix<f64> {
    let dim = 2 * n_max + 1;
    let label = |i: usize| i as i64 - n_max as i64;
    DMatrix::from_fn(dim, dim, |i, j| {
        let diag = if i == j { (label(i) * label(i)) as f64 } else { 0.0 };
        diag + s_squared_element(label(i), label(j))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub n_max: usize,
    pub c_value: f64,
    /// `|c(n_max) - c(n_max - 8)|`, or against `c(0)` for small truncations.
    pub convergence_delta: f64,
    /// Ground-state amplitudes indexed by `n + n_max`.
    #[serde(skip)]
    pub ground_state: Vec<f64>,
}

impl EigenReport {
    pub fn converged(&self) -> bool {
        self.convergence_delta < CONVERGENCE_TOL
    }

    /// Fraction of the ground-state norm carried by `|n| <= radius`.
    pub fn weight_within(&self, radius: usize) -> f64 {
        let center = self.n_max as i64;
        let total: f64 = self.ground_state.iter().map(|a| a * a).sum();
        let inside: f64 = self
            .ground_state
            .iter()
            .enumerate()
            .filter(|(i, _)| (*i as i64 - center).unsigned_abs() as usize <= radius)
            .map(|(_, a)| a * a)
            .sum();
        inside / total
    }
}

fn smallest(n_max: usize) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(operator_matrix(n_max));
    let (idx, value) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("matrix is non-empty");
    (value, eig.eigenvectors.column(idx).iter().copied().collect())
}

/// Smallest eigenvalue of the truncated operator, with a convergence estimate.
pub fn constant_c(n_max: usize) -> EigenReport {
    let (c_value, ground_state) = smallest(n_max);
    let coarser = n_max.saturating_sub(CONVERGENCE_STRIDE);
    let convergence_delta = if coarser == n_max { 0.0 } else { (c_value - smallest(coarser).0).abs() };
    EigenReport { n_max, c_value, convergence_delta, ground_state }
}
