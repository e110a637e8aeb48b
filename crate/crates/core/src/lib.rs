//! Entanglement and EPR-steering witnesses in modular variables.
//!
//! Position and momentum are split into integer and remainder parts,
//! `x = nℓ + r` and `p = m/ℓ + s`. Two-particle data on a grid is folded
//! into these variables ([`modular`]) and fed to variance and entropic
//! criteria ([`witnesses`]). The [`states`] module produces the ideal
//! two-photon D-slit distributions used as a reference.

pub mod entropy;
pub mod error;
pub mod griddist;
pub mod modular;
pub mod spectral;
pub mod states;
pub mod witnesses;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};

/// Selects the sum or the difference of the two parties' variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn other(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}
