//! Finite-dimensional oscillator algebra: truncated bosonic and fermionic
//! Fock spaces, the Schwinger angular-momentum maps built from pairs of
//! modes, exact Grassmann calculus for the classical fermionic oscillator,
//! and closed-form versus trace-based thermodynamics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod error;
pub mod fock;
pub mod grassmann;
pub mod opcore;
pub mod schwinger;
pub mod thermo;

pub use check::Check;
pub use error::{Error, Result};
pub use opcore::{Operator, C64};

/// Physical scales. Natural units (`ħ = k = 1`) by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub kb: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self { hbar: 1.0, kb: 1.0 }
    }
}

impl Units {
    pub fn with_hbar(hbar: f64) -> Self {
        Self {
            hbar,
            ..Self::default()
        }
    }
}
