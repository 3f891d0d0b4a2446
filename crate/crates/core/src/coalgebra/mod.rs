//! Finite coefficient algebras and their dual coalgebras.
//!
//! A mapping-space model needs a finite-dimensional model `B` of the source
//! and its dual `B_*`, concentrated in non-positive degrees, with the
//! coproduct dual to the product of `B`.

mod dga;
mod dual;
mod target;

use thiserror::Error;

pub use dga::{BasisElement, FiniteDga, SparseVec};
pub use dual::{AdaptedBasis, CoproductTerm, DualCoalgebra, DualElement};
pub use target::{pd_quasi_target, PdTarget, QuasiIso};

use crate::gca::GcaError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoalgebraError {
    #[error("invalid finite DGA: {}", .0.join("; "))]
    InvalidDga(Vec<String>),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("not a DGA map: {0}")]
    NotAChainMap(String),
    #[error(transparent)]
    Gca(#[from] GcaError),
}

#[cfg(test)]
mod tests;
