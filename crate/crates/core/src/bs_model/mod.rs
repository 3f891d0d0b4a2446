//! Models of mapping spaces `Map(X, Y; f)` built from a Sullivan model of
//! `Y`, a finite DGA model `B` of `X`, and the base map.
//!
//! The ambient algebra is `Λ(V ⊗ B_*)` with the differential induced by the
//! coproduct of `B_*`. Quotienting by the ideal `M_u` generated by negative
//! generators, degree-0 generators minus their value under the evaluation
//! character `u`, and the differentials of those, gives a model of the
//! component of `f`. Only degrees `≤ 3` of the quotient are built, which is
//! enough for `H¹`, the differential on degree 1, and `δ² = 0` there.

mod ambient;
mod reduce;


pub use ambient::{mixed_name, tau, Ambient, MappingSpaceInput, MixedGenerator};
pub use reduce::{reduce_mod_mu, BsModel, EvalImage, H1Basis, H1Class};

use crate::coalgebra::CoalgebraError;
use crate::gca::GcaError;

#[derive(Debug, thiserror::Error)]
pub enum BsError {
    #[error(transparent)]
    Gca(#[from] GcaError),
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
    #[error("inconsistent model: {0}")]
    ModelInconsistency(String),
    #[error("`{0}` is not a generator of the model")]
    UnknownGenerator(String),
    #[error("degree {0} is outside the computed range")]
    OutOfRange(i32),
}
