pub mod bs_model;
pub mod coalgebra;
pub mod dsl;
pub mod gca;
pub mod linalg;
pub mod nilmanifold;
pub mod scalar;
pub mod sep_symplectic;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/coalgebra.md")]
    mod coalgebra {}
    #[doc = include_str!("../../../book/src/mapping_models.md")]
    mod mapping_models {}
    #[doc = include_str!("../../../book/src/symplectic.md")]
    mod symplectic {}
    #[doc = include_str!("../../../book/src/nilmanifolds.md")]
    mod nilmanifolds {}
    #[doc = include_str!("../../../book/src/model_files.md")]
    mod model_files {}
}
