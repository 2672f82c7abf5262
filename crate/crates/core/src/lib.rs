//! Numerics for fractional Sobolev spaces: Gagliardo seminorms, the fractional
//! Laplacian in its singular-integral, difference-quotient and Fourier forms,
//! the constant `C(n, s)`, extension and trace operators, the embedding
//! inequalities and two counterexamples on irregular domains.

pub mod catalog;
pub mod constants;
pub mod counterexamples;
pub mod error;
pub mod exttrace;
pub mod fraclap;
pub mod gagliardo;
pub mod grid;
pub mod inequalities;
pub mod kernel;
pub mod quad;

pub use catalog::{Field, Func};
pub use error::{Error, Result, Warning};
pub use grid::{make_grid, DiagPolicy, DomainSpec, FracParams, Grid, GridFunction, QuadConfig, TailMode};

/// Guide chapters, compiled as doc-tests.
pub mod guide {
    #[doc = include_str!("../../../book/src/constants.md")]
    pub mod chapter1 {}
    #[doc = include_str!("../../../book/src/seminorms.md")]
    pub mod chapter2 {}
    #[doc = include_str!("../../../book/src/fraclap.md")]
    pub mod chapter3 {}
    #[doc = include_str!("../../../book/src/exttrace.md")]
    pub mod chapter4 {}
    #[doc = include_str!("../../../book/src/inequalities.md")]
    pub mod chapter5 {}
    #[doc = include_str!("../../../book/src/counterexamples.md")]
    pub mod chapter6 {}
}
