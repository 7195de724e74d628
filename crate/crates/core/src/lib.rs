//! Spectral quantities of Robin Laplacians on intervals and cuboids.

pub mod error;
pub mod interval;
pub mod quad;
pub mod roots;
pub mod special;
pub mod sum;

pub use error::{Error, Result};
pub use interval::BoundaryCondition;
pub mod riesz;
pub mod constants;
pub mod thresholds;
pub mod shape;
pub mod acceptance;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/interval.md")]
    mod interval {}
    #[doc = include_str!("../../../book/src/riesz.md")]
    mod riesz {}
    #[doc = include_str!("../../../book/src/constants.md")]
    mod constants {}
    #[doc = include_str!("../../../book/src/thresholds.md")]
    mod thresholds {}
    #[doc = include_str!("../../../book/src/shape.md")]
    mod shape {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
