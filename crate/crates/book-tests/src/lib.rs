//! Compiles the book chapters as doctests, one module per chapter.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}
#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}
#[doc = include_str!("../../../book/src/theta.md")]
pub mod theta {}
#[doc = include_str!("../../../book/src/quadrature.md")]
pub mod quadrature {}
#[doc = include_str!("../../../book/src/lead-terms.md")]
pub mod lead_terms {}
#[doc = include_str!("../../../book/src/predictions.md")]
pub mod predictions {}
#[doc = include_str!("../../../book/src/conjecture.md")]
pub mod conjecture {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
