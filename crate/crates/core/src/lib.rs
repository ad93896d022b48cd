//! Spanning-tree counts of circulant graphs and discrete tori, together with
//! the Bessel and zeta function machinery that describes their asymptotics.

pub mod asym;
pub mod conjecture;
pub mod error;
pub mod graphs;
pub mod numeric;
pub mod precise;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
