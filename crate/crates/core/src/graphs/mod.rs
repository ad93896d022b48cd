//! Graph specifications, closed-form Laplacian spectra, exact spanning-tree
//! counts and the circulant-to-lattice isomorphism.
//!
//! Both graph families are `2d`-regular multigraphs: a generator equal to
//! `n/2` (or a torus side of length 2) produces a doubled edge, and a torus
//! side of length 1 produces a loop, which the Laplacian ignores. The closed
//! form eigenvalues follow the same convention, so the determinant route and
//! the spectral route always describe the same graph.

mod lattice;
mod laplacian;
mod spec;
mod spectrum;
mod trees;

pub use lattice::{circulant_to_lattice, quotient_spectrum_exhaustive, LatticeMatrix};
pub use laplacian::IntLaplacian;
pub use spec::{generator_c, validate_generators, CirculantSpec, GraphSpec, TorusSpec};
pub use spectrum::{
    circulant_spectrum, log_det_star, side_eigenvalues, spectrum, spectrum_capped,
    torus_log_det_star, torus_spectrum, torus_spectrum_capped, Spectrum,
    DEFAULT_ENUMERATION_CAP,
};
pub use trees::{
    bareiss_determinant, bigint_ln, spanning_tree_count_exact,
    spanning_tree_count_exact_capped, spanning_trees_of_laplacian, TreeCount, DEFAULT_EXACT_CAP,
};
