//! Finite-dimensional operator algebra toolkit for beable subalgebras.
//!
//! A subalgebra of observables is *beable* for a state when the state
//! restricts to it as a mixture of dispersion-free (multiplicative) states.
//! This crate builds the objects needed to test and construct such algebras
//! over dense complex matrices:
//!
//! - [`matcore`]: complex matrices, subspaces, Hermitian spectral data and
//!   tolerance-aware null spaces.
//! - [`algebra`]: generated *-algebras, commutants, centers, minimal
//!   projections, maximal abelian extensions and the Jordan/Lie product layer.
//! - [`states`]: density operators, left kernels, definite algebras and
//!   dispersion-free decompositions.
//! - [`beable`]: beable tests, maximal beable algebras and privileged
//!   observable (R-beable) constructions.
//! - [`scenarios`]: measurement, EPR and clock-shift scenario builders with
//!   their expected verdicts.
//! - [`random`]: seeded samplers used by property suites and the CLI.

pub mod algebra;
pub mod beable;

mod error;
pub mod matcore;
pub mod random;
pub mod scenarios;
pub mod states;




pub use error::{Error, Result};
pub use matcore::{CVector, ComplexMatrix, Subspace, Tolerance, C64};
