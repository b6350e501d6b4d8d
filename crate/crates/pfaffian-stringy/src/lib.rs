//! Exact q-series computations for stringy E-functions of Pfaffian varieties
//! and their homologically projectively dual double mirrors.
//!
//! The crate is organized bottom-up:
//!
//! - [`qalgebra`]: exact Laurent-polynomial and rational-function arithmetic
//!   over the integers, with canonical forms, parsing, and printing.
//! - [`qseries`]: q-Pochhammer symbols, Gaussian binomials, and E-polynomials
//!   of projective spaces, Grassmannians, and Pfaffian rank strata.
//! - [`qhypergeom`]: terminating basic hypergeometric series and exact
//!   verification of the summation identities over integer parameter grids.
//! - [`pfaffian`]: stringy E-functions and discrepancies of Pfaffian cones.
//! - [`sections`]: linear sections, isotropic-subspace counts, and the
//!   coefficient systems relating the two sides of the double mirror.
//! - [`hpd`]: the Euler-characteristic relation, type classification, and
//!   predicted semiorthogonal decompositions.
//! - [`report`]: structured pass/skip/fail reporting for grid verification.

pub mod hpd;
pub mod pfaffian;
pub mod qalgebra;
pub mod qhypergeom;
pub mod qseries;
pub mod report;
pub mod sections;

pub use qalgebra::{LaurentPoly, QAlgebraError, RatFunc};
pub use report::VerificationReport;
