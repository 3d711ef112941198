//! Lattice combinatorics and exact polynomial verification for generalized
//! del Pezzo surfaces whose Cox rings have at most one relation.

pub mod ade;
pub mod catalog;
pub mod coxdegrees;
pub mod error;
pub mod lp;
pub mod piclattice;
pub mod polyverify;
pub mod typeenum;

pub use error::{Error, Result};

/// Polynomials with exact rational coefficients.
pub type Poly = polyverify::MultiPoly<num_rational::BigRational>;
