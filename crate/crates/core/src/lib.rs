//! Tools for the weak Lefschetz property of equigenerated artinian monomial
//! ideals.

pub mod classify;
pub mod cli;
pub mod coeff;
pub mod cyclic;
pub mod cyclotomic;
pub mod dihedral;
pub mod error;
pub mod form;
pub mod ideal;
pub mod linalg;
pub mod matroid;
pub mod monomial;

pub use error::{Error, Result};
