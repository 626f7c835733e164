//! Computational workbench for finitely presented algebras over prime fields:
//! relative Frobenius maps, Kähler differentials, Gröbner bases and the
//! deformation-theoretic checks that tie them together.

pub mod algebra;
pub mod budget;
pub mod deform;
pub mod differentials;
pub mod dsl;
pub mod error;
pub mod fpmodule;
pub mod frobenius;
pub mod groebner;
pub mod linalg;
pub mod polycore;
pub mod verdict;

pub use budget::Budget;
pub use error::{Error, Result};
