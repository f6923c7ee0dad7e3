//! Nodal discontinuous Galerkin solver for 1D periodic conservation laws with
//! polynomial-annihilation troubled-element sensing and l1-regularized sparse
//! reconstruction.

pub mod admm;
pub mod config;
pub mod element;
pub mod error;
pub mod mass;
pub mod output;
pub mod pa;
pub mod problems;
pub mod sensor;
pub mod solver;

pub use error::{Error, Result};
