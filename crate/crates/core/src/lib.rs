//! Signed-permutation actions on finite truncations of `l_p`.
//!
//! The crate builds representations of a finitely generated group by signed
//! permutations, splits them into orbits, measures how well each orbit graph
//! expands (Cheeger constant, spectral gap, p-Poincaré constant), and works
//! with cocycles and coboundaries of those actions.

pub mod classify;
pub mod cli;
pub mod cocycle;
pub mod error;
pub mod graphgen;
pub mod perm_rep;
pub mod spectral;

pub use error::{Error, Result};
