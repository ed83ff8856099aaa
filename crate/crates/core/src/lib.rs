//! Spectral toolkit for the interacting xp model of the Riemann zeros.
//!
//! The crate covers exact Dirichlet-polynomial algebra with the ⋆-product,
//! Jost functions and their real zeros, the perturbative reconstruction of a
//! potential from a target Jost function, closed-form spectra, and a direct
//! matrix discretization of the inverse Hamiltonian used as an independent
//! check.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod dirichlet;
pub mod error;
pub mod inversion;
pub mod jost;
pub mod oracle;
pub mod quad;
pub mod rational;
pub mod specfun;
pub mod spectra;

pub use error::{Error, Result};
