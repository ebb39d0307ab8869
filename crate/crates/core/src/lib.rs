//! Quantum diffraction of matter waves in a uniform gravitational field.
//!
//! The crate maps the gravitational problem to free propagation in a
//! quasi-time variable, evaluates paraxial Fresnel amplitudes and the exact
//! Airy-function solution, and derives the free-fall metrology figures that
//! follow from the location of the gravitational focus.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod metrology;
pub mod model;
pub mod nonparaxial;
pub mod numeric;
pub mod paraxial;
pub mod quasitime;
pub mod reference;
pub mod selftest;
pub mod specfun;

pub use error::{Error, Result};
