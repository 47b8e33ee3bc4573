//! Cohomology of one-dimensional aperiodic tilings and their hulls, computed
//! with exact integer arithmetic.

pub mod abelian;
pub mod approximants;
pub mod delta_complex;
pub mod error;
pub mod koszul;
pub mod pv;
pub mod spectral;
pub mod tiling;

pub use error::{Error, Result};
