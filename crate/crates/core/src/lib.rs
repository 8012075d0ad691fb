//! Massive deformations of Kronecker-Eisenstein series.
//!
//! Lattice sums over Z tau + Z with certified truncation, their classical limits,
//! the differential operators they satisfy, Mellin transforms, and the massive
//! modular graph function built from them.

// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod diffops;
pub mod error;
pub mod graphfn;
pub mod jet;
pub mod lattice;
pub mod massive;
pub mod point;
pub mod quadrature;
pub mod series;
pub mod special_fns;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use point::{reflection_phase, TorusPoint, UpperHalfPoint};
