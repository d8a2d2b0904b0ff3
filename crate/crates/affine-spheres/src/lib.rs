//! Explicit hyperbolic affine spheres asymptotic to the semi-homogeneous
//! cones of ℝ³, their isothermal charts and associated families, with the
//! equiaffine invariant engine and the Tzitzéica/Lax structure layer used
//! to check them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;

pub mod blaschke;
pub mod elliptic;
pub mod families;
pub mod numerics;
pub mod structure;
pub mod surface;

pub use error::{Error, Result};
