//! Exact arithmetic over F_q[theta] with both completions, Carlitz modules,
//! geometric Gauss sums, v-adic gamma functions, and a verification lab for
//! the identities relating them.

pub mod affine;
pub mod carlitz;
pub mod error;
pub mod ffq;
pub mod gamma;
pub mod gauss;
pub mod localinf;
pub mod localv;

pub use error::{Error, Result};
