//! Fourier orthogonal expansions on the cylinder `B^d x [-1,1]^m` and their
//! Cesàro `(C, delta)` means.

// `!(x >= 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod ballbasis;
pub mod commands;
pub mod config;
pub mod cylinder;
pub mod error;
pub mod orthopoly;
pub mod quadrature;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
