//! Discrete-time quantum walks on periodic 1D and 2D lattices, coupled to
//! Abelian and non-Abelian gauge fields and to curved spatial metrics.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; IO, configuration and file formats live in the
//! `qwalk-cli` crate.
//!
//! Walk convention: one step applies the spin-dependent shift first and the
//! coin second, `Psi_{j+1} = U_j S Psi_j`. The shift moves the upper internal
//! component one site towards lower indices and the lower component one site
//! towards higher indices, with periodic wrap.
#![no_std]
#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod abelian;
pub mod chain;
pub mod coin;
pub mod curved;
pub mod dirac;
pub mod error;
pub mod fft;
pub mod fmath;
pub mod lattice;
pub mod linalg;
pub mod measured;
pub mod nonabelian;
pub mod observe;
pub mod walk;
pub mod weakfield;

pub use error::{Error, Result};
pub use lattice::SpinorField;
pub use linalg::Mat2;
pub use num_complex::Complex64;

/// Shorthand for building a complex number.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
