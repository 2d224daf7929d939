//! Numerical kernels for checking Krein–Rutman type conclusions on
//! finite-dimensional operators.
//!
//! The crate is `no_std` and only needs `alloc`. It covers dense linear
//! algebra ([`matrix`], [`linalg`]), cones with an LP certification backend
//! ([`cone`], [`lp`]), spectral objects of a matrix operator ([`spectral`]),
//! hypothesis and conclusion checks collected into reports ([`kr`]), and
//! monotone finite-difference discretizations of second-order elliptic
//! operators with mixed boundary conditions ([`elliptic`]).
//!
//! All routines are pure functions of their inputs. Randomized checks take an
//! explicit seed and use a ChaCha stream, so results are reproducible.

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod cone;
pub mod elliptic;
mod error;
pub mod kr;
pub mod linalg;
pub mod lp;
pub mod matrix;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use cone::{Cone, ConeLocation, ConeWitness, InteriorMeet, SubspaceMeet};
pub use kr::{KrCheck, KrReport, Principal, Status, Witness};
pub use linalg::subspace::Subspace;
pub use matrix::RealMatrix;
pub use spectral::{OperatorModel, Spectrum};
