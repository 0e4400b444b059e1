//! Numerical evaluation of explicit formulas for zeros of Selberg-class
//! L-functions.
//!
//! The crate evaluates both sides of Gaussian-weighted zero-sum identities,
//! the Weil explicit formula for a family of test functions, an RH-conditional
//! error integral, and generalized Li coefficients, against tables of zero
//! ordinates.
//!
//! ```
//! use explicit_formula::descriptor::SelbergDescriptor;
//!
//! let zeta = SelbergDescriptor::zeta();
//! assert!((zeta.degree() - 1.0).abs() < 1e-15);
//! assert!((zeta.conductor() - 1.0).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod descriptor;
pub mod error;
pub mod li;
pub mod quad;
pub mod special;
pub mod summation;
pub mod testfn;
pub mod weil;
pub mod zeros;
pub mod zerosum;

pub use error::{Error, Result};

/// The Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
