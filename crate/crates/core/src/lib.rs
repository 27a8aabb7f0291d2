//! Multiple orthogonal polynomials defined by nearest-neighbor recurrence
//! coefficients, and the algebraic function that governs their ratio
//! asymptotics along rays in the index lattice.
//!
//! ```
//! use mop_ratio::algebraic::{partial_fraction_numerator, principal_branch};
//! use mop_ratio::evaluator::Evaluator;
//! use mop_ratio::families::{CoefficientProvider, LimitData};
//! use mop_ratio::lattice::MultiIndex;
//! use num_complex::Complex64;
//!
//! let provider = CoefficientProvider::constant(vec![0.25], vec![0.0])?;
//! let x = Complex64::new(1.0, 1.0);
//! let ratio = Evaluator::new(&provider).neighbor_ratio(&MultiIndex::new(vec![200])?, 0, x, None)?;
//!
//! let eq = partial_fraction_numerator(&LimitData::new(vec![0.25], vec![0.0], 0.0)?)?;
//! let z = principal_branch(&eq, x)?.z;
//! assert!((ratio - z).norm() < 1e-6);
//! # Ok::<(), mop_ratio::Error>(())
//! ```

pub mod acceptance;
pub mod algebraic;
pub mod error;
pub mod evaluator;
pub mod families;
pub mod lattice;
pub mod verify;

pub use error::{Error, Result};
