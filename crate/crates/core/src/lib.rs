//! Exact Jordan canonical forms over the Gaussian rationals and the local
//! algebraic K-classes `K₀` and `K₁` of complex matrices with the trivial
//! filtration.

pub mod cli;
pub mod equiv;
pub mod error;
pub mod exmat;
pub mod gaussq;
pub mod jordan;
pub mod ktheory;
pub mod suites;
mod zmat;

pub use error::{Error, Result};
pub use exmat::ExactMatrix;
pub use gaussq::{GaussianRational, Rational};
pub use jordan::{JordanCell, JordanForm, Spectrum};
pub use ktheory::{K0Class, K1Class};
