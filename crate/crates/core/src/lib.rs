//! Numerics for the one-dimensional Darboux III oscillator, a harmonic
//! oscillator with position-dependent mass `1 + λx²`.
//!
//! The crate provides the exact spectrum and eigenfunctions, closed-form
//! entropic moments with the Rényi and Tsallis entropies they generate,
//! quadrature routines for arbitrary entropic order and for momentum space,
//! entropic uncertainty functions, and the large-λ asymptotic machinery.
//! Units are chosen with ħ = 1.
//!
//! ```
//! use darboux::model::{energy, ModelParams};
//!
//! let params = ModelParams::new(1.0, 0.3).unwrap();
//! assert!((energy(&params, 2) - 1.25).abs() < 1e-12);
//! ```

pub mod entropy;
pub mod error;
pub mod model;
pub mod quadrature;
pub mod specfun;
pub mod strong;
pub mod uncertainty;

pub use error::{Error, Result};
pub use model::{ModelParams, StateSpectrum};
pub use specfun::ScaledValue;
