//! Lyndon factorizations and the spectra of quantum q-nary graphs.
//!
//! The crate has two halves joined by one bijection:
//!
//! - [`words`]: lexicographic order, Lyndon words, Duval factorization and
//!   the count `(q - 1) q^(n - 1)` of words whose factorization has no
//!   repeated factor.
//! - [`debruijn`], [`quantum`], [`spectral_stats`]: the order-`m` de Bruijn
//!   graph over `q` letters, where primitive periodic orbits are Lyndon
//!   words and primitive pseudo orbits are such factorizations. Quantized
//!   with DFT vertex scattering, the characteristic-polynomial coefficients
//!   of its evolution operator are finite sums over pseudo orbits.
//!
//! Numerical types are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the usual double-precision choice.

pub mod cli;
pub mod debruijn;
pub mod error;
pub mod linalg;
pub mod quantum;
pub mod scalar;
pub mod spectral_stats;
pub mod words;

pub use error::{Error, Result};
pub use scalar::Real;
pub use words::{Count, Word, DEFAULT_BUDGET};

pub type CMatrix64 = linalg::CMatrix<f64>;
pub type ScatteringMatrix64 = quantum::ScatteringMatrix<f64>;
pub type EdgeLengths64 = quantum::EdgeLengths<f64>;
pub type SpectralInstance64 = quantum::SpectralInstance<f64>;
pub type CharPolyCoefficients64 = quantum::CharPolyCoefficients<f64>;
pub type PseudoOrbitExpansion64 = quantum::PseudoOrbitExpansion<f64>;

pub type CMatrix32 = linalg::CMatrix<f32>;
pub type SpectralInstance32 = quantum::SpectralInstance<f32>;
