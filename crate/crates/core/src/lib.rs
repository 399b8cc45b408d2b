//! Quantum coherence of density matrices in arbitrary reference bases.
//!
//! The crate quantifies the relative-entropy, l1 and l2 coherence of a
//! state in any basis, builds the Fourier / complex-Hadamard bases in which
//! the relative-entropy and l2 measures reach their ceilings, evaluates the
//! closed-form maxima that depend only on the spectrum, and runs seeded
//! Haar-random basis searches showing that for the l1 measure the Fourier
//! basis is stationary but not globally optimal in dimensions above three.
//!
//! Modules:
//! - [`linalg`]: complex matrices, density matrices, Hermitian
//!   eigendecomposition, entropy.
//! - [`measures`]: the three coherence measures in a given basis.
//! - [`hadamard`]: Fourier matrices, Hadamard validation, monomial
//!   equivalence transforms, dual basis, generalized Pauli operators.
//! - [`analytic`]: closed forms — coherence ceilings, the Fourier-basis l1
//!   value O_d, its permutation maximum, and the C_P / C_F pair.
//! - [`search`]: CUE sampling, random-basis search, stationarity residual,
//!   circulant checks, local refinement.
//! - [`io`] and [`cli`]: file formats, result records and the command-line
//!   harness.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod hadamard;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod search;

pub use error::{Error, Result};
pub use num_complex::Complex64;
