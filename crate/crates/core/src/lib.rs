//! Structured-matrix quantum pipelines.
//!
//! This crate applies sparse and frequency-sparse Toeplitz, Hankel and
//! circulant matrices to vectors by simulating, amplitude for amplitude, the
//! circuit that makes those products efficient on a quantum computer: embed
//! the Toeplitz matrix in a circulant twice its size, diagonalize the
//! circulant with the discrete Fourier transform, dilate the (generally
//! non-unitary) eigenvalue diagonal to a unitary, embed that unitary in an
//! involutory Hermitian operator, and drive the register through
//! `F -> exp(-i pi/2 H) -> F^dagger` followed by ancilla post-selection.
//!
//! The simulation is exact: results carry the reconstructed product, the
//! analytic success probability of the post-selection, and the dilation
//! scale, and every fast path is checked against dense brute-force oracles
//! in the test suite. Measurement sampling is a separate, seeded operation.
//!
//! ```
//! use num_complex::Complex64;
//! use qtoeplitz::pipeline::run_pipeline;
//! use qtoeplitz::structured::build_laplacian;
//!
//! let r = |x: f64| Complex64::new(x, 0.0);
//! let laplacian = build_laplacian(4)?;
//! let result = run_pipeline(&laplacian, &[r(1.0), r(2.0), r(3.0), r(0.0)])?;
//!
//! // output is L2 * u = (0, 0, 4, -3); the run succeeds with probability
//! // ||L2 u||^2 / (k ||u||)^2
//! assert!((result.output[2].re - 4.0).abs() < 1e-10);
//! assert!((result.output[3].re + 3.0).abs() < 1e-10);
//! assert!(result.success_probability > 0.0);
//! # Ok::<(), qtoeplitz::Error>(())
//! ```

pub mod dilation;
pub mod error;
pub mod numerics;
pub mod pipeline;
pub mod structured;

pub use error::{Error, Result};
pub use num_complex::Complex64;

// The guide's code listings double as tests: each chapter is attached as a
// doc comment here so `cargo test --doc` compiles and runs every snippet.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/structured-matrices.md")]
    mod structured_matrices {}
    #[doc = include_str!("../../../book/src/dilation.md")]
    mod dilation {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
    #[doc = include_str!("../../../book/src/applications.md")]
    mod applications {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
