//! Numerical toolkit for the linearized operator family of a self-similar
//! axisymmetric (Oseen-type) vortex at large circulation Reynolds number.
//!
//! The crate works mode by mode: for an angular Fourier mode `k ≥ 1`,
//! circulation Reynolds number `α > 0` and a spectral parameter `λ` on the
//! imaginary axis, it assembles the reduced operator
//!
//! ```text
//! H_{α,k,λ} v = −v″ − v′/r + (k²/r²) v + (r²/16) v − v/2
//!               + i β_k (σ(r) − ν_k) v − i β_k g K_k[g v]
//! ```
//!
//! on `L²(ℝ₊; r dr)` with `β_k = αk/(8π)`, `ν_k = λ/β_k`, together with its
//! logarithmic-variable conjugate on a uniform grid in `t = log r`. On top of
//! the assembled matrices it provides:
//!
//! * resolvent-norm sweeps along the imaginary axis, pseudospectra and
//!   eigenvalue computations ([`resolvent`]);
//! * the semiclassical multiplier construction and a coercivity
//!   certification of the multiplier lower bound ([`multiplier`]);
//! * a verification battery for the scalar inequalities the continuous
//!   argument rests on ([`verify`]).
//!
//! All linear algebra is dense double precision; grids and tolerances are
//! explicit arguments with documented defaults. Computations are pure
//! functions of their inputs, so every artifact is reproducible bit for bit.
//!
//! Parallelism: embarrassingly parallel sweeps (over λ, over grid points of a
//! pseudospectrum, over sample batches) go through [`parallel::par_map`],
//! which uses rayon when the default `parallel` feature is enabled and plain
//! sequential iteration otherwise. Results are identical either way.

pub mod error;
pub mod grid;
pub mod linalg;
pub mod multiplier;
pub mod operators;
pub mod parallel;
pub mod profile;
pub mod resolvent;
pub mod verify;

pub use error::{Error, Result};
