//! Multi-set concentration of measure on finite metric measure spaces and
//! reversible Markov chains.
//!
//! The central objects are a finite metric measure space `(E, d, mu)` or a
//! reversible chain with kernel `p` and reversible measure `mu`, a family of
//! pairwise separated sets `A_1, ..., A_k`, and the ascending spectrum of the
//! operator `I - p` on `L^2(mu)`. Given those, the crate evaluates and
//! certifies lower bounds of the form
//!
//! ```text
//! mu(A_r) >= 1 - (1 - mu(A)) * alpha_k(r)
//! ```
//!
//! where the profile `alpha_k` decays at a rate driven by the k-th eigenvalue,
//! together with the inverse statements (eigenvalue upper bounds from
//! separated families), closed-form model-space spectra, and the functional
//! forms (min of Lipschitz functions, quantile deviation, extension error).
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI
//! live in the companion `setconc-cli` crate.

#![cfg_attr(not(any(test, doctest)), no_std)]

extern crate alloc;

pub mod bounds;
pub mod error;
mod fmath;
pub mod lipschitz;
pub mod models;
pub mod polytope;
pub mod profile;
pub mod space;
pub mod spectral;

pub use error::Error;

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;
