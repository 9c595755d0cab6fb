//! Exact harmonic analysis on tamely ramified extensions K = Q_ℓ(ℓ^{1/e}) with
//! values in Q(ζ_M)[√q]: step functions, Fourier transforms, quasi-characters,
//! local zeta integrals and their ℓ-adic-to-p-adic continuation.

pub mod arith;
pub mod characters;
pub mod duality;
pub mod error;
pub mod fourier;
pub mod group;
pub mod localfield;
pub mod padic;
pub mod scalars;
pub mod serial;
pub mod stepfun;
pub mod suites;
pub mod zeta;

pub use error::{Error, Result};
