//! Exact scalars: the ring Q(ζ_M)[√q] and rational functions in λ over it.

mod cyc;
mod laurent;

pub use cyc::{cyclotomic_poly, CycField, CycScalar};
pub use laurent::{binomial, lambda, LaurentPoly, RationalFunc};
