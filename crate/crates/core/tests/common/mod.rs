//! Brute-force oracles shared by the integration tests. They only use point
//! evaluation, coset enumeration and character values, never the
//! transform or zeta-integral shortcuts they are checked against.
#![allow(dead_code)]

use std::sync::Arc;

use tatezeta::characters::Character;
use tatezeta::localfield::{Coset, KElement, LocalField};
use tatezeta::scalars::{CycScalar, LaurentPoly};
use tatezeta::stepfun::StepFunction;

pub fn fields() -> Vec<Arc<LocalField>> {
    tatezeta::suites::reference_fields()
}

/// μ(a + 𝔩^L) = q^{−L−δ/2} for the self-dual measure.
pub fn measure(field: &LocalField, level: i64) -> CycScalar {
    CycScalar::sqrtq_pow(field.cyc(), -2 * level - field.delta())
}

/// ∫_c χ dx by subdividing c until χ is constant on every piece.
fn integrate_character(field: &LocalField, c: &Coset, chi: &Character) -> LaurentPoly {
    assert!(!c.contains_zero(), "integrand is nonzero on a neighbourhood of 0");
    let v = c.rep_valuation().unwrap();
    if c.level >= v + chi.level().max(1) {
        return chi.eval(&c.rep(field)).unwrap().scale(&measure(field, c.level));
    }
    c.children(field.ell())
        .iter()
        .filter(|d| !d.contains_zero())
        .fold(LaurentPoly::zero(field.cyc()), |acc, d| {
            acc.add(&integrate_character(field, d, chi))
        })
}

/// Z(f, χ) by exhaustive subdivision.
pub fn brute_zeta(f: &StepFunction, chi: &Character) -> LaurentPoly {
    let field = f.field();
    let mut acc = LaurentPoly::zero(field.cyc());
    for (c, v) in f.terms() {
        acc = acc.add(&integrate_character(field, c, chi).scale(v));
    }
    acc
}

/// Representatives of 𝔩^bottom/𝔩^top.
pub fn reps(field: &LocalField, bottom: i64, top: i64) -> Vec<KElement> {
    field
        .enumerate_cosets(-bottom, top)
        .unwrap()
        .iter()
        .map(|c| c.rep(field))
        .collect()
}
