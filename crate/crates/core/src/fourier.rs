//! Haar integration and the Fourier transform f ↦ f̂(y) = ∫ f(x)ζ^{±tr(xy)} dx
//! for the self-dual measure (mass q^{−δ/2} on 𝔬_K).

use std::collections::HashMap;
use std::sync::Arc;

use crate::arith::{int, Rational};
use crate::error::{Error, Result};
use crate::localfield::{Coset, KElement, LocalField};
use crate::scalars::CycScalar;
use crate::stepfun::{Direction, GeoTail, ShellFunction, StepFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    /// ζ^{+tr(xy)}, the forward transform.
    Zeta,
    /// ζ^{−tr(xy)}, the inverse transform.
    ZetaInv,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Zeta => Sign::ZetaInv,
            Sign::ZetaInv => Sign::Zeta,
        }
    }

    fn apply(self, k: i64) -> i64 {
        match self {
            Sign::Zeta => k,
            Sign::ZetaInv => -k,
        }
    }
}

/// Measure of a + 𝔩^N: q^{−N−δ/2}.
pub fn coset_measure(field: &LocalField, level: i64) -> CycScalar {
    CycScalar::sqrtq_pow(field.cyc(), -2 * level - field.delta())
}

/// Measure of the shell π^n𝔬^×: q^{−n−δ/2}(1 − 1/q).
pub fn shell_measure(field: &LocalField, n: i64) -> CycScalar {
    let q = field.q() as i64;
    coset_measure(field, n).scale(&(int(1) - Rational::new(1.into(), q.into())))
}

pub fn haar_integral(f: &StepFunction) -> CycScalar {
    let field = f.field();
    let mut acc = CycScalar::zero(field.cyc());
    for (c, v) in f.terms() {
        acc += &(v * &coset_measure(field, c.level));
    }
    acc
}

/// Closed-form sum of one tail's shell integrals.
pub fn tail_integral(field: &LocalField, t: &GeoTail) -> CycScalar {
    let q = int(field.q() as i64);
    match t.direction {
        Direction::TowardZero => {
            let r = int(1) / (int(1) - &t.ratio / &q);
            (&t.coeff * &shell_measure(field, t.start)).scale(&r)
        }
        Direction::TowardInfinity => {
            let r = int(1) / (int(1) - &t.ratio * &q);
            (&t.coeff * &shell_measure(field, -t.start)).scale(&r)
        }
    }
}

/// ∫ F dx. Shell measures are p-adic units and |ρ|_p < 1, so every tail
/// converges; with `require_convergence` the ratios are re-checked.
pub fn haar_integral_shell(f: &ShellFunction, require_convergence: bool) -> Result<CycScalar> {
    let field = f.field();
    let mut acc = haar_integral(&f.step);
    for t in &f.tails {
        if require_convergence && !crate::stepfun::is_p_small(&t.ratio, field.params().p) {
            return Err(Error::BadParameter(format!("tail ratio {} does not converge", t.ratio)));
        }
        acc += &tail_integral(field, t);
    }
    Ok(acc)
}

/// Caches ζ_M^k·base by exponent.
struct RootCache<'a> {
    base: &'a CycScalar,
    m: i64,
    seen: HashMap<i64, CycScalar>,
}

impl<'a> RootCache<'a> {
    fn new(base: &'a CycScalar) -> Self {
        let m = base.field().conductor() as i64;
        RootCache {
            base,
            m,
            seen: HashMap::new(),
        }
    }

    fn get(&mut self, k: i64) -> CycScalar {
        let k = k.rem_euclid(self.m);
        self.seen.entry(k).or_insert_with(|| self.base.mul_root(k)).clone()
    }
}

/// Emits (coset, ζ^{sign·tr(a·y)}·base) for the cosets y + 𝔩^top inside 𝔩^bottom.
fn character_cosets(
    field: &LocalField,
    a: &KElement,
    bottom: i64,
    top: i64,
    sign: Sign,
    base: &CycScalar,
    out: &mut Vec<(Coset, CycScalar)>,
) -> Result<()> {
    let depth = (top - bottom).max(0) as u32;
    field.check_size((field.ell() as u128).checked_pow(depth).unwrap_or(u128::MAX))?;
    let m = field.params().conductor as i64;
    let exps: Vec<i64> = (bottom..top)
        .map(|j| field.add_char_exp(&a.shift(j)))
        .collect::<Result<_>>()?;
    let mut cache = RootCache::new(base);
    let ell = field.ell() as u32;
    let mut digits = vec![0u32; depth as usize];
    loop {
        let mut k = 0i64;
        for (d, e) in digits.iter().zip(&exps) {
            k = (k + *d as i64 * e) % m;
        }
        out.push((Coset::new(top, bottom, &digits), cache.get(sign.apply(k))));
        // odometer increment
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(());
            }
            digits[i] += 1;
            if digits[i] < ell {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Transform of coeff·1_{coset}: ζ^{±tr(ay)}q^{−N−δ/2} on 𝔩^{−N}𝔡^{−1},
/// expanded on cosets of level −ord(a) − δ.
fn transform_term(
    field: &LocalField,
    coset: &Coset,
    coeff: &CycScalar,
    sign: Sign,
    out: &mut Vec<(Coset, CycScalar)>,
) -> Result<()> {
    let delta = field.delta();
    let bottom = -coset.level - delta;
    let base = coeff * &coset_measure(field, coset.level);
    match coset.rep_valuation() {
        None => {
            out.push((Coset::zero(bottom), base));
            Ok(())
        }
        Some(v) => character_cosets(field, &coset.rep(field), bottom, -v - delta, sign, &base, out),
    }
}

pub fn fourier(f: &StepFunction, sign: Sign) -> Result<StepFunction> {
    let field = f.field();
    let mut out = Vec::new();
    for (c, v) in f.terms() {
        transform_term(field, c, v, sign, &mut out)?;
    }
    StepFunction::from_terms(field, out)
}

/// The step function y ↦ ζ^{±tr(hy)} restricted to 𝔩^level.
pub fn character_step(field: &Arc<LocalField>, h: &KElement, level: i64, sign: Sign) -> Result<StepFunction> {
    let one = CycScalar::one(field.cyc());
    let top = match h.valuation() {
        None => level,
        Some(v) => (-v - field.delta()).max(level),
    };
    let mut out = Vec::new();
    character_cosets(field, h, level, top, sign, &one, &mut out)?;
    StepFunction::from_terms(field, out)
}

/// Transform of a geometric tail; tails are 𝔬^×-invariant, so the sign of ζ
/// plays no role. Returns the ball part (level, coefficient) and the new tail.
fn transform_tail(field: &LocalField, t: &GeoTail) -> ((i64, CycScalar), GeoTail) {
    let delta = field.delta();
    let q = int(field.q() as i64);
    let one = int(1);
    let s = t.start;
    match t.direction {
        Direction::TowardZero => {
            let denom = &one - &t.ratio / &q;
            let ball = CycScalar::sqrtq_pow(field.cyc(), -delta - 2 * s).scale(&((&one - &one / &q) / &denom));
            let tail = CycScalar::sqrtq_pow(field.cyc(), -delta - 2 * s - 2).scale(&((&t.ratio - &one) / &denom));
            (
                (-s - delta, &t.coeff * &ball),
                GeoTail {
                    direction: Direction::TowardInfinity,
                    start: s + delta + 1,
                    ratio: &t.ratio / &q,
                    coeff: &t.coeff * &tail,
                },
            )
        }
        Direction::TowardInfinity => {
            let w0 = s - 1 - delta;
            let denom = &one - &t.ratio * &q;
            let ball = CycScalar::sqrtq_pow(field.cyc(), 2 * s - 2 - delta).scale(&((&q - &one) / &denom));
            let tail = CycScalar::sqrtq_pow(field.cyc(), 2 * s - delta).scale(&(-(&one - &t.ratio) / &denom));
            (
                (w0, &t.coeff * &ball),
                GeoTail {
                    direction: Direction::TowardZero,
                    start: w0,
                    ratio: &t.ratio * &q,
                    coeff: &t.coeff * &tail,
                },
            )
        }
    }
}

pub fn fourier_shell(f: &ShellFunction, sign: Sign) -> Result<ShellFunction> {
    let field = f.field();
    let mut step = fourier(&f.step, sign)?;
    let mut tails = Vec::new();
    for t in &f.tails {
        let ((level, c), tail) = transform_tail(field, t);
        step = step.add(&StepFunction::ball(field, level).scale(&c))?;
        tails.push(tail);
    }
    Ok(ShellFunction::new(step, tails))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonCheck {
    pub lhs: CycScalar,
    pub rhs: CycScalar,
    pub equal: bool,
}

/// ∫_𝔬 f(x+t)dx against q^{−δ/2}∫_{𝔡^{−1}} f̂(y)ζ^{−tr(ty)}dy.
pub fn poisson_check(f: &StepFunction, t: &KElement) -> Result<PoissonCheck> {
    let field = f.field();
    let delta = field.delta();
    let lhs = haar_integral(&f.translate(&-t)?.mul(&StepFunction::ball(field, 0))?);
    let fhat = fourier(f, Sign::Zeta)?;
    let chi = character_step(field, t, -delta, Sign::ZetaInv)?;
    let rhs = &haar_integral(&fhat.mul(&chi)?) * &CycScalar::sqrtq_pow(field.cyc(), -delta);
    let equal = lhs == rhs;
    Ok(PoissonCheck { lhs, rhs, equal })
}

/// Ψ(f,g)(y) = ∫ f(x)ĝ(xy)dx.
pub fn psi(f: &StepFunction, g: &StepFunction, y: &KElement) -> Result<CycScalar> {
    if y.is_zero() {
        return Err(Error::ZeroDilation);
    }
    let ghat = fourier(g, Sign::Zeta)?;
    Ok(haar_integral(&f.mul(&ghat.dilate(y)?)?))
}

/// ⟨f, g⟩ = ∫ f ĝ dx.
pub fn cartier_pair(f: &StepFunction, g: &StepFunction) -> Result<CycScalar> {
    psi(f, g, &f.field().one())
}

/// Exact Riemann–Lebesgue data for a step function's transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannLebesgue {
    /// f̂ vanishes at every y with ord(y) below this bound (`None` when f̂ = 0).
    pub support_bound: Option<i64>,
    /// ∫ f dx = 0.
    pub integral_zero: bool,
    /// Some m with f̂ ≡ 0 on 𝔩^m𝔡^{−1}, when ∫ f = 0.
    pub vanishing_witness: Option<i64>,
}

pub fn riemann_lebesgue(f: &StepFunction) -> Result<RiemannLebesgue> {
    let field = f.field();
    let delta = field.delta();
    let fhat = fourier(f, Sign::Zeta)?;
    // a priori bound from the supports 𝔩^{−N−δ} of the basic transforms
    let support_bound = f.terms().iter().map(|(c, _)| -c.level - delta).min();
    if let (Some(b), Some(actual)) = (support_bound, fhat.support_min_valuation()) {
        debug_assert!(actual >= b);
    }
    let integral_zero = haar_integral(f).is_zero();
    let vanishing_witness = if !integral_zero {
        None
    } else if fhat.is_zero() {
        Some(0)
    } else {
        // no term contains 0, so each term lies in a single valuation shell
        let top = fhat
            .terms()
            .iter()
            .map(|(c, _)| c.rep_valuation().expect("f̂(0) = ∫f = 0"))
            .max()
            .unwrap();
        Some(top + 1 + delta)
    };
    Ok(RiemannLebesgue {
        support_bound,
        integral_zero,
        vanishing_witness,
    })
}

/// χ_Harr(λ) = q^{−ord λ}.
pub fn harr(field: &LocalField, lambda: &KElement) -> Result<Rational> {
    let m = lambda.valuation().ok_or(Error::ZeroArgument)?;
    Ok(crate::arith::rat_pow(&int(field.q() as i64), -m))
}
