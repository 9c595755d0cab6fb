//! Zeta integrals Z(f, χ) = ∫ f χ dx as rational functions of λ = χ(π),
//! Schwartz classes, the example families, Gauss sums and ρ-factors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::arith::{int, v_rat, Rational};
use crate::characters::{Character, LambdaParam, UnitGroup};
use crate::error::{Error, Result};
use crate::fourier::{character_step, coset_measure, fourier, fourier_shell, haar_integral, shell_measure, Sign};
use crate::localfield::LocalField;
use crate::scalars::{CycScalar, LaurentPoly, RationalFunc};
use crate::stepfun::{g_alpha, g_beta_up, Direction, ShellFunction, StepFunction};

/// An exponent that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    NegInf,
    Fin(i64),
    PosInf,
}

impl Ext {
    pub fn neg(self) -> Ext {
        match self {
            Ext::NegInf => Ext::PosInf,
            Ext::Fin(x) => Ext::Fin(-x),
            Ext::PosInf => Ext::NegInf,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::Fin(x) => write!(f, "{x}"),
            Ext::PosInf => write!(f, "inf"),
        }
    }
}

/// A range of exponents t, standing for the moduli / absolute values p^t.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Ext,
    pub hi: Ext,
    pub lo_open: bool,
    pub hi_open: bool,
}

/// Schwartz classes c = p^t of a function, for t in the interval.
pub type SchwartzInterval = Interval;

impl Interval {
    pub fn everything() -> Self {
        Interval {
            lo: Ext::NegInf,
            hi: Ext::PosInf,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn open(lo: Ext, hi: Ext) -> Self {
        Interval {
            lo,
            hi,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn contains(&self, t: i64) -> bool {
        let t = Ext::Fin(t);
        let above = if self.lo_open { t > self.lo } else { t >= self.lo };
        let below = if self.hi_open { t < self.hi } else { t <= self.hi };
        above && below
    }

    pub fn intersect(&self, o: &Self) -> Self {
        let (lo, lo_open) = match self.lo.cmp(&o.lo) {
            std::cmp::Ordering::Greater => (self.lo, self.lo_open),
            std::cmp::Ordering::Less => (o.lo, o.lo_open),
            std::cmp::Ordering::Equal => (self.lo, self.lo_open || o.lo_open),
        };
        let (hi, hi_open) = match self.hi.cmp(&o.hi) {
            std::cmp::Ordering::Less => (self.hi, self.hi_open),
            std::cmp::Ordering::Greater => (o.hi, o.hi_open),
            std::cmp::Ordering::Equal => (self.hi, self.hi_open || o.hi_open),
        };
        Interval {
            lo,
            hi,
            lo_open,
            hi_open,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { "(" } else { "[" },
            self.lo,
            self.hi,
            if self.hi_open { ")" } else { "]" }
        )
    }
}

/// A zeta integral: a rational function of λ and the annulus of |λ|_p
/// (as exponents of p) on which its defining series converges.
#[derive(Clone, Debug)]
pub struct ZetaValue {
    pub value: RationalFunc,
    pub annulus: Interval,
}

impl ZetaValue {
    pub fn polynomial(p: LaurentPoly) -> Self {
        ZetaValue {
            value: RationalFunc::from_poly(p),
            annulus: Interval::everything(),
        }
    }
}

/// Schwartz classes from the shell data: toward-infinity tails bound c from
/// below by |ρ|_p, toward-zero tails from above by |ρ|_p^{−1}, and a nonzero
/// value at 0 keeps c below 1.
pub fn schwartz_interval(f: &ShellFunction) -> Result<SchwartzInterval> {
    let p = f.field().params().p;
    let f = f.simplified()?;
    let mut lo = Ext::NegInf;
    let mut hi = Ext::PosInf;
    for t in &f.tails {
        let v = v_rat(&t.ratio, p).expect("nonzero ratio");
        match t.direction {
            Direction::TowardInfinity => lo = lo.max(Ext::Fin(-v)),
            Direction::TowardZero => hi = hi.min(Ext::Fin(v)),
        }
    }
    if !f.step.value_at_zero().is_zero() {
        hi = hi.min(Ext::Fin(0));
    }
    Ok(Interval::open(lo, hi))
}

/// ∫_{π^m𝔬^×} f·χ̃ dx for every shell m meeting the support.
pub fn shell_integrals(f: &StepFunction, chi: &Character) -> Result<BTreeMap<i64, CycScalar>> {
    let field = f.field();
    let n = chi.level();
    let mut out: BTreeMap<i64, CycScalar> = BTreeMap::new();
    for (c, coeff) in f.terms() {
        let v = c.rep_valuation().ok_or(Error::SupportContainsZero)?;
        // c = a(1 + π^j𝔬); χ̃ has minimal level n, so it averages to 0 when j < n
        if c.level - v < n {
            continue;
        }
        let u = c.rep(field).shift(-v);
        let val = chi.unit_value(&u)?;
        let contrib = &(coeff * &coset_measure(field, c.level)) * &val;
        let slot = out.entry(v).or_insert_with(|| CycScalar::zero(field.cyc()));
        *slot += &contrib;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Z(f, χ) for a step function supported in K^×: Σ_m χ(π)^m ∫_{π^m𝔬^×} fχ̃.
pub fn zeta_integral(f: &StepFunction, chi: &Character) -> Result<ZetaValue> {
    if !f.value_at_zero().is_zero() {
        return Err(Error::SupportContainsZero);
    }
    let field = f.field();
    let mut acc = LaurentPoly::zero(field.cyc());
    for (m, s) in shell_integrals(f, chi)? {
        acc = acc.add(&chi.lambda.power(field, m)?.scale(&s));
    }
    Ok(ZetaValue::polynomial(acc))
}

fn tail_sum(
    field: &LocalField,
    chi: &Character,
    num: LaurentPoly,
    ratio: Rational,
    x_power: i64,
) -> Result<RationalFunc> {
    let x = chi.lambda.power(field, x_power)?;
    let den = LaurentPoly::one(field.cyc()).sub(&x.scale(&CycScalar::from_rational(field.cyc(), ratio)));
    RationalFunc::new(num, den).map_err(|e| match e {
        Error::DivisionByZeroPoly => Error::PoleAtPoint,
        e => e,
    })
}

/// Z(F, χ) for a shell function; each tail sums to a geometric closed form.
pub fn zeta_shell(f: &ShellFunction, chi: &Character) -> Result<ZetaValue> {
    let field = f.field();
    let q = int(field.q() as i64);
    let interval = schwartz_interval(f)?;
    let mut acc = RationalFunc::from_poly(zeta_integral(&f.step, chi)?.value.as_laurent().unwrap());
    if chi.is_unramified() {
        for t in &f.tails {
            let term = match t.direction {
                Direction::TowardZero => {
                    let num = chi
                        .lambda
                        .power(field, t.start)?
                        .scale(&(&t.coeff * &shell_measure(field, t.start)));
                    tail_sum(field, chi, num, &t.ratio / &q, 1)?
                }
                Direction::TowardInfinity => {
                    let num = chi
                        .lambda
                        .power(field, -t.start)?
                        .scale(&(&t.coeff * &shell_measure(field, -t.start)));
                    tail_sum(field, chi, num, &t.ratio * &q, -1)?
                }
            };
            acc = acc.add(&term);
        }
    }
    Ok(ZetaValue {
        value: acc,
        annulus: lambda_annulus(&chi.lambda, interval),
    })
}

/// Moduli of χ(π) translated to |λ|_p (χ(π) = s·λ^{±1} with s a p-unit).
fn lambda_annulus(lambda: &LambdaParam, moduli: Interval) -> Interval {
    match lambda {
        LambdaParam::Formal { power, .. } if *power < 0 => Interval {
            lo: moduli.hi.neg(),
            hi: moduli.lo.neg(),
            lo_open: moduli.hi_open,
            hi_open: moduli.lo_open,
        },
        _ => moduli,
    }
}

/// G_α^β = g_α − q^{−1−δ}(1−βq)/(1−α/q)·g^β.
#[allow(non_snake_case)]
pub fn G_alpha_beta(field: &Arc<LocalField>, alpha: &Rational, beta: &Rational) -> Result<ShellFunction> {
    let q = int(field.q() as i64);
    let one = int(1);
    let c = crate::arith::rat_pow(&q, -1 - field.delta()) * (&one - beta * &q) / (&one - alpha / &q);
    let gb = g_beta_up(field, beta)?.scale(&CycScalar::from_rational(field.cyc(), -c));
    g_alpha(field, alpha)?.add(&gb)
}

/// G[α] = G_{αq}^{α/q}.
#[allow(non_snake_case)]
pub fn G_bracket(field: &Arc<LocalField>, alpha: &Rational) -> Result<ShellFunction> {
    let q = int(field.q() as i64);
    G_alpha_beta(field, &(alpha * &q), &(alpha / &q))
}

/// h_n (with h_0 = h_1).
pub fn h_n(field: &Arc<LocalField>, n: i64) -> Result<StepFunction> {
    if n < 0 {
        return Err(Error::BadParameter(format!("h_n needs n >= 0, got {n}")));
    }
    let third = CycScalar::from_rational(field.cyc(), int(-1) / int(field.q() as i64));
    let one = CycScalar::one(field.cyc());
    let terms = if n <= 1 {
        let mut t: Vec<_> = StepFunction::shell(field, 0)
            .terms()
            .iter()
            .map(|(c, _)| (c.clone(), third.clone()))
            .collect();
        t.push((field.one().reduce(1), one.clone()));
        t.push((field.pi_pow(1).reduce(2), -one));
        t
    } else {
        vec![(field.one().reduce(n), one), (field.one().reduce(n - 1), third)]
    };
    StepFunction::from_terms(field, terms)
}

/// The closed form of ĥ_n.
pub fn h_n_hat(field: &Arc<LocalField>, n: i64) -> Result<StepFunction> {
    if n < 0 {
        return Err(Error::BadParameter(format!("h_n needs n >= 0, got {n}")));
    }
    let d = field.delta();
    let piece = |level: i64, h: &crate::localfield::KElement| -> Result<StepFunction> {
        character_step(field, h, level, Sign::Zeta)?.mul(&StepFunction::shell(field, level))
    };
    if n <= 1 {
        let a = piece(-d - 1, &field.one())?;
        let b = piece(-d - 2, &field.pi_pow(1))?.scale_rational(&(int(-1) / int(field.q() as i64)));
        Ok(a.add(&b)?.scale(&CycScalar::sqrtq_pow(field.cyc(), -d - 2)))
    } else {
        Ok(piece(-d - n, &field.one())?.scale(&CycScalar::sqrtq_pow(field.cyc(), -d - 2 * n)))
    }
}

/// Σ_{a ∈ (𝔬/π^n)^×} ζ^{tr(a/π^{δ+n})}χ̃(a), for χ̃ of level at most n.
pub fn gauss_sum_at_level(chi: &Character, n: i64) -> Result<CycScalar> {
    let field = chi.field();
    if chi.level() > n {
        return Err(Error::BadParameter(format!(
            "character level {} exceeds {n}",
            chi.level()
        )));
    }
    let group = UnitGroup::new(field, n)?;
    let m = field.params().conductor as i64;
    let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
    for c in group.elements() {
        let a = c.rep(field);
        let k = field.add_char_exp(&a.shift(-field.delta() - n))? + chi.unit_exp(&a)?;
        *counts.entry(k.rem_euclid(m)).or_default() += 1;
    }
    let mut acc = CycScalar::zero(field.cyc());
    for (k, c) in counts {
        acc += &CycScalar::root(field.cyc(), k).scale(&int(c));
    }
    Ok(acc)
}

/// G(χ̃) at the character's own level.
pub fn gauss_sum(chi: &Character) -> Result<CycScalar> {
    if chi.is_unramified() {
        return Err(Error::UnramifiedCharacter);
    }
    gauss_sum_at_level(chi, chi.level())
}

/// The closed-form ρ(χ̃χ_λ).
pub fn rho_closed(chi: &Character) -> Result<ZetaValue> {
    let field = chi.field();
    let d = field.delta();
    let cyc = field.cyc();
    let n = chi.level();
    let lam = &chi.lambda;
    let value = if n == 0 {
        let one = LaurentPoly::one(cyc);
        let num = one
            .sub(&lam.power(field, -1)?)
            .mul(&lam.power(field, -d)?)
            .scale(&CycScalar::sqrtq_pow(cyc, d));
        let den = one.sub(
            &lam.power(field, 1)?
                .scale(&CycScalar::from_rational(cyc, int(1) / int(field.q() as i64))),
        );
        RationalFunc::new(num, den)?
    } else {
        let g = gauss_sum(&chi.unit_inverse())?;
        let c = &CycScalar::sqrtq_pow(cyc, d + 2 * n) * &g.inv()?;
        RationalFunc::from_poly(lam.power(field, -d - n)?.scale(&c))
    };
    Ok(ZetaValue {
        value,
        annulus: Interval::everything(),
    })
}

/// ρ(χ) = Z(h_n, χ) / Z(ĥ_n, χ*) with ĥ_n from the transform itself.
pub fn rho_from_h(chi: &Character) -> Result<ZetaValue> {
    let field = chi.field();
    let h = h_n(field, chi.level())?;
    let hhat = fourier(&h, Sign::Zeta)?;
    let z = zeta_integral(&h, chi)?.value;
    let zhat = zeta_integral(&hhat, &chi.dual()?)?.value;
    Ok(ZetaValue {
        value: z.div(&zhat)?,
        annulus: Interval::everything(),
    })
}

/// Z(f,χ)·Z(ĝ,χ*) = Z(f̂,χ*)·Z(g,χ) for admissible step functions.
pub fn verify_fe(f: &StepFunction, g: &StepFunction, chi: &Character) -> Result<bool> {
    for (name, h) in [("f", f), ("g", g)] {
        if !h.value_at_zero().is_zero() {
            return Err(Error::PreconditionViolated(format!("{name}(0) != 0")));
        }
        if !haar_integral(h).is_zero() {
            return Err(Error::PreconditionViolated(format!("integral of {name} is nonzero")));
        }
    }
    let dual = chi.dual()?;
    let fhat = fourier(f, Sign::Zeta)?;
    let ghat = fourier(g, Sign::Zeta)?;
    let lhs = zeta_integral(f, chi)?.value.mul(&zeta_integral(&ghat, &dual)?.value);
    let rhs = zeta_integral(&fhat, &dual)?.value.mul(&zeta_integral(g, chi)?.value);
    Ok(lhs.equals(&rhs))
}

/// ρ(χ)·Z(f̂, χ*) with the annulus it is valid on and the ρ zeros/poles.
#[derive(Clone, Debug)]
pub struct Continuation {
    pub value: ZetaValue,
    pub rho: ZetaValue,
    pub rho_zeros: Vec<Rational>,
    pub rho_poles: Vec<Rational>,
}

pub fn continue_zeta(f: &ShellFunction, chi: &Character) -> Result<Continuation> {
    let fhat = fourier_shell(f, Sign::Zeta)?;
    let both = schwartz_interval(f)?.intersect(&schwartz_interval(&fhat)?);
    if !both.contains(0) {
        return Err(Error::NotSchwartz);
    }
    // f, f̂ of class c for every c ∈ [1, p^hi); continuation to [c^{−1}, c]
    let annulus = Interval {
        lo: both.hi.neg(),
        hi: both.hi,
        lo_open: both.hi_open,
        hi_open: both.hi_open,
    };
    let rho = rho_closed(chi)?;
    let zhat = zeta_shell(&fhat, &chi.dual()?)?;
    let (zeros, poles) = rho
        .value
        .rational_zeros_poles()
        .ok_or_else(|| Error::BadParameter("ρ has non-rational coefficients".into()))?;
    Ok(Continuation {
        value: ZetaValue {
            value: rho.value.mul(&zhat.value),
            annulus,
        },
        rho,
        rho_zeros: zeros.into_iter().map(|(r, _)| r).collect(),
        rho_poles: poles.into_iter().map(|(r, _)| r).collect(),
    })
}
