//! Laurent polynomials and rational functions in λ over [`CycScalar`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cyc::{CycField, CycScalar};
use crate::arith::Rational;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct LaurentPoly {
    field: Arc<CycField>,
    terms: BTreeMap<i64, CycScalar>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}
impl Eq for LaurentPoly {}

impl LaurentPoly {
    pub fn zero(field: &Arc<CycField>) -> Self {
        LaurentPoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Arc<CycField>) -> Self {
        Self::monomial(CycScalar::one(field), 0)
    }

    pub fn constant(c: CycScalar) -> Self {
        Self::monomial(c, 0)
    }

    /// c·λ^n.
    pub fn monomial(c: CycScalar, n: i64) -> Self {
        let mut p = Self::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(n, c);
        }
        p
    }

    /// Σ coeffs[i]·λ^{start+i} with rational coefficients.
    pub fn from_rationals(field: &Arc<CycField>, start: i64, coeffs: &[Rational]) -> Self {
        let mut p = Self::zero(field);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(start + i as i64, &CycScalar::from_rational(field, c.clone()));
        }
        p
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycScalar)> {
        self.terms.iter().map(|(&n, c)| (n, c))
    }

    pub fn coeff(&self, n: i64) -> CycScalar {
        self.terms
            .get(&n)
            .cloned()
            .unwrap_or_else(|| CycScalar::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, n: i64, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&n) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&n);
        } else {
            self.terms.insert(n, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in o.terms() {
            out.add_term(n, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(&n, c)| (n, -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(&self.field);
        for (n, c) in self.terms() {
            for (m, d) in o.terms() {
                out.add_term(n + m, &(c * d));
            }
        }
        out
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        let mut out = Self::zero(&self.field);
        for (n, c) in self.terms() {
            out.add_term(n, &(c * s));
        }
        out
    }

    /// Multiplication by λ^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(&n, c)| (n + k, c.clone())).collect(),
        }
    }

    pub fn eval(&self, x: &CycScalar) -> Result<CycScalar> {
        let mut acc = CycScalar::zero(&self.field);
        if self.is_zero() {
            return Ok(acc);
        }
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        // Horner on the polynomial part, then multiply by x^lo
        for n in (lo..=hi).rev() {
            acc = &acc * x;
            if let Some(c) = self.terms.get(&n) {
                acc = &acc + c;
            }
        }
        Ok(&acc * &x.pow(lo)?)
    }

    /// P(s·λ^k): substitute a monomial for the variable.
    pub fn substitute(&self, s: &CycScalar, k: i64) -> Result<Self> {
        let mut out = Self::zero(&self.field);
        for (n, c) in self.terms() {
            out.add_term(n * k, &(c * &s.pow(n)?));
        }
        Ok(out)
    }

    /// Rational roots in Q^× with multiplicity, when the polynomial is a
    /// scalar multiple of one with rational coefficients.
    pub fn rational_roots(&self) -> Option<Vec<(Rational, usize)>> {
        let lo = self.min_exp()?;
        let lead = self.terms.values().next().unwrap().inv().ok()?;
        let mut coeffs: Vec<Rational> = Vec::new();
        let hi = self.max_exp().unwrap();
        for n in lo..=hi {
            let c = &self.coeff(n) * &lead;
            coeffs.push(c.as_rational()?);
        }
        Some(rational_roots(&coeffs))
    }
}

/// Rational roots (with multiplicity) of Σ c_i x^i, c_0 ≠ 0.
fn rational_roots(coeffs: &[Rational]) -> Vec<(Rational, usize)> {
    let mut den_lcm = BigInt::one();
    for c in coeffs {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(den_lcm.clone())).to_integer())
        .collect();
    let mut out = Vec::new();
    if ints.len() <= 1 {
        return out;
    }
    let cands = {
        let a0 = divisors(&ints[0].abs());
        let an = divisors(&ints.last().unwrap().abs());
        let mut v = Vec::new();
        for p in &a0 {
            for q in &an {
                let r = Rational::new(p.clone(), q.clone());
                v.push(r.clone());
                v.push(-r);
            }
        }
        v.sort();
        v.dedup();
        v
    };
    for r in cands {
        let mut mult = 0;
        loop {
            if ints.len() <= 1 {
                break;
            }
            // synthetic division by (x − r) on the rational coefficients
            let rc: Vec<Rational> = ints.iter().map(|c| Rational::from_integer(c.clone())).collect();
            let n = rc.len() - 1;
            let mut quo = vec![Rational::zero(); n];
            let mut carry = Rational::zero();
            for i in (0..=n).rev() {
                let v = &rc[i] + &carry * &r;
                if i == 0 {
                    carry = v;
                } else {
                    quo[i - 1] = v.clone();
                    carry = v;
                }
            }
            if !carry.is_zero() {
                break;
            }
            mult += 1;
            let mut l = BigInt::one();
            for c in &quo {
                l = l.lcm(c.denom());
            }
            ints = quo
                .iter()
                .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
                .collect();
        }
        if mult > 0 {
            out.push((r, mult));
        }
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let o = n / &d;
            if o != d {
                out.push(o);
            }
        }
        d += 1;
    }
    out
}

/// Writes `c·λ^n` terms with readable signs: "1 - 1/3*λ", "(1/3 + z)*λ^-2".
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // constant and positive powers ascending, then λ^-1, λ^-2, …
        let order = self
            .terms
            .range(0..)
            .chain(self.terms.range(..0).rev())
            .map(|(&n, c)| (n, c));
        for (n, c) in order {
            let mono = match n {
                0 => String::new(),
                1 => "λ".to_string(),
                _ => format!("λ^{n}"),
            };
            let (neg, mag) = match c.as_rational() {
                Some(r) if r.is_negative() => (true, CycScalar::from_rational(c.field(), -r)),
                _ => (false, c.clone()),
            };
            let cs = mag.to_string();
            let body = if mono.is_empty() {
                cs
            } else if mag.is_one() {
                mono
            } else if cs.contains(' ') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// num/den, kept in the normalized shape: den has lowest exponent 0 and, when
/// invertible, lowest coefficient 1.
#[derive(Clone)]
pub struct RationalFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let mut r = RationalFunc { num, den };
        r.normalize();
        Ok(r)
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let one = LaurentPoly::one(p.field());
        RationalFunc { num: p, den: one }
    }

    pub fn zero(field: &Arc<CycField>) -> Self {
        Self::from_poly(LaurentPoly::zero(field))
    }

    pub fn constant(c: CycScalar) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentPoly::one(self.num.field());
            return;
        }
        let lo = self.den.min_exp().unwrap();
        if lo != 0 {
            self.num = self.num.shift(-lo);
            self.den = self.den.shift(-lo);
        }
        if let Ok(inv) = self.den.coeff(0).inv() {
            if !inv.is_one() {
                self.num = self.num.scale(&inv);
                self.den = self.den.scale(&inv);
            }
        }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn field(&self) -> &Arc<CycField> {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The Laurent polynomial, when the denominator is a unit monomial.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        if self.den.terms.len() == 1 {
            let (n, c) = self.den.terms().next().unwrap();
            let inv = c.inv().ok()?;
            return Some(self.num.scale(&inv).shift(-n));
        }
        None
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(num, self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> Self {
        RationalFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        Self::new(self.num.scale(s), self.den.clone()).unwrap()
    }

    /// Equality of the represented functions, by cross-multiplication.
    pub fn equals(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    pub fn instantiate(&self, x: &CycScalar) -> Result<CycScalar> {
        if x.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(&self.num.eval(x)? * &d.inv()?)
    }

    /// P(s·λ^k) / Q(s·λ^k).
    pub fn substitute(&self, s: &CycScalar, k: i64) -> Result<Self> {
        Self::new(self.num.substitute(s, k)?, self.den.substitute(s, k)?)
    }

    /// Rational zeros and poles in Q^× (with multiplicity, after cancelling
    /// common roots), when the coefficients allow them to be read off.
    pub fn rational_zeros_poles(&self) -> Option<(Vec<(Rational, usize)>, Vec<(Rational, usize)>)> {
        if self.num.is_zero() {
            return None;
        }
        let zs = self.num.rational_roots()?;
        let ps = self.den.rational_roots()?;
        let mult = |v: &[(Rational, usize)], r: &Rational| v.iter().find(|(x, _)| x == r).map(|(_, m)| *m).unwrap_or(0);
        let zeros = zs
            .iter()
            .filter_map(|(r, m)| {
                let k = m.saturating_sub(mult(&ps, r));
                (k > 0).then(|| (r.clone(), k))
            })
            .collect();
        let poles = ps
            .iter()
            .filter_map(|(r, m)| {
                let k = m.saturating_sub(mult(&zs, r));
                (k > 0).then(|| (r.clone(), k))
            })
            .collect();
        Some((zeros, poles))
    }
}

impl PartialEq for RationalFunc {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &LaurentPoly| {
            if p.terms.len() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den == LaurentPoly::one(self.den.field()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Debug for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunc({self})")
    }
}

/// λ as a Laurent polynomial.
pub fn lambda(field: &Arc<CycField>) -> LaurentPoly {
    LaurentPoly::monomial(CycScalar::one(field), 1)
}

/// The binomial a + b·λ^n with rational coefficients.
pub fn binomial(field: &Arc<CycField>, a: Rational, b: Rational, n: i64) -> LaurentPoly {
    let mut p = LaurentPoly::zero(field);
    p.add_term(0, &CycScalar::from_rational(field, a));
    p.add_term(n, &CycScalar::from_rational(field, b));
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn rational_scalar(field: &Arc<CycField>, n: i64) -> CycScalar {
        CycScalar::from_rational(field, int(n))
    }

    fn k() -> Arc<CycField> {
        CycField::new(6, 3).unwrap()
    }

    #[test]
    fn monomials() {
        let f = k();
        let l = lambda(&f);
        assert_eq!(l.mul(&l.shift(-2)), LaurentPoly::one(&f));
        let c = CycScalar::root(&f, 1);
        let a = LaurentPoly::monomial(c.clone(), 2).mul(&LaurentPoly::monomial(c.clone(), -5));
        assert_eq!(a, LaurentPoly::monomial(&c * &c, -3));
    }

    #[test]
    fn cross_multiplied_equality() {
        let f = k();
        let lhs = RationalFunc::new(binomial(&f, int(1), int(-1), 2), binomial(&f, int(1), int(-1), 1)).unwrap();
        let rhs = RationalFunc::from_poly(binomial(&f, int(1), int(1), 1));
        assert_eq!(lhs, rhs);
        assert_ne!(lhs, RationalFunc::from_poly(binomial(&f, int(1), int(2), 1)));
    }

    #[test]
    fn instantiate_rho_shape() {
        // (1 − 1/λ)/(1 − λ/3)
        let f = k();
        let r = RationalFunc::new(binomial(&f, int(1), int(-1), -1), binomial(&f, int(1), rat(-1, 3), 1)).unwrap();
        assert_eq!(r.instantiate(&rational_scalar(&f, 3)), Err(Error::PoleAtPoint));
        assert!(r.instantiate(&rational_scalar(&f, 1)).unwrap().is_zero());
        let (zeros, poles) = r.rational_zeros_poles().unwrap();
        assert_eq!(zeros, vec![(int(1), 1)]);
        assert_eq!(poles, vec![(int(3), 1)]);
        assert_eq!(r.to_string(), "(1 - λ^-1)/(1 - 1/3*λ)");
    }

    #[test]
    fn lambda_power_at_q() {
        // λ^{-1} at λ = 3 is 1/3
        let f = k();
        let p = LaurentPoly::monomial(CycScalar::one(&f), -1);
        assert_eq!(
            p.eval(&rational_scalar(&f, 3)).unwrap(),
            CycScalar::from_rational(&f, rat(1, 3))
        );
    }

    #[test]
    fn division_by_zero() {
        let f = k();
        assert_eq!(
            RationalFunc::new(lambda(&f), LaurentPoly::zero(&f)).err(),
            Some(Error::DivisionByZeroPoly)
        );
    }
}
