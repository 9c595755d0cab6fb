//! The local field K = Q_ℓ(π), π^e = ℓ with gcd(e, ℓ) = 1.
//!
//! Elements are stored as rational coordinates in the basis 1, π, …, π^{e−1};
//! finite π-adic digit expansions (the form used for coset representatives and
//! for JSON) are produced on demand.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{gcd_u64, int, is_prime, rat_pow, residue_u64, v_rat, Rational};
use crate::error::{Error, Result};
use crate::scalars::{CycField, CycScalar};

/// Enumeration cap for coset lists and refinements.
pub const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFieldParams {
    pub ell: u64,
    pub e: u32,
    pub p: u64,
    pub n_root: u32,
    pub conductor: u64,
    /// The additive character uses ζ^t in place of ζ; 1 by default.
    pub zeta_twist: u64,
    pub enum_cap: u64,
}

impl LocalFieldParams {
    /// Parameters with the default conductor ℓ^{n_root}·(ℓ−1).
    pub fn new(ell: u64, e: u32, p: u64, n_root: u32) -> Result<Self> {
        let conductor = ell
            .checked_pow(n_root)
            .and_then(|x| x.checked_mul(ell.saturating_sub(1).max(1)))
            .ok_or_else(|| Error::InvalidParams("conductor overflows".into()))?;
        let params = LocalFieldParams {
            ell,
            e,
            p,
            n_root,
            conductor,
            zeta_twist: 1,
            enum_cap: DEFAULT_CAP,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_conductor(mut self, m: u64) -> Result<Self> {
        self.conductor = m;
        self.validate()?;
        Ok(self)
    }

    pub fn with_twist(mut self, t: u64) -> Result<Self> {
        self.zeta_twist = t;
        self.validate()?;
        Ok(self)
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.enum_cap = cap;
        self
    }

    pub fn q(&self) -> u64 {
        self.ell
    }

    pub fn delta(&self) -> i64 {
        self.e as i64 - 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if !is_prime(self.ell) || self.ell > 251 {
            return bad(format!("ell = {} must be a prime below 256", self.ell));
        }
        if !is_prime(self.p) || self.p == self.ell {
            return bad(format!("p = {} must be a prime different from ell", self.p));
        }
        if self.e == 0 || gcd_u64(self.e as u64, self.ell) != 1 {
            return bad(format!("e = {} must be positive and prime to ell", self.e));
        }
        let lpow = self.ell.checked_pow(self.n_root).unwrap_or(0);
        if lpow == 0 || !self.conductor.is_multiple_of(lpow) || !self.conductor.is_multiple_of((self.ell - 1).max(1)) {
            return bad(format!(
                "conductor {} must be divisible by ell^{} and ell-1",
                self.conductor, self.n_root
            ));
        }
        if self.conductor.is_multiple_of(self.p) {
            return bad("conductor must be prime to p".into());
        }
        if self.zeta_twist == 0 || self.zeta_twist.is_multiple_of(self.ell) {
            return bad("zeta twist must be prime to ell".into());
        }
        Ok(())
    }
}

/// The three configurations every suite runs over: δ = 0, δ odd, δ even with ℓ = 2.
pub fn reference_configs() -> Vec<LocalFieldParams> {
    [(3, 1), (3, 2), (2, 3)]
        .into_iter()
        .map(|(ell, e)| LocalFieldParams::new(ell, e, 5, 4).expect("reference config"))
        .collect()
}

/// Session context: field parameters plus the scalar ring they induce.
#[derive(Debug)]
pub struct LocalField {
    params: LocalFieldParams,
    cyc: Arc<CycField>,
}

impl LocalField {
    pub fn new(params: LocalFieldParams) -> Result<Arc<LocalField>> {
        params.validate()?;
        let cyc = CycField::new(params.conductor, params.q())?;
        Ok(Arc::new(LocalField { params, cyc }))
    }

    pub fn params(&self) -> &LocalFieldParams {
        &self.params
    }

    pub fn cyc(&self) -> &Arc<CycField> {
        &self.cyc
    }

    pub fn ell(&self) -> u64 {
        self.params.ell
    }

    pub fn e(&self) -> u32 {
        self.params.e
    }

    pub fn q(&self) -> u64 {
        self.params.q()
    }

    pub fn delta(&self) -> i64 {
        self.params.delta()
    }

    pub fn zero(&self) -> KElement {
        KElement::zero(self.ell(), self.e())
    }

    pub fn one(&self) -> KElement {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, r: Rational) -> KElement {
        let mut x = self.zero();
        x.coords[0] = r;
        x
    }

    pub fn from_int(&self, n: i64) -> KElement {
        self.from_rational(int(n))
    }

    /// π^j for any integer j.
    pub fn pi_pow(&self, j: i64) -> KElement {
        let e = self.e() as i64;
        let mut x = self.zero();
        x.coords[j.rem_euclid(e) as usize] = rat_pow(&int(self.ell() as i64), j.div_euclid(e));
        x
    }

    /// Σ c_j π^j from explicit (j, c_j) pairs; digits must lie in 0..ℓ.
    pub fn from_digits(&self, digits: &[(i64, u64)]) -> Result<KElement> {
        let mut x = self.zero();
        for &(j, c) in digits {
            if c >= self.ell() {
                return Err(Error::Parse(format!("digit {c} out of range at position {j}")));
            }
            if c != 0 {
                x = &x + &self.pi_pow(j).scale(&int(c as i64));
            }
        }
        Ok(x)
    }

    pub fn check_size(&self, size: u128) -> Result<()> {
        if size > self.params.enum_cap as u128 {
            return Err(Error::SizeOverflow {
                size,
                cap: self.params.enum_cap,
            });
        }
        Ok(())
    }

    /// Exponent k with ζ^{tr(x)} = ζ_M^k.
    pub fn add_char_exp(&self, x: &KElement) -> Result<i64> {
        self.rational_char_exp(&x.trace())
    }

    /// Exponent k with ζ^r = ζ_M^k, for r ∈ Q.
    pub fn rational_char_exp(&self, r: &Rational) -> Result<i64> {
        let ell = self.ell();
        let v = match v_rat(r, ell) {
            None => return Ok(0),
            Some(v) if v >= 0 => return Ok(0),
            Some(v) => v,
        };
        let t = (-v) as u32;
        if t > self.params.n_root {
            return Err(Error::ConductorTooSmall {
                needed: t,
                available: self.params.n_root,
            });
        }
        let lt = ell.pow(t);
        let u = residue_u64(&(r * Rational::from_integer(BigInt::from(lt))), lt)?;
        let m = self.params.conductor;
        let k = (u as u128 * (m / lt) as u128 * self.params.zeta_twist as u128) % m as u128;
        Ok(k as i64)
    }

    /// ζ^{tr(x)} as a root of unity in Q(ζ_M).
    pub fn add_char(&self, x: &KElement) -> Result<CycScalar> {
        Ok(CycScalar::root(&self.cyc, self.add_char_exp(x)?))
    }

    /// Representatives Σ_{j=−r}^{N−1} c_j π^j of 𝔩^{−r}/𝔩^N.
    pub fn enumerate_cosets(&self, r: i64, n: i64) -> Result<Vec<Coset>> {
        if n < -r {
            return Ok(vec![]);
        }
        Coset::zero(-r).subcosets(self, n)
    }
}

/// An element Σ_{i<e} r_i π^i of K.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KElement {
    ell: u64,
    e: u32,
    coords: Vec<Rational>,
}

impl KElement {
    pub fn zero(ell: u64, e: u32) -> Self {
        KElement {
            ell,
            e,
            coords: vec![Rational::zero(); e as usize],
        }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn from_coords(ell: u64, e: u32, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != e as usize {
            return Err(Error::Parse(format!("expected {e} coordinates")));
        }
        Ok(KElement { ell, e, coords })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// ord_π; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        let e = self.e as i64;
        self.coords
            .iter()
            .enumerate()
            .filter_map(|(i, r)| v_rat(r, self.ell).map(|v| e * v + i as i64))
            .min()
    }

    /// tr_{K/Q_ℓ}: only the π^0 coordinate survives, with multiplicity e.
    pub fn trace(&self) -> Rational {
        &self.coords[0] * int(self.e as i64)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        KElement {
            ell: self.ell,
            e: self.e,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplication by π^j.
    pub fn shift(&self, j: i64) -> Self {
        let e = self.e as i64;
        let ell = int(self.ell as i64);
        let mut out = KElement::zero(self.ell, self.e);
        for (i, c) in self.coords.iter().enumerate() {
            let k = i as i64 + j;
            out.coords[k.rem_euclid(e) as usize] = c * rat_pow(&ell, k.div_euclid(e));
        }
        out
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let e = self.e as usize;
        // columns: x·π^j in coordinates; solve A·y = (1, 0, …, 0)
        let mut a: Vec<Vec<Rational>> = vec![vec![Rational::zero(); e + 1]; e];
        for j in 0..e {
            let col = self.shift(j as i64);
            for i in 0..e {
                a[i][j] = col.coords[i].clone();
            }
        }
        a[0][e] = Rational::one();
        for c in 0..e {
            let piv = (c..e).find(|&r| !a[r][c].is_zero()).ok_or(Error::ZeroArgument)?;
            a.swap(c, piv);
            let pv = a[c][c].clone();
            for k in c..=e {
                a[c][k] = &a[c][k] / &pv;
            }
            for r in 0..e {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for k in c..=e {
                        let sub = &f * &a[c][k];
                        a[r][k] -= sub;
                    }
                }
            }
        }
        Ok(KElement {
            ell: self.ell,
            e: self.e,
            coords: (0..e).map(|i| a[i][e].clone()).collect(),
        })
    }

    /// Writes x = π^m·u with u a unit; `None` for zero.
    pub fn split_unit(&self) -> Option<(i64, KElement)> {
        let m = self.valuation()?;
        Some((m, self.shift(-m)))
    }

    /// Canonical digits of x modulo 𝔩^n: pairs (j, c_j), j < n, c_j ≠ 0.
    pub fn digits_below(&self, n: i64) -> Vec<(i64, u32)> {
        let e = self.e as i64;
        let mut x = self.clone();
        let mut out = Vec::new();
        while let Some(w) = x.valuation() {
            if w >= n {
                break;
            }
            let i = w.rem_euclid(e) as usize;
            let k = w.div_euclid(e);
            let scale = rat_pow(&int(self.ell as i64), k);
            let unit = &x.coords[i] / &scale;
            let c = residue_u64(&unit, self.ell).expect("unit residue") as u32;
            out.push((w, c));
            x.coords[i] -= scale * int(c as i64);
        }
        out
    }

    /// The coset x + 𝔩^n with its canonical representative.
    pub fn reduce(&self, n: i64) -> Coset {
        let d = self.digits_below(n);
        Coset::from_sparse(n, &d)
    }

    /// Digits of the full expansion when it is finite (coordinates in Z[1/ℓ]
    /// with nonnegative values); `None` otherwise.
    pub fn finite_digits(&self) -> Option<Vec<(i64, u32)>> {
        use num_traits::Signed;
        let ell = BigInt::from(self.ell);
        for c in &self.coords {
            if c.is_negative() {
                return None;
            }
            let mut d = c.denom().clone();
            while (&d % &ell).is_zero() {
                d /= &ell;
            }
            if !d.is_one() {
                return None;
            }
        }
        let top = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let bits = c.numer().bits() as i64 + 1;
                (bits + 1) * self.e as i64 + i as i64 + 1
            })
            .max()
            .unwrap_or(0);
        let d = self.digits_below(top + 1);
        debug_assert!(self.reduce(top + 1).rep_element_raw(self.ell, self.e) == *self);
        Some(d)
    }
}

impl std::ops::Add for &KElement {
    type Output = KElement;
    fn add(self, o: &KElement) -> KElement {
        KElement {
            ell: self.ell,
            e: self.e,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub for &KElement {
    type Output = KElement;
    fn sub(self, o: &KElement) -> KElement {
        KElement {
            ell: self.ell,
            e: self.e,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl std::ops::Neg for &KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        self.scale(&int(-1))
    }
}

impl std::ops::Mul for &KElement {
    type Output = KElement;
    fn mul(self, o: &KElement) -> KElement {
        let e = self.e as usize;
        let ell = int(self.ell as i64);
        let mut coords = vec![Rational::zero(); e];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                if i + j >= e {
                    coords[i + j - e] += prod * &ell;
                } else {
                    coords[i + j] += prod;
                }
            }
        }
        KElement {
            ell: self.ell,
            e: self.e,
            coords,
        }
    }
}

/// A coset rep + 𝔩^level with rep a canonical finite digit string.
///
/// Digits occupy positions low, low+1, …; the first and last stored digits
/// are nonzero, so structural equality is equality of cosets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset {
    pub level: i64,
    low: i64,
    digits: Vec<u32>,
}

impl Coset {
    /// The ideal 𝔩^level itself.
    pub fn zero(level: i64) -> Self {
        Coset {
            level,
            low: level,
            digits: vec![],
        }
    }

    /// From digits at positions low, low+1, … (truncated at `level`).
    pub fn new(level: i64, low: i64, digits: &[u32]) -> Self {
        let sparse: Vec<(i64, u32)> = digits.iter().enumerate().map(|(i, &d)| (low + i as i64, d)).collect();
        Self::from_sparse(level, &sparse)
    }

    /// From (position, digit) pairs in any order; positions ≥ level dropped.
    pub fn from_sparse(level: i64, pairs: &[(i64, u32)]) -> Self {
        let kept: Vec<(i64, u32)> = pairs.iter().copied().filter(|&(j, c)| j < level && c != 0).collect();
        if kept.is_empty() {
            return Coset::zero(level);
        }
        let low = kept.iter().map(|p| p.0).min().unwrap();
        let high = kept.iter().map(|p| p.0).max().unwrap();
        let mut digits = vec![0u32; (high - low + 1) as usize];
        for (j, c) in kept {
            digits[(j - low) as usize] = c;
        }
        Coset { level, low, digits }
    }

    pub fn contains_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// ord_π of the representative; `None` when the coset is an ideal.
    pub fn rep_valuation(&self) -> Option<i64> {
        (!self.digits.is_empty()).then_some(self.low)
    }

    /// Lowest valuation of any element of the coset.
    pub fn min_valuation(&self) -> i64 {
        self.rep_valuation().unwrap_or(self.level)
    }

    pub fn digit(&self, j: i64) -> u32 {
        if j < self.low || j >= self.low + self.digits.len() as i64 {
            0
        } else {
            self.digits[(j - self.low) as usize]
        }
    }

    /// Nonzero (position, digit) pairs.
    pub fn sparse_digits(&self) -> Vec<(i64, u32)> {
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| (self.low + i as i64, d))
            .collect()
    }

    /// The enclosing coset at a coarser level.
    pub fn parent(&self, level: i64) -> Coset {
        debug_assert!(level <= self.level);
        Coset::from_sparse(level, &self.sparse_digits())
    }

    pub fn contains(&self, other: &Coset) -> bool {
        other.level >= self.level && other.parent(self.level) == *self
    }

    pub fn disjoint(&self, other: &Coset) -> bool {
        !self.contains(other) && !other.contains(self)
    }

    /// The ℓ cosets of the next level inside this one, by digit at `level`.
    pub fn children(&self, ell: u64) -> Vec<Coset> {
        let base = self.sparse_digits();
        (0..ell as u32)
            .map(|c| {
                let mut d = base.clone();
                d.push((self.level, c));
                Coset::from_sparse(self.level + 1, &d)
            })
            .collect()
    }

    /// All cosets of 𝔩^level inside this coset.
    pub fn subcosets(&self, field: &LocalField, level: i64) -> Result<Vec<Coset>> {
        if level < self.level {
            return Err(Error::BadParameter(format!(
                "refinement level {level} is coarser than {}",
                self.level
            )));
        }
        let depth = (level - self.level) as u32;
        let count = (field.ell() as u128).checked_pow(depth).unwrap_or(u128::MAX);
        field.check_size(count)?;
        let mut out = vec![self.clone()];
        for _ in 0..depth {
            out = out.iter().flat_map(|c| c.children(field.ell())).collect();
        }
        Ok(out)
    }

    pub fn rep(&self, field: &LocalField) -> KElement {
        self.rep_element_raw(field.ell(), field.e())
    }

    fn rep_element_raw(&self, ell: u64, e: u32) -> KElement {
        let ei = e as i64;
        let l = int(ell as i64);
        let mut x = KElement::zero(ell, e);
        for (j, c) in self.sparse_digits() {
            x.coords[j.rem_euclid(ei) as usize] += rat_pow(&l, j.div_euclid(ei)) * int(c as i64);
        }
        x
    }

    pub fn contains_point(&self, x: &KElement) -> bool {
        x.reduce(self.level) == *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn field(ell: u64, e: u32) -> Arc<LocalField> {
        LocalField::new(LocalFieldParams::new(ell, e, 5, 4).unwrap()).unwrap()
    }

    #[test]
    fn carries_through_pi_e() {
        let k = field(3, 2);
        let pi = k.pi_pow(1);
        let s = &(&pi + &pi) + &pi;
        assert_eq!(s, k.pi_pow(3));
        assert_eq!(s.finite_digits().unwrap(), vec![(3, 1)]);
        assert_eq!(&pi * &pi, k.from_int(3));
        assert_eq!((&pi * &pi).finite_digits().unwrap(), vec![(2, 1)]);
    }

    #[test]
    fn valuations_and_traces() {
        let k = field(3, 2);
        assert_eq!(k.pi_pow(3).valuation(), Some(3));
        assert_eq!(k.zero().valuation(), None);
        assert_eq!(k.from_int(3).valuation(), Some(2));
        assert_eq!(k.one().trace(), int(2));
        assert_eq!(k.pi_pow(1).trace(), int(0));
        assert_eq!(k.pi_pow(-2).trace(), rat(2, 3));
        let q3 = field(3, 1);
        assert_eq!(q3.from_rational(rat(7, 9)).trace(), rat(7, 9));
    }

    #[test]
    fn additive_character_values() {
        let k = field(3, 1);
        let m = k.params().conductor as i64;
        assert_eq!(k.add_char_exp(&k.from_int(5)).unwrap(), 0);
        assert_eq!(k.add_char_exp(&k.from_rational(rat(1, 3))).unwrap(), m / 3);
        assert_eq!(k.add_char_exp(&k.from_rational(rat(2, 9))).unwrap(), 2 * m / 9);
        // ℓ-integral but not integral rationals still give 1
        assert_eq!(k.add_char_exp(&k.from_rational(rat(1, 2))).unwrap(), 0);
        assert_eq!(
            k.add_char_exp(&k.from_rational(rat(1, 243))),
            Err(Error::ConductorTooSmall {
                needed: 5,
                available: 4
            })
        );
    }

    #[test]
    fn coset_enumeration() {
        let k = field(3, 1);
        let c = k.enumerate_cosets(0, 1).unwrap();
        let reps: Vec<KElement> = c.iter().map(|c| c.rep(&k)).collect();
        assert_eq!(reps, vec![k.from_int(0), k.from_int(1), k.from_int(2)]);
        let k2 = field(2, 1);
        let c = k2.enumerate_cosets(1, 0).unwrap();
        let reps: Vec<KElement> = c.iter().map(|c| c.rep(&k2)).collect();
        assert_eq!(reps, vec![k2.from_int(0), k2.from_rational(rat(1, 2))]);
        assert_eq!(k.enumerate_cosets(0, 0).unwrap(), vec![Coset::zero(0)]);
        let small = LocalField::new(LocalFieldParams::new(3, 1, 5, 4).unwrap().with_cap(100)).unwrap();
        assert!(matches!(small.enumerate_cosets(2, 3), Err(Error::SizeOverflow { .. })));
    }

    #[test]
    fn reduction_of_non_finite_elements() {
        let k = field(3, 1);
        // −1 ≡ 2 + 2·3 mod 9
        let c = k.from_int(-1).reduce(2);
        assert_eq!(c.sparse_digits(), vec![(0, 2), (1, 2)]);
        assert!(k.from_int(-1).finite_digits().is_none());
        // 1/2 ≡ 2 + 1·3 (= 5) mod 9
        assert_eq!(k.from_rational(rat(1, 2)).reduce(2).rep(&k), k.from_int(5));
    }

    #[test]
    fn inverse_in_ramified_field() {
        let k = field(2, 3);
        let x = &(&k.pi_pow(1) + &k.from_int(3)) + &k.pi_pow(-2);
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, k.one());
        assert_eq!(k.zero().inv(), Err(Error::ZeroArgument));
    }

    #[test]
    fn coset_containment() {
        let k = field(3, 1);
        let big = Coset::zero(0);
        let small = k.from_int(4).reduce(2);
        assert!(big.contains(&small));
        assert!(!small.contains(&big));
        assert_eq!(small.parent(1), k.from_int(1).reduce(1));
        assert!(small.contains_point(&k.from_int(13)));
        assert!(!small.contains_point(&k.from_int(5)));
    }

    #[test]
    fn params_validation() {
        assert!(LocalFieldParams::new(4, 1, 5, 2).is_err());
        assert!(LocalFieldParams::new(3, 3, 5, 2).is_err());
        assert!(LocalFieldParams::new(3, 1, 3, 2).is_err());
        assert!(LocalFieldParams::new(3, 1, 5, 2).unwrap().with_conductor(9).is_err());
    }
}
