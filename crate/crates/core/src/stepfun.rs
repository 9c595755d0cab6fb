//! Step functions (finite combinations of coset indicators) and shell
//! functions (step functions plus geometric tails over the shells π^n𝔬^×).
//!
//! A [`StepFunction`] is always kept in its coarsest disjoint form: the
//! cosets are the maximal balls on which the function is a nonzero constant.
//! That form is unique, so structural equality decides functional equality.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::arith::{rat_pow, v_rat, Rational};
use crate::error::{Error, Result};
use crate::localfield::{Coset, KElement, LocalField};
use crate::scalars::CycScalar;

#[derive(Clone)]
pub struct StepFunction {
    field: Arc<LocalField>,
    terms: Vec<(Coset, CycScalar)>,
}

impl PartialEq for StepFunction {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}
impl Eq for StepFunction {}

impl std::fmt::Debug for StepFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut l = f.debug_list();
        for (c, v) in &self.terms {
            l.entry(&format_args!("{v} on {:?}+π^{}", c.sparse_digits(), c.level));
        }
        l.finish()
    }
}

impl StepFunction {
    pub fn zero(field: &Arc<LocalField>) -> Self {
        StepFunction {
            field: field.clone(),
            terms: vec![],
        }
    }

    /// Σ coeff·1_coset over possibly overlapping cosets.
    pub fn from_terms(field: &Arc<LocalField>, terms: Vec<(Coset, CycScalar)>) -> Result<Self> {
        Ok(StepFunction {
            field: field.clone(),
            terms: canonicalize(field, terms)?,
        })
    }

    pub fn indicator(field: &Arc<LocalField>, coset: Coset) -> Self {
        StepFunction {
            field: field.clone(),
            terms: vec![(coset, CycScalar::one(field.cyc()))],
        }
    }

    /// 1_{a+𝔩^n}.
    pub fn indicator_at(field: &Arc<LocalField>, a: &KElement, n: i64) -> Self {
        Self::indicator(field, a.reduce(n))
    }

    /// 1_{π^n𝔬}.
    pub fn ball(field: &Arc<LocalField>, n: i64) -> Self {
        Self::indicator(field, Coset::zero(n))
    }

    /// 1_{π^n𝔬^×}.
    pub fn shell(field: &Arc<LocalField>, n: i64) -> Self {
        let one = CycScalar::one(field.cyc());
        StepFunction {
            field: field.clone(),
            terms: (1..field.ell() as u32)
                .map(|c| (Coset::from_sparse(n + 1, &[(n, c)]), one.clone()))
                .collect(),
        }
    }

    pub fn field(&self) -> &Arc<LocalField> {
        &self.field
    }

    pub fn terms(&self) -> &[(Coset, CycScalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, x: &KElement) -> CycScalar {
        for (c, v) in &self.terms {
            if c.contains_point(x) {
                return v.clone();
            }
        }
        CycScalar::zero(self.field.cyc())
    }

    /// f(0), i.e. the coefficient of the ball around 0 if there is one.
    pub fn value_at_zero(&self) -> CycScalar {
        self.terms
            .iter()
            .find(|(c, _)| c.contains_zero())
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| CycScalar::zero(self.field.cyc()))
    }

    /// The smallest π-valuation met by the support (`None` for zero).
    pub fn support_min_valuation(&self) -> Option<i64> {
        self.terms.iter().map(|(c, _)| c.min_valuation()).min()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        Self::from_terms(&self.field, t)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        if s.is_zero() {
            return Self::zero(&self.field);
        }
        self.map_coeffs(|c| c * s)
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&CycScalar::from_rational(self.field.cyc(), r.clone()))
    }

    fn map_coeffs(&self, f: impl Fn(&CycScalar) -> CycScalar) -> Self {
        // a nonzero scaling of a coarsest form stays coarsest
        StepFunction {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(c, v)| (c.clone(), f(v))).collect(),
        }
    }

    /// Pointwise product via the common refinement.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut t = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if a.contains(b) {
                    t.push((b.clone(), x * y));
                } else if b.contains(a) {
                    t.push((a.clone(), x * y));
                }
            }
        }
        Self::from_terms(&self.field, t)
    }

    /// g(x) = f(x − h).
    pub fn translate(&self, h: &KElement) -> Result<Self> {
        let t = self
            .terms
            .iter()
            .map(|(c, v)| ((&c.rep(&self.field) + h).reduce(c.level), v.clone()))
            .collect();
        Self::from_terms(&self.field, t)
    }

    /// g(x) = f(λx): the coset a + 𝔩^N pulls back to λ^{−1}a + 𝔩^{N−m}.
    pub fn dilate(&self, lambda: &KElement) -> Result<Self> {
        let m = lambda.valuation().ok_or(Error::ZeroDilation)?;
        let inv = lambda.inv()?;
        let t = self
            .terms
            .iter()
            .map(|(c, v)| ((&inv * &c.rep(&self.field)).reduce(c.level - m), v.clone()))
            .collect();
        Self::from_terms(&self.field, t)
    }

    /// Splits every term into cosets of level `level` (no-op for finer terms).
    pub fn refine_to(&self, level: i64) -> Result<Vec<(Coset, CycScalar)>> {
        let mut out = Vec::new();
        for (c, v) in &self.terms {
            if c.level >= level {
                out.push((c.clone(), v.clone()));
            } else {
                for s in c.subcosets(&self.field, level)? {
                    out.push((s, v.clone()));
                }
            }
        }
        Ok(out)
    }
}

/// Reduces overlapping terms to the unique coarsest disjoint form.
fn canonicalize(field: &LocalField, terms: Vec<(Coset, CycScalar)>) -> Result<Vec<(Coset, CycScalar)>> {
    let mut terms: Vec<(Coset, CycScalar)> = terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    if terms.is_empty() {
        return Ok(vec![]);
    }
    terms.sort_by_key(|a| a.0.level);
    let mut roots: Vec<(Coset, Vec<(Coset, CycScalar)>)> = Vec::new();
    for (c, v) in terms {
        match roots.iter_mut().find(|(r, _)| r.contains(&c)) {
            Some((_, bucket)) => bucket.push((c, v)),
            None => roots.push((c.clone(), vec![(c, v)])),
        }
    }
    let zero = CycScalar::zero(field.cyc());
    let mut out = Vec::new();
    for (root, bucket) in roots {
        split(field, root, zero.clone(), bucket, &mut out)?;
    }
    Ok(merge(field, out))
}

/// Emits the disjoint pieces of `node` carrying the accumulated value `acc`
/// plus the contributions of `bucket` (all contained in `node`).
fn split(
    field: &LocalField,
    node: Coset,
    mut acc: CycScalar,
    bucket: Vec<(Coset, CycScalar)>,
    out: &mut Vec<(Coset, CycScalar)>,
) -> Result<()> {
    let mut rest = Vec::new();
    for (c, v) in bucket {
        if c == node {
            acc += &v;
        } else {
            rest.push((c, v));
        }
    }
    if rest.is_empty() {
        if !acc.is_zero() {
            out.push((node, acc));
            field.check_size(out.len() as u128)?;
        }
        return Ok(());
    }
    let ell = field.ell() as usize;
    let mut parts: Vec<Vec<(Coset, CycScalar)>> = vec![Vec::new(); ell];
    for (c, v) in rest {
        parts[c.digit(node.level) as usize].push((c, v));
    }
    for (child, part) in node.children(field.ell()).into_iter().zip(parts) {
        split(field, child, acc.clone(), part, out)?;
    }
    Ok(())
}

/// Repeatedly replaces ℓ sibling cosets with equal values by their parent.
fn merge(field: &LocalField, pieces: Vec<(Coset, CycScalar)>) -> Vec<(Coset, CycScalar)> {
    let ell = field.ell() as usize;
    let mut map: BTreeMap<Coset, CycScalar> = pieces.into_iter().collect();
    let mut level = match map.keys().map(|c| c.level).max() {
        Some(l) => l,
        None => return vec![],
    };
    loop {
        let mut groups: HashMap<Coset, Vec<Coset>> = HashMap::new();
        for c in map.keys().filter(|c| c.level == level) {
            groups.entry(c.parent(level - 1)).or_default().push(c.clone());
        }
        for (parent, kids) in groups {
            if kids.len() != ell {
                continue;
            }
            let v = map[&kids[0]].clone();
            if kids.iter().all(|k| map[k] == v) {
                for k in &kids {
                    map.remove(k);
                }
                map.insert(parent, v);
            }
        }
        match map.keys().map(|c| c.level).filter(|&l| l < level).max() {
            Some(l) => level = l,
            None => break,
        }
    }
    map.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    TowardZero,
    TowardInfinity,
}

/// coeff · Σ_{k≥0} ratio^k · 1_{π^{±(start+k)}𝔬^×}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeoTail {
    pub direction: Direction,
    pub start: i64,
    pub ratio: Rational,
    pub coeff: CycScalar,
}

impl GeoTail {
    pub fn new(direction: Direction, start: i64, ratio: Rational, coeff: CycScalar, p: u64) -> Result<Self> {
        if let Some(v) = v_rat(&ratio, p) {
            if v <= 0 {
                return Err(Error::BadParameter(format!(
                    "tail ratio {ratio} must have p-adic absolute value < 1"
                )));
            }
        }
        Ok(GeoTail {
            direction,
            start,
            ratio,
            coeff,
        })
    }

    /// Shell exponent n of the k-th term (the shell is π^n𝔬^×).
    pub fn shell_of(&self, k: i64) -> i64 {
        match self.direction {
            Direction::TowardZero => self.start + k,
            Direction::TowardInfinity => -(self.start + k),
        }
    }

    /// Index k of shell n inside this tail, if any.
    pub fn index_of_shell(&self, n: i64) -> Option<i64> {
        let k = match self.direction {
            Direction::TowardZero => n - self.start,
            Direction::TowardInfinity => -n - self.start,
        };
        (k >= 0).then_some(k)
    }

    pub fn term_coeff(&self, k: i64) -> CycScalar {
        self.coeff.scale(&rat_pow(&self.ratio, k))
    }

    /// Drops the first `k` shells (their contribution must be kept elsewhere).
    fn advanced(&self, k: i64) -> GeoTail {
        GeoTail {
            direction: self.direction,
            start: self.start + k,
            ratio: self.ratio.clone(),
            coeff: self.term_coeff(k),
        }
    }
}

/// A step function plus geometric shell tails; the value is the sum of all parts.
#[derive(Clone, Debug)]
pub struct ShellFunction {
    pub step: StepFunction,
    pub tails: Vec<GeoTail>,
}

impl ShellFunction {
    pub fn from_step(step: StepFunction) -> Self {
        ShellFunction { step, tails: vec![] }
    }

    pub fn zero(field: &Arc<LocalField>) -> Self {
        Self::from_step(StepFunction::zero(field))
    }

    pub fn new(step: StepFunction, tails: Vec<GeoTail>) -> Self {
        ShellFunction { step, tails }
    }

    pub fn field(&self) -> &Arc<LocalField> {
        self.step.field()
    }

    pub fn evaluate(&self, x: &KElement) -> CycScalar {
        let mut v = self.step.evaluate(x);
        if let Some(w) = x.valuation() {
            for t in &self.tails {
                if let Some(k) = t.index_of_shell(w) {
                    v += &t.term_coeff(k);
                }
            }
        }
        v
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut tails = self.tails.clone();
        tails.extend(o.tails.iter().cloned());
        Ok(ShellFunction {
            step: self.step.add(&o.step)?,
            tails,
        })
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        ShellFunction {
            step: self.step.scale(s),
            tails: self
                .tails
                .iter()
                .map(|t| GeoTail {
                    coeff: &t.coeff * s,
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&CycScalar::from_int(self.field().cyc(), -1))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    /// g(x) = F(λx); shells move by −ord(λ).
    pub fn dilate(&self, lambda: &KElement) -> Result<Self> {
        let m = lambda.valuation().ok_or(Error::ZeroDilation)?;
        let tails = self
            .tails
            .iter()
            .map(|t| GeoTail {
                start: match t.direction {
                    Direction::TowardZero => t.start - m,
                    Direction::TowardInfinity => t.start + m,
                },
                ..t.clone()
            })
            .collect();
        Ok(ShellFunction {
            step: self.step.dilate(lambda)?,
            tails,
        })
    }

    /// g(x) = F(x − h). Shells far from 0 are translation invariant, so
    /// toward-infinity tails only need their first few shells made explicit;
    /// toward-zero tails are moved off 0 by a nonzero h and are rejected.
    pub fn translate(&self, h: &KElement) -> Result<Self> {
        let Some(vh) = h.valuation() else {
            return Ok(self.clone());
        };
        if self.tails.iter().any(|t| t.direction == Direction::TowardZero) {
            return Err(Error::Unsupported("translating a tail that accumulates at 0".into()));
        }
        let mut step = self.step.clone();
        let mut tails = Vec::new();
        for t in &self.tails {
            // shell −(start+k) is invariant once −(start+k) < ord(h)
            let need = (-vh + 1 - t.start).max(0);
            step = step.add(&tail_prefix(self.field(), t, need)?)?;
            tails.push(t.advanced(need));
        }
        Ok(ShellFunction {
            step: step.translate(h)?,
            tails,
        })
    }

    /// The step function keeping the first T+1 shells of every tail.
    pub fn truncate(&self, t: i64) -> Result<StepFunction> {
        let mut step = self.step.clone();
        for tail in &self.tails {
            step = step.add(&tail_prefix(self.field(), tail, t + 1)?)?;
        }
        Ok(step)
    }

    /// Tails moved to common starts and merged by (direction, ratio).
    fn normalized(&self, zero_start: i64, inf_start: i64) -> Result<(StepFunction, Vec<GeoTail>)> {
        let mut step = self.step.clone();
        let mut merged: BTreeMap<(Direction, Rational), CycScalar> = BTreeMap::new();
        for t in &self.tails {
            let target = match t.direction {
                Direction::TowardZero => zero_start,
                Direction::TowardInfinity => inf_start,
            };
            let k = target - t.start;
            debug_assert!(k >= 0);
            step = step.add(&tail_prefix(self.field(), t, k)?)?;
            let moved = t.advanced(k);
            let key = (t.direction, t.ratio.clone());
            let entry = merged.entry(key).or_insert_with(|| CycScalar::zero(self.field().cyc()));
            *entry += &moved.coeff;
        }
        let tails = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((direction, ratio), coeff)| GeoTail {
                direction,
                start: match direction {
                    Direction::TowardZero => zero_start,
                    Direction::TowardInfinity => inf_start,
                },
                ratio,
                coeff,
            })
            .collect();
        Ok((step, tails))
    }

    /// Functional equality. Distinct ratios give independent geometric
    /// sequences, so after aligning starts the tails must agree one by one.
    pub fn equals(&self, o: &Self) -> Result<bool> {
        let starts = |d: Direction| {
            self.tails
                .iter()
                .chain(&o.tails)
                .filter(|t| t.direction == d)
                .map(|t| t.start)
                .max()
                .unwrap_or(0)
        };
        let (z, i) = (starts(Direction::TowardZero), starts(Direction::TowardInfinity));
        let (s1, t1) = self.normalized(z, i)?;
        let (s2, t2) = o.normalized(z, i)?;
        Ok(s1 == s2 && t1 == t2)
    }

    /// The tails after merging equal ratios at common starts (zero
    /// coefficients removed), together with the adjusted step part.
    pub fn simplified(&self) -> Result<ShellFunction> {
        let z = self
            .tails
            .iter()
            .filter(|t| t.direction == Direction::TowardZero)
            .map(|t| t.start)
            .max()
            .unwrap_or(0);
        let i = self
            .tails
            .iter()
            .filter(|t| t.direction == Direction::TowardInfinity)
            .map(|t| t.start)
            .max()
            .unwrap_or(0);
        let (step, tails) = self.normalized(z, i)?;
        Ok(ShellFunction { step, tails })
    }
}

/// Σ_{k<count} coeff·ρ^k·1_{shell k} as a step function.
fn tail_prefix(field: &Arc<LocalField>, t: &GeoTail, count: i64) -> Result<StepFunction> {
    let mut terms = Vec::new();
    let mut c = t.coeff.clone();
    for k in 0..count {
        if c.is_zero() {
            break;
        }
        for (coset, v) in StepFunction::shell(field, t.shell_of(k)).terms {
            terms.push((coset, &v * &c));
        }
        c = c.scale(&t.ratio);
    }
    StepFunction::from_terms(field, terms)
}

/// g_α = Σ_{n≥0} α^n 1_{π^n𝔬^×}.
pub fn g_alpha(field: &Arc<LocalField>, alpha: &Rational) -> Result<ShellFunction> {
    let tail = GeoTail::new(
        Direction::TowardZero,
        0,
        alpha.clone(),
        CycScalar::one(field.cyc()),
        field.params().p,
    )?;
    Ok(ShellFunction::new(StepFunction::zero(field), vec![tail]))
}

/// g^β = Σ_{n≥0} β^n 1_{π^{−n−1−δ}𝔬^×}.
pub fn g_beta_up(field: &Arc<LocalField>, beta: &Rational) -> Result<ShellFunction> {
    let tail = GeoTail::new(
        Direction::TowardInfinity,
        1 + field.delta(),
        beta.clone(),
        CycScalar::one(field.cyc()),
        field.params().p,
    )?;
    Ok(ShellFunction::new(StepFunction::zero(field), vec![tail]))
}

/// True when the rational r has p-adic absolute value < 1.
pub fn is_p_small(r: &Rational, p: u64) -> bool {
    v_rat(r, p).is_none_or(|v| v > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::localfield::LocalFieldParams;

    fn field(ell: u64, e: u32) -> Arc<LocalField> {
        LocalField::new(LocalFieldParams::new(ell, e, 5, 4).unwrap()).unwrap()
    }

    fn one(k: &Arc<LocalField>) -> CycScalar {
        CycScalar::one(k.cyc())
    }

    #[test]
    fn canonical_partition() {
        let k = field(3, 1);
        let f =
            StepFunction::from_terms(&k, vec![(Coset::zero(0), one(&k)), (k.from_int(1).reduce(1), one(&k))]).unwrap();
        let two = CycScalar::from_int(k.cyc(), 2);
        let expect = vec![
            (Coset::zero(1), one(&k)),
            (k.from_int(1).reduce(1), two),
            (k.from_int(2).reduce(1), one(&k)),
        ];
        let mut got = f.terms().to_vec();
        got.sort_by(|a, b| a.0.cmp(&b.0));
        let mut exp = expect;
        exp.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(got, exp);
        assert!(StepFunction::from_terms(&k, vec![]).unwrap().is_zero());
        let mut t = vec![(Coset::zero(0), one(&k))];
        for a in 0..3 {
            t.push((k.from_int(a).reduce(1), -one(&k)));
        }
        assert!(StepFunction::from_terms(&k, t).unwrap().is_zero());
    }

    #[test]
    fn merging_recovers_balls() {
        let k = field(2, 3);
        let parts: Vec<(Coset, CycScalar)> = Coset::zero(-1)
            .subcosets(&k, 3)
            .unwrap()
            .into_iter()
            .map(|c| (c, one(&k)))
            .collect();
        let f = StepFunction::from_terms(&k, parts).unwrap();
        assert_eq!(f, StepFunction::ball(&k, -1));
    }

    #[test]
    fn pointwise_products() {
        let k = field(3, 2);
        let a = StepFunction::ball(&k, 0);
        let b = StepFunction::ball(&k, 1);
        assert_eq!(a.mul(&b).unwrap(), b);
        let k1 = field(3, 1);
        let x = StepFunction::indicator_at(&k1, &k1.from_int(1), 1);
        let y = StepFunction::indicator_at(&k1, &k1.from_int(2), 1);
        assert!(x.mul(&y).unwrap().is_zero());
        assert!(x.add(&x.neg()).unwrap().is_zero());
    }

    #[test]
    fn translation_and_dilation() {
        let k = field(3, 2);
        let o = StepFunction::ball(&k, 0);
        assert_eq!(o.translate(&k.one()).unwrap(), o);
        let pi = k.pi_pow(1);
        assert_eq!(o.dilate(&pi).unwrap(), StepFunction::ball(&k, -1));
        assert_eq!(o.dilate(&k.one()).unwrap(), o);
        assert_eq!(o.dilate(&k.zero()).err(), Some(Error::ZeroDilation));
    }

    #[test]
    fn shells_and_tails() {
        let k = field(3, 1);
        let alpha = int(5);
        let g = g_alpha(&k, &alpha).unwrap();
        let x = &k.pi_pow(2) * &k.from_int(2);
        assert_eq!(g.evaluate(&x), CycScalar::from_int(k.cyc(), 25));
        assert!(g.evaluate(&k.zero()).is_zero());
        assert!(g.evaluate(&k.pi_pow(-1)).is_zero());
        let t0 = g.truncate(0).unwrap();
        assert_eq!(t0, StepFunction::shell(&k, 0));
        let t2 = g.truncate(2).unwrap();
        let mut expect = StepFunction::shell(&k, 0);
        for n in 1..3 {
            expect = expect
                .add(&StepFunction::shell(&k, n).scale_rational(&rat_pow(&alpha, n)))
                .unwrap();
        }
        assert_eq!(t2, expect);
        assert!(GeoTail::new(Direction::TowardZero, 0, rat(1, 5), one(&k), 5).is_err());
    }

    #[test]
    fn shell_equality_after_realignment() {
        let k = field(3, 1);
        let g = g_alpha(&k, &int(5)).unwrap();
        // same function: first shell explicit, tail from shell 1 with coefficient α
        let alt = ShellFunction::new(
            StepFunction::shell(&k, 0),
            vec![GeoTail::new(Direction::TowardZero, 1, int(5), CycScalar::from_int(k.cyc(), 5), 5).unwrap()],
        );
        assert!(g.equals(&alt).unwrap());
        assert!(!g.equals(&g_alpha(&k, &int(10)).unwrap()).unwrap());
        assert!(g.sub(&alt).unwrap().simplified().unwrap().tails.is_empty());
    }

    #[test]
    fn shell_translation_of_far_tails() {
        let k = field(3, 1);
        let g = g_beta_up(&k, &int(5)).unwrap();
        let h = k.from_rational(rat(1, 3));
        let moved = g.translate(&h).unwrap();
        let back = moved.translate(&(-&h)).unwrap();
        assert!(back.equals(&g).unwrap());
        for x in [
            k.from_rational(rat(1, 9)),
            k.from_rational(rat(4, 3)),
            k.from_rational(rat(2, 27)),
        ] {
            assert_eq!(moved.evaluate(&x), g.evaluate(&(&x - &h)));
        }
        assert!(g_alpha(&k, &int(5)).unwrap().translate(&h).is_err());
    }
}
