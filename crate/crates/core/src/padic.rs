//! The embedding ι_p of the scalar ring into W/p^k, W the ring of integers of
//! the unramified extension of Q_p of degree d, realized as Z_p[x]/(f) with f
//! monic and irreducible mod p.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{mult_order, pow_mod, prime_factors, residue_mod, Rational};
use crate::error::{Error, Result};
use crate::fourier::{fourier, haar_integral, riemann_lebesgue, RiemannLebesgue, Sign};
use crate::scalars::{CycField, CycScalar};
use crate::stepfun::StepFunction;

pub const DEFAULT_PRECISION: u32 = 40;
pub const MAX_PRECISION: u32 = 640;

/// Z[x]/(f, modulus) for a monic f of degree d.
#[derive(Clone, Debug)]
struct PolyRing {
    f: Vec<BigInt>,
    modulus: BigInt,
}

type Elem = Vec<BigInt>;

impl PolyRing {
    fn d(&self) -> usize {
        self.f.len()
    }

    fn reduce_coeffs(&self, mut v: Elem) -> Elem {
        for c in v.iter_mut() {
            *c = c.mod_floor(&self.modulus);
        }
        v
    }

    fn constant(&self, c: BigInt) -> Elem {
        let mut v = vec![BigInt::zero(); self.d()];
        v[0] = c.mod_floor(&self.modulus);
        v
    }

    fn x(&self) -> Elem {
        let mut v = vec![BigInt::zero(); self.d()];
        if self.d() == 1 {
            v[0] = (-&self.f[0]).mod_floor(&self.modulus);
        } else {
            v[1] = BigInt::one();
        }
        v
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce_coeffs(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce_coeffs(a.iter().zip(b).map(|(x, y)| x - y).collect())
    }

    fn scale(&self, a: &Elem, c: &BigInt) -> Elem {
        self.reduce_coeffs(a.iter().map(|x| x * c).collect())
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let d = self.d();
        let mut r = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    r[i + j] += x * y;
                }
            }
        }
        for i in (d..2 * d - 1).rev() {
            let c = std::mem::take(&mut r[i]).mod_floor(&self.modulus);
            if c.is_zero() {
                continue;
            }
            for (j, fj) in self.f.iter().enumerate() {
                r[i - d + j] -= &c * fj;
            }
        }
        r.truncate(d);
        self.reduce_coeffs(r)
    }

    fn pow(&self, a: &Elem, e: &BigUint) -> Elem {
        let mut acc = self.constant(BigInt::one());
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    fn is_one(&self, a: &Elem) -> bool {
        a[0].is_one() && a[1..].iter().all(|c| c.is_zero())
    }
}

/// Remainder of a by b over F_p (coefficients low to high, b monic-normalizable).
fn fp_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let inv = pow_mod(b[db], p - 2, p);
    while a.len() > db {
        let c = a.pop().unwrap();
        if c == 0 {
            continue;
        }
        let k = c * inv % p;
        let off = a.len() - db;
        for j in 0..db {
            a[off + j] = (a[off + j] + p - k * b[j] % p) % p;
        }
    }
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_gcd_is_one(a: Vec<u64>, b: Vec<u64>, p: u64) -> bool {
    let (mut a, mut b) = (a, b);
    while b.last() == Some(&0) {
        b.pop();
    }
    while !b.is_empty() {
        let r = fp_rem(a, &b, p);
        a = b;
        b = r;
    }
    a.len() == 1
}

/// Rabin's irreducibility test for monic f (lower coefficients given) over F_p.
fn is_irreducible(lower: &[u64], p: u64) -> bool {
    let d = lower.len();
    let ring = PolyRing {
        f: lower.iter().map(|&c| BigInt::from(c)).collect(),
        modulus: BigInt::from(p),
    };
    let frob = |a: &Elem, times: usize| {
        let mut a = a.clone();
        for _ in 0..times {
            a = ring.pow(&a, &BigUint::from(p));
        }
        a
    };
    let x = ring.x();
    if d == 1 {
        return true;
    }
    if frob(&x, d) != x {
        return false;
    }
    let mut full: Vec<u64> = lower.to_vec();
    full.push(1);
    for r in prime_factors(d as u64) {
        let h = ring.sub(&frob(&x, d / r as usize), &x);
        let hv: Vec<u64> = h.iter().map(|c| c.to_u64().unwrap()).collect();
        if !fp_gcd_is_one(full.clone(), hv, p) {
            return false;
        }
    }
    true
}

/// Residues in lexicographic order: coefficient 0 varies fastest.
fn nth_residue(k: u64, d: usize, p: u64) -> Vec<u64> {
    let mut k = k;
    (0..d)
        .map(|_| {
            let c = k % p;
            k /= p;
            c
        })
        .collect()
}

/// Session data for ι_p at a fixed precision.
#[derive(Clone, Debug)]
pub struct PadicContext {
    pub p: u64,
    pub d: usize,
    pub precision: u32,
    conductor: u64,
    q: u64,
    /// The residue polynomial f (lower coefficients; f is monic).
    pub modulus_poly: Vec<u64>,
    /// Residue of ζ_M in F_p[x]/(f), the seed of the Teichmüller lift.
    pub teich_seed: Vec<u64>,
    ring: PolyRing,
    teich_root: Elem,
    sqrtq_image: Elem,
    root_powers: Vec<Elem>,
}

#[derive(Serialize)]
struct ContextJson<'a> {
    p: u64,
    d: usize,
    precision: u32,
    modulus_poly: &'a [u64],
    teich_seed: &'a [u64],
}

impl PadicContext {
    pub fn new(cyc: &Arc<CycField>, p: u64, precision: u32) -> Result<Self> {
        let m = cyc.conductor();
        let q = cyc.q();
        if p == 2 {
            return Err(Error::InvalidParams(
                "p = 2 is not supported by the p-adic layer".into(),
            ));
        }
        if !crate::arith::is_prime(p) || m.is_multiple_of(p) || q.is_multiple_of(p) {
            return Err(Error::InvalidParams(format!(
                "p = {p} must be an odd prime prime to M and q"
            )));
        }
        if precision == 0 {
            return Err(Error::InvalidParams("precision must be positive".into()));
        }
        let mut d = mult_order(p % m, m) as usize;
        let q_is_residue = pow_mod(q % p, (p - 1) / 2, p) == 1;
        if d % 2 == 1 && !q_is_residue {
            d *= 2;
        }
        let modulus_poly = (0..)
            .map(|k| nth_residue(k, d, p))
            .find(|f| is_irreducible(f, p))
            .unwrap();
        let residue = PolyRing {
            f: modulus_poly.iter().map(|&c| BigInt::from(c)).collect(),
            modulus: BigInt::from(p),
        };
        let group_order = BigUint::from(p).pow(d as u32) - 1u32;
        let cofactor = &group_order / m;
        let m_primes = prime_factors(m);
        let of_order_m = |z: &Elem| {
            residue.is_one(&residue.pow(z, &BigUint::from(m)))
                && m_primes
                    .iter()
                    .all(|r| !residue.is_one(&residue.pow(z, &BigUint::from(m / r))))
        };
        let seed = (1..)
            .map(|k| {
                let g: Elem = nth_residue(k, d, p).into_iter().map(BigInt::from).collect();
                residue.pow(&g, &cofactor)
            })
            .find(|z| of_order_m(z))
            .unwrap();

        let modulus = BigInt::from(p).pow(precision);
        let ring = PolyRing {
            f: residue.f.clone(),
            modulus: modulus.clone(),
        };
        let steps = 64 - (precision as u64).leading_zeros() + 2;

        // Newton for ω^M = 1, with 1/ω^M ≈ 2 − ω^M
        let m_inv = crate::arith::mod_inverse(&BigInt::from(m), &modulus).expect("M prime to p");
        let two = ring.constant(BigInt::from(2));
        let one = ring.constant(BigInt::one());
        let mut w = seed.clone();
        for _ in 0..steps {
            let wm = ring.pow(&w, &BigUint::from(m));
            let corr = ring.mul(&ring.mul(&w, &ring.sub(&wm, &one)), &ring.sub(&two, &wm));
            w = ring.sub(&w, &ring.scale(&corr, &m_inv));
        }

        // a residue square root of q, then Newton for y = 1/√q
        let qr = residue.constant(BigInt::from(q));
        let s = fq_sqrt(&residue, &qr, &group_order, d, p)
            .ok_or_else(|| Error::InvalidParams("q has no square root in the residue field".into()))?;
        let mut y = residue.pow(&s, &(&group_order - 1u32));
        let half = crate::arith::mod_inverse(&BigInt::from(2), &modulus).unwrap();
        let three = ring.constant(BigInt::from(3));
        let qe = ring.constant(BigInt::from(q));
        for _ in 0..steps {
            let t = ring.sub(&three, &ring.mul(&qe, &ring.mul(&y, &y)));
            y = ring.scale(&ring.mul(&y, &t), &half);
        }
        let sqrtq_image = ring.mul(&qe, &y);

        let mut root_powers = vec![one.clone()];
        for _ in 1..cyc.degree() {
            let last = root_powers.last().unwrap();
            root_powers.push(ring.mul(last, &w));
        }
        let ctx = PadicContext {
            p,
            d,
            precision,
            conductor: m,
            q,
            modulus_poly,
            teich_seed: seed.iter().map(|c| c.to_u64().unwrap()).collect(),
            ring,
            teich_root: w,
            sqrtq_image,
            root_powers,
        };
        debug_assert!(ctx.invariants_hold());
        Ok(ctx)
    }

    /// ω^M = 1 with ω primitive, and (√q)² = q, modulo p^precision.
    pub fn invariants_hold(&self) -> bool {
        let r = &self.ring;
        let m = self.conductor;
        let w = &self.teich_root;
        let root = r.is_one(&r.pow(w, &BigUint::from(m)));
        let residue = PolyRing {
            f: r.f.clone(),
            modulus: BigInt::from(self.p),
        };
        let w1 = residue.reduce_coeffs(w.clone());
        let primitive = prime_factors(m)
            .iter()
            .all(|q| !residue.is_one(&residue.pow(&w1, &BigUint::from(m / q))));
        let s = &self.sqrtq_image;
        let sq = r.sub(&r.mul(s, s), &r.constant(BigInt::from(self.q)));
        root && primitive && r.is_zero(&sq)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ContextJson {
            p: self.p,
            d: self.d,
            precision: self.precision,
            modulus_poly: &self.modulus_poly,
            teich_seed: &self.teich_seed,
        })
        .unwrap()
    }

    fn embed_rational(&self, r: &Rational) -> Result<BigInt> {
        residue_mod(r, &self.ring.modulus)
    }

    pub fn embed(&self, x: &CycScalar) -> Result<PadicValue> {
        let r = &self.ring;
        let part = |coords: &[Rational]| -> Result<Elem> {
            let mut acc = r.constant(BigInt::zero());
            for (c, pw) in coords.iter().zip(&self.root_powers) {
                if !c.is_zero() {
                    acc = r.add(&acc, &r.scale(pw, &self.embed_rational(c)?));
                }
            }
            Ok(acc)
        };
        let a = part(x.rational_coords())?;
        let b = part(x.sqrt_coords())?;
        Ok(PadicValue {
            coeffs: r.add(&a, &r.mul(&b, &self.sqrtq_image)),
        })
    }

    pub fn teich_root(&self) -> PadicValue {
        PadicValue {
            coeffs: self.teich_root.clone(),
        }
    }

    pub fn sqrtq_image(&self) -> PadicValue {
        PadicValue {
            coeffs: self.sqrtq_image.clone(),
        }
    }

    pub fn mul(&self, a: &PadicValue, b: &PadicValue) -> PadicValue {
        PadicValue {
            coeffs: self.ring.mul(&a.coeffs, &b.coeffs),
        }
    }

    pub fn add(&self, a: &PadicValue, b: &PadicValue) -> PadicValue {
        PadicValue {
            coeffs: self.ring.add(&a.coeffs, &b.coeffs),
        }
    }

    pub fn pow(&self, a: &PadicValue, e: u64) -> PadicValue {
        PadicValue {
            coeffs: self.ring.pow(&a.coeffs, &BigUint::from(e)),
        }
    }

    pub fn from_int(&self, n: i64) -> PadicValue {
        PadicValue {
            coeffs: self.ring.constant(BigInt::from(n)),
        }
    }

    /// Valuation of an embedded value; `None` when it vanishes to full precision.
    pub fn valuation(&self, v: &PadicValue) -> Option<u32> {
        v.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| crate::arith::v_int(c, self.p) as u32)
            .min()
    }

    /// v_p(ι_p(x)) at this precision.
    pub fn vp(&self, x: &CycScalar) -> Result<Vp> {
        if x.is_zero() {
            return Ok(Vp::Infinite);
        }
        match self.valuation(&self.embed(x)?) {
            Some(v) => Ok(Vp::Finite(v)),
            None => Err(Error::PrecisionInconclusive),
        }
    }
}

/// A square root in F_p[x]/(f) by Tonelli–Shanks, normalized to the
/// lexicographically smaller of ±s.
fn fq_sqrt(ring: &PolyRing, a: &Elem, order: &BigUint, d: usize, p: u64) -> Option<Elem> {
    let one = ring.constant(BigInt::one());
    let half = order >> 1;
    if !ring.is_one(&ring.pow(a, &half)) {
        return None;
    }
    let mut s = 0u64;
    let mut t = order.clone();
    while !t.bit(0) {
        t >>= 1;
        s += 1;
    }
    let minus_one = ring.constant(BigInt::from(-1));
    let z = (1..)
        .map(|k| nth_residue(k, d, p).into_iter().map(BigInt::from).collect::<Elem>())
        .find(|c| ring.pow(c, &half) == minus_one)?;
    let mut mm = s;
    let mut c = ring.pow(&z, &t);
    let mut tt = ring.pow(a, &t);
    let mut r = ring.pow(a, &((&t + 1u32) >> 1));
    while !ring.is_one(&tt) {
        let mut i = 0;
        let mut x = tt.clone();
        while !ring.is_one(&x) {
            x = ring.mul(&x, &x);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(mm - i - 1) {
            b = ring.mul(&b, &b);
        }
        r = ring.mul(&r, &b);
        c = ring.mul(&b, &b);
        tt = ring.mul(&tt, &c);
        mm = i;
    }
    let neg = ring.sub(&ring.constant(BigInt::zero()), &r);
    let _ = one;
    let key = |e: &Elem| e.iter().rev().cloned().collect::<Vec<_>>();
    Some(if key(&neg) < key(&r) { neg } else { r })
}

/// An element of W/p^precision in the basis 1, x, …, x^{d−1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicValue {
    pub coeffs: Vec<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Vp {
    Finite(u32),
    Infinite,
}

/// Contexts at precisions 40, 80, … up to 640, built on demand.
#[derive(Debug)]
pub struct PadicTower {
    cyc: Arc<CycField>,
    p: u64,
    levels: std::sync::Mutex<Vec<Arc<PadicContext>>>,
}

impl PadicTower {
    pub fn new(cyc: &Arc<CycField>, p: u64) -> Result<Self> {
        let base = PadicContext::new(cyc, p, DEFAULT_PRECISION)?;
        Ok(PadicTower {
            cyc: cyc.clone(),
            p,
            levels: std::sync::Mutex::new(vec![Arc::new(base)]),
        })
    }

    pub fn base(&self) -> Arc<PadicContext> {
        self.levels.lock().unwrap()[0].clone()
    }

    fn level(&self, i: usize) -> Result<Arc<PadicContext>> {
        let mut lv = self.levels.lock().unwrap();
        while lv.len() <= i {
            let prec = lv.last().unwrap().precision * 2;
            lv.push(Arc::new(PadicContext::new(&self.cyc, self.p, prec)?));
        }
        Ok(lv[i].clone())
    }

    /// v_p with precision doubling; gives up above 640.
    pub fn vp(&self, x: &CycScalar) -> Result<(Vp, u32)> {
        let mut i = 0;
        loop {
            let ctx = self.level(i)?;
            match ctx.vp(x) {
                Ok(v) => return Ok((v, ctx.precision)),
                Err(Error::PrecisionInconclusive) if ctx.precision * 2 <= MAX_PRECISION => i += 1,
                Err(e) => return Err(e),
            }
        }
    }
}

/// v_p of a rational (`None` for 0).
pub fn vp_rational(r: &Rational, p: u64) -> Option<i64> {
    crate::arith::v_rat(r, p)
}

/// |∫ f dx|_p ≤ sup |f|_p, i.e. v_p(∫f) ≥ min v_p(coefficients).
pub fn check_ultrametric(f: &StepFunction, tower: &PadicTower) -> Result<bool> {
    let integral = haar_integral(f);
    let lhs = tower.vp(&integral)?.0;
    let mut rhs = Vp::Infinite;
    for (_, c) in f.terms() {
        rhs = rhs.min(tower.vp(c)?.0);
    }
    Ok(lhs >= rhs)
}

/// Riemann–Lebesgue data with both witnesses re-checked on the transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannLebesgueCheck {
    pub data: RiemannLebesgue,
    pub bounded_support: bool,
    pub vanishes_near_zero: bool,
}

pub fn check_riemann_lebesgue(f: &StepFunction) -> Result<RiemannLebesgueCheck> {
    let field = f.field();
    let data = riemann_lebesgue(f)?;
    let fhat = fourier(f, Sign::Zeta)?;
    let bounded_support = match (data.support_bound, fhat.support_min_valuation()) {
        (_, None) => true,
        (Some(b), Some(v)) => v >= b,
        (None, Some(_)) => false,
    };
    let vanishes_near_zero = match data.vanishing_witness {
        Some(m) => fhat.mul(&StepFunction::ball(field, m - field.delta()))?.is_zero(),
        None => false,
    };
    Ok(RiemannLebesgueCheck {
        data,
        bounded_support,
        vanishes_near_zero,
    })
}
