//! Small exact-arithmetic helpers over `BigRational` and machine integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^exp` for a possibly negative exponent.
pub fn rat_pow(base: &Rational, exp: i64) -> Rational {
    let r = num_traits::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp < 0 {
        r.recip()
    } else {
        r
    }
}

/// Multiplicity of the prime `p` in a nonzero integer.
pub fn v_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn v_rat(r: &Rational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(v_int(r.numer(), p) - v_int(r.denom(), p))
}

/// Strip the p-part: returns (v, u) with r = p^v·u and u a p-adic unit.
pub fn split_p(r: &Rational, p: u64) -> Option<(i64, Rational)> {
    let v = v_rat(r, p)?;
    Some((v, r / rat_pow(&int(p as i64), v)))
}

/// Residue of a p-integral rational modulo `m` (a power of p, or any modulus
/// coprime to the denominator).
pub fn residue_mod(r: &Rational, m: &BigInt) -> Result<BigInt> {
    let n = r.numer().mod_floor(m);
    let d = r.denom().mod_floor(m);
    let inv = mod_inverse(&d, m).ok_or(Error::DenominatorDivisibleByP)?;
    Ok((n * inv).mod_floor(m))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

pub fn residue_u64(r: &Rational, m: u64) -> Result<u64> {
    Ok(residue_mod(r, &BigInt::from(m))?.to_u64().expect("residue fits"))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

/// `base^exp mod m` on machine integers.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `a` modulo `m` (gcd(a,m) = 1 assumed).
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut k = 1;
    let mut x = a % m;
    while x != 1 {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        k += 1;
    }
    k
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn abs_cmp_one(r: &Rational) -> std::cmp::Ordering {
    r.abs().cmp(&Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(v_rat(&rat(50, 3), 5), Some(2));
        assert_eq!(v_rat(&rat(2, 25), 5), Some(-2));
        assert_eq!(v_rat(&int(0), 5), None);
    }

    #[test]
    fn residues() {
        // 1/2 mod 9 = 5
        assert_eq!(residue_u64(&rat(1, 2), 9).unwrap(), 5);
        assert!(residue_u64(&rat(1, 3), 9).is_err());
    }

    #[test]
    fn rational_text_roundtrip() {
        for r in [rat(-3, 7), int(5), rat(0, 1)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(5, 162), 54);
        assert_eq!(mult_order(5, 32), 8);
        assert_eq!(euler_phi(162), 54);
        assert_eq!(prime_factors(162), vec![2, 3]);
    }
}
