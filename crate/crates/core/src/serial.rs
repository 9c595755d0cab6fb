//! JSON forms of the library's values. Rationals travel as "num/den"
//! strings so that round trips are bit-exact.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::arith::{format_rational, parse_rational, Rational};
use crate::characters::{Character, LambdaParam};
use crate::error::{Error, Result};
use crate::localfield::{KElement, LocalField};
use crate::scalars::{CycField, CycScalar, LaurentPoly, RationalFunc};
use crate::stepfun::{Direction, GeoTail, ShellFunction, StepFunction};
use crate::zeta::{Ext, Interval, ZetaValue};

fn bad(what: &str) -> Error {
    Error::Parse(format!("malformed {what}"))
}

fn field_of<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("{what}: missing \"{key}\"")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad(what))
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Accepts "num/den" strings and plain JSON integers.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| bad("rational")),
        _ => Err(bad("rational")),
    }
}

pub fn kelement_to_json(x: &KElement) -> Value {
    match x.finite_digits() {
        Some(d) => json!({ "digits": d }),
        None => json!({ "coords": x.coords().iter().map(rational_to_json).collect::<Vec<_>>() }),
    }
}

pub fn kelement_from_json(field: &LocalField, v: &Value) -> Result<KElement> {
    if let Some(d) = v.get("digits") {
        let pairs = as_array(d, "digits")?
            .iter()
            .map(|p| {
                let p = as_array(p, "digit pair")?;
                match p.as_slice() {
                    [j, c] => Ok((as_i64(j, "digit position")?, c.as_u64().ok_or_else(|| bad("digit"))?)),
                    _ => Err(bad("digit pair")),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        field.from_digits(&pairs)
    } else if let Some(c) = v.get("coords") {
        let coords = as_array(c, "coords")?
            .iter()
            .map(rational_from_json)
            .collect::<Result<Vec<_>>>()?;
        KElement::from_coords(field.ell(), field.e(), coords)
    } else {
        Err(bad("field element"))
    }
}

/// Coordinates in the power basis of ζ_M, trailing zeros dropped.
pub fn cyc_to_json(x: &CycScalar) -> Value {
    let trimmed = |c: &[Rational]| {
        let len = c.iter().rposition(|r| !r.is_zero()).map_or(0, |i| i + 1);
        c[..len].iter().map(rational_to_json).collect::<Vec<_>>()
    };
    json!({
        "a": trimmed(x.rational_coords()),
        "b": trimmed(x.sqrt_coords()),
        "M": x.field().conductor(),
    })
}

pub fn cyc_from_json(cyc: &Arc<CycField>, v: &Value) -> Result<CycScalar> {
    let m = field_of(v, "M", "scalar")?
        .as_u64()
        .ok_or_else(|| bad("scalar conductor"))?;
    if m != cyc.conductor() {
        return Err(Error::Parse(format!(
            "scalar has M = {m}, session has {}",
            cyc.conductor()
        )));
    }
    let coords = |key: &str| -> Result<Vec<Rational>> {
        match v.get(key) {
            None => Ok(vec![]),
            Some(a) => as_array(a, "scalar coordinates")?
                .iter()
                .map(rational_from_json)
                .collect(),
        }
    };
    let (a, b) = (coords("a")?, coords("b")?);
    if a.len() > cyc.degree() || b.len() > cyc.degree() {
        return Err(bad("scalar (too many coordinates)"));
    }
    Ok(CycScalar::from_coords(cyc, &a, &b))
}

pub fn laurent_to_json(p: &LaurentPoly) -> Value {
    json!({
        "terms": p.terms().map(|(n, c)| json!([n, cyc_to_json(c)])).collect::<Vec<_>>(),
        "text": p.to_string(),
    })
}

pub fn laurent_from_json(cyc: &Arc<CycField>, v: &Value) -> Result<LaurentPoly> {
    let mut out = LaurentPoly::zero(cyc);
    for t in as_array(field_of(v, "terms", "Laurent polynomial")?, "terms")? {
        match as_array(t, "term")?.as_slice() {
            [n, c] => out.add_term(as_i64(n, "exponent")?, &cyc_from_json(cyc, c)?),
            _ => return Err(bad("term")),
        }
    }
    Ok(out)
}

fn ext_to_json(x: Ext) -> Value {
    match x {
        Ext::NegInf => json!("-inf"),
        Ext::Fin(t) => json!(t),
        Ext::PosInf => json!("inf"),
    }
}

/// [lo, hi] as exponents t of |λ|_p = p^t, with the openness of each end.
pub fn interval_to_json(i: &Interval) -> Value {
    json!({
        "bounds": [ext_to_json(i.lo), ext_to_json(i.hi)],
        "open": [i.lo_open, i.hi_open],
        "text": i.to_string(),
    })
}

pub fn rational_func_to_json(f: &RationalFunc) -> Value {
    json!({ "num": laurent_to_json(f.num()), "den": laurent_to_json(f.den()), "text": f.to_string() })
}

pub fn zeta_value_to_json(z: &ZetaValue) -> Value {
    json!({
        "num": laurent_to_json(z.value.num()),
        "den": laurent_to_json(z.value.den()),
        "annulus": interval_to_json(&z.annulus),
        "text": z.value.to_string(),
    })
}

pub fn step_to_json(f: &StepFunction) -> Value {
    let field = f.field();
    json!({
        "terms": f.terms().iter().map(|(c, v)| json!({
            "rep": kelement_to_json(&c.rep(field)),
            "level": c.level,
            "coeff": cyc_to_json(v),
        })).collect::<Vec<_>>()
    })
}

pub fn step_from_json(field: &Arc<LocalField>, v: &Value) -> Result<StepFunction> {
    let terms = as_array(field_of(v, "terms", "step function")?, "terms")?
        .iter()
        .map(|t| {
            let rep = kelement_from_json(field, field_of(t, "rep", "term")?)?;
            let level = as_i64(field_of(t, "level", "term")?, "level")?;
            let coeff = cyc_from_json(field.cyc(), field_of(t, "coeff", "term")?)?;
            Ok((rep.reduce(level), coeff))
        })
        .collect::<Result<Vec<_>>>()?;
    StepFunction::from_terms(field, terms)
}

pub fn tail_to_json(t: &GeoTail) -> Value {
    json!({
        "direction": match t.direction {
            Direction::TowardZero => "toward_zero",
            Direction::TowardInfinity => "toward_infinity",
        },
        "start": t.start,
        "ratio": rational_to_json(&t.ratio),
        "coeff": cyc_to_json(&t.coeff),
    })
}

pub fn tail_from_json(field: &Arc<LocalField>, v: &Value) -> Result<GeoTail> {
    let direction = match field_of(v, "direction", "tail")?.as_str() {
        Some("toward_zero") => Direction::TowardZero,
        Some("toward_infinity") => Direction::TowardInfinity,
        _ => return Err(bad("tail direction")),
    };
    GeoTail::new(
        direction,
        as_i64(field_of(v, "start", "tail")?, "tail start")?,
        rational_from_json(field_of(v, "ratio", "tail")?)?,
        cyc_from_json(field.cyc(), field_of(v, "coeff", "tail")?)?,
        field.params().p,
    )
}

pub fn shell_to_json(f: &ShellFunction) -> Value {
    let mut v = step_to_json(&f.step);
    v["tails"] = Value::Array(f.tails.iter().map(tail_to_json).collect());
    v
}

/// Reads a step function, with optional "tails".
pub fn shell_from_json(field: &Arc<LocalField>, v: &Value) -> Result<ShellFunction> {
    let step = step_from_json(field, v)?;
    let tails = match v.get("tails") {
        None => vec![],
        Some(t) => as_array(t, "tails")?
            .iter()
            .map(|t| tail_from_json(field, t))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(ShellFunction::new(step, tails))
}

pub fn lambda_to_json(l: &LambdaParam) -> Value {
    match l {
        LambdaParam::Formal { scale, power } if *scale == Rational::from_integer(1.into()) && *power == 1 => {
            json!("FORMAL")
        }
        LambdaParam::Formal { scale, power } => json!({ "scale": rational_to_json(scale), "power": power }),
        LambdaParam::Concrete(c) => match c.as_rational() {
            Some(r) => rational_to_json(&r),
            None => cyc_to_json(c),
        },
    }
}

pub fn lambda_from_json(field: &LocalField, v: &Value) -> Result<LambdaParam> {
    match v {
        Value::String(s) if s == "FORMAL" => Ok(LambdaParam::formal()),
        Value::String(_) | Value::Number(_) => Ok(LambdaParam::rational(rational_from_json(v)?, field)),
        Value::Object(o) if o.contains_key("power") => Ok(LambdaParam::Formal {
            scale: rational_from_json(field_of(v, "scale", "lambda")?)?,
            power: as_i64(field_of(v, "power", "lambda")?, "lambda power")?,
        }),
        Value::Object(_) => Ok(LambdaParam::Concrete(cyc_from_json(field.cyc(), v)?)),
        _ => Err(bad("lambda")),
    }
}

pub fn character_to_json(chi: &Character) -> Value {
    let field = chi.field();
    let cyc = field.cyc();
    json!({
        "level": chi.level(),
        "unit_values": chi.table().iter().map(|(c, &k)| json!([
            kelement_to_json(&c.rep(field)),
            cyc_to_json(&CycScalar::root(cyc, k)),
        ])).collect::<Vec<_>>(),
        "lambda": lambda_to_json(&chi.lambda),
    })
}

/// The exponent k with x = ζ_M^k, if x is an M-th root of unity.
pub fn root_exponent(x: &CycScalar) -> Option<i64> {
    let cyc = x.field();
    (0..cyc.conductor() as i64).find(|&k| CycScalar::root(cyc, k) == *x)
}

pub fn character_from_json(field: &Arc<LocalField>, v: &Value) -> Result<Character> {
    let level = as_i64(field_of(v, "level", "character")?, "level")?;
    let mut table = BTreeMap::new();
    for entry in as_array(field_of(v, "unit_values", "character")?, "unit_values")? {
        match as_array(entry, "unit value")?.as_slice() {
            [rep, val] => {
                let u = kelement_from_json(field, rep)?;
                let k = root_exponent(&cyc_from_json(field.cyc(), val)?)
                    .ok_or_else(|| Error::Parse("unit value is not a root of unity".into()))?;
                table.insert(u.reduce(level), k);
            }
            _ => return Err(bad("unit value")),
        }
    }
    let lambda = match v.get("lambda") {
        None => LambdaParam::formal(),
        Some(l) => lambda_from_json(field, l)?,
    };
    Ok(Character::from_table(field, level, &table)?.with_lambda(lambda))
}

/// Machine-readable error object.
pub fn error_to_json(e: &Error) -> Value {
    json!({ "error": e.kind(), "message": e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::localfield::{reference_configs, LocalFieldParams};

    #[test]
    fn round_trips() {
        for params in reference_configs() {
            let k = LocalField::new(params).unwrap();
            let x = k.from_rational(rat(7, 9)).shift(1);
            assert_eq!(kelement_from_json(&k, &kelement_to_json(&x)).unwrap(), x);
            let s = &CycScalar::root(k.cyc(), 5) + &CycScalar::sqrtq(k.cyc()).scale(&rat(-2, 3));
            assert_eq!(cyc_from_json(k.cyc(), &cyc_to_json(&s)).unwrap(), s);
            let f = StepFunction::indicator_at(&k, &x, 3)
                .add(&StepFunction::ball(&k, -1).scale(&s))
                .unwrap();
            assert_eq!(step_from_json(&k, &step_to_json(&f)).unwrap(), f);
            let g = crate::stepfun::g_alpha(&k, &rat(5, 1)).unwrap();
            let back = shell_from_json(&k, &shell_to_json(&g)).unwrap();
            assert!(back.equals(&g).unwrap());
            for chi in Character::all_up_to_level(&k, 2).unwrap() {
                assert_eq!(character_from_json(&k, &character_to_json(&chi)).unwrap(), chi);
            }
        }
    }

    #[test]
    fn text_forms() {
        let k = LocalField::new(LocalFieldParams::new(3, 1, 5, 4).unwrap()).unwrap();
        assert_eq!(kelement_to_json(&k.from_int(4)), json!({"digits": [[0, 1], [1, 1]]}));
        let v = cyc_to_json(&CycScalar::from_rational(k.cyc(), rat(-1, 3)));
        assert_eq!(v["a"][0], json!("-1/3"));
        assert_eq!(v["M"], json!(162));
        let chi = Character::unramified(&k);
        assert_eq!(character_to_json(&chi)["lambda"], json!("FORMAL"));
        assert!(step_from_json(&k, &json!({"terms": 3})).is_err());
        assert_eq!(error_to_json(&bad("x"))["error"], json!("parse"));
    }
}
