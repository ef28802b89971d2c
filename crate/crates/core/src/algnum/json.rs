//! JSON form `{"minpoly":[a0,...,ad],"approx":[re,im]}`. Coefficients that
//! fit in an `i64` are numbers, larger ones are decimal strings.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::{AlgebraicNumber, ProjPoint};
use crate::error::{Error, Result};
use crate::zpoly::IntPoly;

pub(crate) fn coeff_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

pub(crate) fn poly_json(f: &IntPoly) -> Value {
    Value::Array(f.coeffs().iter().map(coeff_json).collect())
}

fn coeff_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::invalid(format!("coefficient {n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("coefficient {s:?} is not an integer"))),
        other => Err(Error::invalid(format!("bad coefficient {other}"))),
    }
}

impl AlgebraicNumber {
    pub fn to_json(&self) -> Value {
        let (re, im) = self.approx();
        json!({ "minpoly": poly_json(self.minpoly()), "approx": [re, im] })
    }

    /// Rebuild from the JSON form: the root of `minpoly` nearest `approx`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let coeffs = v
            .get("minpoly")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("missing \"minpoly\" array"))?
            .iter()
            .map(coeff_from_json)
            .collect::<Result<Vec<_>>>()?;
        let approx = v
            .get("approx")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::invalid("missing \"approx\" pair"))?;
        let re = approx[0].as_f64().ok_or_else(|| Error::invalid("approx must be numeric"))?;
        let im = approx[1].as_f64().ok_or_else(|| Error::invalid("approx must be numeric"))?;
        AlgebraicNumber::nearest_root(&IntPoly::new(coeffs), re, im)
    }
}

impl ProjPoint {
    /// The point at infinity is the string `"inf"`.
    pub fn to_json(&self) -> Value {
        match self {
            ProjPoint::Infinity => json!("inf"),
            ProjPoint::Finite(a) => a.to_json(),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if v.as_str() == Some("inf") {
            return Ok(ProjPoint::Infinity);
        }
        Ok(ProjPoint::Finite(AlgebraicNumber::from_json(v)?))
    }
}
