//! JSON encodings of fields, elements, polynomials, symbols, matrices, and
//! canonical classes. Exact values are always strings or integer arrays.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use mkt_core::goodwillie::{CompositionFactor, MatrixTuple};
use mkt_core::symbols::{ClassPayload, SymbolExpr};
use mkt_core::valuations::Valuation;
use mkt_core::{Elem, Field, KCanonicalClass, Matrix, MilnorExpression, Poly, RationalFunction};

use crate::error::CliError;

type Res<T> = std::result::Result<T, CliError>;

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

pub fn get<'a>(v: &'a Value, key: &str) -> Res<&'a Value> {
    v.get(key)
        .ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn as_u64(v: &Value, what: &str) -> Res<u64> {
    v.as_u64()
        .ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Res<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))
}

/// `{"kind":"Q"}` or `{"kind":"Fq","p":3,"deg":2,"modulus":[1,0,1]}`.
pub fn parse_field(v: &Value) -> Res<Field> {
    let kind = get(v, "kind")?
        .as_str()
        .ok_or_else(|| parse_err("field kind must be a string"))?;
    match kind {
        "Q" => Ok(Field::rationals()),
        "Fq" | "Fp" => {
            let p = as_u64(get(v, "p")?, "p")?;
            let deg = v
                .get("deg")
                .map(|d| as_u64(d, "deg"))
                .transpose()?
                .map(|d| d as usize);
            let fp = Field::prime(p)?;
            let Some(m) = v.get("modulus") else {
                return Ok(Field::finite(p, deg.unwrap_or(1))?);
            };
            let modulus = parse_poly(&fp, m)?;
            let actual = modulus.degree().unwrap_or(0);
            if deg.is_some_and(|d| d != actual) {
                return Err(parse_err(format!(
                    "modulus has degree {actual} but deg is {}",
                    deg.unwrap_or(0)
                )));
            }
            if actual == 1 {
                return Ok(fp);
            }
            Ok(Field::extension(&fp, &modulus)?)
        }
        other => Err(parse_err(format!("unknown field kind {other:?}"))),
    }
}

/// Short field names for command-line flags: `Q`, `F5`, `F9`, or a JSON block.
pub fn parse_field_flag(s: &str) -> Res<Field> {
    let t = s.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).map_err(|e| parse_err(e.to_string()))?;
        return parse_field(&v);
    }
    if t == "Q" {
        return Ok(Field::rationals());
    }
    let q = t
        .strip_prefix("F_")
        .or_else(|| t.strip_prefix('F'))
        .and_then(|n| n.parse::<u64>().ok())
        .ok_or_else(|| parse_err(format!("unknown field {t:?}; use Q, F<q>, or a JSON block")))?;
    Ok(Field::galois(q)?)
}

pub fn field_json(k: &Field) -> Value {
    if k.is_rationals() {
        return json!({"kind": "Q"});
    }
    if k.is_finite() && k.depth() <= 1 {
        let p = k.characteristic();
        let mut m = Map::new();
        m.insert("kind".into(), json!("Fq"));
        m.insert("p".into(), json!(p));
        m.insert("deg".into(), json!(k.degree()));
        if let Some(modulus) = k.modulus() {
            m.insert("modulus".into(), poly_json(&modulus));
        }
        return Value::Object(m);
    }
    json!({"kind": "tower", "degree": k.degree(), "description": k.to_string()})
}

/// Compact name used in class reports: `Q`, `F5`, `F9`, or the tower.
pub fn field_name(k: &Field) -> String {
    if k.is_rationals() {
        "Q".into()
    } else if k.is_finite() {
        format!("F{}", k.order().expect("finite"))
    } else {
        k.to_string()
    }
}

fn parse_rational(v: &Value) -> Res<BigRational> {
    match v {
        Value::String(s) => {
            BigRational::from_str(s.trim()).map_err(|_| parse_err(format!("bad rational {s:?}")))
        }
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| parse_err(format!("{n} is not an integer; write rationals as \"p/q\""))),
        _ => Err(parse_err(format!("expected a rational, got {v}"))),
    }
}

/// Rationals as `"p/q"` strings or integers; prime-field elements as
/// integers; extension elements as coefficient arrays over the base.
pub fn parse_elem(k: &Field, v: &Value) -> Res<Elem> {
    if let Some(base) = k.base() {
        if let Value::Array(cs) = v {
            let coeffs = cs
                .iter()
                .map(|c| parse_elem(base, c))
                .collect::<Res<Vec<_>>>()?;
            return Ok(k.from_coeffs(&coeffs)?);
        }
        return Ok(k.embed(&parse_elem(&k.prime_field(), v)?)?);
    }
    let r = parse_rational(v)?;
    if k.is_rationals() {
        return Ok(k.rational(r)?);
    }
    let n = k.from_i64(reduce(r.numer(), k.characteristic()));
    let d = k.from_i64(reduce(r.denom(), k.characteristic()));
    Ok(n.checked_div(&d)?)
}

fn reduce(n: &BigInt, p: u64) -> i64 {
    use num_integer::Integer;
    n.mod_floor(&BigInt::from(p)).to_i64().expect("below p")
}

pub fn elem_json(x: &Elem) -> Value {
    let k = x.field();
    if k.base().is_some() {
        return Value::Array(x.coefficients().iter().map(elem_json).collect());
    }
    if let Some(r) = x.as_rational() {
        return json!(r.to_string());
    }
    json!(x.as_residue().expect("prime field element"))
}

/// Coefficient arrays, lowest degree first.
pub fn parse_poly(k: &Field, v: &Value) -> Res<Poly> {
    let cs = as_array(v, "polynomial")?;
    let coeffs = cs
        .iter()
        .map(|c| parse_elem(k, c))
        .collect::<Res<Vec<_>>>()?;
    Ok(Poly::new(k, &coeffs)?)
}

pub fn poly_json(f: &Poly) -> Value {
    Value::Array(f.coeffs().iter().map(elem_json).collect())
}

/// A coefficient array or `{"num": [...], "den": [...]}`.
pub fn parse_ratfun(k: &Field, v: &Value) -> Res<RationalFunction> {
    if v.is_array() {
        return Ok(RationalFunction::from_poly(&parse_poly(k, v)?));
    }
    let num = parse_poly(k, get(v, "num")?)?;
    let den = match v.get("den") {
        Some(d) => parse_poly(k, d)?,
        None => Poly::one(k),
    };
    Ok(RationalFunction::new(&num, &den)?)
}

fn parse_terms<E, F>(v: &Value, mut entry: F) -> Res<Vec<(i64, Vec<E>)>>
where
    F: FnMut(&Value) -> Res<E>,
{
    let items = as_array(v, "symbols")?;
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        let coeff = match item.get("coeff") {
            Some(c) => c
                .as_i64()
                .ok_or_else(|| parse_err("coeff must be an integer"))?,
            None => 1,
        };
        let entries = as_array(get(item, "entries")?, "entries")?
            .iter()
            .map(&mut entry)
            .collect::<Res<Vec<_>>>()?;
        out.push((coeff, entries));
    }
    Ok(out)
}

fn weight_of<E>(terms: &[(i64, Vec<E>)], declared: Option<&Value>) -> Res<usize> {
    if let Some(l) = declared {
        return Ok(as_u64(l, "l")? as usize);
    }
    terms
        .first()
        .map(|(_, e)| e.len())
        .ok_or_else(|| parse_err("an empty expression needs an explicit \"l\""))
}

/// `[{"coeff": n, "entries": [...]}]` over `k`; `l` is needed only when empty.
pub fn parse_milnor(k: &Field, v: &Value, l: Option<&Value>) -> Res<MilnorExpression> {
    let terms = parse_terms(v, |e| parse_elem(k, e))?;
    let w = weight_of(&terms, l)?;
    Ok(MilnorExpression::from_terms(k, w, terms)?)
}

pub fn parse_function_symbol(
    k: &Field,
    v: &Value,
    l: Option<&Value>,
) -> Res<SymbolExpr<RationalFunction>> {
    let terms = parse_terms(v, |e| parse_ratfun(k, e))?;
    let w = weight_of(&terms, l)?;
    Ok(SymbolExpr::from_terms(k, w, terms)?)
}

pub fn milnor_json(x: &MilnorExpression) -> Value {
    Value::Array(
        x.terms()
            .map(|(e, c)| json!({"coeff": c, "entries": e.iter().map(elem_json).collect::<Vec<_>>()}))
            .collect(),
    )
}

/// `{"zero":true}` or `{"l":2,"field":"Q","eps_inf":-1,"tame":{"3":"2"}}`.
pub fn class_json(c: &KCanonicalClass) -> Value {
    let head = |m: &mut Map<String, Value>| {
        m.insert("l".into(), json!(c.weight()));
        m.insert("field".into(), json!(field_name(c.field())));
    };
    let mut m = Map::new();
    match c.payload() {
        ClassPayload::Zero => return json!({"zero": true}),
        ClassPayload::Integer(n) => {
            head(&mut m);
            m.insert("integer".into(), json!(n));
        }
        ClassPayload::UnitValue(u) => {
            head(&mut m);
            m.insert("unit".into(), elem_json(u));
        }
        ClassPayload::RationalClass { eps_inf, tame } => {
            head(&mut m);
            m.insert("eps_inf".into(), json!(eps_inf));
            let t: Map<String, Value> = tame
                .iter()
                .map(|(p, r)| (p.to_string(), json!(r.to_string())))
                .collect();
            m.insert("tame".into(), Value::Object(t));
        }
        ClassPayload::RationalSign(e) => {
            head(&mut m);
            m.insert("eps_inf".into(), json!(e));
        }
        ClassPayload::RealSign(e) => {
            m.insert("l".into(), json!(c.weight()));
            m.insert("field".into(), json!("R"));
            m.insert("eps_inf".into(), json!(e));
        }
    }
    Value::Object(m)
}

/// `"inf"` or the coefficient array of a monic irreducible polynomial.
pub fn parse_place(k: &Field, v: &Value) -> Res<Valuation> {
    match v {
        Value::String(s) if s == "inf" => Ok(Valuation::infinite(k)),
        Value::Array(_) => Ok(Valuation::finite(&parse_poly(k, v)?)?),
        _ => Err(parse_err(
            "place must be \"inf\" or a polynomial coefficient array",
        )),
    }
}

pub fn place_json(v: &Valuation) -> Value {
    match v.uniformizer() {
        Some(pi) => json!({"place": poly_json(pi), "degree": v.degree(), "name": v.to_string()}),
        None => json!({"place": "inf", "degree": 1, "name": v.to_string()}),
    }
}

pub fn parse_matrix(k: &Field, v: &Value) -> Res<Matrix> {
    let rows = as_array(v, "matrix")?;
    let parsed = rows
        .iter()
        .map(|r| {
            as_array(r, "matrix row")?
                .iter()
                .map(|e| parse_elem(k, e))
                .collect::<Res<Vec<_>>>()
        })
        .collect::<Res<Vec<_>>>()?;
    if parsed.is_empty() {
        return Err(parse_err("empty matrix"));
    }
    Ok(Matrix::from_rows(k, &parsed)?)
}

/// The `matrices` list of `v`, one row-major matrix per slot; `size` is
/// needed only for the empty tuple.
pub fn parse_tuple(k: &Field, v: &Value) -> Res<MatrixTuple> {
    let mats = as_array(get(v, "matrices")?, "matrices")?
        .iter()
        .map(|m| parse_matrix(k, m))
        .collect::<Res<Vec<_>>>()?;
    match v.get("size") {
        Some(n) => Ok(MatrixTuple::new(k, as_u64(n, "size")? as usize, mats)?),
        None => Ok(MatrixTuple::from_matrices(mats)?),
    }
}

pub fn factor_json(f: &CompositionFactor) -> Value {
    json!({
        "extension": field_json(&f.extension),
        "degree": f.extension.degree(),
        "scalars": f.scalars.iter().map(elem_json).collect::<Vec<_>>(),
        "multiplicity": f.multiplicity,
    })
}
