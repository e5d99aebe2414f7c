//! One function per single-shot command. Each takes the parsed input
//! document and the resolved base field and returns a report.

use serde_json::{json, Map, Value};

use mkt_core::goodwillie::{composition_series, phi_expression};
use mkt_core::joint_det::{make_determinant, DeterminantSpec, DeterminantValue, HilbertPlace};
use mkt_core::symbols::canonical_class_real;
use mkt_core::transfer::transfer_milnor;
use mkt_core::valuations::{reciprocity_check, support, tame_symbol, Valuation};
use mkt_core::{canonical_class, Field, MilnorExpression};

use crate::error::CliError;
use crate::json::{self, get};
use crate::{Report, SpecArg};

type Res<T> = std::result::Result<T, CliError>;

fn ok(body: Value) -> Res<Report> {
    Ok(Report {
        body,
        violated: false,
    })
}

/// The input's `field` block, falling back to the `--field` flag. When
/// both are present they must describe the same field.
pub fn resolve_field(doc: &Value, flag: Option<&str>) -> Res<Field> {
    let block = doc.get("field").map(json::parse_field).transpose()?;
    let flagged = flag.map(json::parse_field_flag).transpose()?;
    match (block, flagged) {
        (Some(a), Some(b)) if a != b => Err(CliError::Parse(format!(
            "input field {a} disagrees with --field {b}"
        ))),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Err(CliError::Parse(
            "no field: add a \"field\" block or pass --field".into(),
        )),
    }
}

/// Class of an expression, or `null` plus the reason when no canonical
/// form exists for its field and weight.
fn class_or_reason(x: &MilnorExpression, m: &mut Map<String, Value>) {
    match canonical_class(x) {
        Ok(c) => {
            m.insert("class".into(), json::class_json(&c));
        }
        Err(e) => {
            m.insert("class".into(), Value::Null);
            m.insert(
                "class_error".into(),
                CliError::Lib(e).to_json()["error"].clone(),
            );
        }
    }
}

pub fn canon(doc: &Value, k: &Field) -> Res<Report> {
    let x = json::parse_milnor(k, get(doc, "symbols")?, doc.get("l"))?;
    let real = doc.get("real").and_then(Value::as_bool).unwrap_or(false);
    let class = if real {
        canonical_class_real(&x)?
    } else {
        canonical_class(&x)?
    };
    ok(json!({
        "command": "canon",
        "field": json::field_json(k),
        "l": x.weight(),
        "class": json::class_json(&class),
    }))
}

fn place_report(v: &Valuation, residue: &MilnorExpression) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("place".into(), json::place_json(v));
    m.insert("residue_field".into(), json::field_json(v.residue_field()));
    m.insert("residue".into(), json::milnor_json(residue));
    class_or_reason(residue, &mut m);
    m
}

pub fn tame(doc: &Value, k: &Field) -> Res<Report> {
    let w = json::parse_function_symbol(k, get(doc, "symbols")?, doc.get("l"))?;
    let places = match doc.get("place") {
        Some(p) => vec![json::parse_place(k, p)?],
        None => support(&w)?,
    };
    let mut out = Vec::with_capacity(places.len());
    for v in &places {
        out.push(Value::Object(place_report(v, &tame_symbol(v, &w)?)));
    }
    ok(json!({"command": "tame", "field": json::field_json(k), "l": w.weight(), "places": out}))
}

pub fn reciprocity(doc: &Value, k: &Field) -> Res<Report> {
    let w = json::parse_function_symbol(k, get(doc, "symbols")?, doc.get("l"))?;
    let r = reciprocity_check(&w)?;
    let mut places = Vec::with_capacity(r.places.len());
    for p in &r.places {
        let mut m = place_report(&p.valuation, &p.residue);
        m.insert("transferred".into(), json::milnor_json(&p.transferred));
        m.insert(
            "transferred_class".into(),
            json::class_json(&canonical_class(&p.transferred)?),
        );
        places.push(Value::Object(m));
    }
    Ok(Report {
        body: json!({
            "command": "reciprocity",
            "field": json::field_json(k),
            "l": w.weight(),
            "places": places,
            "sum": json::milnor_json(&r.sum),
            "class": json::class_json(&r.class),
            "holds": r.holds(),
        }),
        violated: !r.holds(),
    })
}

pub fn transfer(doc: &Value, k: &Field) -> Res<Report> {
    let v = match get(doc, "place")? {
        Value::Array(_) => json::parse_place(k, get(doc, "place")?)?,
        _ => {
            return Err(CliError::Parse(
                "transfer needs a finite place polynomial".into(),
            ))
        }
    };
    let l = v.residue_field().clone();
    let x = json::parse_milnor(&l, get(doc, "symbols")?, doc.get("l"))?;
    let down = transfer_milnor(&v, &x)?;
    ok(json!({
        "command": "transfer",
        "from": json::field_json(&l),
        "to": json::field_json(k),
        "l": x.weight(),
        "expression": json::milnor_json(&down),
        "class": json::class_json(&canonical_class(&down)?),
    }))
}

pub fn reduce(doc: &Value, k: &Field) -> Res<Report> {
    let x = json::parse_tuple(k, doc)?;
    let factors = if x.weight() == 0 {
        Vec::new()
    } else {
        composition_series(&x)?
    };
    let expr = phi_expression(&x)?;
    ok(json!({
        "command": "reduce",
        "field": json::field_json(k),
        "size": x.size(),
        "l": x.weight(),
        "factors": factors.iter().map(json::factor_json).collect::<Vec<_>>(),
        "phi": json::milnor_json(&expr),
        "class": json::class_json(&canonical_class(&expr)?),
    }))
}

pub fn parse_places(s: &str) -> Res<Vec<HilbertPlace>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<HilbertPlace>().map_err(CliError::from))
        .collect()
}

pub fn determinant_spec(spec: SpecArg, places: Option<&str>) -> Res<DeterminantSpec> {
    Ok(match spec {
        SpecArg::Universal => DeterminantSpec::Universal,
        SpecArg::RealSign => DeterminantSpec::RealSign,
        SpecArg::FiniteFieldTrivial => DeterminantSpec::FiniteFieldTrivial,
        SpecArg::RationalHilbert => {
            let p =
                places.ok_or_else(|| CliError::Parse("rational-hilbert needs --places".into()))?;
            DeterminantSpec::RationalHilbert(parse_places(p)?)
        }
    })
}

pub fn spec_name(spec: &DeterminantSpec) -> Value {
    match spec {
        DeterminantSpec::Universal => json!("universal"),
        DeterminantSpec::RealSign => json!("real-sign"),
        DeterminantSpec::FiniteFieldTrivial => json!("finite-field-trivial"),
        DeterminantSpec::RationalHilbert(ps) => json!({
            "rational-hilbert": ps.iter().map(|p| p.to_string()).collect::<Vec<_>>()
        }),
    }
}

pub fn value_json(v: &DeterminantValue) -> Value {
    match v {
        DeterminantValue::Class(c) => json::class_json(c),
        DeterminantValue::Sign(s) => json!(s),
    }
}

pub fn jointdet(doc: &Value, k: &Field, spec: SpecArg, places: Option<&str>) -> Res<Report> {
    let x = json::parse_tuple(k, doc)?;
    let d = make_determinant(k, x.weight(), determinant_spec(spec, places)?)?;
    let value = d.evaluate(&x)?;
    ok(json!({
        "command": "jointdet",
        "field": json::field_json(k),
        "l": x.weight(),
        "spec": spec_name(d.spec()),
        "value": value_json(&value),
    }))
}
