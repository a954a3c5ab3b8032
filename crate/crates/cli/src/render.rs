//! Conversions of library values into report JSON, and the flat table
//! rendering used by `--format table`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use zetakit::charsums::CyclotomicElement;
use zetakit::dwork::{PadicCyclo, PadicRing};
use zetakit::fields::FiniteField;
use zetakit::geometry::MultiPoly;
use zetakit::series::{NewtonPolygon, RationalFunction};

pub fn bigint(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn bigints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(bigint).collect())
}

pub fn rational(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn rationals(xs: &[BigRational]) -> Value {
    Value::Array(xs.iter().map(rational).collect())
}

pub fn rational_function(rf: &RationalFunction) -> Value {
    json!({ "numerator": bigints(&rf.numerator), "denominator": bigints(&rf.denominator) })
}

pub fn newton(np: &NewtonPolygon) -> Value {
    json!({
        "vertices": np.vertices,
        "slopes": rationals(&np.slopes()),
    })
}

/// Coordinates a_0..a_{p−2} in the basis 1, ζ, …, ζ^{p−2}.
pub fn cyclotomic(x: &CyclotomicElement) -> Value {
    json!({
        "coords": rationals(x.coords()),
        "rational": x.as_rational().map(|r| r.to_string()),
    })
}

/// Coordinates in 1, π, …, π^{p−2} (mod p^M) with the π-adic valuation.
pub fn padic(ring: &PadicRing, x: &PadicCyclo) -> Value {
    json!({ "coords": x.coords(ring), "valuation": ring.val(x) })
}

/// Terms of a polynomial with coefficients as coordinate vectors over F_p.
pub fn poly(field: &FiniteField, f: &MultiPoly) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .iter()
        .map(|(e, &c)| {
            let coords = field.coords(c);
            let c = if coords.len() == 1 { json!(coords[0]) } else { json!(coords) };
            json!({ "c": c, "e": e })
        })
        .collect();
    json!({ "terms": terms })
}

/// "key.path: value" lines, one per scalar leaf.
pub fn table(v: &Value) -> String {
    let mut out = String::new();
    flatten(v, String::new(), &mut out);
    out
}

fn flatten(v: &Value, prefix: String, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(x, key, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            out.push_str(&format!("{prefix}: [{}]\n", items.join(", ")));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(x, format!("{prefix}[{i}]"), out);
            }
        }
        _ => out.push_str(&format!("{prefix}: {}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
