//! Deterministic JSON rendering of reports: sorted keys, two-space
//! indentation and every float printed with 17 significant digits.

use std::io;

use krlab_core::{KrCheck, KrReport, Principal, Witness};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

pub const SCHEMA_ID: &str = "krlab-report/1";

/// Pretty printer that writes floats as `d.ddddddddddddddddde±x`.
pub struct FixedDigits<'a>(PrettyFormatter<'a>);

impl Default for FixedDigits<'_> {
    fn default() -> Self {
        Self(PrettyFormatter::new())
    }
}

impl Formatter for FixedDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits::default());
    serde::Serialize::serialize(v, &mut ser).expect("serializing a JSON value into memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Finite floats become numbers; infinities and NaN become the strings
/// `"inf"`, `"-inf"` and `"nan"`.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        Value::from(v)
    } else if v.is_nan() {
        Value::from("nan")
    } else if v > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| num(*x)).collect())
}

fn witness(w: &Witness) -> Value {
    match w {
        Witness::Vector(v) => json!({ "kind": "vector", "values": nums(v) }),
        Witness::Eigenvalue { re, im } => json!({ "kind": "eigenvalue", "re": num(*re), "im": num(*im) }),
        Witness::Entry { row, col, value } => json!({ "kind": "entry", "row": row, "col": col, "value": num(*value) }),
    }
}

pub fn check(c: &KrCheck) -> Value {
    let tolerances: Map<String, Value> = c.tolerances.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
    json!({
        "name": c.name,
        "status": c.status.as_str(),
        "expected_fail": c.expected_fail,
        "detail": c.detail,
        "witness": c.witness.as_ref().map_or(Value::Null, witness),
        "tolerances": tolerances,
    })
}

fn principal(p: &Principal) -> Value {
    json!({
        "value": num(p.value),
        "eigenvector": nums(&p.eigenvector),
        "alg_mult": p.alg_mult,
        "geo_mult": p.geo_mult,
    })
}

/// Full report document. `data` carries scenario-specific values.
pub fn report(scenario: &str, rep: &KrReport, data: Value) -> Value {
    json!({
        "schema": SCHEMA_ID,
        "scenario": scenario,
        "theorem": rep.theorem,
        "seed": rep.seed,
        "status": if rep.passed() { "pass" } else { "fail" },
        "checks": rep.checks.iter().map(check).collect::<Vec<_>>(),
        "principal": rep.principal.as_ref().map_or(Value::Null, principal),
        "notes": rep.notes,
        "data": data,
    })
}

/// Report for a run stopped by a numerical error.
pub fn error_report(scenario: &str, seed: u64, message: &str) -> Value {
    json!({
        "schema": SCHEMA_ID,
        "scenario": scenario,
        "theorem": Value::Null,
        "seed": seed,
        "status": "error",
        "checks": [],
        "principal": Value::Null,
        "notes": [message],
        "data": {},
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_string(&json!({ "b": 0.1, "a": [1.0, -2.5e-300] }));
        assert_eq!(
            s,
            "{\n  \"a\": [\n    1.0000000000000000e0,\n    -2.5000000000000000e-300\n  ],\n  \"b\": 1.0000000000000001e-1\n}\n"
        );
    }

    #[test]
    fn non_finite_values_become_strings() {
        assert_eq!(num(f64::NEG_INFINITY), Value::from("-inf"));
        assert_eq!(num(f64::NAN), Value::from("nan"));
    }

    #[test]
    fn round_trip_is_stable() {
        let v = json!({ "x": [1.0 / 3.0, 1e-310, 12345.678], "s": "t", "n": null, "k": 7 });
        let first = to_string(&v);
        let parsed: Value = serde_json::from_str(&first).unwrap();
        assert_eq!(to_string(&parsed), first);
    }
}
