//! Helpers shared by the integration targets: running the binary and comparing
//! its output against the checked-in fixtures.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn fracineq(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_fracineq")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Type skeleton of a JSON document: object keys with the skeleton of each
/// value, arrays by the unified skeleton of their elements. `null` unifies with
/// any shape, since optional numbers serialize as `null`.
pub fn schema(v: &Value) -> Result<Value, String> {
    Ok(match v {
        Value::Null => Value::from("null"),
        Value::Bool(_) => Value::from("bool"),
        Value::Number(_) => Value::from("number"),
        Value::String(_) => Value::from("string"),
        Value::Array(items) => {
            let mut shape: Option<Value> = None;
            for item in items {
                let s = schema(item)?;
                shape = Some(match shape {
                    None => s,
                    Some(prev) => unify(&prev, &s).ok_or_else(|| format!("array elements differ: {prev} vs {s}"))?,
                });
            }
            Value::Array(shape.into_iter().collect())
        }
        Value::Object(map) => {
            Value::Object(map.iter().map(|(k, v)| Ok((k.clone(), schema(v)?))).collect::<Result<_, String>>()?)
        }
    })
}

fn unify(x: &Value, y: &Value) -> Option<Value> {
    let null = Value::from("null");
    match (x, y) {
        _ if *x == null => Some(y.clone()),
        _ if *y == null => Some(x.clone()),
        (Value::Object(p), Value::Object(q)) if p.len() == q.len() => {
            p.iter().map(|(k, v)| Some((k.clone(), unify(v, q.get(k)?)?))).collect::<Option<_>>().map(Value::Object)
        }
        (Value::Array(p), Value::Array(q)) => match (p.first(), q.first()) {
            (Some(a), Some(b)) => Some(Value::Array(vec![unify(a, b)?])),
            _ => Some(Value::Array(p.iter().chain(q).cloned().collect())),
        },
        _ => (x == y).then(|| x.clone()),
    }
}

/// Schemas agree when they unify.
pub fn same_schema(x: &Value, y: &Value) -> Result<bool, String> {
    Ok(unify(&schema(x)?, &schema(y)?).is_some())
}

/// Structural equality with numbers compared to a relative tolerance.
pub fn same_values(x: &Value, y: &Value, rel: f64) -> bool {
    match (x, y) {
        (Value::Number(p), Value::Number(q)) => {
            let (p, q) = (p.as_f64().unwrap(), q.as_f64().unwrap());
            (p - q).abs() <= rel * p.abs().max(q.abs())
        }
        (Value::Array(p), Value::Array(q)) => {
            p.len() == q.len() && p.iter().zip(q).all(|(p, q)| same_values(p, q, rel))
        }
        (Value::Object(p), Value::Object(q)) => {
            p.len() == q.len() && p.iter().all(|(k, v)| q.get(k).is_some_and(|w| same_values(v, w, rel)))
        }
        _ => x == y,
    }
}

/// Compare a JSON document against a fixture: identical schema and values
/// equal up to `rel`. Returns a description of the first mismatch.
pub fn check_json(live: &str, fixture_text: &str, rel: f64) -> Result<(), String> {
    let live: Value = serde_json::from_str(live).map_err(|e| format!("output is not JSON: {e}"))?;
    let want: Value = serde_json::from_str(fixture_text).map_err(|e| format!("fixture is not JSON: {e}"))?;
    if !same_schema(&live, &want)? {
        return Err(format!("schema differs: {} vs {}", schema(&live)?, schema(&want)?));
    }
    if !same_values(&live, &want, rel) {
        return Err("values differ from fixture".into());
    }
    Ok(())
}

/// Compare CSV text against a fixture: same header, same row count, numeric
/// cells equal up to `rel` and other cells identical.
pub fn check_csv(live: &str, fixture_text: &str, rel: f64) -> Result<(), String> {
    let read = |s: &str| -> Result<Vec<csv::StringRecord>, String> {
        csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(s.as_bytes())
            .records()
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())
    };
    let (live, want) = (read(live)?, read(fixture_text)?);
    if live.first() != want.first() {
        return Err(format!("header differs: {:?} vs {:?}", live.first(), want.first()));
    }
    if live.len() != want.len() {
        return Err(format!("{} rows vs {} in fixture", live.len(), want.len()));
    }
    for (i, (l, w)) in live.iter().zip(&want).enumerate().skip(1) {
        if l.len() != w.len() {
            return Err(format!("row {i} has {} cells, fixture {}", l.len(), w.len()));
        }
        for (x, y) in l.iter().zip(w) {
            let ok = match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(p), Ok(q)) => (p - q).abs() <= rel * p.abs().max(q.abs()),
                _ => x == y,
            };
            if !ok {
                return Err(format!("row {i}: {x} vs {y}"));
            }
        }
    }
    Ok(())
}
