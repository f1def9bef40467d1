//! Exact JSON values and the three output projections.

use crate::CliError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;
use std::io;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Integers that fit in `i64` stay numbers; larger ones become strings.
pub fn big(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn rat(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// `{"a": 1, "b": [2, 3]}` on one line.
struct Spaced;

impl Formatter for Spaced {
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

pub fn json_line(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Spaced);
    v.serialize(&mut ser).expect("in-memory write");
    String::from_utf8(out).expect("json is utf-8")
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => json_line(other),
    }
}

/// Top-level fields as rows; nested values are written as one-line JSON.
fn rows(v: &Value) -> Vec<(String, String)> {
    match v {
        Value::Object(map) => map.iter().map(|(k, x)| (k.clone(), cell(x))).collect(),
        other => vec![("value".into(), cell(other))],
    }
}

pub fn render(v: &Value, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(json_line(v) + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io_err = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(["field", "value"]).map_err(io_err)?;
            for (k, x) in rows(v) {
                w.write_record([k, x]).map_err(io_err)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv of utf-8 is utf-8"))
        }
        Format::Table => {
            let r = rows(v);
            let width = r.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            Ok(r.iter().map(|(k, x)| format!("{k:<width$}  {x}\n")).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn spaced_json_keeps_insertion_order() {
        let v = json!({"davenport": 3, "complete": true, "w": [1, 2]});
        assert_eq!(json_line(&v), r#"{"davenport": 3, "complete": true, "w": [1, 2]}"#);
    }

    #[test]
    fn big_values_become_strings() {
        let x: BigInt = BigInt::from(i64::MAX) * 4;
        assert_eq!(big(&x), Value::String(x.to_string()));
        assert_eq!(big(&BigInt::from(-7)), json!(-7));
        assert_eq!(rat(&BigRational::new(6.into(), 4.into())), json!("3/2"));
    }

    #[test]
    fn projections() {
        let v = json!({"a": 1, "b": "x,y", "c": [1, 2]});
        assert_eq!(render(&v, Format::Csv).unwrap(), "field,value\na,1\nb,\"x,y\"\nc,\"[1, 2]\"\n");
        assert_eq!(render(&v, Format::Table).unwrap(), "a  1\nb  x,y\nc  [1, 2]\n");
    }
}
