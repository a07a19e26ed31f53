//! Deterministic number formatting and CSV/JSON serialization.

use serde_json::{Map, Number, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats with 12 significant digits: fixed notation for magnitudes in
/// `[1e-4, 1e12)` and for zero, scientific otherwise.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return format!("{:.*}", SIGNIFICANT_DIGITS, 0.0);
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let exponent: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-4..12).contains(&exponent) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

/// A record field: numbers are carried as their formatted text so CSV and
/// JSON agree exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Number(f64),
    Text(String),
    Bool(bool),
    Missing,
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Number(v) => format_number(*v),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Number(v) => format_number(*v)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Field::Text(s) => Value::String(s.clone()),
            Field::Bool(b) => Value::Bool(*b),
            Field::Missing => Value::Null,
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Number(v)
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Field::Missing, Field::Number)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

/// Rows sharing one header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Field::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of objects keyed by column name.
    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (name, field) in self.columns.iter().zip(row) {
                        obj.insert(name.to_string(), field.json());
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        pretty(&self.to_json_value())
    }
}

pub fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn json_number(v: f64) -> Value {
    Field::Number(v).json()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(0.0), "0.000000000000");
        assert_eq!(format_number(1.0), "1.00000000000");
        assert_eq!(format_number(0.123456789012345), "0.123456789012");
        assert_eq!(format_number(-2.5), "-2.50000000000");
        assert_eq!(format_number(12345.678), "12345.6780000");
        assert_eq!(format_number(1.5e-9), "1.50000000000e-9");
        assert_eq!(format_number(3.0e15), "3.00000000000e15");
        // Rounding into the next decade keeps 12 digits.
        assert_eq!(format_number(9.9999999999999), "10.0000000000");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn json_mirrors_csv_text() {
        let mut t = Table::new(&["name", "x", "y"]);
        t.push(vec!["a".into(), 0.1234567890123456.into(), None.into()]);
        assert_eq!(t.to_csv(), "name,x,y\na,0.123456789012,\n");
        let v = t.to_json_value();
        assert_eq!(v[0]["x"].as_f64().unwrap(), "0.123456789012".parse::<f64>().unwrap());
        assert!(v[0]["y"].is_null());
        assert_eq!(v[0]["name"], "a");
    }
}
