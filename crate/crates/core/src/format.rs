//! Deterministic tabular output: `#`-prefixed metadata, a header row, data
//! rows, and optional trailing summary lines; or the same content as JSON.

use std::fmt::Write as _;

use serde_json::{Map, Value};

/// Significant digits kept in every serialized float.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest representation that round-trips the value rounded to 12
/// significant digits. Non-finite values print as `inf`, `-inf`, `nan`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_significant(x);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// One output document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    /// `None` marks an empty cell.
    pub rows: Vec<Vec<Option<f64>>>,
    pub summary: Vec<(String, f64)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta_float(&mut self, key: &str, value: f64) -> &mut Self {
        self.meta(key, format_float(value))
    }

    pub fn push_row(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_values(&mut self, row: &[f64]) {
        self.push_row(row.iter().copied().map(Some).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}={v}").unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| c.map(format_float).unwrap_or_default())
                .collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        for (k, v) in &self.summary {
            writeln!(out, "# {k}={}", format_float(*v)).unwrap();
        }
        out
    }

    /// Same content as [`Table::to_csv`]. Empty cells and non-finite values
    /// are `null`.
    pub fn to_json(&self) -> String {
        let number = |x: f64| -> Value {
            serde_json::Number::from_f64(round_significant(x))
                .map(Value::Number)
                .unwrap_or(Value::Null)
        };
        let metadata: Map<String, Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Array(row.iter().map(|c| c.map_or(Value::Null, number)).collect()))
            .collect();
        let summary: Map<String, Value> = self
            .summary
            .iter()
            .map(|(k, v)| (k.clone(), number(*v)))
            .collect();
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(metadata));
        doc.insert(
            "columns".into(),
            Value::Array(self.columns.iter().cloned().map(Value::String).collect()),
        );
        doc.insert("rows".into(), Value::Array(rows));
        doc.insert("summary".into(), Value::Object(summary));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-0.5), "-0.5");
        assert_eq!(format_float(0.1 + 0.2), "0.3");
        assert_eq!(format_float(2f64.sqrt() / 4.0), "0.353553390593");
        assert_eq!(format_float(1e-12), "1e-12");
        assert_eq!(format_float(-3.5e20), "-3.5e20");
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(f64::NAN), "nan");
        assert_eq!(format_float(150.0), "150");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.meta("N", 2);
        t.push_values(&[1.0, 0.25]);
        t.push_row(vec![Some(2.0), None]);
        t.summary.push(("hc_estimate".into(), 0.5));
        assert_eq!(t.to_csv(), "# N=2\na,b\n1,0.25\n2,\n# hc_estimate=0.5\n");
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(&["x"]);
        t.meta("k", "v");
        t.push_values(&[f64::INFINITY]);
        t.push_values(&[0.1 + 0.2]);
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["metadata"]["k"], "v");
        assert_eq!(v["rows"][0][0], Value::Null);
        assert_eq!(v["rows"][1][0].as_f64(), Some(0.3));
    }

    proptest! {
        #[test]
        fn formatted_values_parse_back_within_rounding(x in -1e30f64..1e30) {
            let s = format_float(x);
            let y: f64 = s.parse().unwrap();
            prop_assert!((y - x).abs() <= 1e-11 * x.abs());
            prop_assert_eq!(format_float(y), s);
        }
    }
}
