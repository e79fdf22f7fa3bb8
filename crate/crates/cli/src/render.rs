use num_bigint::BigInt;
use num_traits::ToPrimitive;
use overmes_core::VerificationReport;
use serde_json::{json, Value};

use crate::Format;

/// One output value. Integers keep their exact value in every format.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(BigInt),
    Text(String),
    Null,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => int_json(v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Null => Value::Null,
        }
    }
}

macro_rules! cell_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(BigInt::from(v))
            }
        }
    )*};
}
cell_from_int!(u32, u64, usize);

/// Exact integers as JSON numbers when they fit in `i64`, as strings beyond.
pub fn int_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(v.to_string()),
    }
}

/// A header plus rows, rendered as aligned text, CSV or a JSON array.
pub struct Sheet {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Sheet {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Sheet {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.clone(), c.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                finish_json(&Value::Array(rows))
            }
        }
    }

    fn text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::plain).collect())
            .collect();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(display_width(c));
            }
        }
        let mut out = String::new();
        let mut line = |row: &[String]| {
            let mut s = String::new();
            for (i, (c, w)) in row.iter().zip(&widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                s.push_str(c);
                if i + 1 < row.len() {
                    s.extend(std::iter::repeat_n(' ', w - display_width(c)));
                }
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(&self.header);
        for row in &cells {
            line(row);
        }
        out
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::plain))
                .expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
    }
}

/// Combining marks take no column.
fn display_width(s: &str) -> usize {
    s.chars().filter(|c| !('\u{0300}'..='\u{036f}').contains(c)).count()
}

pub fn finish_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn report_json(r: &VerificationReport, timing: bool, with_values: bool) -> Value {
    let params = r.params.map_or(Value::Null, |p| {
        json!({ "r": p.r(), "A": p.modulus(), "a": p.residue() })
    });
    let first_mismatch = r.first_mismatch.as_ref().map_or(Value::Null, |m| {
        json!({
            "k": m.k,
            "n": m.n,
            "expected": int_json(&m.expected),
            "actual": int_json(&m.actual),
        })
    });
    let elapsed_ms = if timing {
        r.elapsed.as_secs_f64() * 1000.0
    } else {
        0.0
    };
    let mut v = json!({
        "theorem": r.check.to_string(),
        "params": params,
        "order": r.order,
        "status": r.status().as_str(),
        "first_mismatch": first_mismatch,
        "entries_checked": r.entries_checked,
        "elapsed_ms": (elapsed_ms * 1000.0).round() / 1000.0,
    });
    if let Some(d) = &r.detail {
        v["detail"] = Value::String(d.clone());
    }
    if with_values {
        v["values"] = Value::Array(
            r.matched
                .iter()
                .map(|(k, n, value)| json!({ "k": k, "n": n, "value": int_json(value) }))
                .collect(),
        );
    }
    v
}

pub fn report_line(r: &VerificationReport) -> String {
    let params = r.params.map_or_else(|| "grid".to_string(), |p| p.to_string());
    let mut s = format!(
        "{:<6} {:<24} {:<14} N={} entries={}",
        r.status().as_str(),
        r.check.to_string(),
        params,
        r.order,
        r.entries_checked
    );
    if let Some(m) = &r.first_mismatch {
        let k = m.k.map_or_else(|| "_".to_string(), |k| k.to_string());
        s += &format!(
            " first mismatch k={k} n={} expected={} actual={}",
            m.n, m.expected, m.actual
        );
    }
    if let Some(d) = &r.detail {
        s += &format!(" ({d})");
    }
    s
}
