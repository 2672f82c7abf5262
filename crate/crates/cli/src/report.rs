use std::io::Write;

use serde_json::{Map, Value};

/// One row of output.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRecord {
    pub experiment: String,
    /// Inputs and settings, in insertion order.
    pub inputs: Vec<(String, String)>,
    pub computed: f64,
    pub oracle: Option<f64>,
    pub rel_err: Option<f64>,
    pub ok: bool,
    /// `None` under `--no-timing`.
    pub runtime_ms: Option<u64>,
}

const FIXED_TAIL: [&str; 5] = ["computed", "oracle", "rel_err", "ok", "runtime_ms"];

impl ReportRecord {
    pub fn new(experiment: impl Into<String>) -> Self {
        ReportRecord { experiment: experiment.into(), inputs: Vec::new(), computed: f64::NAN, oracle: None, rel_err: None, ok: true, runtime_ms: None }
    }

    pub fn input(mut self, key: &str, value: impl Cell) -> Self {
        self.inputs.push((key.to_string(), value.cell()));
        self
    }

    /// Set computed and oracle; `rel_err` is `|computed - oracle| / |oracle|`,
    /// or the absolute error when the oracle is zero.
    pub fn against(mut self, computed: f64, oracle: f64) -> Self {
        self.computed = computed;
        self.oracle = Some(oracle);
        self.rel_err = Some(rel_err(computed, oracle));
        self
    }

    pub fn value(mut self, computed: f64) -> Self {
        self.computed = computed;
        self
    }

    pub fn ok(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.inputs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

/// `{:?}` on `f64` prints the shortest string that parses back to the same
/// bits, switching to exponents for tiny and huge magnitudes.
fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Text form of an input value.
pub trait Cell {
    fn cell(&self) -> String;
}

impl Cell for f64 {
    fn cell(&self) -> String {
        num(*self)
    }
}

macro_rules! display_cell {
    ($($t:ty),*) => {$(
        impl Cell for $t {
            fn cell(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

display_cell!(i32, u32, i64, u64, usize, bool, str, String, fracsob::Error);

impl<T: Cell + ?Sized> Cell for &T {
    fn cell(&self) -> String {
        (**self).cell()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Input keys across all records, in first-seen order.
fn key_union(records: &[ReportRecord]) -> Vec<String> {
    let mut keys: Vec<String> = Vec::new();
    for r in records {
        for (k, _) in &r.inputs {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
    }
    keys
}

pub fn write_csv<W: Write>(records: &[ReportRecord], out: W) -> csv::Result<()> {
    let keys = key_union(records);
    let mut w = csv::Writer::from_writer(out);
    let header = std::iter::once("experiment").chain(keys.iter().map(String::as_str)).chain(FIXED_TAIL);
    w.write_record(header)?;
    for r in records {
        let mut row = vec![r.experiment.clone()];
        row.extend(keys.iter().map(|k| r.get(k).unwrap_or("").to_string()));
        row.extend([num(r.computed), opt(r.oracle), opt(r.rel_err), r.ok.to_string(), r.runtime_ms.map(|t| t.to_string()).unwrap_or_default()]);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Finite numbers as JSON numbers, the rest as their text form.
fn json_num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(num(x)))
}

fn json_opt(x: Option<f64>) -> Value {
    x.map(json_num).unwrap_or(Value::Null)
}

pub fn to_json(records: &[ReportRecord]) -> Value {
    Value::Array(
        records
            .iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("experiment".into(), Value::String(r.experiment.clone()));
                for (k, v) in &r.inputs {
                    m.insert(k.clone(), Value::String(v.clone()));
                }
                m.insert("computed".into(), json_num(r.computed));
                m.insert("oracle".into(), json_opt(r.oracle));
                m.insert("rel_err".into(), json_opt(r.rel_err));
                m.insert("ok".into(), Value::Bool(r.ok));
                m.insert("runtime_ms".into(), r.runtime_ms.map(Value::from).unwrap_or(Value::Null));
                Value::Object(m)
            })
            .collect(),
    )
}

fn read_num(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

/// Inverse of [`to_json`].
pub fn from_json(v: &Value) -> Option<Vec<ReportRecord>> {
    v.as_array()?
        .iter()
        .map(|obj| {
            let m = obj.as_object()?;
            let mut r = ReportRecord::new(m.get("experiment")?.as_str()?);
            for (k, v) in m {
                if k != "experiment" && !FIXED_TAIL.contains(&k.as_str()) {
                    r.inputs.push((k.clone(), v.as_str()?.to_string()));
                }
            }
            r.computed = read_num(m.get("computed")?)?;
            r.oracle = read_num(m.get("oracle")?);
            r.rel_err = read_num(m.get("rel_err")?);
            r.ok = m.get("ok")?.as_bool()?;
            r.runtime_ms = m.get("runtime_ms")?.as_u64();
            Some(r)
        })
        .collect()
}

/// Inverse of [`write_csv`]; empty cells are absent inputs.
pub fn from_csv(text: &str) -> Option<Vec<ReportRecord>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers().ok()?.iter().map(String::from).collect();
    let n = header.len();
    if n < 6 {
        return None;
    }
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row.ok()?;
        let mut r = ReportRecord::new(row.get(0)?);
        for (k, v) in header[1..n - 5].iter().zip(row.iter().skip(1)) {
            if !v.is_empty() {
                r.inputs.push((k.clone(), v.to_string()));
            }
        }
        let cell = |i: usize| row.get(n - 5 + i).filter(|c| !c.is_empty());
        r.computed = cell(0)?.parse().ok()?;
        r.oracle = cell(1).and_then(|c| c.parse().ok());
        r.rel_err = cell(2).and_then(|c| c.parse().ok());
        r.ok = cell(3)?.parse().ok()?;
        r.runtime_ms = cell(4).and_then(|c| c.parse().ok());
        out.push(r);
    }
    Some(out)
}
