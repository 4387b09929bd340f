//! Run reports and their JSON/CSV renderings.

use std::io::{self, Write};
use std::path::Path;

use schwinger_core::Check;
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{Map, Value};

/// Tabular sweep data attached to a report for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub params: Map<String, Value>,
    pub results: Value,
    pub checks: Vec<Check>,
    pub exit_code: i32,
    pub table: Option<Table>,
}

impl RunReport {
    pub fn new(
        command: &str,
        params: Map<String, Value>,
        results: Value,
        checks: Vec<Check>,
        table: Option<Table>,
    ) -> Self {
        let mut report = Self {
            command: command.to_string(),
            params,
            results,
            checks,
            exit_code: 0,
            table,
        };
        report.settle();
        report
    }

    /// Recomputes `exit_code` from the checks.
    pub fn settle(&mut self) {
        self.exit_code = if schwinger_core::check::all_passed(&self.checks) {
            0
        } else {
            1
        };
    }

    pub fn to_value(&self) -> Value {
        let checks = self
            .checks
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("name".into(), Value::from(c.name.clone()));
                m.insert("passed".into(), Value::from(c.passed));
                m.insert("max_error".into(), num(c.max_error));
                m.insert("tolerance".into(), num(c.tolerance));
                Value::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("command".into(), Value::from(self.command.clone()));
        m.insert("params".into(), Value::Object(self.params.clone()));
        m.insert("results".into(), self.results.clone());
        m.insert("checks".into(), Value::Array(checks));
        m.insert("exit_code".into(), Value::from(self.exit_code));
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, G17);
        self.to_value()
            .serialize(&mut ser)
            .expect("serializing to memory cannot fail");
        out.push(b'\n');
        String::from_utf8(out).expect("JSON output is UTF-8")
    }

    /// `None` when the command produced no sweep table.
    pub fn to_csv(&self) -> Option<String> {
        let table = self.table.as_ref()?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.header).expect("in-memory write");
        for row in &table.rows {
            w.write_record(row.iter().map(|&x| g17(x)))
                .expect("in-memory write");
        }
        Some(
            String::from_utf8(w.into_inner().expect("in-memory flush"))
                .expect("CSV output is UTF-8"),
        )
    }
}

/// JSON number, or `null` for non-finite values.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// `printf("%.17g")`, except that negative zero prints as `0`.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if !(-4..17).contains(&exp) {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        let frac = if rest.is_empty() {
            String::new()
        } else {
            format!(".{rest}")
        };
        let esign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{lead}{frac}e{esign}{:02}", exp.abs());
    }
    let body = if exp >= 0 {
        let point = exp as usize + 1;
        let (int, frac) = digits.split_at(point);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("0.{zeros}{}", digits.trim_end_matches('0'))
    };
    format!("{sign}{body}")
}

struct G17;

impl Formatter for G17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(g17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Renders `report` and writes it to `destination`, or to `stdout` when
/// `None`. A failed write is recorded as a failing `io` check, the report is
/// re-rendered to `stdout`, and the exit code becomes 1.
pub fn emit_report(
    report: &mut RunReport,
    format: OutputFormat,
    destination: Option<&Path>,
    stdout: &mut dyn Write,
) -> io::Result<()> {
    let render = |r: &RunReport| match format {
        OutputFormat::Json => r.to_json(),
        OutputFormat::Csv => r.to_csv().unwrap_or_else(|| r.to_json()),
    };
    let Some(path) = destination else {
        return stdout.write_all(render(report).as_bytes());
    };
    match std::fs::write(path, render(report)) {
        Ok(()) => Ok(()),
        Err(err) => {
            report.checks.push(Check::exact("io", false));
            if let Value::Object(m) = &mut report.results {
                m.insert(
                    "io_error".into(),
                    Value::from(format!("cannot write {}: {err}", path.display())),
                );
            }
            report.settle();
            stdout.write_all(render(report).as_bytes())
        }
    }
}
