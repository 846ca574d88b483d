use std::fmt::Write as _;

use serde::Serialize;

use super::args::Emit;
use crate::report::SuiteReport;

/// Column header and rows of the CSV rendering.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Two-column `field,value` table.
    pub fn fields(pairs: Vec<(&str, String)>) -> Self {
        let mut t = Table::new(&["field", "value"]);
        for (k, v) in pairs {
            t.push(vec![k.to_string(), v]);
        }
        t
    }
}

/// One command result in all three renderings.
#[derive(Clone, Debug)]
pub struct Output {
    pub json: String,
    pub table: Table,
    pub text: String,
}

impl Output {
    pub fn new<T: Serialize>(value: &T, table: Table, text: String) -> Self {
        let json = serde_json::to_string_pretty(value).expect("output types serialize");
        Output { json, table, text }
    }

    pub fn render(&self, fmt: Emit) -> Vec<u8> {
        match fmt {
            Emit::Json => format!("{}\n", self.json).into_bytes(),
            Emit::Csv => write_csv(&self.table),
            Emit::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s.into_bytes()
            }
        }
    }
}

fn write_csv(t: &Table) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(&t.header).expect("in-memory write");
    for r in &t.rows {
        w.write_record(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub const REPORT_COLUMNS: [&str; 6] = ["suite", "id", "status", "description", "witness", "millis"];

pub fn report_table(r: &SuiteReport) -> Table {
    let mut t = Table::new(&REPORT_COLUMNS);
    for c in &r.checks {
        t.push(vec![
            r.suite.clone(),
            c.id.clone(),
            c.status.as_str().to_string(),
            c.description.clone(),
            c.witness.clone().unwrap_or_default(),
            c.millis.map(|m| m.to_string()).unwrap_or_default(),
        ]);
    }
    t
}

pub fn report_text(r: &SuiteReport) -> String {
    let passed = r.checks.iter().filter(|c| c.passed()).count();
    let mut s = format!("suite {}: {} ({passed}/{} checks passed)\n", r.suite, r.status.as_str(), r.checks.len());
    for c in &r.checks {
        let _ = write!(s, "  {:<5} {}  {}", c.status.as_str(), c.id, c.description);
        if let Some(ms) = c.millis {
            let _ = write!(s, "  [{ms} ms]");
        }
        s.push('\n');
        if let Some(w) = &c.witness {
            let _ = writeln!(s, "        witness: {w}");
        }
    }
    s
}

/// Renders a suite report. JSON keeps the field order of [`SuiteReport`];
/// CSV columns are [`REPORT_COLUMNS`].
pub fn emit_report(r: &SuiteReport, fmt: Emit) -> Vec<u8> {
    Output::new(r, report_table(r), report_text(r)).render(fmt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Check;

    #[test]
    fn report_renderings() {
        let pass = SuiteReport::from_checks("s", vec![Check::pass("a", "first")]);
        let json = String::from_utf8(emit_report(&pass, Emit::Json)).unwrap();
        assert!(json.contains("\"status\": \"pass\""));
        assert_eq!(emit_report(&pass, Emit::Json), emit_report(&pass, Emit::Json));

        let fail = SuiteReport::from_checks("s", vec![Check::fail("b", "second, quoted \"x\"", "w = 1, 2")]);
        let v: serde_json::Value = serde_json::from_slice(&emit_report(&fail, Emit::Json)).unwrap();
        assert_eq!(v["checks"][0]["witness"], "w = 1, 2");
        let csv = String::from_utf8(emit_report(&fail, Emit::Csv)).unwrap();
        assert_eq!(
            csv,
            "suite,id,status,description,witness,millis\r\ns,b,fail,\"second, quoted \"\"x\"\"\",\"w = 1, 2\",\r\n"
        );
        let text = String::from_utf8(emit_report(&fail, Emit::Text)).unwrap();
        assert!(text.starts_with("suite s: fail (0/1 checks passed)"));
    }
}
