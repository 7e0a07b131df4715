use std::fmt::Write as _;

use serde_json::{json, Map, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            "plain" => Some(Format::Plain),
            _ => None,
        }
    }
}

/// A table plus a verdict. `verified = false` maps to exit code 1.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub verified: bool,
    /// Lines for standard error.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Report { command, columns: columns.to_vec(), rows: Vec::new(), verified: true, notes: Vec::new() }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let row: Vec<String> = cells.into_iter().map(|c| c.to_string()).collect();
        debug_assert_eq!(row.len(), self.columns.len(), "{}: row width", self.command);
        self.rows.push(row);
    }

    /// Records a failed check and the counterexample behind it.
    pub fn fail(&mut self, msg: impl Into<String>) {
        self.verified = false;
        self.notes.push(format!("verification failed: {}", msg.into()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
            Format::Plain => self.plain(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells");
        format!("# schema=1\n{body}")
    }

    fn json(&self) -> String {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Json> =
                    self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), Json::String(v.clone()))).collect();
                Json::Object(m)
            })
            .collect();
        let doc = json!({
            "schema": 1,
            "command": self.command,
            "verified": self.verified,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    }

    fn plain(&self) -> String {
        if self.columns.len() == 1 && self.rows.len() == 1 {
            return format!("{}\n", self.rows[0][0]);
        }
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: &mut dyn Iterator<Item = &str>| {
            let parts: Vec<String> =
                cells.zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, &mut self.columns.iter().copied());
        for r in &self.rows {
            line(&mut out, &mut r.iter().map(String::as_str));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_versions() {
        let mut r = Report::new("t", &["a", "b"]);
        r.row(["(0, 42, 3)_5", "x"]);
        let s = r.render(Format::Csv);
        assert!(s.starts_with("# schema=1\na,b\n"));
        assert!(s.contains("\"(0, 42, 3)_5\",x"));
    }

    #[test]
    fn plain_single_value() {
        let mut r = Report::new("t", &["value"]);
        r.row(["-1/12"]);
        assert_eq!(r.render(Format::Plain), "-1/12\n");
    }

    #[test]
    fn json_has_verdict() {
        let mut r = Report::new("t", &["b", "a"]);
        r.row(["1", "2"]);
        r.fail("x");
        let s = r.render(Format::Json);
        assert!(s.contains("\"verified\": false"));
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }
}
