//! Rendering of command results in the three output formats.

use serde_json::Value;

use crate::Format;

/// A command result: human text, a CSV table and a JSON value.
pub struct Output {
    pub pretty: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

impl Output {
    pub fn new(pretty: impl Into<String>, json: Value) -> Self {
        Output {
            pretty: pretty.into(),
            header: Vec::new(),
            rows: Vec::new(),
            json,
        }
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.header = header.iter().map(|h| h.to_string()).collect();
        self.rows = rows;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Pretty => with_newline(self.pretty.clone()),
            Format::Json => with_newline(serde_json::to_string_pretty(&self.json).expect("json value serializes")),
            Format::Csv => {
                let mut out = String::new();
                for line in std::iter::once(&self.header).chain(&self.rows) {
                    let fields: Vec<String> = line.iter().map(|f| csv_field(f)).collect();
                    out.push_str(&fields.join(","));
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn csv_field(f: &str) -> String {
    if f.contains([',', '"', '\n']) {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}

/// Twelve digits after the point.
pub fn float(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Left-aligned columns separated by two spaces.
pub fn columns(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header.to_vec())];
    out.extend(rows.iter().map(|r| line(r.iter().map(String::as_str).collect())));
    out.join("\n")
}
