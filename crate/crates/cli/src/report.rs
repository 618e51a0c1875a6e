use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One reproduction check and its outcome.
#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Assertion {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }

    /// Equality check whose detail shows both sides.
    pub fn eq<T: PartialEq + std::fmt::Debug>(name: &str, got: T, want: T) -> Self {
        let passed = got == want;
        let detail = if passed {
            format!("{got:?}")
        } else {
            format!("got {got:?}, expected {want:?}")
        };
        Assertion::new(name, passed, detail)
    }
}

pub trait Report: Serialize {
    fn text(&self) -> String;
    /// Header row followed by data rows.
    fn csv_rows(&self) -> Vec<Vec<String>>;
    fn assertions(&self) -> Vec<&Assertion>;

    fn passed(&self) -> bool {
        self.assertions().iter().all(|a| a.passed)
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialize") + "\n",
            Format::Text => self.text(),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in self.csv_rows() {
                    w.write_record(&row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
            }
        }
    }
}

pub fn text_assertions(out: &mut String, assertions: &[&Assertion]) {
    writeln!(out, "checks").unwrap();
    for a in assertions {
        let mark = if a.passed { "ok    " } else { "FAILED" };
        writeln!(out, "  {mark} {}: {}", a.name, a.detail).unwrap();
    }
}

pub fn assertion_rows<'a>(
    stage: &str,
    assertions: impl IntoIterator<Item = &'a Assertion>,
) -> Vec<Vec<String>> {
    assertions
        .into_iter()
        .map(|a| {
            vec![
                stage.to_string(),
                a.name.clone(),
                a.passed.to_string(),
                a.detail.clone(),
            ]
        })
        .collect()
}
