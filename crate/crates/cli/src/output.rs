//! Report assembly. Every report carries the tool, enumeration and
//! language versions and an echo of the parsed flags.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use hpomega::exact::ExactRational;
use hpomega::minilang::LANGUAGE_VERSION;
use hpomega::proplogic::ENUMERATION_VERSION;

/// Version of the JSON and CSV layouts.
pub const REPORT_SCHEMA: &str = "hpomega-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub struct Report {
    command: &'static str,
    format: Format,
    flags: Value,
    decimal: bool,
    pub json: Value,
    pub csv: Option<String>,
    text: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, format: Format, flags: Value, decimal: bool) -> Self {
        Report { command, format, flags, decimal, json: Value::Null, csv: None, text: Vec::new() }
    }

    pub fn line(&mut self, s: String) {
        self.text.push(s);
    }

    /// `p/q`, with an approximate decimal when `--decimal` is set.
    pub fn q(&self, v: &ExactRational) -> String {
        if self.decimal {
            format!("{v} (approx {:.12})", v.to_f64())
        } else {
            v.to_string()
        }
    }

    fn header(&self) -> String {
        format!(
            "# {} {} schema={REPORT_SCHEMA} enumeration={ENUMERATION_VERSION} language={LANGUAGE_VERSION}\n# flags: {}\n",
            env!("CARGO_PKG_NAME"),
            env!("CARGO_PKG_VERSION"),
            self.flags
        )
    }

    pub fn render(&self) -> String {
        match self.format {
            Format::Json => {
                let doc = json!({
                    "schema": REPORT_SCHEMA,
                    "tool_version": env!("CARGO_PKG_VERSION"),
                    "enumeration_version": ENUMERATION_VERSION,
                    "language_version": LANGUAGE_VERSION,
                    "command": self.command,
                    "flags": self.flags,
                    "result": self.json,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => format!("{}{}", self.header(), self.csv.as_deref().unwrap_or("")),
            Format::Text => {
                let mut s = self.header();
                for l in &self.text {
                    s.push_str(l);
                    s.push('\n');
                }
                s
            }
        }
    }
}
