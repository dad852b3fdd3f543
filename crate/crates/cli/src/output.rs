use std::io::Write;

use clap::ValueEnum;
use lozenge::lattice::NodeCoord;
use lozenge::Error;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A command result in every supported format.
pub struct Output {
    json: Value,
    csv: Option<String>,
    text: Option<String>,
}

impl Output {
    pub fn json(json: Value) -> Self {
        Output { json, csv: None, text: None }
    }

    pub fn with_csv(json: Value, csv: String) -> Self {
        Output { json, csv: Some(csv), text: None }
    }

    pub fn with_text(json: Value, text: String) -> Self {
        Output { json, csv: None, text: Some(text) }
    }

    /// A document whose text form is the document itself.
    pub fn document(json: Value, text: String, csv: String) -> Self {
        Output { json, csv: Some(csv), text: Some(text) }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone().unwrap_or_else(|| generic_csv(&self.json)),
            Format::Text => self.text.clone().unwrap_or_else(|| generic_text(&self.json)),
        }
    }

    pub fn emit(&self, format: Format) -> Result<(), Error> {
        let mut out = std::io::stdout().lock();
        out.write_all(self.render(format).as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| Error::resource(format!("cannot write output: {e}")))
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: String) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

/// One header row of keys and one row of values.
fn generic_csv(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let head: Vec<String> = map.keys().map(|k| csv_field(k.clone())).collect();
            let row: Vec<String> = map.values().map(|x| csv_field(plain(x))).collect();
            format!("{}\n{}\n", head.join(","), row.join(","))
        }
        other => format!("value\n{}\n", csv_field(plain(other))),
    }
}

fn generic_text(v: &Value) -> String {
    match v {
        Value::Object(map) => map.iter().map(|(k, x)| format!("{k}: {}\n", plain(x))).collect(),
        other => format!("{}\n", plain(other)),
    }
}

pub fn nodes_csv(nodes: &[(NodeCoord, i64)]) -> String {
    let mut s = String::from("m,n,weight\n");
    for (v, w) in nodes {
        s.push_str(&format!("{},{},{w}\n", v.m, v.n));
    }
    s
}
