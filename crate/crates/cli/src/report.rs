//! Report records and their three output encodings.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "deficient")]
    Deficient,
    #[serde(rename = "not-deficient")]
    NotDeficient,
    #[serde(rename = "contextual")]
    Contextual,
    #[serde(rename = "non-contextual")]
    NonContextual,
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Deficient => "deficient",
            Verdict::NotDeficient => "not-deficient",
            Verdict::Contextual => "contextual",
            Verdict::NonContextual => "non-contextual",
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
        }
    }

    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One check outcome. `anchor` states the claim the check exercises.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub check: String,
    pub model: String,
    pub inputs: BTreeMap<String, String>,
    pub estimate: Option<f64>,
    pub standard_error: Option<f64>,
    pub verdict: Verdict,
    pub detail: String,
    pub anchor: String,
}

impl ReportRecord {
    pub fn new(check: &str, model: &str, verdict: Verdict, anchor: &str) -> Self {
        Self {
            check: check.into(),
            model: model.into(),
            inputs: BTreeMap::new(),
            estimate: None,
            standard_error: None,
            verdict,
            detail: String::new(),
            anchor: anchor.into(),
        }
    }

    pub fn input(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn estimate(mut self, value: f64, standard_error: f64) -> Self {
        self.estimate = Some(value);
        self.standard_error = Some(standard_error);
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    fn inputs_joined(&self) -> String {
        self.inputs
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

const CSV_HEADER: [&str; 8] = [
    "check",
    "model",
    "inputs",
    "estimate",
    "standard_error",
    "verdict",
    "detail",
    "anchor",
];

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_records(out: &mut dyn Write, format: Format, records: &[ReportRecord]) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(CSV_HEADER)?;
            for r in records {
                w.write_record([
                    r.check.as_str(),
                    r.model.as_str(),
                    &r.inputs_joined(),
                    &opt(r.estimate),
                    &opt(r.standard_error),
                    r.verdict.as_str(),
                    &r.detail,
                    &r.anchor,
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in records {
                let est = match (r.estimate, r.standard_error) {
                    (Some(e), Some(se)) => format!(" {e:.6} ± {se:.1e}"),
                    _ => String::new(),
                };
                writeln!(
                    out,
                    "{:<24} {:<9} {:<14}{est}  {}  [{}]",
                    r.check,
                    r.model,
                    r.verdict.as_str(),
                    r.detail,
                    r.inputs_joined()
                )?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReportRecord {
        ReportRecord::new("verify", "ks", Verdict::Pass, "claim")
            .input("pair", 3)
            .input("a", "x,y")
            .estimate(0.25, 1e-4)
            .detail("ok")
    }

    #[test]
    fn json_round_trips_one_object_per_line() {
        let mut buf = Vec::new();
        write_records(&mut buf, Format::Json, &[sample(), sample()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let back: ReportRecord = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(back, sample());
        assert!(lines[0].contains("\"verdict\":\"pass\""));
    }

    #[test]
    fn csv_quotes_commas_and_keeps_input_order() {
        let mut buf = Vec::new();
        write_records(&mut buf, Format::Csv, &[sample()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("check,model,inputs,"));
        assert!(text.contains("\"a=x,y;pair=3\""));
    }

    #[test]
    fn verdict_spellings() {
        assert_eq!(serde_json::to_string(&Verdict::NotDeficient).unwrap(), "\"not-deficient\"");
        assert_eq!(serde_json::to_string(&Verdict::Unsat).unwrap(), "\"UNSAT\"");
        assert_eq!(Verdict::from_pass(false), Verdict::Fail);
    }
}
