use std::io::{self, Write};

use clap::ValueEnum;
use cohesive_core::scenarios::SweepResult;
use cohesive_core::values::{Branch, PowerProfile};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Formats like C's `%.6g`: six significant digits, trailing zeros dropped.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // Rounding can carry into a new digit (9.999995 -> 10.00000).
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, exponent) = s.split_once('e').unwrap();
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub scenario: String,
    pub branch: Branch,
    pub b: f64,
    pub party: String,
    pub value: f64,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    scenario: &'a str,
    branch: &'a str,
    b: String,
    party: &'a str,
    value: String,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    scenario: &'a str,
    branch: &'a str,
    b: f64,
    party: &'a str,
    value: f64,
}

/// Serializes key-value pairs as a map in insertion order.
struct Metadata<'a>(&'a [(String, String)]);

impl Serialize for Metadata<'_> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.0.iter().map(|(k, v)| (k, v)))
    }
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    metadata: Metadata<'a>,
    rows: Vec<JsonRow<'a>>,
}

/// Long-format table with a metadata header, columns fixed as
/// `scenario, branch, b, party, value`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputTable {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<Row>,
}

impl OutputTable {
    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn push_profile(&mut self, scenario: &str, parties: &[String], profile: &PowerProfile) {
        for (party, &value) in parties.iter().zip(&profile.values) {
            self.rows.push(Row {
                scenario: scenario.to_string(),
                branch: profile.branch,
                b: profile.exponent,
                party: party.clone(),
                value,
            });
        }
    }

    pub fn push_sweep(&mut self, sweep: &SweepResult) {
        for profile in &sweep.profiles {
            self.push_profile(&sweep.scenario, &sweep.parties, profile);
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        for (key, value) in &self.metadata {
            writeln!(out, "# {key}: {value}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        if self.rows.is_empty() {
            w.write_record(["scenario", "branch", "b", "party", "value"])?;
        }
        for r in &self.rows {
            w.serialize(CsvRow {
                scenario: &r.scenario,
                branch: r.branch.as_str(),
                b: sig6(r.b),
                party: &r.party,
                value: sig6(r.value),
            })?;
        }
        w.flush()
    }

    fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        let round = |x: f64| sig6(x).parse::<f64>().unwrap_or(x);
        let rows: Vec<JsonRow> = self
            .rows
            .iter()
            .map(|r| JsonRow {
                scenario: &r.scenario,
                branch: r.branch.as_str(),
                b: round(r.b),
                party: &r.party,
                value: round(r.value),
            })
            .collect();
        let doc = JsonDocument {
            metadata: Metadata(&self.metadata),
            rows,
        };
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(-0.0), "0");
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(0.05), "0.05");
        assert_eq!(sig6(3.0), "3");
        assert_eq!(sig6(0.43689123), "0.436891");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(0.0000123456789), "1.23457e-5");
        assert_eq!(sig6(9.9999996), "10");
        assert_eq!(sig6(-0.25), "-0.25");
    }

    #[test]
    fn csv_layout() {
        let mut t = OutputTable::default();
        t.meta("dataset", "x");
        t.rows.push(Row {
            scenario: "A".into(),
            branch: Branch::Shapley,
            b: 1.0,
            party: "P, Q".into(),
            value: 0.5,
        });
        let mut buf = Vec::new();
        t.write(Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# dataset: x\nscenario,branch,b,party,value\nA,shapley,1,\"P, Q\",0.5\n"
        );
    }
}
