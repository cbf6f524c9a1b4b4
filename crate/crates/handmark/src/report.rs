//! Writing a [`MetricsReport`] as JSON and as a fixed-width table.

use std::fs;
use std::path::{Path, PathBuf};

use handmark_core::MetricsReport;

use crate::{Error, Result};

pub const JSON_FILE: &str = "report.json";
pub const TABLE_FILE: &str = "report.txt";

pub fn to_json(report: &MetricsReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}

pub fn from_json(text: &str) -> serde_json::Result<MetricsReport> {
    serde_json::from_str(text)
}

fn threshold_label(threshold: f64) -> String {
    let pct = format!("{:.4}", threshold * 100.0);
    let pct = pct.trim_end_matches('0').trim_end_matches('.');
    format!("Above {pct}% Confidence")
}

/// Two rows, generated and reference. MJRD compares the two sides, so it
/// appears on the generated row only.
pub fn to_table(report: &MetricsReport) -> String {
    let headers = [
        "Dataset".to_string(),
        "Mediapipe Confidence".to_string(),
        threshold_label(report.threshold),
        "Mean Joint Ratio Difference".to_string(),
    ];
    let rows = [
        [
            "generated".to_string(),
            format!("{:.4}", report.mean_confidence),
            format!("{:.4}", report.above_threshold_fraction),
            format!("{:.4}", report.mjrd),
        ],
        [
            "reference".to_string(),
            format!("{:.4}", report.reference_mean_confidence),
            format!("{:.4}", report.reference_above_threshold_fraction),
            "-".to_string(),
        ],
    ];
    let widths: Vec<usize> = (0..headers.len())
        .map(|c| rows.iter().map(|r| r[c].len()).chain([headers[c].len()]).max().unwrap())
        .collect();

    let line = |cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (s, &w))| if c == 0 { format!("{s:<w$}") } else { format!("{s:>w$}") })
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let rule: String = widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  ") + "\n";

    let mut out = line(&headers);
    out += &rule;
    for r in &rows {
        out += &line(r);
    }
    out += &format!(
        "\nimages: {} generated, {} reference; hands: {} generated, {} reference\n",
        report.n_generated, report.n_reference, report.n_generated_hands, report.n_reference_hands
    );
    out
}

/// Writes `report.json` and `report.txt` into `out`, returning both paths.
pub fn write_report(report: &MetricsReport, out: &Path) -> Result<[PathBuf; 2]> {
    fs::create_dir_all(out).map_err(Error::io(out))?;
    let json = out.join(JSON_FILE);
    let table = out.join(TABLE_FILE);
    fs::write(&json, to_json(report)).map_err(Error::io(&json))?;
    fs::write(&table, to_table(report)).map_err(Error::io(&table))?;
    Ok([json, table])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MetricsReport {
        MetricsReport {
            n_generated: 4,
            n_reference: 3,
            n_generated_hands: 5,
            n_reference_hands: 3,
            threshold: 0.9,
            mean_confidence: 0.64,
            above_threshold_fraction: 0.5,
            reference_mean_confidence: 0.693,
            reference_above_threshold_fraction: 0.443,
            mjrd: 0.0293,
            mean_generated: [1.0; 20],
            mean_reference: [2.0; 20],
            normalized_generated: [0.25; 20],
            normalized_reference: [0.125; 20],
        }
    }

    #[test]
    fn labels() {
        assert_eq!(threshold_label(0.9), "Above 90% Confidence");
        assert_eq!(threshold_label(0.5), "Above 50% Confidence");
        assert_eq!(threshold_label(0.125), "Above 12.5% Confidence");
    }

    #[test]
    fn table_columns_line_up() {
        let t = to_table(&sample());
        let lines: Vec<&str> = t.lines().collect();
        assert!(lines[0].contains("Mediapipe Confidence"));
        assert!(lines[0].ends_with("Mean Joint Ratio Difference"));
        assert!(lines[2].starts_with("generated"));
        assert!(lines[2].ends_with("0.0293"));
        assert_eq!(lines[0].len(), lines[2].len());
        assert!(lines[3].contains("0.6930"));
    }

    #[test]
    fn json_roundtrip() {
        let r = sample();
        assert_eq!(from_json(&to_json(&r)).unwrap(), r);
    }
}
