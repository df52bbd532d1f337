use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::suite::{McReport, Verdict};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 9] =
    ["case_id", "estimate", "std_error", "closed_form", "abs_diff", "tolerance", "verdict", "n", "runtime_ms"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidSpec(format!("unknown report format {other:?}"))),
        }
    }
}

/// Writes `reports` as a pretty JSON array (field order as declared on
/// [`McReport`]) or as CSV with the fixed [`CSV_HEADER`].
pub fn report_emit<W: Write>(reports: &[McReport], format: ReportFormat, mut out: W) -> Result<()> {
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, reports)?;
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(CSV_HEADER)?;
            for r in reports {
                let num = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
                let verdict = match r.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "fail",
                };
                w.write_record([
                    r.case_id.clone(),
                    num(r.estimate),
                    num(r.std_error),
                    num(r.closed_form),
                    num(r.abs_diff),
                    num(r.tolerance),
                    verdict.to_string(),
                    r.n.to_string(),
                    r.runtime_ms.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn report_to_string(reports: &[McReport], format: ReportFormat) -> Result<String> {
    let mut buf = Vec::new();
    report_emit(reports, format, &mut buf)?;
    Ok(String::from_utf8(buf).expect("reports are UTF-8"))
}

pub fn parse_json_report(text: &str) -> Result<Vec<McReport>> {
    Ok(serde_json::from_str(text)?)
}
