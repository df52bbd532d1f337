//! Monte Carlo checks of the closed forms.

mod mc;
mod report;
mod suite;

pub use mc::{mc_estimate, Integrand, McConfig, McEstimate, DEFAULT_CHUNK, DEFAULT_SAMPLES, DEFAULT_SEED};
pub use report::{parse_json_report, report_emit, report_to_string, ReportFormat, CSV_HEADER};
pub use suite::{
    all_passed, default_suite, judge, load_suite, parse_suite, verify_case, verify_suite, McReport, SuiteOptions,
    Verdict, VerifyCase, DEFAULT_ABS_FLOOR, KURTOSIS_BOOST,
};
