use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::mc::{mc_estimate, Integrand, McConfig, McEstimate};
use crate::averages::{evaluate, AverageSpec};
use crate::error::{Error, Result};
use crate::measures::SeedSpec;

const DEFAULT_SUITE: &str = include_str!("../../suites/default.json");

/// Estimates whose integrand kurtosis exceeds this are rerun with ten times
/// the samples.
pub const KURTOSIS_BOOST: f64 = 50.0;
pub const DEFAULT_ABS_FLOOR: f64 = 1e-4;

/// One closed form to check against Monte Carlo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyCase {
    pub case_id: String,
    #[serde(flatten)]
    pub average: AverageSpec,
    #[serde(default)]
    pub mc: McConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of one case. Fields that could not be computed (the case hit an
/// error) are `null` and `error` says why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub case_id: String,
    pub estimate: Option<f64>,
    pub std_error: Option<f64>,
    pub closed_form: Option<f64>,
    pub abs_diff: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
    pub n: u64,
    pub runtime_ms: u64,
    pub seed: SeedSpec,
    pub kurtosis: Option<f64>,
    pub boosted: bool,
    pub error: Option<String>,
}

impl McReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub abs_floor: f64,
    /// Worker threads; `None` uses every core.
    pub workers: Option<usize>,
    /// Record wall-clock times. Off, `runtime_ms` is zero and reports are
    /// byte-reproducible.
    pub timing: bool,
    /// Overrides every case's sample count.
    pub samples: Option<u64>,
    /// Overrides every case's seed (the stream is kept).
    pub seed: Option<u64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { abs_floor: DEFAULT_ABS_FLOOR, workers: None, timing: true, samples: None, seed: None }
    }
}

/// `(abs_diff, tolerance, verdict)` with tolerance `max(4 SE, abs_floor)`.
pub fn judge(estimate: f64, std_error: f64, closed_form: f64, abs_floor: f64) -> (f64, f64, Verdict) {
    let abs_diff = (estimate - closed_form).abs();
    let tolerance = (4.0 * std_error).max(abs_floor);
    let verdict = if abs_diff <= tolerance { Verdict::Pass } else { Verdict::Fail };
    (abs_diff, tolerance, verdict)
}

/// The suite shipped with the crate.
pub fn default_suite() -> Vec<VerifyCase> {
    parse_suite(DEFAULT_SUITE).expect("bundled suite parses")
}

pub fn parse_suite(text: &str) -> Result<Vec<VerifyCase>> {
    let cases: Vec<VerifyCase> = serde_json::from_str(text)?;
    let mut seen = HashSet::new();
    for case in &cases {
        if !seen.insert(case.case_id.as_str()) {
            return Err(Error::InvalidSpec(format!("duplicate case_id {:?}", case.case_id)));
        }
    }
    Ok(cases)
}

pub fn load_suite(path: &Path) -> Result<Vec<VerifyCase>> {
    parse_suite(&std::fs::read_to_string(path)?)
}

/// Runs every case; errors inside a case land in its report.
pub fn verify_suite(cases: &[VerifyCase], options: &SuiteOptions) -> Result<Vec<McReport>> {
    let mut ids = HashSet::new();
    if let Some(dup) = cases.iter().find(|c| !ids.insert(c.case_id.as_str())) {
        return Err(Error::InvalidSpec(format!("duplicate case_id {:?}", dup.case_id)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidSpec(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| cases.iter().map(|c| verify_case(c, options)).collect()))
}

pub fn verify_case(case: &VerifyCase, options: &SuiteOptions) -> McReport {
    let started = Instant::now();
    let mut config = case.mc;
    if let Some(n) = options.samples {
        config.samples = n;
    }
    if let Some(seed) = options.seed {
        config.seed.seed = seed;
    }
    let mut report = McReport {
        case_id: case.case_id.clone(),
        estimate: None,
        std_error: None,
        closed_form: None,
        abs_diff: None,
        tolerance: None,
        verdict: Verdict::Fail,
        n: 0,
        runtime_ms: 0,
        seed: config.seed,
        kurtosis: None,
        boosted: false,
        error: None,
    };
    match run(case, config) {
        Ok((closed_form, est, boosted)) => {
            let (abs_diff, tolerance, verdict) = judge(est.estimate, est.std_error, closed_form, options.abs_floor);
            report.estimate = Some(est.estimate);
            report.std_error = Some(est.std_error);
            report.closed_form = Some(closed_form);
            report.abs_diff = Some(abs_diff);
            report.tolerance = Some(tolerance);
            report.verdict = verdict;
            report.n = est.n;
            report.kurtosis = Some(est.kurtosis);
            report.boosted = boosted;
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    if options.timing {
        report.runtime_ms = started.elapsed().as_millis() as u64;
    }
    report
}

fn run(case: &VerifyCase, config: McConfig) -> Result<(f64, McEstimate, bool)> {
    let closed = evaluate(&case.average)?;
    let closed_form = closed.value.ok_or_else(|| Error::InvalidSpec("closed form has no value".into()))?;
    let integrand = Integrand::for_average(&case.average)?;
    let measure = &case.average.measure;
    let mut est = mc_estimate(measure, |s| integrand.eval(s), &config)?;
    let mut boosted = false;
    if est.kurtosis > KURTOSIS_BOOST {
        log::info!("case {}: kurtosis {:.1}, rerunning with 10x samples", case.case_id, est.kurtosis);
        let bigger = McConfig { samples: config.samples * 10, ..config };
        est = mc_estimate(measure, |s| integrand.eval(s), &bigger)?;
        boosted = true;
    }
    Ok((closed_form, est, boosted))
}

/// `true` when every report passed.
pub fn all_passed(reports: &[McReport]) -> bool {
    reports.iter().all(McReport::passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::averages::Functional;
    use crate::measures::MeasureSpec;

    fn case(id: &str, spec: AverageSpec, samples: u64) -> VerifyCase {
        VerifyCase { case_id: id.into(), average: spec, mc: McConfig { samples, ..Default::default() } }
    }

    #[test]
    fn comparator() {
        assert_eq!(judge(1.0, 0.01, 1.03, 1e-4).2, Verdict::Pass);
        let (_, tol, v) = judge(1.0, 0.01, 1.0 + 10.0 * 0.01, 1e-4);
        assert_eq!((tol, v), (0.04, Verdict::Fail));
        // absolute floor for tiny standard errors
        assert_eq!(judge(0.0, 0.0, 5e-5, 1e-4).2, Verdict::Pass);
    }

    #[test]
    fn bundled_suite_parses() {
        let suite = default_suite();
        assert!(!suite.is_empty() && suite.len() <= 40);
        for c in &suite {
            c.average.validate().unwrap();
            assert_eq!(c.mc.seed.seed, 42, "{}", c.case_id);
        }
    }

    #[test]
    fn errors_stay_inside_their_case() {
        let good = AverageSpec::new(MeasureSpec::type1(1, &[2.0, 3.0]), Functional::DetPower).with_gammas(&[1.0]);
        let bad = AverageSpec::new(MeasureSpec::type2(1, &[2.0, 0.5]), Functional::DetPower).with_gammas(&[1.0]);
        let cases = vec![case("a", good.clone(), 2000), case("b", bad, 2000), case("c", good, 2000)];
        let opts = SuiteOptions { timing: false, ..Default::default() };
        let reports = verify_suite(&cases, &opts).unwrap();
        assert!(reports[0].passed() && reports[2].passed());
        assert!(!reports[1].passed());
        assert!(reports[1].error.as_deref().unwrap().contains("alpha_2 - (gamma_1 + ... + gamma_k) > p-1"));
        assert_eq!(reports[0].estimate, reports[2].estimate);

        let dup = vec![cases[0].clone(), cases[0].clone()];
        assert!(verify_suite(&dup, &opts).is_err());
    }
}
