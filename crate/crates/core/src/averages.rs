//! Closed-form Dirichlet averages.
//!
//! Every gamma ratio is a difference of `log Gamma~_p` values. Existence
//! conditions are checked before any gamma is evaluated and reported by name,
//! so a moment that does not exist is an [`Error::Domain`], never a NaN.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigvals_hermitian, is_pd, logdet_abs, HermitianMatrix};
use crate::measures::{MeasureKind, MeasureSpec};
use crate::special::{
    hyp1f1_eigenvalues, ln_gamma_p, pochhammer_ratio, zonal_c_eigenvalues, Hyp1f1Result, Partition, TruncationPolicy,
};

/// Which average an [`AverageSpec`] asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    /// `prod |det X_j|^{gamma_j}`.
    DetPower,
    /// `|det(I - sum X_j)|^delta` (type-1) or `|det(I + sum X_j)|^{-delta}` (type-2).
    ComplementPower,
    /// `e^{tr(A X_1)}` under the `k = 2` type-1 measure.
    ExpTrace,
    /// `e^{-tr(A X_1)} |det(I + X_1)|^{alpha_1 + alpha_3}` under the `k = 2` type-2 measure.
    Phi6,
    /// `(u_1 + ... + u_k)^h` for the rectangular measures at `p = 1`.
    HermitianFormMoment,
    /// `C~_kappa(A^{1/2} X_1 A^{1/2})` under the `k = 1` type-1 (matrix beta) measure.
    ZonalMoment,
}

/// A measure, a functional and exactly the parameters that functional needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageSpec {
    pub measure: MeasureSpec,
    pub functional: Functional,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", alias = "A")]
    pub a: Option<HermitianMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<TruncationPolicy>,
}

impl AverageSpec {
    pub fn new(measure: MeasureSpec, functional: Functional) -> Self {
        AverageSpec { measure, functional, gammas: None, delta: None, h: None, a: None, kappa: None, policy: None }
    }

    pub fn with_gammas(mut self, gammas: &[f64]) -> Self {
        self.gammas = Some(gammas.to_vec());
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = Some(h);
        self
    }

    pub fn with_matrix(mut self, a: HermitianMatrix) -> Self {
        self.a = Some(a);
        self
    }

    pub fn with_kappa(mut self, kappa: Partition) -> Self {
        self.kappa = Some(kappa);
        self
    }

    pub fn with_policy(mut self, policy: TruncationPolicy) -> Self {
        self.policy = Some(policy);
        self
    }

    /// Structural checks: the measure kind suits the functional and exactly
    /// the required parameters are present. Existence conditions are left to
    /// the evaluators.
    pub fn validate(&self) -> Result<()> {
        use Functional::*;
        let m = &self.measure;
        let (kinds, k_required, params): (&[MeasureKind], Option<usize>, &[&str]) = match self.functional {
            DetPower => (
                &[MeasureKind::Type1, MeasureKind::Type2, MeasureKind::RectType1P1, MeasureKind::RectType2P1],
                None,
                &["gammas"],
            ),
            ComplementPower => (
                &[MeasureKind::Type1, MeasureKind::Type2, MeasureKind::RectType1P1, MeasureKind::RectType2P1],
                None,
                &["delta"],
            ),
            ExpTrace => (&[MeasureKind::Type1], Some(2), &["a", "policy"]),
            Phi6 => (&[MeasureKind::Type2], Some(2), &["a"]),
            HermitianFormMoment => (&[MeasureKind::RectType1P1, MeasureKind::RectType2P1], None, &["h"]),
            ZonalMoment => (&[MeasureKind::Type1], Some(1), &["a", "kappa"]),
        };
        if !kinds.contains(&m.kind) {
            return Err(Error::InvalidSpec(format!("{:?} is not defined for {:?} measures", self.functional, m.kind)));
        }
        if let Some(k) = k_required {
            if m.k != k {
                return Err(Error::InvalidSpec(format!("{:?} needs k = {k}, found k = {}", self.functional, m.k)));
            }
        }
        let present = [
            ("gammas", self.gammas.is_some()),
            ("delta", self.delta.is_some()),
            ("h", self.h.is_some()),
            ("a", self.a.is_some()),
            ("kappa", self.kappa.is_some()),
            ("policy", self.policy.is_some()),
        ];
        for (name, is_present) in present {
            // the truncation policy is optional for exp_trace
            let required = params.contains(&name) && name != "policy";
            if required && !is_present {
                return Err(Error::InvalidSpec(format!("{:?} needs parameter {name}", self.functional)));
            }
            if is_present && !params.contains(&name) {
                return Err(Error::InvalidSpec(format!("{:?} does not take parameter {name}", self.functional)));
            }
        }
        if let Some(g) = &self.gammas {
            if g.len() != m.k {
                return Err(Error::InvalidSpec(format!("expected k = {} gammas, found {}", m.k, g.len())));
            }
        }
        let finite = self.gammas.iter().flatten().chain(&self.delta).chain(&self.h).all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidSpec("average parameters must be finite".into()));
        }
        if let Some(a) = &self.a {
            if a.dim() != m.p {
                return Err(Error::DimensionMismatch { expected: m.p, found: a.dim() });
            }
        }
        Ok(())
    }
}

/// Closed-form value of an average.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageResult {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    pub conditions_ok: bool,
    #[serde(default)]
    pub violated_conditions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Hyp1f1Result>,
}

impl AverageResult {
    fn from_log(log_value: f64) -> Self {
        AverageResult {
            log_value: Some(log_value),
            value: Some(log_value.exp()),
            conditions_ok: true,
            violated_conditions: Vec::new(),
            diagnostics: None,
        }
    }

    fn from_value(value: f64) -> Self {
        AverageResult {
            log_value: (value > 0.0).then(|| value.ln()),
            value: Some(value),
            conditions_ok: true,
            violated_conditions: Vec::new(),
            diagnostics: None,
        }
    }

    /// Result carrying only the names of the violated conditions.
    pub fn violated(conditions: Vec<String>) -> Self {
        AverageResult {
            log_value: None,
            value: None,
            conditions_ok: false,
            violated_conditions: conditions,
            diagnostics: None,
        }
    }
}

fn check(violated: Vec<String>) -> Result<()> {
    if violated.is_empty() {
        Ok(())
    } else {
        Err(Error::Domain(violated))
    }
}

fn lgp(p: usize, a: f64) -> Result<f64> {
    ln_gamma_p(p, a)
}

/// `log Gamma~_p(b) - log Gamma~_p(a)`.
fn lgp_ratio(p: usize, b: f64, a: f64) -> Result<f64> {
    Ok(lgp(p, b)? - lgp(p, a)?)
}

/// Shape parameters of the component laws: `alpha_j` for square measures,
/// `alpha_j + n_j` for the rectangular ones (`j <= k`).
fn effective_alphas(m: &MeasureSpec) -> Vec<f64> {
    let ns = m.ns_or_zero();
    (0..m.k).map(|j| m.alphas[j] + ns[j]).collect()
}

/// Log of the normalizing constant: `D~_k` for the square measures, `G~_k`
/// (including the `|det B_j|^p` and `Gamma~_p(n_j) / pi^{n_j p}` factors) for
/// the rectangular ones.
pub fn normalizer_ln(measure: &MeasureSpec) -> Result<f64> {
    measure.validate()?;
    let p = measure.p;
    let total: f64 = measure.alphas.iter().sum::<f64>() + measure.ns_or_zero().iter().sum::<f64>();
    let mut acc = lgp(p, total)? - lgp(p, measure.last_alpha())?;
    let shapes = effective_alphas(measure);
    for (j, &shape) in shapes.iter().enumerate() {
        acc -= lgp(p, shape)?;
        if measure.kind.is_rectangular() {
            let n = measure.ns.as_ref().expect("validated")[j];
            let logdet_b = match &measure.bs {
                Some(bs) => logdet_abs(&bs[j])?,
                None => 0.0,
            };
            acc += p as f64 * logdet_b + lgp(p, n as f64)? - (n as usize * p) as f64 * std::f64::consts::PI.ln();
        }
    }
    Ok(acc)
}

/// `E[prod |det X_j|^{gamma_j}]`. Type-1 and the rectangular type-1 measure
/// give `prod Gamma~_p(a_j + gamma_j) / Gamma~_p(a_j)` times
/// `Gamma~_p(sum alpha) / Gamma~_p(sum alpha + sum gamma)`; type-2 and the
/// rectangular type-2 measure replace the second factor with
/// `Gamma~_p(alpha_{k+1} - sum gamma) / Gamma~_p(alpha_{k+1})`. Here `a_j` is
/// `alpha_j`, shifted by `n_j` for the rectangular measures.
pub fn det_power_average(measure: &MeasureSpec, gammas: &[f64]) -> Result<AverageResult> {
    measure.validate()?;
    if gammas.len() != measure.k {
        return Err(Error::InvalidSpec(format!("expected k = {} gammas, found {}", measure.k, gammas.len())));
    }
    let p = measure.p;
    let bound = (p - 1) as f64;
    let shapes = effective_alphas(measure);
    let rect = measure.kind.is_rectangular();
    let gamma_sum: f64 = gammas.iter().sum();
    let last = measure.last_alpha();

    let mut violated = Vec::new();
    for (j, (&a, &g)) in shapes.iter().zip(gammas).enumerate() {
        if !(a + g > bound) {
            violated.push(if rect {
                format!("alpha_{0} + n_{0} + gamma_{0} > p-1", j + 1)
            } else {
                format!("alpha_{0} + gamma_{0} > p-1", j + 1)
            });
        }
    }
    let type2 = matches!(measure.kind, MeasureKind::Type2 | MeasureKind::RectType2P1);
    if type2 && !(last - gamma_sum > bound) {
        violated.push(format!("alpha_{} - (gamma_1 + ... + gamma_k) > p-1", measure.k + 1));
    }
    check(violated)?;

    let mut log = 0.0;
    for (&a, &g) in shapes.iter().zip(gammas) {
        if g != 0.0 {
            log += lgp_ratio(p, a + g, a)?;
        }
    }
    if gamma_sum != 0.0 {
        if type2 {
            log += lgp_ratio(p, last - gamma_sum, last)?;
        } else {
            let total = shapes.iter().sum::<f64>() + last;
            log += lgp_ratio(p, total, total + gamma_sum)?;
        }
    }
    Ok(AverageResult::from_log(log))
}

/// `E[|det(I - sum X_j)|^delta]` for type-1 measures and
/// `E[|det(I + sum X_j)|^{-delta}]` for type-2 measures. Both equal
/// `Gamma~_p(alpha_{k+1} + delta) / Gamma~_p(alpha_{k+1})` times
/// `Gamma~_p(T) / Gamma~_p(T + delta)` with `T` the sum of all shapes, and
/// share one code path.
pub fn complement_power_average(measure: &MeasureSpec, delta: f64) -> Result<AverageResult> {
    measure.validate()?;
    let p = measure.p;
    let last = measure.last_alpha();
    check(if last + delta > (p - 1) as f64 {
        Vec::new()
    } else {
        vec![format!("alpha_{} + delta > p-1", measure.k + 1)]
    })?;
    if delta == 0.0 {
        return Ok(AverageResult::from_log(0.0));
    }
    let total = effective_alphas(measure).iter().sum::<f64>() + last;
    let log = lgp_ratio(p, last + delta, last)? + lgp_ratio(p, total, total + delta)?;
    Ok(AverageResult::from_log(log))
}

fn base_conditions(p: usize, alphas: &[f64]) -> Result<()> {
    let bound = (p - 1) as f64;
    check(
        alphas
            .iter()
            .enumerate()
            .filter(|(_, &a)| !(a > bound))
            .map(|(j, _)| format!("alpha_{} > p-1", j + 1))
            .collect(),
    )
}

fn three_alphas(p: usize, alphas: &[f64]) -> Result<[f64; 3]> {
    let a: [f64; 3] =
        alphas.try_into().map_err(|_| Error::InvalidSpec(format!("expected 3 alphas, found {}", alphas.len())))?;
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidSpec("alphas must be finite".into()));
    }
    base_conditions(p, &a)?;
    Ok(a)
}

/// `E[e^{tr(A X_1)}]` under the `k = 2` type-1 measure, which is
/// `1F1(alpha_1; alpha_1 + alpha_2 + alpha_3; A)`. The truncation diagnostics
/// are returned with the value.
pub fn exp_trace_average(
    p: usize,
    alphas: &[f64],
    a: &HermitianMatrix,
    policy: &TruncationPolicy,
) -> Result<AverageResult> {
    let [a1, a2, a3] = three_alphas(p, alphas)?;
    if a.dim() != p {
        return Err(Error::DimensionMismatch { expected: p, found: a.dim() });
    }
    let series = hyp1f1_eigenvalues(a1, a1 + a2 + a3, &eigvals_hermitian(a)?, policy)?;
    if !series.converged {
        log::warn!(
            "1F1 series stopped at order {} without meeting the early-stop criterion (last increment {:e})",
            series.order_reached,
            series.last_increment
        );
    }
    let mut result = AverageResult::from_value(series.value);
    result.diagnostics = Some(series);
    Ok(result)
}

/// `E[e^{-tr(A X_1)} |det(I + X_1)|^{alpha_1 + alpha_3}]` under the `k = 2`
/// type-2 measure: `Gamma~_p(alpha_1 + alpha_3) / Gamma~_p(alpha_3) |det A|^{-alpha_1}`.
pub fn phi6_average(p: usize, alphas: &[f64], a: &HermitianMatrix) -> Result<AverageResult> {
    let [a1, _, a3] = three_alphas(p, alphas)?;
    if a.dim() != p {
        return Err(Error::DimensionMismatch { expected: p, found: a.dim() });
    }
    let logdet = logdet_abs(a)?;
    Ok(AverageResult::from_log(lgp_ratio(p, a1 + a3, a3)? - a1 * logdet))
}

/// `E[(u_1 + ... + u_k)^h]` for the rectangular measures at `p = 1`, with
/// `S = sum (alpha_j + n_j)`: type-1 gives `Gamma(S + h) Gamma(S + alpha_{k+1})`
/// over `Gamma(S) Gamma(S + alpha_{k+1} + h)`, type-2 gives
/// `Gamma(S + h) Gamma(alpha_{k+1} - h) / (Gamma(S) Gamma(alpha_{k+1}))`.
pub fn hermitian_form_moment(measure: &MeasureSpec, h: f64) -> Result<AverageResult> {
    if !measure.kind.is_rectangular() {
        return Err(Error::InvalidSpec("Hermitian-form moments are defined for rectangular measures".into()));
    }
    measure.validate()?;
    let s: f64 = effective_alphas(measure).iter().sum();
    let last = measure.last_alpha();
    let type2 = measure.kind == MeasureKind::RectType2P1;
    let mut violated = Vec::new();
    if !(s + h > 0.0) {
        violated.push("(alpha_1 + n_1) + ... + (alpha_k + n_k) + h > 0".to_string());
    }
    if type2 && !(last - h > 0.0) {
        violated.push(format!("alpha_{} - h > 0", measure.k + 1));
    }
    check(violated)?;
    if h == 0.0 {
        return Ok(AverageResult::from_log(0.0));
    }
    let mut log = lgp_ratio(1, s + h, s)?;
    log += if type2 { lgp_ratio(1, last - h, last)? } else { lgp_ratio(1, s + last, s + last + h)? };
    Ok(AverageResult::from_log(log))
}

/// `E[C~_kappa(A^{1/2} Z A^{1/2})] = [alpha]_kappa / [alpha + beta]_kappa C~_kappa(A)`
/// for `Z` matrix beta with parameters `(alpha, beta)` (the `k = 1` type-1
/// measure).
pub fn zonal_moment_average(
    p: usize,
    alpha: f64,
    beta: f64,
    kappa: &Partition,
    a: &HermitianMatrix,
) -> Result<AverageResult> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidSpec("alphas must be finite".into()));
    }
    base_conditions(p, &[alpha, beta])?;
    if a.dim() != p {
        return Err(Error::DimensionMismatch { expected: p, found: a.dim() });
    }
    if !is_pd(a) {
        return Err(Error::domain("A > O"));
    }
    let ratio = pochhammer_ratio(alpha, alpha + beta, kappa)
        .ok_or_else(|| Error::PochhammerPole { partition: kappa.to_string() })?;
    let zonal = zonal_c_eigenvalues(kappa, &eigvals_hermitian(a)?);
    Ok(AverageResult::from_value(ratio * zonal))
}

/// Evaluates any [`AverageSpec`]. Nonexistent moments come back as
/// [`Error::Domain`].
pub fn evaluate(spec: &AverageSpec) -> Result<AverageResult> {
    spec.validate()?;
    let m = &spec.measure;
    match spec.functional {
        Functional::DetPower => det_power_average(m, spec.gammas.as_deref().expect("validated")),
        Functional::ComplementPower => complement_power_average(m, spec.delta.expect("validated")),
        Functional::ExpTrace => {
            m.validate()?;
            exp_trace_average(m.p, &m.alphas, spec.a.as_ref().expect("validated"), &spec.policy.unwrap_or_default())
        }
        Functional::Phi6 => {
            m.validate()?;
            phi6_average(m.p, &m.alphas, spec.a.as_ref().expect("validated"))
        }
        Functional::HermitianFormMoment => hermitian_form_moment(m, spec.h.expect("validated")),
        Functional::ZonalMoment => {
            m.validate()?;
            zonal_moment_average(
                m.p,
                m.alphas[0],
                m.alphas[1],
                spec.kappa.as_ref().expect("validated"),
                spec.a.as_ref().expect("validated"),
            )
        }
    }
}

/// Like [`evaluate`], but a domain violation becomes a result with
/// `conditions_ok = false` and the violated conditions listed.
pub fn evaluate_or_violations(spec: &AverageSpec) -> Result<AverageResult> {
    match evaluate(spec) {
        Err(Error::Domain(conditions)) => Ok(AverageResult::violated(conditions)),
        other => other,
    }
}
