use serde::{Deserialize, Serialize};

use super::partition::partitions_of;
use super::pochhammer::pochhammer_ratio;
use super::schur::{complete_homogeneous, schur_from_complete};
use crate::error::{Error, Result};
use crate::linalg::{eigvals_hermitian, HermitianMatrix};

/// Truncation control for zonal series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TruncationPolicy {
    /// Largest partition weight summed.
    pub max_order: u32,
    /// Early stop threshold relative to the partial sum.
    pub rel_stop: f64,
    /// Number of consecutive small order increments needed to stop.
    pub consecutive_orders: u32,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { max_order: 25, rel_stop: 1e-12, consecutive_orders: 3 }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_stop > 0.0) {
            return Err(Error::InvalidSpec("truncation rel_stop must be positive".into()));
        }
        if self.consecutive_orders == 0 {
            return Err(Error::InvalidSpec("truncation consecutive_orders must be at least 1".into()));
        }
        Ok(())
    }
}

/// Value of a truncated series plus how the truncation went.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyp1f1Result {
    pub value: f64,
    pub order_reached: u32,
    pub last_increment: f64,
    /// `false` when the early-stop criterion never fired before `max_order`.
    pub converged: bool,
}

/// `1F1(a; c; A) = sum_m sum_{|kappa| = m} [a]_kappa / [c]_kappa * C~_kappa(A) / m!`
/// truncated according to `policy`.
pub fn hyp1f1_matrix(a: f64, c: f64, x: &HermitianMatrix, policy: &TruncationPolicy) -> Result<Hyp1f1Result> {
    hyp1f1_eigenvalues(a, c, &eigvals_hermitian(x)?, policy)
}

/// [`hyp1f1_matrix`] on a precomputed spectrum.
pub fn hyp1f1_eigenvalues(a: f64, c: f64, lambdas: &[f64], policy: &TruncationPolicy) -> Result<Hyp1f1Result> {
    policy.validate()?;
    if !a.is_finite() || !c.is_finite() {
        return Err(Error::InvalidSpec("1F1 parameters must be finite".into()));
    }
    let p = lambdas.len();
    let h = complete_homogeneous(lambdas, policy.max_order as usize + p);

    let mut sum = 0.0;
    let mut last_increment = 0.0;
    let mut order_reached = 0;
    let mut small_run = 0;
    let mut converged = false;
    for m in 0..=policy.max_order {
        let mut increment = 0.0;
        for kappa in partitions_of(m, p) {
            let ratio =
                pochhammer_ratio(a, c, &kappa).ok_or_else(|| Error::PochhammerPole { partition: kappa.to_string() })?;
            // C~_kappa / m! = s_kappa / prod(hooks)
            increment += ratio * kappa.inverse_hook_product() * schur_from_complete(&kappa, &h);
        }
        sum += increment;
        last_increment = increment.abs();
        order_reached = m;
        if m > 0 && last_increment < policy.rel_stop * sum.abs() {
            small_run += 1;
            if small_run >= policy.consecutive_orders {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    Ok(Hyp1f1Result { value: sum, order_reached, last_increment, converged })
}
