use crate::error::{Error, Result};

/// Weighted power mean `[sum w_j z_j^b]^{1/b}`, with the geometric mean
/// `prod z_j^{w_j}` at `b = 0`.
pub fn power_mean(weights: &[f64], values: &[f64], b: f64) -> Result<f64> {
    if weights.is_empty() || weights.len() != values.len() {
        return Err(Error::BadWeights(format!("{} weights for {} values", weights.len(), values.len())));
    }
    if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
        return Err(Error::BadWeights("weights must be positive".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::BadWeights(format!("weights sum to {total}, not 1")));
    }
    if values.iter().any(|&z| !(z > 0.0) || !z.is_finite()) {
        return Err(Error::BadSupport("values must be positive and finite".into()));
    }
    if !b.is_finite() {
        return Err(Error::InvalidSpec("exponent b must be finite".into()));
    }

    let log_geo: f64 = weights.iter().zip(values).map(|(w, z)| w * z.ln()).sum();
    if b == 0.0 {
        return Ok(log_geo.exp());
    }
    let largest = values.iter().map(|z| (b * z.ln()).abs()).fold(0.0, f64::max);
    let log_sum = if largest < 1.0 {
        // near b = 0: log(1 + sum w_j expm1(b log z_j)) keeps full precision
        weights.iter().zip(values).map(|(w, z)| w * (b * z.ln()).exp_m1()).sum::<f64>().ln_1p()
    } else {
        let shift = values.iter().map(|z| b * z.ln()).fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = weights.iter().zip(values).map(|(w, z)| w * (b * z.ln() - shift).exp()).sum();
        sum.ln() + shift
    };
    Ok((log_sum / b).exp())
}
