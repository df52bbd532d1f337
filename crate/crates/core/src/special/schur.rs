//! Schur polynomials and complex zonal polynomials.
//!
//! `C~_kappa(X) = f^kappa * s_kappa(eig X)`, where `f^kappa` counts standard
//! Young tableaux. With this scaling `sum_{|kappa| = m} C~_kappa(X) = (tr X)^m`,
//! which is exactly the normalization the exponential expansion
//! `e^{tr X} = sum_m sum_kappa C~_kappa(X) / m!` needs.

use super::Partition;
use crate::error::Result;
use crate::linalg::{eigvals_hermitian, HermitianMatrix};

/// Complete homogeneous symmetric polynomials `h_0..=h_max_degree` of `lambdas`,
/// from power sums via Newton's identities `k h_k = sum_{i=1..k} p_i h_{k-i}`.
pub fn complete_homogeneous(lambdas: &[f64], max_degree: usize) -> Vec<f64> {
    let mut power_sums = vec![0.0; max_degree + 1];
    for &x in lambdas {
        let mut pw = 1.0;
        for ps in power_sums.iter_mut().skip(1) {
            pw *= x;
            *ps += pw;
        }
    }
    let mut h = vec![0.0; max_degree + 1];
    h[0] = 1.0;
    for k in 1..=max_degree {
        let acc: f64 = (1..=k).map(|i| power_sums[i] * h[k - i]).sum();
        h[k] = acc / k as f64;
    }
    h
}

/// Schur polynomial `s_kappa(lambda_1, ..., lambda_p)` by the Jacobi–Trudi
/// determinant `det[h_{kappa_i - i + j}]`. Zero when `kappa` has more nonzero
/// parts than there are variables.
pub fn schur_eval(kappa: &Partition, lambdas: &[f64]) -> f64 {
    if kappa.len() > lambdas.len() {
        return 0.0;
    }
    let h = complete_homogeneous(lambdas, kappa.parts().first().copied().unwrap_or(0) as usize + kappa.len());
    schur_from_complete(kappa, &h)
}

/// Jacobi–Trudi with precomputed `h_k`; `h` must cover degree `kappa_1 + len - 1`.
pub(crate) fn schur_from_complete(kappa: &Partition, h: &[f64]) -> f64 {
    let n = kappa.len();
    if n == 0 {
        return 1.0;
    }
    let parts = kappa.parts();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let idx = parts[i] as i64 - i as i64 + j as i64;
            m[i * n + j] = if idx < 0 { 0.0 } else { h[idx as usize] };
        }
    }
    real_det(&mut m, n)
}

fn real_det(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs())).unwrap();
        if a[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        let d = a[col * n + col];
        det *= d;
        for row in (col + 1)..n {
            let f = a[row * n + col] / d;
            for j in col..n {
                a[row * n + j] -= f * a[col * n + j];
            }
        }
    }
    det
}

/// Complex zonal polynomial from eigenvalues.
pub fn zonal_c_eigenvalues(kappa: &Partition, lambdas: &[f64]) -> f64 {
    if kappa.len() > lambdas.len() {
        return 0.0;
    }
    kappa.standard_tableaux_count_f64() * schur_eval(kappa, lambdas)
}

/// Complex zonal polynomial `C~_kappa(X)` of a Hermitian matrix.
pub fn zonal_c(kappa: &Partition, x: &HermitianMatrix) -> Result<f64> {
    Ok(zonal_c_eigenvalues(kappa, &eigvals_hermitian(x)?))
}
