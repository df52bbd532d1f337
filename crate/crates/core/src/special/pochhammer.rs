use num_complex::Complex64;

use super::Partition;

/// Rising factorial `(a)_m = a (a+1) ... (a+m-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: Complex64, m: u32) -> Complex64 {
    (0..m).fold(Complex64::new(1.0, 0.0), |acc, i| acc * (a + i as f64))
}

/// Generalized Pochhammer symbol `[a]_kappa = prod_j (a - j + 1)_{kappa_j}`.
pub fn pochhammer_gen(a: Complex64, kappa: &Partition) -> Complex64 {
    kappa.parts().iter().enumerate().fold(Complex64::new(1.0, 0.0), |acc, (j, &m)| acc * pochhammer(a - j as f64, m))
}

/// `[a]_kappa / [c]_kappa` as a product of factor ratios, so large partitions
/// never overflow. `None` when some factor of `[c]_kappa` vanishes.
pub fn pochhammer_ratio(a: f64, c: f64, kappa: &Partition) -> Option<f64> {
    let mut ratio = 1.0;
    for (j, &m) in kappa.parts().iter().enumerate() {
        for i in 0..m {
            let shift = i as f64 - j as f64;
            let den = c + shift;
            if den.abs() <= 1e-14 * c.abs().max(1.0) {
                return None;
            }
            ratio *= (a + shift) / den;
        }
    }
    Some(ratio)
}
