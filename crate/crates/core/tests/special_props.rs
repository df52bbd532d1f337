mod common;

use common::{kummer, random_hermitian, random_unitary, rel_err, rng, uniform};
use mvda::special::{
    gamma_p_ln, hyp1f1_matrix, ln_gamma_p, partitions_of, pochhammer_gen, power_mean, zonal_c, GammaPArgs, Partition,
    TruncationPolicy,
};
use mvda::HermitianMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use statrs::function::gamma::ln_gamma;

#[test]
fn matrix_gamma_matches_gamma_products() {
    // log Gamma~_p(a) = p(p-1)/2 log pi + sum_j log Gamma(a - j)
    for p in 1..=6usize {
        for a in [p as f64 - 0.5, p as f64 + 0.3, 7.25, 19.0, 48.5] {
            let want = (p * (p - 1)) as f64 / 2.0 * std::f64::consts::PI.ln()
                + (0..p).map(|j| ln_gamma(a - j as f64)).sum::<f64>();
            let got = ln_gamma_p(p, a).unwrap();
            assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "p = {p}, a = {a}");
        }
    }
}

#[test]
fn gamma_cli_examples() {
    let pi = std::f64::consts::PI;
    assert!((ln_gamma_p(1, 5.0).unwrap() - 24f64.ln()).abs() < 1e-13);
    assert!((ln_gamma_p(2, 2.0).unwrap() - pi.ln()).abs() < 1e-13);
    assert!((ln_gamma_p(3, 3.0).unwrap() - (2.0 * pi.powi(3)).ln()).abs() < 1e-13);
}

#[test]
fn gamma_recurrence() {
    for p in 1..=5usize {
        for a in [p as f64 + 0.1, p as f64 + 1.7, 12.4] {
            let ratio = (ln_gamma_p(p, a + 1.0).unwrap() - ln_gamma_p(p, a).unwrap()).exp();
            let want: f64 = (0..p).map(|j| a - j as f64).product();
            assert!(rel_err(ratio, want) <= 1e-10);
        }
    }
}

#[test]
fn gamma_times_pochhammer_is_consistent() {
    // Gamma~_p(a) [a]_kappa = Gamma~_p(a, kappa) = prod Gamma(a - j + kappa_j) pi^{p(p-1)/2}
    let p = 3;
    let a = 3.4;
    for kappa in partitions_of(4, p) {
        let lhs = gamma_p_ln(&GammaPArgs::real(p, a)).unwrap().exp() * pochhammer_gen(Complex64::new(a, 0.0), &kappa);
        let mut parts = kappa.parts().to_vec();
        parts.resize(p, 0);
        let log_rhs = 3.0 * std::f64::consts::PI.ln()
            + parts.iter().enumerate().map(|(j, &m)| ln_gamma(a - j as f64 + m as f64)).sum::<f64>();
        assert!(lhs.re.is_finite() && lhs.im == 0.0);
        assert!(rel_err(lhs.re, log_rhs.exp()) <= 1e-10, "{kappa}");
    }
}

#[test]
fn complex_gamma_argument() {
    // |Gamma(1 + i y)|^2 = pi y / sinh(pi y)
    let y = 0.7;
    let z = gamma_p_ln(&GammaPArgs::new(1, Complex64::new(1.0, y))).unwrap();
    let pi = std::f64::consts::PI;
    assert!((2.0 * z.re - (pi * y / (pi * y).sinh()).ln()).abs() < 1e-12);
    assert!(gamma_p_ln(&GammaPArgs::new(2, Complex64::new(1.0, 3.0))).is_err());
}

#[test]
fn kummer_transformation_at_p1() {
    let policy = TruncationPolicy { max_order: 80, ..Default::default() };
    let (a, c) = (1.5, 3.2);
    for i in 0..=20 {
        let x = -2.0 + 0.2 * i as f64;
        let lhs = hyp1f1_matrix(a, c, &HermitianMatrix::scaled_identity(1, x), &policy).unwrap().value;
        let rhs = x.exp() * hyp1f1_matrix(c - a, c, &HermitianMatrix::scaled_identity(1, -x), &policy).unwrap().value;
        assert!(rel_err(lhs, rhs) <= 1e-8, "x = {x}");
        assert!(rel_err(lhs, kummer(a, c, x)) <= 1e-10, "x = {x}");
    }
}

#[test]
fn zonal_sums_reproduce_trace_powers() {
    let mut r = rng(11);
    for p in 1..=4 {
        for _ in 0..10 {
            let x = random_hermitian(p, &mut r);
            let tr = x.trace();
            let lam_abs: f64 = mvda::linalg::eigvals_hermitian(&x).unwrap().iter().map(|l| l.abs()).sum();
            for m in 0..=6u32 {
                let sum: f64 = partitions_of(m, p).iter().map(|k| zonal_c(k, &x).unwrap()).sum();
                let scale = tr.abs().powi(m as i32).max(lam_abs.powi(m as i32));
                assert!((sum - tr.powi(m as i32)).abs() <= 1e-10 * scale.max(1e-300), "p = {p}, m = {m}");
            }
        }
    }
}

#[test]
fn zonal_examples() {
    let x = HermitianMatrix::scaled_identity(1, 1.3);
    for m in 0..8 {
        let k = Partition::new(vec![m]).unwrap();
        assert!(rel_err(zonal_c(&k, &x).unwrap(), 1.3f64.powi(m as i32)) < 1e-13);
    }
    let h = random_hermitian(3, &mut rng(2));
    let one: Partition = "1".parse().unwrap();
    assert!((zonal_c(&one, &h).unwrap() - h.trace()).abs() < 1e-12);
}

#[test]
fn truncated_exponential_series() {
    let mut r = rng(12);
    for p in 1..=3 {
        for _ in 0..10 {
            let h = random_hermitian(p, &mut r);
            let lmax = mvda::linalg::eigvals_hermitian(&h).unwrap().iter().fold(0.0f64, |a, l| a.max(l.abs()));
            let x = h.scale(0.5 / lmax);
            let mut sum = 0.0;
            let mut fact = 1.0;
            for m in 0..=10u32 {
                if m > 0 {
                    fact *= m as f64;
                }
                sum += partitions_of(m, p).iter().map(|k| zonal_c(k, &x).unwrap()).sum::<f64>() / fact;
            }
            assert!(rel_err(sum, x.trace().exp()) <= 1e-6);
        }
    }
}

#[test]
fn power_mean_examples() {
    let w = [0.5, 0.5];
    assert!((power_mean(&w, &[2.0, 4.0], 1.0).unwrap() - 3.0).abs() < 1e-14);
    assert!((power_mean(&w, &[2.0, 4.0], -1.0).unwrap() - 8.0 / 3.0).abs() < 1e-14);
    assert!((power_mean(&w, &[2.0, 8.0], 0.0).unwrap() - 4.0).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zonal_is_unitarily_invariant(seed in any::<u64>(), p in 1usize..=4, m in 0u32..=5) {
        let mut r = rng(seed);
        let x = random_hermitian(p, &mut r);
        let u = random_unitary(p, &mut r);
        let y = x.conjugate_by(&u).unwrap();
        for k in partitions_of(m, p) {
            prop_assert!((zonal_c(&k, &x).unwrap() - zonal_c(&k, &y).unwrap()).abs() <= 1e-8);
        }
    }

    #[test]
    fn power_mean_is_monotone(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let raw: Vec<f64> = (0..n).map(|_| uniform(&mut r, 0.1, 1.0)).collect();
        let total: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let z: Vec<f64> = (0..n).map(|_| uniform(&mut r, 0.1, 10.0)).collect();
        let bs = [-3.0, -1.0, -0.2, -1e-6, 0.0, 1e-6, 0.5, 1.0, 2.5];
        let f: Vec<f64> = bs.iter().map(|&b| power_mean(&w, &z, b).unwrap()).collect();
        for pair in f.windows(2) {
            prop_assert!(pair[0] <= pair[1] * (1.0 + 1e-12));
        }
    }
}
