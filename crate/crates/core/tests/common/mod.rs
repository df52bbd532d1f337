#![allow(dead_code)]

use mvda::measures::{SampleStream, SeedSpec};
use mvda::HermitianMatrix;
use num_complex::Complex64;

pub fn rng(seed: u64) -> SampleStream {
    SampleStream::new(SeedSpec::new(seed, 99))
}

pub fn uniform(rng: &mut SampleStream, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.uniform()
}

/// Hermitian matrix with real and imaginary parts of every entry uniform on [-1, 1].
pub fn random_hermitian(p: usize, rng: &mut SampleStream) -> HermitianMatrix {
    let mut data = vec![Complex64::new(0.0, 0.0); p * p];
    for i in 0..p {
        data[i * p + i] = Complex64::new(uniform(rng, -1.0, 1.0), 0.0);
        for j in 0..i {
            let z = Complex64::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
            data[i * p + j] = z;
            data[j * p + i] = z.conj();
        }
    }
    HermitianMatrix::new(p, data).unwrap()
}

pub fn random_complex(p: usize, rng: &mut SampleStream) -> Vec<Complex64> {
    (0..p * p).map(|_| Complex64::new(rng.normal(), rng.normal())).collect()
}

/// `G G* + shift I`.
pub fn random_pd(p: usize, shift: f64, rng: &mut SampleStream) -> HermitianMatrix {
    let g = random_complex(p, rng);
    let mut data = vec![Complex64::new(0.0, 0.0); p * p];
    for i in 0..p {
        for j in 0..p {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..p {
                acc += g[i * p + k] * g[j * p + k].conj();
            }
            data[i * p + j] = acc;
        }
        data[i * p + i] += shift;
    }
    HermitianMatrix::new(p, data).unwrap()
}

/// Unitary matrix from Gram–Schmidt on the columns of a complex Gaussian matrix.
pub fn random_unitary(p: usize, rng: &mut SampleStream) -> Vec<Complex64> {
    let g = random_complex(p, rng);
    let mut cols: Vec<Vec<Complex64>> = (0..p).map(|j| (0..p).map(|i| g[i * p + j]).collect()).collect();
    for j in 0..p {
        for k in 0..j {
            let proj: Complex64 = (0..p).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..p {
                let v = cols[k][i];
                cols[j][i] -= proj * v;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    let mut u = vec![Complex64::new(0.0, 0.0); p * p];
    for i in 0..p {
        for j in 0..p {
            u[i * p + j] = cols[j][i];
        }
    }
    u
}

/// Scalar Kummer series `1F1(a; c; x)` by term recurrence.
pub fn kummer(a: f64, c: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..1000 {
        term *= (a + n as f64) / (c + n as f64) * x / (n as f64 + 1.0);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}
