//! Dense complex Hermitian linear algebra for small dimensions.
//!
//! Matrices are stored row-major. Everything here is sized for the handful of
//! dimensions the samplers and special functions work with (`p` up to ~10),
//! so the routines favour accuracy and simplicity over blocking.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Largest tolerated `|h_ij - conj(h_ji)|`, relative to `max(1, max |h_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Cholesky pivots at or below this fraction of the largest diagonal entry fail.
pub const PD_PIVOT_REL: f64 = 1e-14;

const JACOBI_MAX_SWEEPS: usize = 64;

/// A `p x p` complex Hermitian matrix.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds a Hermitian matrix from row-major entries.
    ///
    /// The input is symmetrized as `(H + H*) / 2`; inputs whose asymmetry
    /// exceeds [`HERMITIAN_TOL`] (relative to the entry scale) are rejected.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpec("matrix dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = data.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let mut asymmetry = 0.0_f64;
        for i in 0..dim {
            for j in i..dim {
                let d = (data[i * dim + j] - data[j * dim + i].conj()).norm();
                asymmetry = asymmetry.max(d);
            }
        }
        if asymmetry > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(Self::symmetrized(dim, data))
    }

    /// Symmetrizes without the asymmetry check. Callers guarantee the input is
    /// Hermitian up to rounding.
    pub(crate) fn symmetrized(dim: usize, mut data: Vec<Complex64>) -> Self {
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(data[i * dim + i].re, 0.0);
            for j in (i + 1)..dim {
                let avg = (data[i * dim + j] + data[j * dim + i].conj()) * 0.5;
                data[i * dim + j] = avg;
                data[j * dim + i] = avg.conj();
            }
        }
        HermitianMatrix { dim, data }
    }

    /// Builds a matrix from separate real and imaginary row-major parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let dim = re.len();
        if im.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: im.len() });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (r, i) in re.iter().zip(im) {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
            }
            if i.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: i.len() });
            }
            data.extend(r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b)));
        }
        Self::new(dim, data)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            data[i * dim + i] = Complex64::new(d, 0.0);
        }
        Self::new(dim, data)
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, 1.0)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::scaled_identity(dim, 0.0)
    }

    pub fn scaled_identity(dim: usize, c: f64) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(c, 0.0);
        }
        HermitianMatrix { dim, data }
    }

    /// `diag(a, b)` as a block-diagonal matrix.
    pub fn block_diagonal(a: &HermitianMatrix, b: &HermitianMatrix) -> Self {
        let dim = a.dim + b.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..a.dim {
            for j in 0..a.dim {
                data[i * dim + j] = a.get(i, j);
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                data[(a.dim + i) * dim + a.dim + j] = b.get(i, j);
            }
        }
        HermitianMatrix { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.data[i * self.dim + j] == Complex64::new(0.0, 0.0)))
    }

    pub fn scale(&self, c: f64) -> Self {
        HermitianMatrix { dim: self.dim, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<Self> {
        self.check_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(HermitianMatrix { dim: self.dim, data })
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<Self> {
        self.check_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(HermitianMatrix { dim: self.dim, data })
    }

    /// `I + self`.
    pub fn shift_identity(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += c;
        }
        out
    }

    /// `R * self * R` for Hermitian `R`; the result is Hermitian.
    pub fn congruence(&self, r: &HermitianMatrix) -> Result<Self> {
        self.check_dim(r)?;
        let n = self.dim;
        let tmp = matmul(&r.data, &self.data, n);
        Ok(Self::symmetrized(n, matmul(&tmp, &r.data, n)))
    }

    /// `U * self * U*` for an arbitrary square `U` (row-major).
    pub fn conjugate_by(&self, u: &[Complex64]) -> Result<Self> {
        let n = self.dim;
        if u.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: u.len() });
        }
        let tmp = matmul(u, &self.data, n);
        Ok(Self::symmetrized(n, matmul(&tmp, &adjoint(u, n), n)))
    }

    /// `Re tr(self * other)`; exact trace of a product of Hermitian matrices is real.
    pub fn trace_product(&self, other: &HermitianMatrix) -> Result<f64> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[i * n + j] * other.data[j * n + i]).re;
            }
        }
        Ok(acc)
    }

    fn check_dim(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Real and imaginary parts as nested rows.
    pub fn to_parts(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let rows =
            |f: fn(&Complex64) -> f64| self.data.chunks(self.dim).map(|row| row.iter().map(f).collect()).collect();
        (rows(|z| z.re), rows(|z| z.im))
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.dim)).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    p: usize,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (re, im) = self.to_parts();
        MatrixJson { p: self.dim, re, im: Some(im) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        if raw.re.len() != raw.p {
            return Err(serde::de::Error::custom(format!(
                "matrix declares p = {} but has {} rows",
                raw.p,
                raw.re.len()
            )));
        }
        let im = raw.im.unwrap_or_else(|| vec![vec![0.0; raw.p]; raw.p]);
        HermitianMatrix::from_parts(&raw.re, &im).map_err(serde::de::Error::custom)
    }
}

/// Lower-triangular `T` with strictly positive real diagonal, `H = T T*`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangularFactor {
    dim: usize,
    data: Vec<Complex64>,
}

impl LowerTriangularFactor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Real diagonal entries `t_jj`.
    pub fn diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim).map(move |j| self.data[j * self.dim + j].re)
    }

    /// `T T*`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let n = self.dim;
        HermitianMatrix::symmetrized(n, matmul(&self.data, &adjoint(&self.data, n), n))
    }
}

/// Cholesky factorization `H = T T*`.
pub fn cholesky(h: &HermitianMatrix) -> Result<LowerTriangularFactor> {
    let n = h.dim;
    let max_diag = (0..n).map(|i| h.get(i, i).re.abs()).fold(0.0_f64, f64::max);
    let threshold = PD_PIVOT_REL * max_diag;
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut d = h.get(j, j).re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > threshold) {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let ljj = d.sqrt();
        l[j * n + j] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut s = h.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / ljj;
        }
    }
    Ok(LowerTriangularFactor { dim: n, data: l })
}

/// `log |det H|` for positive definite `H`, from the Cholesky diagonal.
pub fn logdet_abs(h: &HermitianMatrix) -> Result<f64> {
    let t = cholesky(h)?;
    Ok(2.0 * t.diagonal().map(f64::ln).sum::<f64>())
}

pub fn is_pd(h: &HermitianMatrix) -> bool {
    cholesky(h).is_ok()
}

/// Determinant of a Hermitian matrix (real), by LU with partial pivoting.
///
/// Unlike [`logdet_abs`] this does not require positive definiteness.
pub fn det(h: &HermitianMatrix) -> f64 {
    let n = h.dim;
    let mut a = h.data.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm())).unwrap();
        if a[pivot * n + col].norm() == 0.0 {
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
            let factor = a[row * n + col] / d;
            for j in col..n {
                let v = a[col * n + j];
                a[row * n + j] -= factor * v;
            }
        }
    }
    det.re
}

/// Eigen-decomposition `H = V diag(lambda) V*` with eigenvalues in
/// non-increasing order. `vectors` holds the eigenvectors as columns, row-major.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Complex64>,
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first removes the phase of the pivot `h_pq` and then applies
/// a real Jacobi rotation to the resulting real symmetric 2x2 block.
pub fn eigh(h: &HermitianMatrix) -> Result<HermitianEigen> {
    let n = h.dim;
    let mut a = h.data.clone();
    let mut v = HermitianMatrix::identity(n).data;
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum();
        if off <= 1e-30 * total || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y * n + y].re.total_cmp(&a[x * n + x].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + new_col] = v[row * n + old_col];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() { 0.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;

    for k in 0..n {
        let hkp = a[k * n + p];
        let hkq = a[k * n + q];
        a[k * n + p] = hkp * upp + hkq * uqp;
        a[k * n + q] = hkp * upq + hkq * uqq;
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * upp + vkq * uqp;
        v[k * n + q] = vkp * upq + vkq * uqq;
    }
    for k in 0..n {
        let mpk = a[p * n + k];
        let mqk = a[q * n + k];
        a[p * n + k] = upp.conj() * mpk + uqp.conj() * mqk;
        a[q * n + k] = upq.conj() * mpk + uqq.conj() * mqk;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
}

/// Eigenvalues in non-increasing order.
pub fn eigvals_hermitian(h: &HermitianMatrix) -> Result<Vec<f64>> {
    if h.is_diagonal() {
        let mut d: Vec<f64> = (0..h.dim).map(|i| h.get(i, i).re).collect();
        d.sort_by(|x, y| y.total_cmp(x));
        return Ok(d);
    }
    Ok(eigh(h)?.values)
}

/// Applies `f` to the spectrum: `V diag(f(lambda)) V*`.
pub fn spectral_map(h: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let n = h.dim;
    if h.is_diagonal() {
        let mut out = HermitianMatrix::zeros(n);
        for i in 0..n {
            out.data[i * n + i] = Complex64::new(f(h.get(i, i).re), 0.0);
        }
        return Ok(out);
    }
    let eig = eigh(h)?;
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += eig.vectors[i * n + k] * f(eig.values[k]) * eig.vectors[j * n + k].conj();
            }
            data[i * n + j] = acc;
            data[j * n + i] = acc.conj();
        }
    }
    Ok(HermitianMatrix::symmetrized(n, data))
}

/// `H^{-1/2}` for positive definite `H`.
pub fn inv_sqrt(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    cholesky(h)?;
    spectral_map(h, |x| 1.0 / x.sqrt())
}

/// `H^{-1/2}` after flooring the spectrum at `floor_rel * lambda_max`.
///
/// Returns the result and whether any eigenvalue was floored.
pub fn inv_sqrt_floored(h: &HermitianMatrix, floor_rel: f64) -> Result<(HermitianMatrix, bool)> {
    let n = h.dim;
    let eig = if h.is_diagonal() {
        let values: Vec<f64> = (0..n).map(|i| h.get(i, i).re).collect();
        HermitianEigen { values, vectors: HermitianMatrix::identity(n).data }
    } else {
        eigh(h)?
    };
    let lambda_max = eig.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lambda_max > 0.0) {
        return Err(Error::NotPositiveDefinite { pivot: 0 });
    }
    let floor = floor_rel * lambda_max;
    let floored = eig.values.iter().any(|&x| x < floor);
    let scaled: Vec<f64> = eig.values.iter().map(|&x| 1.0 / x.max(floor).sqrt()).collect();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += eig.vectors[i * n + k] * scaled[k] * eig.vectors[j * n + k].conj();
            }
            data[i * n + j] = acc;
            data[j * n + i] = acc.conj();
        }
    }
    Ok((HermitianMatrix::symmetrized(n, data), floored))
}

/// Principal square root of a positive semidefinite matrix.
pub fn sqrt_psd(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = eigvals_hermitian(h)?;
    if let Some(&min) = eig.last() {
        let max = eig[0].abs().max(1.0);
        if min < -1e-12 * max {
            return Err(Error::NotPositiveDefinite { pivot: eig.len() - 1 });
        }
    }
    spectral_map(h, |x| x.max(0.0).sqrt())
}

/// Row-major product of two `n x n` matrices.
pub fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// Conjugate transpose.
pub fn adjoint(a: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j].conj();
        }
    }
    out
}
