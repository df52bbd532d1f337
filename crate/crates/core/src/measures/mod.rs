//! Samplers for the complex matrix gamma law and the Dirichlet measures.
//!
//! * type-1: `X_j = S^{-1/2} W_j S^{-1/2}` with `S = W_1 + ... + W_{k+1}`,
//! * type-2: `X_j = W_{k+1}^{-1/2} W_j W_{k+1}^{-1/2}`,
//!
//! where the `W_j` are independent matrix-gamma(`alpha_j`) draws. The
//! rectangular measures at `p = 1` are sampled in the space of the Hermitian
//! forms `u_j = X_j* B_j X_j`, which follow scalar Dirichlet laws with shifted
//! parameters `alpha_j + n_j`.

mod rng;
mod spec;

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use rng::{SampleStream, SeedSpec};
pub use spec::{MeasureKind, MeasureSpec};

use crate::error::{Error, Result};
use crate::linalg::{inv_sqrt_floored, HermitianMatrix};

/// Eigenvalues of `S` below this fraction of its largest eigenvalue are
/// floored before `S^{-1/2}` is formed.
pub const EIGEN_FLOOR_REL: f64 = 1e-13;

static FLOORED_SAMPLES: AtomicU64 = AtomicU64::new(0);

/// Number of draws (process wide) whose normalizing matrix needed flooring.
pub fn floored_sample_count() -> u64 {
    FLOORED_SAMPLES.load(Ordering::Relaxed)
}

/// One draw from a Dirichlet measure: `k` Hermitian matrices (1x1 in the
/// rectangular `p = 1` case, holding `u_j`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletSample {
    pub matrices: Vec<HermitianMatrix>,
}

impl DirichletSample {
    /// The `(0, 0)` entries; the whole sample when `p = 1`.
    pub fn scalars(&self) -> Vec<f64> {
        self.matrices.iter().map(|m| m.get(0, 0).re).collect()
    }

    /// `X_1 + ... + X_k`.
    pub fn sum(&self) -> HermitianMatrix {
        let p = self.matrices[0].dim();
        self.matrices
            .iter()
            .fold(HermitianMatrix::zeros(p), |acc, m| acc.add(m).expect("sample matrices share a dimension"))
    }
}

/// Complex matrix-gamma draw with density proportional to
/// `|det W|^{alpha - p} e^{-tr W}`, via `W = T T*` where `t_jj^2 ~ Gamma(alpha - j + 1)`
/// and the strictly lower entries are complex normal with `E|t_ij|^2 = 1`.
pub fn sample_matrix_gamma(p: usize, alpha: f64, rng: &mut SampleStream) -> Result<HermitianMatrix> {
    if p == 0 {
        return Err(Error::InvalidSpec("dimension must be positive".into()));
    }
    if !(alpha > (p - 1) as f64) {
        return Err(Error::domain(format!("matrix gamma requires alpha > p-1 (p = {p}, alpha = {alpha})")));
    }
    Ok(draw_matrix_gamma(p, alpha, rng))
}

fn draw_matrix_gamma(p: usize, alpha: f64, rng: &mut SampleStream) -> HermitianMatrix {
    if p == 1 {
        return HermitianMatrix::scaled_identity(1, rng.gamma(alpha));
    }
    let mut t = vec![Complex64::new(0.0, 0.0); p * p];
    for j in 0..p {
        t[j * p + j] = Complex64::new(rng.gamma(alpha - j as f64).sqrt(), 0.0);
        for i in (j + 1)..p {
            let re = rng.normal() * std::f64::consts::FRAC_1_SQRT_2;
            let im = rng.normal() * std::f64::consts::FRAC_1_SQRT_2;
            t[i * p + j] = Complex64::new(re, im);
        }
    }
    let mut w = vec![Complex64::new(0.0, 0.0); p * p];
    for i in 0..p {
        for j in 0..=i {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..=j {
                acc += t[i * p + k] * t[j * p + k].conj();
            }
            w[i * p + j] = acc;
            w[j * p + i] = acc.conj();
        }
    }
    HermitianMatrix::symmetrized(p, w)
}

/// A validated measure ready for repeated sampling.
#[derive(Debug, Clone)]
pub struct Sampler {
    spec: MeasureSpec,
}

impl Sampler {
    pub fn new(spec: &MeasureSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Sampler { spec: spec.clone() })
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn draw(&self, rng: &mut SampleStream) -> Result<DirichletSample> {
        match self.spec.kind {
            MeasureKind::Type1 => draw_type1(&self.spec, rng),
            MeasureKind::Type2 => draw_type2(&self.spec, rng),
            MeasureKind::RectType1P1 | MeasureKind::RectType2P1 => Ok(draw_rect_p1(&self.spec, rng)),
        }
    }
}

/// Type-1 Dirichlet draw: every `X_j > O` and `I - sum X_j > O`.
pub fn sample_type1(spec: &MeasureSpec, rng: &mut SampleStream) -> Result<DirichletSample> {
    expect_kind(spec, &[MeasureKind::Type1])?;
    Sampler::new(spec)?.draw(rng)
}

/// Type-2 Dirichlet draw: every `X_j > O`.
pub fn sample_type2(spec: &MeasureSpec, rng: &mut SampleStream) -> Result<DirichletSample> {
    expect_kind(spec, &[MeasureKind::Type2])?;
    Sampler::new(spec)?.draw(rng)
}

/// Hermitian-form values `u_j` of a rectangular measure at `p = 1`.
pub fn sample_rect_p1(spec: &MeasureSpec, rng: &mut SampleStream) -> Result<DirichletSample> {
    expect_kind(spec, &[MeasureKind::RectType1P1, MeasureKind::RectType2P1])?;
    Sampler::new(spec)?.draw(rng)
}

fn expect_kind(spec: &MeasureSpec, kinds: &[MeasureKind]) -> Result<()> {
    if kinds.contains(&spec.kind) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("sampler does not handle {:?} measures", spec.kind)))
    }
}

fn normalizer(s: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (r, floored) = inv_sqrt_floored(s, EIGEN_FLOOR_REL)?;
    if floored {
        let count = FLOORED_SAMPLES.fetch_add(1, Ordering::Relaxed) + 1;
        log::warn!("near-singular normalizing matrix floored ({count} so far)");
    }
    Ok(r)
}

fn draw_type1(spec: &MeasureSpec, rng: &mut SampleStream) -> Result<DirichletSample> {
    let p = spec.p;
    let ws: Vec<HermitianMatrix> = spec.alphas.iter().map(|&a| draw_matrix_gamma(p, a, rng)).collect();
    if p == 1 {
        let total: f64 = ws.iter().map(|w| w.get(0, 0).re).sum();
        let matrices =
            ws[..spec.k].iter().map(|w| HermitianMatrix::scaled_identity(1, w.get(0, 0).re / total)).collect();
        return Ok(DirichletSample { matrices });
    }
    let mut s = ws[0].clone();
    for w in &ws[1..] {
        s = s.add(w)?;
    }
    let r = normalizer(&s)?;
    let matrices = ws[..spec.k].iter().map(|w| w.congruence(&r)).collect::<Result<_>>()?;
    Ok(DirichletSample { matrices })
}

fn draw_type2(spec: &MeasureSpec, rng: &mut SampleStream) -> Result<DirichletSample> {
    let p = spec.p;
    let ws: Vec<HermitianMatrix> = spec.alphas.iter().map(|&a| draw_matrix_gamma(p, a, rng)).collect();
    let last = &ws[spec.k];
    if p == 1 {
        let v = last.get(0, 0).re;
        let matrices = ws[..spec.k].iter().map(|w| HermitianMatrix::scaled_identity(1, w.get(0, 0).re / v)).collect();
        return Ok(DirichletSample { matrices });
    }
    let r = normalizer(last)?;
    let matrices = ws[..spec.k].iter().map(|w| w.congruence(&r)).collect::<Result<_>>()?;
    Ok(DirichletSample { matrices })
}

fn draw_rect_p1(spec: &MeasureSpec, rng: &mut SampleStream) -> DirichletSample {
    let ns = spec.ns.as_deref().unwrap_or_default();
    let gs: Vec<f64> = (0..spec.k).map(|j| rng.gamma(spec.alphas[j] + ns[j] as f64)).collect();
    let last = rng.gamma(spec.alphas[spec.k]);
    let denom = match spec.kind {
        MeasureKind::RectType1P1 => gs.iter().sum::<f64>() + last,
        _ => last,
    };
    DirichletSample { matrices: gs.iter().map(|g| HermitianMatrix::scaled_identity(1, g / denom)).collect() }
}
