use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_pd, HermitianMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Type1,
    Type2,
    /// Rectangular type-1 measure at `p = 1` (Hermitian forms).
    RectType1P1,
    /// Rectangular type-2 measure at `p = 1`.
    RectType2P1,
}

impl MeasureKind {
    pub fn is_rectangular(self) -> bool {
        matches!(self, MeasureKind::RectType1P1 | MeasureKind::RectType2P1)
    }
}

/// Full parameterization of a Dirichlet measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    pub p: usize,
    pub k: usize,
    /// `alpha_1, ..., alpha_{k+1}`.
    pub alphas: Vec<f64>,
    /// Row counts `n_j` of the rectangular blocks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<u32>>,
    /// `n_j x n_j` positive definite weights; identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bs: Option<Vec<HermitianMatrix>>,
}

impl MeasureSpec {
    pub fn type1(p: usize, alphas: &[f64]) -> Self {
        Self::square(MeasureKind::Type1, p, alphas)
    }

    pub fn type2(p: usize, alphas: &[f64]) -> Self {
        Self::square(MeasureKind::Type2, p, alphas)
    }

    pub fn rect_p1(kind: MeasureKind, alphas: &[f64], ns: &[u32]) -> Self {
        MeasureSpec {
            kind,
            p: 1,
            k: alphas.len().saturating_sub(1),
            alphas: alphas.to_vec(),
            ns: Some(ns.to_vec()),
            bs: None,
        }
    }

    fn square(kind: MeasureKind, p: usize, alphas: &[f64]) -> Self {
        MeasureSpec { kind, p, k: alphas.len().saturating_sub(1), alphas: alphas.to_vec(), ns: None, bs: None }
    }

    /// `alpha_{k+1}`.
    pub fn last_alpha(&self) -> f64 {
        self.alphas[self.k]
    }

    /// `n_j`, or zeros for the square measures.
    pub fn ns_or_zero(&self) -> Vec<f64> {
        match &self.ns {
            Some(ns) => ns.iter().map(|&n| n as f64).collect(),
            None => vec![0.0; self.k],
        }
    }

    /// Structural checks (usage errors) followed by the existence conditions
    /// (domain errors, every violated condition listed by name).
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::InvalidSpec("p must be positive".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidSpec("k must be at least 1".into()));
        }
        if self.alphas.len() != self.k + 1 {
            return Err(Error::InvalidSpec(format!(
                "expected k+1 = {} alphas, found {}",
                self.k + 1,
                self.alphas.len()
            )));
        }
        if self.alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidSpec("alphas must be finite".into()));
        }
        let bound = (self.p - 1) as f64;
        let mut violated = Vec::new();
        if self.kind.is_rectangular() {
            if self.p != 1 {
                return Err(Error::InvalidSpec("rectangular measures are supported at p = 1 only".into()));
            }
            let ns = self.ns.as_ref().ok_or_else(|| Error::InvalidSpec("rectangular measure needs ns".into()))?;
            if ns.len() != self.k {
                return Err(Error::InvalidSpec(format!("expected k = {} values of n, found {}", self.k, ns.len())));
            }
            if ns.iter().any(|&n| (n as usize) < self.p) {
                return Err(Error::InvalidSpec("each n_j must be at least p".into()));
            }
            if let Some(bs) = &self.bs {
                if bs.len() != self.k {
                    return Err(Error::InvalidSpec(format!("expected k = {} B matrices, found {}", self.k, bs.len())));
                }
                for (j, (b, &n)) in bs.iter().zip(ns).enumerate() {
                    if b.dim() != n as usize {
                        return Err(Error::InvalidSpec(format!("B_{} must be {n}x{n}", j + 1)));
                    }
                    if !is_pd(b) {
                        violated.push(format!("B_{} > O", j + 1));
                    }
                }
            }
            for j in 0..self.k {
                if !(self.alphas[j] + ns[j] as f64 > bound) {
                    violated.push(format!("alpha_{0} + n_{0} > p-1", j + 1));
                }
            }
            if !(self.last_alpha() > bound) {
                violated.push(format!("alpha_{} > p-1", self.k + 1));
            }
        } else {
            if self.ns.is_some() || self.bs.is_some() {
                return Err(Error::InvalidSpec("ns and bs apply to rectangular measures only".into()));
            }
            for (j, &a) in self.alphas.iter().enumerate() {
                if !(a > bound) {
                    violated.push(format!("alpha_{} > p-1", j + 1));
                }
            }
        }
        if violated.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(violated))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let s = MeasureSpec::type1(2, &[2.0, 3.0]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"kind":"type1","p":2,"k":1,"alphas":[2.0,3.0]}"#);
        let r: MeasureSpec =
            serde_json::from_str(r#"{"kind":"rect_type1_p1","p":1,"k":1,"alphas":[0.5,2],"ns":[2]}"#).unwrap();
        assert_eq!(r, MeasureSpec::rect_p1(MeasureKind::RectType1P1, &[0.5, 2.0], &[2]));
        r.validate().unwrap();
    }

    #[test]
    fn names_every_violated_condition() {
        let s = MeasureSpec::type2(2, &[1.0, 3.0, 0.5]);
        match s.validate() {
            Err(Error::Domain(v)) => assert_eq!(v, vec!["alpha_1 > p-1", "alpha_3 > p-1"]),
            other => panic!("{other:?}"),
        }
        let r = MeasureSpec::rect_p1(MeasureKind::RectType2P1, &[-3.0, 0.0], &[2]);
        match r.validate() {
            Err(Error::Domain(v)) => assert_eq!(v, vec!["alpha_1 + n_1 > p-1", "alpha_2 > p-1"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        let mut s = MeasureSpec::type1(2, &[2.0, 3.0]);
        s.k = 2;
        assert!(matches!(s.validate(), Err(Error::InvalidSpec(_))));
        let mut r = MeasureSpec::rect_p1(MeasureKind::RectType1P1, &[1.0, 1.0], &[2]);
        r.p = 2;
        assert!(matches!(r.validate(), Err(Error::InvalidSpec(_))));
        r.p = 1;
        r.bs = Some(vec![HermitianMatrix::identity(3)]);
        assert!(matches!(r.validate(), Err(Error::InvalidSpec(_))));
        r.bs = Some(vec![HermitianMatrix::from_real_diagonal(&[1.0, -1.0]).unwrap()]);
        assert!(matches!(r.validate(), Err(Error::Domain(_))));
    }
}
