use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An integer partition `m_1 >= m_2 >= ... > 0`. Zero parts are dropped, so
/// `(2, 1, 0)` and `(2, 1)` are the same partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpec(format!("partition parts must be non-increasing: {parts:?}")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Column lengths of the Young diagram.
    pub fn conjugate(&self) -> Vec<u32> {
        let first = self.parts.first().copied().unwrap_or(0);
        (0..first).map(|c| self.parts.iter().filter(|&&r| r > c).count() as u32).collect()
    }

    /// Hook lengths of every cell, row by row.
    pub fn hook_lengths(&self) -> Vec<u32> {
        let cols = self.conjugate();
        let mut hooks = Vec::with_capacity(self.weight() as usize);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = cols[j as usize] - i as u32 - 1;
                hooks.push(arm + leg + 1);
            }
        }
        hooks
    }

    /// Number of standard Young tableaux `f^kappa = m! / prod(hooks)`, exact in
    /// integer arithmetic. `None` once `m!` leaves `u128` (m > 34).
    pub fn standard_tableaux_count(&self) -> Option<u128> {
        let mut factorial: u128 = 1;
        for i in 2..=self.weight() as u128 {
            factorial = factorial.checked_mul(i)?;
        }
        let hooks = self.hook_lengths().iter().try_fold(1u128, |acc, &h| acc.checked_mul(h as u128))?;
        Some(factorial / hooks)
    }

    /// `f^kappa / m! = 1 / prod(hooks)` in floating point; never overflows.
    pub fn inverse_hook_product(&self) -> f64 {
        self.hook_lengths().iter().fold(1.0, |acc, &h| acc / h as f64)
    }

    /// `f^kappa` as a float, exact whenever [`Self::standard_tableaux_count`] is.
    pub fn standard_tableaux_count_f64(&self) -> f64 {
        match self.standard_tableaux_count() {
            Some(n) => n as f64,
            None => {
                let log_fact = super::ln_gamma_p(1, self.weight() as f64 + 1.0).unwrap_or(f64::NAN);
                let log_hooks: f64 = self.hook_lengths().iter().map(|&h| (h as f64).ln()).sum();
                (log_fact - log_hooks).exp()
            }
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"3,1,1"`, `"(3,1,1)"` or `""` (empty partition).
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidSpec(format!("bad partition {s:?}: {e}")))?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(deserializer)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `m` with at most `max_len` parts, lexicographically decreasing.
pub fn partitions_of(m: u32, max_len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend(m, m, max_len, &mut current, &mut out);
    out
}

fn extend(remaining: u32, cap: u32, slots: usize, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    if slots == 0 {
        return;
    }
    for part in (1..=cap.min(remaining)).rev() {
        // the rest must fit in `slots - 1` parts of size <= part
        if (remaining - part) as u64 > part as u64 * (slots as u64 - 1) {
            break;
        }
        current.push(part);
        extend(remaining - part, part, slots - 1, current, out);
        current.pop();
    }
}
