//! Truncated probability tables for nonnegative integer random variables.
//!
//! A [`DistributionTable`] stores point probabilities on `{0, 1, …, X_max}`
//! together with a certified upper bound on the mass beyond `X_max`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of `Σ pmf + tail_mass` from one.
pub const TABLE_EPS: f64 = 1e-10;

/// pmf on `{0, …, X_max}` plus a certified bound on `P(X > X_max)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct DistributionTable {
    pmf: Vec<f64>,
    tail_mass: f64,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    pmf: Vec<f64>,
    tail_mass: f64,
}

impl TryFrom<RawTable> for DistributionTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        DistributionTable::new(raw.pmf, raw.tail_mass)
    }
}

impl From<DistributionTable> for RawTable {
    fn from(t: DistributionTable) -> Self {
        RawTable {
            pmf: t.pmf,
            tail_mass: t.tail_mass,
        }
    }
}

impl DistributionTable {
    pub fn new(pmf: Vec<f64>, tail_mass: f64) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::InvalidArgument("empty pmf".into()));
        }
        if let Some((x, p)) = pmf
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0 || **p > 1.0)
        {
            return Err(Error::InvalidArgument(format!(
                "pmf entry at {x} outside [0,1]: {p}"
            )));
        }
        if !tail_mass.is_finite() || !(0.0..=1.0).contains(&tail_mass) {
            return Err(Error::InvalidArgument(format!(
                "tail mass outside [0,1]: {tail_mass}"
            )));
        }
        let total: f64 = pmf.iter().sum::<f64>() + tail_mass;
        if (total - 1.0).abs() > TABLE_EPS {
            return Err(Error::InvalidArgument(format!(
                "pmf plus tail mass is {total}, not within {TABLE_EPS} of 1"
            )));
        }
        Ok(Self { pmf, tail_mass })
    }

    /// Point mass at `x`.
    pub fn point_mass(x: usize) -> Self {
        let mut pmf = vec![0.0; x + 1];
        pmf[x] = 1.0;
        Self {
            pmf,
            tail_mass: 0.0,
        }
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Largest covered support point.
    pub fn x_max(&self) -> usize {
        self.pmf.len() - 1
    }

    /// `P(X = x)`, zero beyond the table.
    pub fn prob(&self, x: usize) -> f64 {
        self.pmf.get(x).copied().unwrap_or(0.0)
    }

    /// Running sums of the pmf: `cdf()[y] = P(X ≤ y)` on the covered support.
    pub fn cdf(&self) -> Vec<f64> {
        self.pmf
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    /// Upper bound on `P(X > y)` (covered mass above `y` plus the tail bound).
    pub fn upper_tail(&self, y: usize) -> f64 {
        let covered: f64 = self.pmf.iter().skip(y + 1).sum();
        covered + self.tail_mass
    }

    pub fn mean(&self) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(x, p)| x as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.pmf
            .iter()
            .enumerate()
            .map(|(x, p)| (x as f64 - mean).powi(2) * p)
            .sum()
    }
}

/// Exponential-moment tail bound `P(X ≥ x) ≤ inf_s exp(log_mgf(s) − s x)`,
/// minimised over a fixed geometric grid of `s`.
///
/// `log_mgf` may return `+∞` (or NaN) where the moment generating function
/// diverges; those grid points are skipped.
pub(crate) fn chernoff_tail<F>(log_mgf: F, x: f64, s_max: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    const POINTS: usize = 96;
    let s_min = 1e-4_f64.min(s_max / 2.0);
    let ratio = (s_max / s_min).powf(1.0 / (POINTS - 1) as f64);
    let mut best = f64::INFINITY;
    let mut s = s_min;
    for _ in 0..POINTS {
        let exponent = log_mgf(s) - s * x;
        if exponent.is_finite() && exponent < best {
            best = exponent;
        }
        s *= ratio;
    }
    best.exp().min(1.0)
}
