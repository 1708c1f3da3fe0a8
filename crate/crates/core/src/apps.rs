//! Application models: circular 2-runs, the two-dimensional consecutive
//! k-out-of-n:F system, mixed Poisson laws and sums of independent
//! integer variables, each with its compound Poisson approximant.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::bounds::{bound_bx99, bound_cor3, bound_thm4};
use crate::cp::{CompoundPoissonParams, ThetaVector};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity};

/// Any of the four models, tagged by `"model"` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Runs(RunsModel),
    Reliability(ReliabilityModel),
    Mixed(MixedPoissonModel),
    Sums(IndependentSumModel),
}

impl Model {
    pub fn cp_params(&self) -> Result<CompoundPoissonParams> {
        match self {
            Model::Runs(m) => runs_cp_params(m),
            Model::Reliability(m) => reliability_cp_params(m),
            Model::Mixed(m) => mixed_cp_params(m),
            Model::Sums(m) => sums_cp_params(m),
        }
    }

    /// Kolmogorov-distance bound for a given `M₁`, where the model has one.
    pub fn dk_bound(&self, m1: f64) -> Result<Option<f64>> {
        Ok(match self {
            Model::Runs(m) => Some(runs_dk_bound(m, m1)),
            Model::Reliability(m) => Some(reliability_dk_bound(m, m1)),
            Model::Mixed(m) => Some(mixed_dk_bound(m, m1)?),
            Model::Sums(_) => None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Runs(_) => "runs",
            Model::Reliability(_) => "reliability",
            Model::Mixed(_) => "mixed",
            Model::Sums(_) => "sums",
        }
    }
}

// ---------------------------------------------------------------- runs

/// `W = Σ_{i=1}^n ξ_i ξ_{i+1}` over i.i.d. Bernoulli(p), indices mod `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunsModel {
    pub n: usize,
    pub p: f64,
}

impl RunsModel {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        let m = Self { n, p };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidArgument(format!("runs circle needs n ≥ 3, got {}", self.n)));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidArgument(format!("p = {} outside [0, 1]", self.p)));
        }
        Ok(())
    }
}

/// `λ₁ = np²(1−p)²`, `λ₂ = np³(1−p)`, `λ₃ = np⁴/3`.
pub fn runs_cp_params(m: &RunsModel) -> Result<CompoundPoissonParams> {
    m.validate()?;
    let (n, p) = (m.n as f64, m.p);
    CompoundPoissonParams::new(vec![
        n * p * p * (1.0 - p) * (1.0 - p),
        n * p.powi(3) * (1.0 - p),
        n * p.powi(4) / 3.0,
    ])
}

/// `3 M₁ n p⁴`.
pub fn runs_dk_bound(m: &RunsModel, m1: f64) -> f64 {
    3.0 * m1 * m.n as f64 * m.p.powi(4)
}

// --------------------------------------------------------- reliability

/// `n × n` grid of components failing independently with probability `q`;
/// `W` counts the all-failed `k × k` subgrids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityModel {
    pub n: usize,
    pub k: usize,
    pub q: f64,
}

impl ReliabilityModel {
    pub fn new(n: usize, k: usize, q: f64) -> Result<Self> {
        let m = Self { n, k, q };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(Error::InvalidArgument(format!(
                "need 1 ≤ k ≤ n, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        if !(0.0..=1.0).contains(&self.q) {
            return Err(Error::InvalidArgument(format!("q = {} outside [0, 1]", self.q)));
        }
        Ok(())
    }

    /// `ψ = q^{k²}`.
    pub fn psi(&self) -> f64 {
        self.q.powi((self.k * self.k) as i32)
    }

    /// `q^k`.
    pub fn qk(&self) -> f64 {
        self.q.powi(self.k as i32)
    }

    /// Number of subgrid positions, `(n − k + 1)²`.
    pub fn positions(&self) -> usize {
        (self.n - self.k + 1).pow(2)
    }

    fn check_approximant(&self) -> Result<()> {
        self.validate()?;
        if self.k < 2 || self.n <= self.k + 1 {
            return Err(Error::InvalidArgument(format!(
                "approximant needs 2 ≤ k and n > k + 1, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        Ok(())
    }
}

fn binomial_pmf(trials: usize, success: usize, prob: f64) -> f64 {
    if success > trials {
        return 0.0;
    }
    let choose: f64 = (0..success)
        .map(|i| (trials - i) as f64 / (i + 1) as f64)
        .product();
    choose * prob.powi(success as i32) * (1.0 - prob).powi((trials - success) as i32)
}

/// `λ_j = ψ[4π₁(j) + 4(n−k−1)π₂(j) + (n−k−1)²π₃(j)]/j` for `j = 1..5`, with
/// `π_i(j) = P(Bin(i+1, q^k) = j−1)`.
pub fn reliability_cp_params(m: &ReliabilityModel) -> Result<CompoundPoissonParams> {
    m.check_approximant()?;
    let psi = m.psi();
    let y = m.qk();
    let inner = (m.n - m.k - 1) as f64;
    let rates = (1..=5)
        .map(|j| {
            let pi = |i: usize| binomial_pmf(i + 1, j - 1, y);
            psi * (4.0 * pi(1) + 4.0 * inner * pi(2) + inner * inner * pi(3)) / j as f64
        })
        .collect();
    CompoundPoissonParams::new(rates)
}

/// `ψ[4a(y) + 4(n−k−1)b(y) + (n−k−1)²c(y)]` at `y = q^k`, with
/// `a(y) = (1−2y)²`, `b(y) = (1−2y)³`, `c(y) = (1−4y)(1−4y+8y²)`.
pub fn reliability_delta(m: &ReliabilityModel) -> Result<f64> {
    m.check_approximant()?;
    let y = m.qk();
    let inner = (m.n - m.k - 1) as f64;
    let a = (1.0 - 2.0 * y).powi(2);
    let b = (1.0 - 2.0 * y).powi(3);
    let c = (1.0 - 4.0 * y) * (1.0 - 4.0 * y + 8.0 * y * y);
    Ok(m.psi() * (4.0 * a + 4.0 * inner * b + inner * inner * c))
}

/// `M₁ (n−k+1)² ψ [(4k² + 12k − 3)ψ + 4 Σ_{r,s=1}^{k−1} q^{k²−rs} + 4 Σ_{s=1}^{k−2} q^{k²−ks}]`.
pub fn reliability_dk_bound(m: &ReliabilityModel, m1: f64) -> f64 {
    let k = m.k as i32;
    let psi = m.psi();
    let mut bracket = (4 * k * k + 12 * k - 3) as f64 * psi;
    for r in 1..k {
        for s in 1..k {
            bracket += 4.0 * m.q.powi(k * k - r * s);
        }
    }
    for s in 1..(k - 1) {
        bracket += 4.0 * m.q.powi(k * k - k * s);
    }
    m1 * m.positions() as f64 * psi * bracket
}

// --------------------------------------------------------- mixed Poisson

/// Law of the random intensity `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mixing {
    /// `ξ = a` with probability `w`, `b` otherwise.
    TwoPoint { a: f64, b: f64, w: f64 },
    /// Gamma with `shape` and `scale`.
    Gamma { shape: f64, scale: f64 },
}

/// `W ~ Poisson(ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedPoissonModel {
    pub mixing: Mixing,
}

/// Absolute tolerance for the gamma third absolute moment.
const ABS3_TOL: f64 = 1e-10;

impl MixedPoissonModel {
    pub fn new(mixing: Mixing) -> Result<Self> {
        let m = Self { mixing };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self.mixing {
            Mixing::TwoPoint { a, b, w } => {
                if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidArgument(format!("two-point values must be positive, got {a}, {b}")));
                }
                if !(0.0..=1.0).contains(&w) {
                    return Err(Error::InvalidArgument(format!("weight {w} outside [0, 1]")));
                }
            }
            Mixing::Gamma { shape, scale } => {
                if !(shape > 0.0 && scale > 0.0 && shape.is_finite() && scale.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "gamma shape and scale must be positive, got {shape}, {scale}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `ν = E ξ`.
    pub fn nu(&self) -> f64 {
        match self.mixing {
            Mixing::TwoPoint { a, b, w } => w * a + (1.0 - w) * b,
            Mixing::Gamma { shape, scale } => shape * scale,
        }
    }

    /// `σ² = Var ξ`.
    pub fn sigma2(&self) -> f64 {
        match self.mixing {
            Mixing::TwoPoint { a, b, w } => w * (1.0 - w) * (a - b) * (a - b),
            Mixing::Gamma { shape, scale } => shape * scale * scale,
        }
    }

    /// `E|ξ − ν|³`: closed form for two points, adaptive quadrature split at
    /// `ν` for the gamma law.
    pub fn abs3(&self) -> f64 {
        let nu = self.nu();
        match self.mixing {
            Mixing::TwoPoint { a, b, w } => w * (a - nu).abs().powi(3) + (1.0 - w) * (b - nu).abs().powi(3),
            Mixing::Gamma { shape, scale } => {
                let log_norm = ln_gamma(shape) + shape * scale.ln();
                let density = move |x: f64| {
                    if x <= 0.0 {
                        return 0.0;
                    }
                    ((shape - 1.0) * x.ln() - x / scale - log_norm).exp()
                };
                let below = integrate(|x| (nu - x).powi(3) * density(x), 0.0, nu, ABS3_TOL / 2.0);
                let above = integrate_to_infinity(|x| (x - nu).powi(3) * density(x), nu, ABS3_TOL / 2.0);
                below + above
            }
        }
    }
}

/// `λ₁ = ν − σ²`, `λ₂ = σ²/2`.
pub fn mixed_cp_params(m: &MixedPoissonModel) -> Result<CompoundPoissonParams> {
    m.validate()?;
    let (nu, s2) = (m.nu(), m.sigma2());
    if nu <= s2 {
        return Err(Error::ApproximantUndefined(format!("ν = {nu} ≤ σ² = {s2}")));
    }
    CompoundPoissonParams::new(vec![nu - s2, s2 / 2.0])
}

/// `1.2 M₁ E|ξ − ν|³`.
pub fn mixed_dk_bound(m: &MixedPoissonModel, m1: f64) -> Result<f64> {
    m.validate()?;
    Ok(1.2 * m1 * m.abs3())
}

// ---------------------------------------------------- independent sums

/// `W = Z₁ + ⋯ + Z_n` with independent `Z_i` given by finite pmfs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependentSumModel {
    pub components: Vec<Vec<f64>>,
}

impl IndependentSumModel {
    pub fn new(components: Vec<Vec<f64>>) -> Result<Self> {
        let m = Self { components };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidArgument("no components".into()));
        }
        for (i, c) in self.components.iter().enumerate() {
            if c.is_empty() || c.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::InvalidArgument(format!("component {i} is not a pmf")));
            }
            let total: f64 = c.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!("component {i} sums to {total}")));
            }
        }
        Ok(())
    }

    fn moments(c: &[f64]) -> (f64, f64) {
        let mean: f64 = c.iter().enumerate().map(|(x, p)| x as f64 * p).sum();
        let var = c.iter().enumerate().map(|(x, p)| (x as f64 - mean).powi(2) * p).sum();
        (mean, var)
    }

    pub fn mean(&self) -> f64 {
        self.components.iter().map(|c| Self::moments(c).0).sum()
    }

    pub fn variance(&self) -> f64 {
        self.components.iter().map(|c| Self::moments(c).1).sum()
    }
}

/// `λ₁ = 2 EW − Var W`, `λ₂ = (Var W − EW)/2`.
pub fn sums_cp_params(m: &IndependentSumModel) -> Result<CompoundPoissonParams> {
    m.validate()?;
    let (ew, vw) = (m.mean(), m.variance());
    if vw < ew {
        return Err(Error::InvalidParams(format!("requires Var W ≥ EW, got Var W = {vw} < EW = {ew}")));
    }
    if 2.0 * ew < vw {
        return Err(Error::InvalidParams(format!("requires EW ≥ Var W/2, got EW = {ew} < Var W/2 = {}", vw / 2.0)));
    }
    CompoundPoissonParams::new(vec![2.0 * ew - vw, (vw - ew) / 2.0])
}

// ------------------------------------------------------------- regimes

/// Which family of Stein factors is the first to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "BX99_OK")]
    Bx99Ok,
    #[serde(rename = "COR3_OK")]
    Cor3Ok,
    #[serde(rename = "THM4_OK")]
    Thm4Ok,
    #[serde(rename = "GENERAL_ONLY")]
    GeneralOnly,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Bx99Ok => "BX99_OK",
            Regime::Cor3Ok => "COR3_OK",
            Regime::Thm4Ok => "THM4_OK",
            Regime::GeneralOnly => "GENERAL_ONLY",
        })
    }
}

/// First applicable of BX99, the `k = 3` criterion, THM4; else GENERAL.
pub fn regime_classify(theta: &ThetaVector) -> Result<Regime> {
    theta.require(3)?;
    if bound_bx99(theta)?.applicable {
        return Ok(Regime::Bx99Ok);
    }
    if bound_cor3(theta)?.applicable {
        return Ok(Regime::Cor3Ok);
    }
    if theta.at(0)? > 0.0 && bound_thm4(theta)?.applicable {
        return Ok(Regime::Thm4Ok);
    }
    Ok(Regime::GeneralOnly)
}
