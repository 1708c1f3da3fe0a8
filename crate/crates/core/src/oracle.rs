//! Numerical solution of the compound Poisson Stein equation
//!
//! ```text
//! h(x) − E h(U) = Σ_j j λ_j f(x + j) − x f(x)
//! ```
//!
//! for Kolmogorov test functions `h = I(· ≤ y)`, and the empirical Stein
//! factors `sup_y sup_x |f|` and `sup_y sup_x |Δf|` measured from it.
//!
//! `f` is filled by backward recursion from a zero tail beyond `x_max`.
//! Norms are taken over `x ∈ [1, x_max − J]`; the last `J` points carry the
//! truncation and are excluded. `f(0)` never enters the equation and is not
//! part of the solution.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{Method, SteinFactorBound};
use crate::cp::{cp_pmf, theta, CompoundPoissonParams};
use crate::error::{Error, Result};
use crate::table::DistributionTable;

/// Sweep limit target: `P(U > y_max) ≤ TAIL_TARGET`.
pub const TAIL_TARGET: f64 = 1e-8;
/// Largest change in either factor allowed between `x_max` and `2 x_max`.
pub const STABILITY_TOL: f64 = 1e-7;
/// Slack allowed in `m̂ ≤ M` comparisons.
pub const DOMINANCE_SLACK: f64 = 1e-12;

const PMF_MASS: f64 = 1.0 - 1e-12;
const MAX_DOUBLINGS: usize = 10;

/// Solution of the Stein equation for `h = I(· ≤ threshold)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinSolution {
    pub threshold: usize,
    /// `f[i] = f(i + 1)` for `i = 0..x_max`.
    pub f: Vec<f64>,
    /// `|Σ_j jλ_j f(j) − (h(0) − E h(U))|`, the defect of the `x = 0` equation.
    pub residual0: f64,
    pub eh_u: f64,
}

impl SteinSolution {
    pub fn x_max(&self) -> usize {
        self.f.len()
    }

    /// `f(x)` for `x ≥ 1`, zero beyond the truncation.
    pub fn value(&self, x: usize) -> f64 {
        assert!(x >= 1, "f(0) is not part of the solution");
        self.f.get(x - 1).copied().unwrap_or(0.0)
    }

    /// Largest `|h(x) − E h(U) − (Σ_j jλ_j f(x+j) − x f(x))|` over the
    /// interior `x ∈ [1, x_max − J]`.
    pub fn max_interior_residual(&self, params: &CompoundPoissonParams) -> f64 {
        let j_max = params.max_cluster();
        let weighted: Vec<(usize, f64)> = params.weighted_rates().collect();
        (1..=self.x_max().saturating_sub(j_max))
            .map(|x| {
                let h = if x <= self.threshold { 1.0 } else { 0.0 };
                let lhs = h - self.eh_u;
                let rhs: f64 = weighted.iter().map(|(j, w)| w * self.value(x + j)).sum::<f64>()
                    - x as f64 * self.value(x);
                (lhs - rhs).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Backward recursion for one threshold. Returns `f(0..=x_max + J)` with
/// `f(0)` unused and the tail zero.
fn backward(weighted: &[(usize, f64)], j_max: usize, y: usize, eh: f64, x_max: usize) -> Vec<f64> {
    let mut f = vec![0.0; x_max + j_max + 1];
    for x in (1..=x_max).rev() {
        let h = if x <= y { 1.0 } else { 0.0 };
        let ahead: f64 = weighted.iter().map(|(j, w)| w * f[x + j]).sum();
        f[x] = (ahead - (h - eh)) / x as f64;
    }
    f
}

fn cdf_at(cdf: &[f64], y: usize) -> f64 {
    cdf[y.min(cdf.len() - 1)]
}

pub fn solve_stein(params: &CompoundPoissonParams, y: usize, x_max: usize) -> Result<SteinSolution> {
    let j_max = params.max_cluster();
    if x_max < y + 10 * j_max {
        return Err(Error::InvalidArgument(format!(
            "x_max = {x_max} below threshold + 10J = {}",
            y + 10 * j_max
        )));
    }
    let table = cp_pmf(params, PMF_MASS)?;
    let eh = cdf_at(&table.cdf(), y);
    let weighted: Vec<(usize, f64)> = params.weighted_rates().collect();
    let f = backward(&weighted, j_max, y, eh, x_max);
    let at_zero: f64 = weighted.iter().map(|(j, w)| w * f[*j]).sum();
    let residual0 = (at_zero - (1.0 - eh)).abs();
    Ok(SteinSolution {
        threshold: y,
        f: f[1..=x_max].to_vec(),
        residual0,
        eh_u: eh,
    })
}

/// Measured `sup |f_h|` and `sup |Δf_h|` over thresholds `y ≤ y_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalFactors {
    pub m0_hat: f64,
    pub m1_hat: f64,
    pub y_max: usize,
    pub x_max: usize,
    /// Thresholds at which the two sups are attained.
    pub m0_threshold: usize,
    pub m1_threshold: usize,
}

/// Smallest `y` with `P(U > y) ≤ 1e-8` according to the pmf table.
pub fn default_y_max(params: &CompoundPoissonParams) -> Result<usize> {
    let table = cp_pmf(params, PMF_MASS)?;
    Ok(y_max_from_table(&table))
}

fn y_max_from_table(table: &DistributionTable) -> usize {
    let pmf = table.pmf();
    let mut above = table.tail_mass();
    for y in (0..pmf.len()).rev() {
        if above > TAIL_TARGET {
            return y + 1;
        }
        above += pmf[y];
    }
    0
}

/// `max(4(θ₀ + 10√(θ₀ + θ₁)), y_max + 20J)`.
pub fn default_x_max(params: &CompoundPoissonParams, y_max: usize) -> usize {
    let t = theta(params, 1);
    let (t0, t1) = (t.values()[0], t.values()[1]);
    let spread = (4.0 * (t0 + 10.0 * (t0 + t1).sqrt())).ceil() as usize;
    spread.max(y_max + 20 * params.max_cluster())
}

fn sweep(
    weighted: &[(usize, f64)],
    j_max: usize,
    cdf: &[f64],
    y_max: usize,
    x_max: usize,
) -> EmpiricalFactors {
    let per_threshold: Vec<(f64, f64)> = (0..=y_max)
        .into_par_iter()
        .map(|y| {
            let f = backward(weighted, j_max, y, cdf_at(cdf, y), x_max);
            let last = x_max - j_max;
            let m0 = f[1..=last].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let m1 = f[1..=last]
                .windows(2)
                .fold(0.0_f64, |m, w| m.max((w[1] - w[0]).abs()));
            (m0, m1)
        })
        .collect();
    let argmax = |pick: fn(&(f64, f64)) -> f64| {
        per_threshold
            .iter()
            .enumerate()
            .fold((0usize, 0.0_f64), |best, (y, v)| if pick(v) > best.1 { (y, pick(v)) } else { best })
    };
    let (m0_threshold, m0_hat) = argmax(|v| v.0);
    let (m1_threshold, m1_hat) = argmax(|v| v.1);
    EmpiricalFactors {
        m0_hat,
        m1_hat,
        y_max,
        x_max,
        m0_threshold,
        m1_threshold,
    }
}

/// Empirical Stein factors, with `x_max` doubled until both values move by
/// at most [`STABILITY_TOL`]. The returned `x_max` is the larger of the last
/// compared pair.
pub fn empirical_factors(params: &CompoundPoissonParams, y_max: usize, x_max: usize) -> Result<EmpiricalFactors> {
    let table = cp_pmf(params, PMF_MASS)?;
    let tail = table.upper_tail(y_max);
    if tail > TAIL_TARGET {
        return Err(Error::InvalidArgument(format!(
            "y_max = {y_max} leaves P(U > y_max) ≤ {tail:e}, above {TAIL_TARGET:e}"
        )));
    }
    let cdf = table.cdf();
    let weighted: Vec<(usize, f64)> = params.weighted_rates().collect();
    let j_max = params.max_cluster();
    let mut x = x_max.max(y_max + 10 * j_max).max(2 * j_max + 2);
    let mut current = sweep(&weighted, j_max, &cdf, y_max, x);
    for _ in 0..MAX_DOUBLINGS {
        let doubled = sweep(&weighted, j_max, &cdf, y_max, 2 * x);
        let moved = (doubled.m0_hat - current.m0_hat)
            .abs()
            .max((doubled.m1_hat - current.m1_hat).abs());
        if moved <= STABILITY_TOL {
            return Ok(doubled);
        }
        x *= 2;
        current = doubled;
    }
    Err(Error::NotConverged(format!(
        "factors still moving after doubling x_max to {x}"
    )))
}

/// [`empirical_factors`] with [`default_y_max`] and [`default_x_max`].
pub fn empirical_factors_auto(params: &CompoundPoissonParams) -> Result<EmpiricalFactors> {
    let y_max = default_y_max(params)?;
    empirical_factors(params, y_max, default_x_max(params, y_max))
}

/// Outcome of checking one bound against the measured factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub method: Method,
    pub m0_bound: f64,
    pub m0_hat: f64,
    pub m1_bound: f64,
    pub m1_hat: f64,
    pub pass: bool,
    pub x_max: usize,
    pub y_max: usize,
    /// `m̂ / M`; below one means the bound holds with room to spare.
    pub m0_ratio: f64,
    pub m1_ratio: f64,
}

/// Compares an applicable bound with already-measured factors.
pub fn check_bound(bound: &SteinFactorBound, emp: &EmpiricalFactors) -> Result<VerifyReport> {
    if !bound.applicable {
        return Err(Error::InvalidArgument(format!(
            "bound {} is not applicable",
            bound.method
        )));
    }
    let pass = emp.m0_hat <= bound.m0 + DOMINANCE_SLACK && emp.m1_hat <= bound.m1 + DOMINANCE_SLACK;
    Ok(VerifyReport {
        method: bound.method,
        m0_bound: bound.m0,
        m0_hat: emp.m0_hat,
        m1_bound: bound.m1,
        m1_hat: emp.m1_hat,
        pass,
        x_max: emp.x_max,
        y_max: emp.y_max,
        m0_ratio: emp.m0_hat / bound.m0,
        m1_ratio: emp.m1_hat / bound.m1,
    })
}

pub fn verify_bound(
    params: &CompoundPoissonParams,
    bound: &SteinFactorBound,
    y_max: usize,
    x_max: usize,
) -> Result<VerifyReport> {
    if !bound.applicable {
        return Err(Error::InvalidArgument(format!(
            "bound {} is not applicable",
            bound.method
        )));
    }
    let emp = empirical_factors(params, y_max, x_max)?;
    check_bound(bound, &emp)
}
