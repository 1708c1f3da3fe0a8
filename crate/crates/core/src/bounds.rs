//! Stein factors ("magic factors") for compound Poisson approximation in
//! the Kolmogorov metric.
//!
//! Every bound is returned as a [`SteinFactorBound`]: an `(M₀, M₁)` pair,
//! the method that produced it and whether that method's hypotheses hold.
//! Inapplicable bounds carry `+∞` so that [`best_bound`] is a plain
//! componentwise minimum.
//!
//! The central object is the criterion function
//!
//! ```text
//! g_k(φ, p) = 1/(cos φ − 1) Σ_{j=1}^k Re[(e^{iφ} − 1)^j]/j! · (1 − (1−p)^j)/p · θ_{j−1}
//!             − 2^k/k! · θ_k
//! ```
//!
//! on `(−π, π] × [0, 1]`, whose infimum `δ_k` yields factors of order
//! `δ_k^{-1/2}` and `δ_k^{-1}` whenever it is positive.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::cp::{monotone_condition, CompoundPoissonParams, ThetaVector};
use crate::error::{Error, Result};

/// Largest order used by [`best_bound`] for the grid-based criterion.
pub const MAX_BEST_ORDER: usize = 6;

/// Which theorem (or classical result) a bound comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// `min{1, 1/λ₁} e^λ`, valid for every law.
    General,
    /// Decreasing `jλ_j`.
    Monotone,
    /// `θ₀ − 2θ₁ > 0`.
    Bx99,
    /// Positive infimum of `g_k`.
    Thm2(usize),
    /// Closed form of the `k = 3` infimum.
    Cor3,
    /// `θ₁/θ₀` slightly above one half, with a free constant `c > 1`.
    LemmaC(f64),
    /// `2θ₁ > θ₀`, the lemma with its smallest admissible constant.
    Thm4,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::General => f.write_str("GENERAL"),
            Method::Monotone => f.write_str("MONOTONE"),
            Method::Bx99 => f.write_str("BX99"),
            Method::Thm2(k) => write!(f, "THM2({k})"),
            Method::Cor3 => f.write_str("COR3"),
            Method::LemmaC(c) => write!(f, "LEMMA_C({c})"),
            Method::Thm4 => f.write_str("THM4"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown method tag {s:?}"));
        let arg = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|rest| rest.strip_suffix(')'))
                .ok_or_else(bad)
        };
        Ok(match s {
            "GENERAL" => Method::General,
            "MONOTONE" => Method::Monotone,
            "BX99" => Method::Bx99,
            "COR3" => Method::Cor3,
            "THM4" => Method::Thm4,
            _ if s.starts_with("THM2(") => {
                Method::Thm2(arg("THM2(")?.parse().map_err(|_| bad())?)
            }
            _ if s.starts_with("LEMMA_C(") => {
                Method::LemmaC(arg("LEMMA_C(")?.parse().map_err(|_| bad())?)
            }
            _ => return Err(bad()),
        })
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Upper bounds on `M₀ = sup|f_h|` and `M₁ = sup|Δf_h|` over Kolmogorov
/// test functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinFactorBound {
    #[serde(with = "inf_f64")]
    pub m0: f64,
    #[serde(with = "inf_f64")]
    pub m1: f64,
    pub method: Method,
    pub applicable: bool,
    #[serde(rename = "note")]
    pub condition_note: String,
}

impl SteinFactorBound {
    fn applicable(method: Method, m0: f64, m1: f64, note: impl Into<String>) -> Self {
        Self {
            m0,
            m1,
            method,
            applicable: true,
            condition_note: note.into(),
        }
    }

    fn inapplicable(method: Method, note: impl Into<String>) -> Self {
        Self {
            m0: f64::INFINITY,
            m1: f64::INFINITY,
            method,
            applicable: false,
            condition_note: note.into(),
        }
    }

    /// Factors obtained from a positive criterion value `δ`; inapplicable
    /// otherwise.
    fn from_delta(method: Method, delta: f64, note: impl Into<String>) -> Self {
        if delta > 0.0 {
            let (m0, m1) = factors_from_delta(delta);
            Self::applicable(method, m0, m1, note)
        } else {
            let mut note = note.into();
            note.push_str(&format!("; δ = {delta} ≤ 0"));
            Self::inapplicable(method, note)
        }
    }
}

/// `+∞` serialises as the string `"inf"`.
mod inf_f64 {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrStr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match NumOrStr::deserialize(d)? {
            NumOrStr::Num(v) => Ok(v),
            NumOrStr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            NumOrStr::Str(s) => Err(de::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}

/// `log⁺ x = max(log x, 0)`, with `log⁺ x = 0` for `x ≤ 0`.
pub fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// `(2√(2/δ), (1 + log⁺(πδ)) / (2δ))`.
pub fn factors_from_delta(delta: f64) -> (f64, f64) {
    let m0 = 2.0 * (2.0 / delta).sqrt();
    let m1 = (1.0 + log_plus(PI * delta)) / (2.0 * delta);
    (m0, m1)
}

pub fn bound_general(params: &CompoundPoissonParams) -> SteinFactorBound {
    let lambda1 = params.lambda1();
    let factor = if lambda1 > 1.0 { 1.0 / lambda1 } else { 1.0 };
    let m = factor * params.total_rate().exp();
    SteinFactorBound::applicable(Method::General, m, m, "always valid; exponential in λ")
}

pub fn bound_monotone(params: &CompoundPoissonParams) -> SteinFactorBound {
    if !monotone_condition(params) {
        return SteinFactorBound::inapplicable(Method::Monotone, "jλ_j is not nonincreasing");
    }
    let lambda1 = params.lambda1();
    let m0 = (2.0 / (std::f64::consts::E * lambda1)).sqrt().min(1.0);
    let m1 = (1.0 / (lambda1 + 1.0)).min(0.5);
    SteinFactorBound::applicable(Method::Monotone, m0, m1, "jλ_j ≥ (j+1)λ_{j+1} for all j")
}

pub fn bound_bx99(theta: &ThetaVector) -> Result<SteinFactorBound> {
    let t0 = theta.at(0)?;
    let t1 = theta.at(1)?;
    let gap = t0 - 2.0 * t1;
    if gap > 0.0 {
        Ok(SteinFactorBound::applicable(
            Method::Bx99,
            t0.sqrt() / gap,
            1.0 / gap,
            format!("θ₀ − 2θ₁ = {gap} > 0"),
        ))
    } else {
        Ok(SteinFactorBound::inapplicable(
            Method::Bx99,
            format!("θ₀ − 2θ₁ = {gap} ≤ 0"),
        ))
    }
}

/// One evaluation of `g_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GkEvaluation {
    pub phi: f64,
    pub p: f64,
    pub value: f64,
}

/// `Re[(e^{iφ} − 1)^j] / (cos φ − 1)` through the half-angle form
/// `e^{iφ} − 1 = 2i sin(φ/2) e^{iφ/2}`, which removes the singularity at
/// `φ = 0` (limits 1, 2 and 0 for `j = 1`, `j = 2` and `j ≥ 3`).
fn angle_ratio(j: usize, phi: f64) -> f64 {
    if j == 1 {
        return 1.0;
    }
    let s = (phi / 2.0).sin();
    let phase = (j as f64 * (phi + PI) / 2.0).cos();
    -(2.0_f64.powi(j as i32 - 1)) * s.powi(j as i32 - 2) * phase
}

/// `(1 − (1−p)^j)/p = Σ_{i<j} (1−p)^i`, equal to `j` at `p = 0`.
fn p_factor(j: usize, p: f64) -> f64 {
    let q = 1.0 - p;
    let mut term = 1.0;
    let mut sum = 0.0;
    for _ in 0..j {
        sum += term;
        term *= q;
    }
    sum
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Coefficients `θ_{j−1}/j!` for `j = 1..=k` and the constant `2^k/k! θ_k`.
fn gk_coefficients(theta: &ThetaVector, k: usize) -> Result<(Vec<f64>, f64)> {
    if k == 0 {
        return Err(Error::InvalidArgument("order k must be at least 1".into()));
    }
    theta.require(k)?;
    let coeffs = (1..=k)
        .map(|j| theta.values()[j - 1] / factorial(j))
        .collect();
    let constant = 2.0_f64.powi(k as i32) / factorial(k) * theta.values()[k];
    Ok((coeffs, constant))
}

fn gk_value(coeffs: &[f64], constant: f64, phi: f64, p: f64) -> f64 {
    let phi = phi.abs();
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| angle_ratio(i + 1, phi) * p_factor(i + 1, p) * c)
        .sum::<f64>()
        - constant
}

/// Evaluates `g_k(φ, p)` with its removable singularities at `φ = 0` and
/// `p = 0` filled in by their limits.
pub fn g_k_eval(theta: &ThetaVector, k: usize, phi: f64, p: f64) -> Result<GkEvaluation> {
    if !(phi.is_finite() && phi.abs() <= PI) {
        return Err(Error::InvalidArgument(format!("φ = {phi} outside (−π, π]")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    let (coeffs, constant) = gk_coefficients(theta, k)?;
    Ok(GkEvaluation {
        phi,
        p,
        value: gk_value(&coeffs, constant, phi, p),
    })
}

/// `g₃` in the expanded trigonometric form
/// `θ₀ + cos φ (2−p) θ₁ + (cos φ − 1)(2cos φ + 1)(p² − 3p + 3) θ₂/3 − 4θ₃/3`.
pub fn g3_closed_form(theta: &ThetaVector, phi: f64, p: f64) -> Result<f64> {
    theta.require(3)?;
    let t = theta.values();
    let c = phi.cos();
    Ok(t[0] + c * (2.0 - p) * t[1] + (c - 1.0) * (2.0 * c + 1.0) * (p * p - 3.0 * p + 3.0) * t[2] / 3.0
        - 4.0 * t[3] / 3.0)
}

/// Infimum of `g_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaResult {
    pub k: usize,
    pub delta: f64,
    pub argmin: (f64, f64),
    /// `true` when an exact closed form was used rather than a search.
    pub certified: bool,
}

/// Resolution of the `(φ, p)` search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    /// Points on `[0, π]` (`g_k` is even in `φ`).
    pub phi_points: usize,
    pub p_points: usize,
    pub rel_tol: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            phi_points: 2049,
            p_points: 513,
            rel_tol: 1e-8,
        }
    }
}

/// Numerical infimum of `g_k`: a full grid scan followed by coordinate-wise
/// golden-section refinement around the best grid point. Never uses a
/// closed form.
pub fn grid_infimum(theta: &ThetaVector, k: usize, config: &GridConfig) -> Result<DeltaResult> {
    if config.phi_points < 2 || config.p_points < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 points per axis".into()));
    }
    let (coeffs, constant) = gk_coefficients(theta, k)?;
    let phi_step = PI / (config.phi_points - 1) as f64;
    let p_step = 1.0 / (config.p_points - 1) as f64;

    // g_k = Σ_j angle_j(φ) · pfac_j(p) · coeff_j − constant; tabulate the
    // p-dependent part once.
    let p_table: Vec<Vec<f64>> = (0..config.p_points)
        .map(|l| {
            let p = l as f64 * p_step;
            (1..=k).map(|j| p_factor(j, p) * coeffs[j - 1]).collect()
        })
        .collect();

    let (best_value, best_i, best_l) = (0..config.phi_points)
        .into_par_iter()
        .map(|i| {
            let phi = i as f64 * phi_step;
            let angles: Vec<f64> = (1..=k).map(|j| angle_ratio(j, phi)).collect();
            let mut row_best = (f64::INFINITY, i, 0usize);
            for (l, pf) in p_table.iter().enumerate() {
                let v: f64 = angles.iter().zip(pf).map(|(a, b)| a * b).sum::<f64>() - constant;
                if v < row_best.0 {
                    row_best = (v, i, l);
                }
            }
            row_best
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |a, b| if (b.0, b.1, b.2) < (a.0, a.1, a.2) { b } else { a },
        );

    let eval = |phi: f64, p: f64| gk_value(&coeffs, constant, phi, p);
    let (phi, p, value) = refine(
        eval,
        (best_i as f64 * phi_step, best_l as f64 * p_step),
        (phi_step, p_step),
        best_value,
        config.rel_tol,
    );
    Ok(DeltaResult {
        k,
        delta: value,
        argmin: (phi, p),
        certified: false,
    })
}

/// Coordinate descent on `[0, π] × [0, 1]`, one golden-section line search
/// per coordinate per sweep, starting with brackets of one grid step.
fn refine<F>(eval: F, start: (f64, f64), steps: (f64, f64), start_value: f64, rel_tol: f64) -> (f64, f64, f64)
where
    F: Fn(f64, f64) -> f64,
{
    let (mut phi, mut p) = start;
    let mut value = start_value;
    let (dphi, dp) = steps;
    for _ in 0..200 {
        let before = value;
        let (new_phi, v) = golden_min(|x| eval(x, p), (phi - dphi).max(0.0), (phi + dphi).min(PI));
        if v < value {
            phi = new_phi;
            value = v;
        }
        let (new_p, v) = golden_min(|y| eval(phi, y), (p - dp).max(0.0), (p + dp).min(1.0));
        if v < value {
            p = new_p;
            value = v;
        }
        if before - value <= rel_tol * value.abs().max(1e-300) {
            break;
        }
    }
    (phi, p, value)
}

/// Golden-section search on `[a, b]`; the endpoints are candidates too.
fn golden_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if hi - lo <= 1e-14 * (1.0 + lo.abs()) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    [(a, f(a)), (b, f(b)), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((a, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
}

/// The `k = 3` value at `(π, 0)`: `θ₀ − 2θ₁ + 2θ₂ − 4θ₃/3`.
///
/// This is the infimum of `g₃` only when `5θ₂ ≤ 2θ₁`; for larger `θ₂` the
/// minimum over `cos φ` moves inside `(−1, 1)` and this value overstates
/// `δ₃`.
pub fn cor3_closed_form_delta(theta: &ThetaVector) -> Result<f64> {
    theta.require(3)?;
    let t = theta.values();
    Ok(t[0] - 2.0 * t[1] + 2.0 * t[2] - 4.0 * t[3] / 3.0)
}

/// `(π, 0)` minimises `g₃`: for each `p` the convex quadratic in `cos φ`
/// has its vertex at or below −1, and the resulting edge is increasing in
/// `p`.
fn cor3_closed_form_valid(theta: &ThetaVector) -> bool {
    let t = theta.values();
    5.0 * t[2] <= 2.0 * t[1]
}

/// `δ_k = inf g_k`, exact for `k ≤ 2` and for `k = 3` with `5θ₂ ≤ 2θ₁`,
/// otherwise by [`grid_infimum`] with the default grid.
pub fn delta_k(theta: &ThetaVector, k: usize) -> Result<DeltaResult> {
    delta_k_with(theta, k, &GridConfig::default())
}

pub fn delta_k_with(theta: &ThetaVector, k: usize, config: &GridConfig) -> Result<DeltaResult> {
    gk_coefficients(theta, k)?;
    let t = theta.values();
    let closed = |delta: f64| DeltaResult {
        k,
        delta,
        argmin: (PI, 0.0),
        certified: true,
    };
    match k {
        1 => Ok(closed(t[0] - 2.0 * t[1])),
        // g₂ = θ₀ + cos φ (2 − p) θ₁ − 2θ₂ and cos φ (2 − p) ≥ −2
        2 => Ok(closed(t[0] - 2.0 * t[1] - 2.0 * t[2])),
        3 if cor3_closed_form_valid(theta) => Ok(closed(cor3_closed_form_delta(theta)?)),
        _ => grid_infimum(theta, k, config),
    }
}

pub fn bound_thm2(theta: &ThetaVector, k: usize) -> Result<SteinFactorBound> {
    let d = delta_k(theta, k)?;
    let how = if d.certified { "closed form" } else { "grid infimum" };
    Ok(SteinFactorBound::from_delta(
        Method::Thm2(k),
        d.delta,
        format!("δ_{k} = {} ({how}) at (φ, p) = ({}, {})", d.delta, d.argmin.0, d.argmin.1),
    ))
}

/// The `k = 3` closed form when it is the true infimum of `g₃`
/// (`5θ₂ ≤ 2θ₁`, which implies `θ₂ < 2θ₁` unless both vanish); otherwise
/// falls back to [`bound_thm2`] with `k = 3`.
pub fn bound_cor3(theta: &ThetaVector) -> Result<SteinFactorBound> {
    theta.require(3)?;
    if cor3_closed_form_valid(theta) {
        let delta = cor3_closed_form_delta(theta)?;
        return Ok(SteinFactorBound::from_delta(
            Method::Cor3,
            delta,
            format!("5θ₂ ≤ 2θ₁; δ = θ₀ − 2θ₁ + 2θ₂ − 4θ₃/3 = {delta}"),
        ));
    }
    let mut fallback = bound_thm2(theta, 3)?;
    fallback.condition_note = format!(
        "5θ₂ > 2θ₁, closed form is not the infimum; {}",
        fallback.condition_note
    );
    Ok(fallback)
}

pub fn bound_lemma_c(theta: &ThetaVector, c: f64) -> Result<SteinFactorBound> {
    if !(c > 1.0) {
        return Err(Error::LemmaConstant(c));
    }
    let t0 = theta.at(0)?;
    let t1 = theta.at(1)?;
    if !(t0 > 0.0) {
        return Err(Error::InvalidArgument("θ₀ must be positive".into()));
    }
    let method = Method::LemmaC(c);
    let ratio = t1 / t0;
    // θ₁/θ₀ ≤ 1/2 + log c/(3θ₀)  ⇔  (3/2)(2θ₁ − θ₀) ≤ log c; a few ulps of
    // slack keep the right endpoint inside when c = exp{(3/2)(2θ₁ − θ₀)}.
    let excess = 1.5 * (2.0 * t1 - t0);
    let log_c = c.ln();
    if !(ratio > 0.5) || excess > log_c + 8.0 * f64::EPSILON * log_c.abs().max(excess.abs()) {
        return Ok(SteinFactorBound::inapplicable(
            method,
            format!("θ₁/θ₀ = {ratio} outside (1/2, 1/2 + log c/(3θ₀)]"),
        ));
    }
    let gap = 2.0 * t1 - t0;
    let delta = gap / (2.0 * c * PI.sqrt());
    Ok(SteinFactorBound::from_delta(
        method,
        delta,
        format!("θ₁/θ₀ = {ratio}; δ = (2θ₁ − θ₀)/(2c√π) = {delta}"),
    ))
}

pub fn bound_thm4(theta: &ThetaVector) -> Result<SteinFactorBound> {
    let t0 = theta.at(0)?;
    let t1 = theta.at(1)?;
    if !(t0 > 0.0) {
        return Err(Error::InvalidArgument("θ₀ must be positive".into()));
    }
    let gap = 2.0 * t1 - t0;
    if !(gap > 0.0) {
        return Ok(SteinFactorBound::inapplicable(
            Method::Thm4,
            format!("2θ₁ − θ₀ = {gap} ≤ 0"),
        ));
    }
    let delta = gap / (2.0 * PI.sqrt() * (1.5 * gap).exp());
    Ok(SteinFactorBound::from_delta(
        Method::Thm4,
        delta,
        format!("2θ₁ − θ₀ = {gap}; δ = {delta}"),
    ))
}

/// Every bound [`best_bound`] considers, in a fixed order: GENERAL,
/// MONOTONE, BX99, THM2(k) for `k = 1..=min(order, 6)`, COR3 (order ≥ 3),
/// THM4 (θ₀ > 0).
pub fn all_bounds(params: &CompoundPoissonParams, theta: &ThetaVector) -> Result<Vec<SteinFactorBound>> {
    let mut out = vec![bound_general(params), bound_monotone(params), bound_bx99(theta)?];
    for k in 1..=theta.order().min(MAX_BEST_ORDER) {
        out.push(bound_thm2(theta, k)?);
    }
    if theta.order() >= 3 {
        out.push(bound_cor3(theta)?);
    }
    if theta.at(0)? > 0.0 {
        out.push(bound_thm4(theta)?);
    }
    Ok(out)
}

/// Componentwise minimum of `m0` and `m1` over the applicable bounds.
pub fn best_bound(params: &CompoundPoissonParams, theta: &ThetaVector) -> Result<SteinFactorBound> {
    Ok(best_of(&all_bounds(params, theta)?))
}

/// Componentwise minimum over already-evaluated bounds; the first bound in
/// the list wins ties. The reported method is the `m1` winner.
pub fn best_of(bounds: &[SteinFactorBound]) -> SteinFactorBound {
    let pick = |key: fn(&SteinFactorBound) -> f64| {
        bounds
            .iter()
            .filter(|b| b.applicable)
            .fold(None::<&SteinFactorBound>, |best, b| match best {
                Some(cur) if key(cur) <= key(b) => Some(cur),
                _ => Some(b),
            })
    };
    match (pick(|b| b.m0), pick(|b| b.m1)) {
        (Some(b0), Some(b1)) => SteinFactorBound::applicable(
            b1.method,
            b0.m0,
            b1.m1,
            format!("m0: {}; m1: {}", b0.method, b1.method),
        ),
        _ => SteinFactorBound::inapplicable(Method::General, "no applicable bound"),
    }
}
