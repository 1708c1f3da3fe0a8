//! Compound Poisson laws parameterised by cluster rates.
//!
//! `U ~ CP(λ, μ)` is the sum of `N ~ Poisson(λ)` i.i.d. cluster sizes drawn
//! from `μ`. The primitive here is the rate sequence `λ_j = λ μ_j`, which
//! every bound in the crate is stated in terms of.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{chernoff_tail, DistributionTable, TABLE_EPS};

/// Hard cap on the support length produced by [`cp_pmf`].
pub const DEFAULT_PMF_CAP: usize = 200_000;

/// Largest total rate for which `e^{-λ}` is safely representable.
const MAX_TOTAL_RATE: f64 = 700.0;

/// Rates `λ_1, …, λ_J` of a compound Poisson law with finite cluster sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct CompoundPoissonParams {
    rates: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    rates: Vec<f64>,
}

impl TryFrom<RawParams> for CompoundPoissonParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        CompoundPoissonParams::new(raw.rates)
    }
}

impl From<CompoundPoissonParams> for RawParams {
    fn from(p: CompoundPoissonParams) -> Self {
        RawParams { rates: p.rates }
    }
}

impl CompoundPoissonParams {
    /// `rates[j - 1]` is the rate of clusters of size `j`. Trailing zeros
    /// are dropped so that [`max_cluster`](Self::max_cluster) is exact.
    pub fn new(mut rates: Vec<f64>) -> Result<Self> {
        if let Some(bad) = rates.iter().find(|r| !r.is_finite() || **r < 0.0) {
            return Err(Error::InvalidParams(format!(
                "rates must be finite and nonnegative, got {bad}"
            )));
        }
        while rates.last() == Some(&0.0) {
            rates.pop();
        }
        if rates.is_empty() {
            return Err(Error::InvalidParams(
                "at least one rate must be positive".into(),
            ));
        }
        Ok(Self { rates })
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// `λ_j` for `j ≥ 1`; zero beyond the largest cluster size.
    pub fn rate(&self, j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        self.rates.get(j - 1).copied().unwrap_or(0.0)
    }

    /// Largest cluster size `J` with `λ_J > 0`.
    pub fn max_cluster(&self) -> usize {
        self.rates.len()
    }

    /// Total rate `λ = Σ λ_j`.
    pub fn total_rate(&self) -> f64 {
        self.rates.iter().sum()
    }

    pub fn lambda1(&self) -> f64 {
        self.rate(1)
    }

    /// Cluster-size law `μ_j = λ_j / λ`, indexed from `j = 1`.
    pub fn severity(&self) -> Vec<f64> {
        let total = self.total_rate();
        self.rates.iter().map(|r| r / total).collect()
    }

    /// `(j, j λ_j)` pairs for the nonzero rates.
    pub(crate) fn weighted_rates(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.rates
            .iter()
            .enumerate()
            .filter(|(_, r)| **r > 0.0)
            .map(|(i, r)| (i + 1, (i + 1) as f64 * r))
    }

    /// `log E e^{sU} = Σ λ_j (e^{sj} − 1)`.
    pub fn log_mgf(&self, s: f64) -> f64 {
        self.rates
            .iter()
            .enumerate()
            .map(|(i, r)| r * ((s * (i + 1) as f64).exp_m1()))
            .sum()
    }
}

/// Factorial-moment sums `θ_0, …, θ_K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaVector {
    values: Vec<f64>,
}

impl ThetaVector {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("theta vector is empty".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "theta values must be finite and nonnegative, got {bad}"
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Highest order present.
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize) -> Option<f64> {
        self.values.get(k).copied()
    }

    /// `θ_k`, or an error when the vector stops short of `k`.
    pub fn at(&self, k: usize) -> Result<f64> {
        self.get(k).ok_or(Error::ThetaOrderInsufficient {
            needed: k,
            available: self.order(),
        })
    }

    pub(crate) fn require(&self, k: usize) -> Result<()> {
        self.at(k).map(|_| ())
    }
}

/// `θ_k = Σ_j j(j−1)⋯(j−k) λ_j` for `k = 0..=order`.
pub fn theta(params: &CompoundPoissonParams, order: usize) -> ThetaVector {
    let values = (0..=order)
        .map(|k| {
            params
                .rates()
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let j = i + 1;
                    if j <= k {
                        return 0.0;
                    }
                    let falling: f64 = (0..=k).map(|l| (j - l) as f64).product();
                    falling * r
                })
                .sum()
        })
        .collect();
    ThetaVector { values }
}

/// pmf of `U` by the compound Poisson recursion, extended until the
/// exponential-moment tail bound drops below `1 − mass_target` (and below
/// a tenth of the table tolerance, so the mass invariant always holds).
pub fn cp_pmf(params: &CompoundPoissonParams, mass_target: f64) -> Result<DistributionTable> {
    cp_pmf_with_cap(params, mass_target, DEFAULT_PMF_CAP)
}

pub fn cp_pmf_with_cap(
    params: &CompoundPoissonParams,
    mass_target: f64,
    cap: usize,
) -> Result<DistributionTable> {
    if !(mass_target > 0.0 && mass_target < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "mass target must lie in (0,1), got {mass_target}"
        )));
    }
    let lambda = params.total_rate();
    if lambda > MAX_TOTAL_RATE {
        return Err(Error::InvalidParams(format!(
            "total rate {lambda} too large for linear-space recursion"
        )));
    }
    let tail_target = (1.0 - mass_target).min(TABLE_EPS / 10.0);
    let weighted: Vec<(usize, f64)> = params.weighted_rates().collect();
    let mean: f64 = weighted.iter().map(|(_, w)| w).sum();
    let s_max = 40.0 / params.max_cluster() as f64;

    let mut pmf = vec![(-lambda).exp()];
    let mut x = 0usize;
    loop {
        if x as f64 >= mean {
            let tail = chernoff_tail(|s| params.log_mgf(s), (x + 1) as f64, s_max);
            if tail <= tail_target {
                return DistributionTable::new(pmf, tail);
            }
        }
        if x >= cap {
            return Err(Error::TruncationCapExceeded(format!(
                "mass target {mass_target} not reached within {cap} points"
            )));
        }
        x += 1;
        let next: f64 = weighted
            .iter()
            .filter(|(j, _)| *j <= x)
            .map(|(j, w)| w * pmf[x - j])
            .sum::<f64>()
            / x as f64;
        pmf.push(next);
    }
}

/// One draw of `U`, reproducible from `seed`.
pub fn cp_sample(params: &CompoundPoissonParams, seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CpSampler::new(params).sample(&mut rng)
}

/// `count` draws from a single seeded stream.
pub fn cp_sample_many(params: &CompoundPoissonParams, seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = CpSampler::new(params);
    (0..count).map(|_| sampler.sample(&mut rng)).collect()
}

/// Draws `N ~ Poisson(λ)` then `N` cluster sizes by inversion of `μ`.
pub struct CpSampler {
    clusters: Poisson<f64>,
    severity_cdf: Vec<f64>,
}

impl CpSampler {
    pub fn new(params: &CompoundPoissonParams) -> Self {
        let clusters = Poisson::new(params.total_rate()).expect("positive finite rate");
        let severity_cdf = params
            .severity()
            .iter()
            .scan(0.0, |acc, m| {
                *acc += m;
                Some(*acc)
            })
            .collect();
        Self {
            clusters,
            severity_cdf,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let n = self.clusters.sample(rng) as u64;
        let last = self.severity_cdf.len();
        (0..n)
            .map(|_| {
                let u: f64 = rng.random::<f64>() * self.severity_cdf[last - 1];
                let idx = self.severity_cdf.partition_point(|c| *c <= u);
                (idx.min(last - 1) + 1) as u64
            })
            .sum()
    }
}

/// `j λ_j ≥ (j+1) λ_{j+1}` for all `j = 1..J` (with `λ_{J+1} = 0`).
pub fn monotone_condition(params: &CompoundPoissonParams) -> bool {
    (1..=params.max_cluster()).all(|j| {
        let lhs = j as f64 * params.rate(j);
        let rhs = (j + 1) as f64 * params.rate(j + 1);
        // allow a few ulps so exact boundary cases such as jλ_j ≡ 1 hold
        lhs >= rhs * (1.0 - 4.0 * f64::EPSILON)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(r: &[f64]) -> CompoundPoissonParams {
        CompoundPoissonParams::new(r.to_vec()).unwrap()
    }

    #[test]
    fn rejects_invalid_rates() {
        assert!(CompoundPoissonParams::new(vec![]).is_err());
        assert!(CompoundPoissonParams::new(vec![0.0, 0.0]).is_err());
        assert!(CompoundPoissonParams::new(vec![1.0, -0.1]).is_err());
        assert!(CompoundPoissonParams::new(vec![f64::NAN]).is_err());
        assert_eq!(params(&[1.0, 0.5, 0.0, 0.0]).max_cluster(), 2);
    }

    #[test]
    fn theta_examples() {
        let t = theta(&params(&[5.0]), 2);
        assert_eq!(t.values(), &[5.0, 0.0, 0.0]);
        let t = theta(&params(&[1.0, 1.0]), 2);
        assert_eq!(t.values(), &[3.0, 2.0, 0.0]);
        // runs n=100, p=0.1
        let (n, p) = (100.0, 0.1_f64);
        let runs = params(&[
            n * p * p * (1.0 - p) * (1.0 - p),
            n * p.powi(3) * (1.0 - p),
            n * p.powi(4) / 3.0,
        ]);
        let t = theta(&runs, 3);
        assert_relative_eq!(t.values()[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(t.values()[1], 0.2, max_relative = 1e-12);
        assert_relative_eq!(t.values()[2], 0.02, max_relative = 1e-12);
        assert_eq!(t.values()[3], 0.0);
    }

    #[test]
    fn theta_vanishes_beyond_max_cluster() {
        let p = params(&[0.3, 0.2, 0.7, 0.1]);
        let t = theta(&p, 8);
        for k in 4..=8 {
            assert_eq!(t.values()[k], 0.0);
        }
        assert!(t.at(9).is_err());
    }

    #[test]
    fn pmf_poisson_reduction() {
        let t = cp_pmf(&params(&[1.0]), 1.0 - 1e-12).unwrap();
        let e = (-1.0_f64).exp();
        assert_relative_eq!(t.prob(0), e, max_relative = 1e-15);
        assert_relative_eq!(t.prob(1), e, max_relative = 1e-15);
        assert_relative_eq!(t.prob(4), e / 24.0, max_relative = 1e-14);
    }

    #[test]
    fn pmf_zero_is_exp_minus_lambda() {
        let p = params(&[0.4, 0.0, 1.1, 0.3]);
        let t = cp_pmf(&p, 0.999).unwrap();
        assert_relative_eq!(t.prob(0), (-1.8_f64).exp(), max_relative = 1e-15);
    }

    /// Brute force: condition on the number of clusters and enumerate every
    /// ordered tuple of cluster sizes.
    fn brute_force_pmf(rates: &[f64], x: usize, max_clusters: usize) -> f64 {
        fn tuples(mu: &[f64], remaining: usize, left: usize) -> f64 {
            if left == 0 {
                return if remaining == 0 { 1.0 } else { 0.0 };
            }
            (1..=mu.len().min(remaining))
                .map(|j| mu[j - 1] * tuples(mu, remaining - j, left - 1))
                .sum()
        }
        let lambda: f64 = rates.iter().sum();
        let mu: Vec<f64> = rates.iter().map(|r| r / lambda).collect();
        let mut poisson = (-lambda).exp();
        let mut total = 0.0;
        for n in 0..=max_clusters {
            if n > 0 {
                poisson *= lambda / n as f64;
            }
            total += poisson * tuples(&mu, x, n);
        }
        total
    }

    #[test]
    fn pmf_matches_enumeration() {
        let rates = [0.5, 0.25];
        let t = cp_pmf(&params(&rates), 1.0 - 1e-12).unwrap();
        let e = (-0.75_f64).exp();
        assert_relative_eq!(t.prob(1), 0.5 * e, max_relative = 1e-14);
        assert_relative_eq!(t.prob(2), 0.375 * e, max_relative = 1e-14);
        for x in 0..12 {
            let bf = brute_force_pmf(&rates, x, 20);
            assert_relative_eq!(t.prob(x), bf, max_relative = 1e-12, epsilon = 1e-300);
        }
    }

    #[test]
    fn pmf_moments_match_theta() {
        let p = params(&[0.9, 0.4, 0.2, 0.05, 0.01]);
        let t = cp_pmf(&p, 1.0 - 1e-12).unwrap();
        assert!(t.tail_mass() <= 1e-12);
        let th = theta(&p, 1);
        assert!((t.mean() - th.values()[0]).abs() < 1e-8);
        assert!((t.variance() - th.values()[0] - th.values()[1]).abs() < 1e-8);
    }

    #[test]
    fn pmf_argument_checks() {
        let p = params(&[1.0]);
        assert!(cp_pmf(&p, 1.0).is_err());
        assert!(cp_pmf(&p, 0.0).is_err());
        assert!(matches!(
            cp_pmf_with_cap(&params(&[30.0]), 0.5, 10),
            Err(Error::TruncationCapExceeded(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = params(&[1.0]);
        assert_eq!(cp_sample(&p, 17), cp_sample(&p, 17));
        let tiny = params(&[1e-12]);
        assert!((0..100).all(|s| cp_sample(&tiny, s) == 0));
        assert_eq!(cp_sample_many(&p, 3, 50), cp_sample_many(&p, 3, 50));
    }

    #[test]
    fn monotone_examples() {
        assert!(monotone_condition(&params(&[1.0, 0.5, 1.0 / 3.0])));
        assert!(!monotone_condition(&params(&[1.0, 2.0])));
        assert!(monotone_condition(&params(&[2.0])));
    }

    #[test]
    fn params_json() {
        let p: CompoundPoissonParams = serde_json::from_str(r#"{"rates":[0.5,0.25]}"#).unwrap();
        assert_eq!(p.rates(), &[0.5, 0.25]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"rates":[0.5,0.25]}"#);
        assert!(serde_json::from_str::<CompoundPoissonParams>(r#"{"rates":[0]}"#).is_err());
    }
}
