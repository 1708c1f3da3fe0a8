//! Exact (or seeded Monte Carlo) laws of the application statistics and
//! distances between distribution tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apps::{IndependentSumModel, MixedPoissonModel, Mixing, ReliabilityModel, RunsModel};
use crate::error::{Error, Result};
use crate::table::{chernoff_tail, DistributionTable, TABLE_EPS};

/// Largest circle handled by [`runs_exact_pmf`].
pub const RUNS_MAX_N: usize = 2000;
/// Largest grid side handled by [`reliability_exact_pmf`].
pub const RELIABILITY_EXACT_MAX_N: usize = 5;
/// Work budget (multiply-adds) for [`sums_exact_pmf`].
pub const SUMS_MAX_CELLS: usize = 10_000_000;
/// Shards used by the Monte Carlo estimator; fixed so results do not depend
/// on the thread count.
pub const MC_SHARDS: u64 = 64;

const TAIL_TARGET: f64 = TABLE_EPS / 10.0;
const TABLE_CAP: usize = 1_000_000;

/// Exact law of the circular 2-run count by transfer-matrix dynamic
/// programming over `(first bit, current bit, count)`.
pub fn runs_exact_pmf(m: &RunsModel) -> Result<DistributionTable> {
    m.validate()?;
    if m.n > RUNS_MAX_N {
        return Err(Error::BudgetExceeded(format!("runs n = {} exceeds {RUNS_MAX_N}", m.n)));
    }
    let n = m.n;
    let bit_prob = [1.0 - m.p, m.p];
    let mut pmf = vec![0.0; n + 1];
    for first in 0..2 {
        if bit_prob[first] == 0.0 {
            continue;
        }
        // layer[bit][count]: probability of the prefix ending in `bit`
        let mut layer = [vec![0.0; n + 1], vec![0.0; n + 1]];
        layer[first][0] = bit_prob[first];
        for _ in 1..n {
            let mut next = [vec![0.0; n + 1], vec![0.0; n + 1]];
            for (prev, row) in layer.iter().enumerate() {
                for (count, &mass) in row.iter().enumerate() {
                    if mass == 0.0 {
                        continue;
                    }
                    next[0][count] += mass * bit_prob[0];
                    next[1][count + prev] += mass * bit_prob[1];
                }
            }
            layer = next;
        }
        for (last, row) in layer.iter().enumerate() {
            let closing = last * first;
            for (count, &mass) in row.iter().enumerate() {
                if mass != 0.0 {
                    pmf[count + closing] += mass;
                }
            }
        }
    }
    DistributionTable::new(pmf, 0.0)
}

/// Number of all-failed `k × k` windows, by 2-D prefix sums over the
/// row-major failure grid.
pub fn count_failed_subgrids(failed: &[bool], n: usize, k: usize) -> usize {
    debug_assert_eq!(failed.len(), n * n);
    let w = n + 1;
    let mut prefix = vec![0u32; w * w];
    for r in 0..n {
        for c in 0..n {
            prefix[(r + 1) * w + c + 1] = failed[r * n + c] as u32 + prefix[r * w + c + 1] + prefix[(r + 1) * w + c]
                - prefix[r * w + c];
        }
    }
    let full = (k * k) as u32;
    let mut count = 0;
    for r in 0..=(n - k) {
        for c in 0..=(n - k) {
            let s = prefix[(r + k) * w + c + k] + prefix[r * w + c] - prefix[r * w + c + k] - prefix[(r + k) * w + c];
            if s == full {
                count += 1;
            }
        }
    }
    count
}

/// Exact law of the failed-subgrid count by enumeration of all `2^{n²}`
/// failure patterns. Patterns are tallied by (failures, count) in integers
/// and weighted at the end.
pub fn reliability_exact_pmf(m: &ReliabilityModel) -> Result<DistributionTable> {
    m.validate()?;
    if m.n > RELIABILITY_EXACT_MAX_N {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive reliability needs n ≤ {RELIABILITY_EXACT_MAX_N}, got {}; use Monte Carlo",
            m.n
        )));
    }
    let (n, k) = (m.n, m.k);
    let cells = n * n;
    let positions = m.positions();
    let windows: Vec<u32> = (0..=(n - k))
        .flat_map(|r| (0..=(n - k)).map(move |c| (r, c)))
        .map(|(r, c)| {
            (0..k)
                .flat_map(|dr| (0..k).map(move |dc| 1u32 << ((r + dr) * n + c + dc)))
                .fold(0, |acc, bit| acc | bit)
        })
        .collect();

    let total: u64 = 1 << cells;
    let chunk = 1u64 << cells.saturating_sub(6);
    let tallies = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut tally = vec![vec![0u64; positions + 1]; cells + 1];
            for pattern in (c * chunk)..((c + 1) * chunk).min(total) {
                let pattern = pattern as u32;
                let w = windows.iter().filter(|m| pattern & **m == **m).count();
                tally[pattern.count_ones() as usize][w] += 1;
            }
            tally
        })
        .reduce(
            || vec![vec![0u64; positions + 1]; cells + 1],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(&b) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        *x += y;
                    }
                }
                a
            },
        );

    let mut pmf = vec![0.0; positions + 1];
    for (failures, row) in tallies.iter().enumerate() {
        let weight = m.q.powi(failures as i32) * (1.0 - m.q).powi((cells - failures) as i32);
        for (w, &count) in row.iter().enumerate() {
            pmf[w] += count as f64 * weight;
        }
    }
    DistributionTable::new(pmf, 0.0)
}

/// Monte Carlo table with per-bin binomial standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McTable {
    pub table: DistributionTable,
    pub stderr: Vec<f64>,
    pub samples: usize,
}

/// Seeded Monte Carlo law of the failed-subgrid count. Work is split into
/// [`MC_SHARDS`] ChaCha streams of one seed, so the output does not depend
/// on how shards are scheduled.
pub fn reliability_mc_pmf(m: &ReliabilityModel, samples: usize, seed: u64) -> Result<McTable> {
    m.validate()?;
    if samples < 10_000 {
        return Err(Error::InvalidArgument(format!("need at least 10⁴ samples, got {samples}")));
    }
    let (n, k, q) = (m.n, m.k, m.q);
    let positions = m.positions();
    let per_shard = samples as u64 / MC_SHARDS;
    let extra = samples as u64 % MC_SHARDS;
    let counts = (0..MC_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let draws = per_shard + u64::from(shard < extra);
            let mut grid = vec![false; n * n];
            let mut counts = vec![0u64; positions + 1];
            for _ in 0..draws {
                for cell in grid.iter_mut() {
                    *cell = rng.random::<f64>() < q;
                }
                counts[count_failed_subgrids(&grid, n, k)] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; positions + 1],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let total = samples as f64;
    let pmf: Vec<f64> = counts.iter().map(|c| *c as f64 / total).collect();
    let stderr = pmf.iter().map(|p| (p * (1.0 - p) / total).sqrt()).collect();
    Ok(McTable {
        table: DistributionTable::new(pmf, 0.0)?,
        stderr,
        samples,
    })
}

/// Extends a pmf generated term by term until the exponential-moment tail
/// bound falls below the table tolerance.
fn tabulate<N, M>(mut next: N, log_mgf: M, s_max: f64, mean: f64) -> Result<DistributionTable>
where
    N: FnMut(usize) -> f64,
    M: Fn(f64) -> f64,
{
    let mut pmf = Vec::new();
    for x in 0..TABLE_CAP {
        pmf.push(next(x));
        if x as f64 >= mean {
            let tail = chernoff_tail(&log_mgf, (x + 1) as f64, s_max);
            if tail <= TAIL_TARGET {
                return DistributionTable::new(pmf, tail);
            }
        }
    }
    Err(Error::TruncationCapExceeded(format!("no certified tail within {TABLE_CAP} points")))
}

/// Mixture of Poisson laws for a two-point intensity; negative binomial for
/// a gamma intensity.
pub fn mixed_exact_pmf(m: &MixedPoissonModel) -> Result<DistributionTable> {
    m.validate()?;
    match m.mixing {
        Mixing::TwoPoint { a, b, w } => {
            let (mut pa, mut pb) = ((-a).exp(), (-b).exp());
            let next = |x: usize| {
                if x > 0 {
                    pa *= a / x as f64;
                    pb *= b / x as f64;
                }
                w * pa + (1.0 - w) * pb
            };
            let log_mgf = |s: f64| {
                let la = a * s.exp_m1();
                let lb = b * s.exp_m1();
                let hi = la.max(lb);
                hi + (w * (la - hi).exp() + (1.0 - w) * (lb - hi).exp()).ln()
            };
            tabulate(next, log_mgf, 40.0, m.nu())
        }
        Mixing::Gamma { shape, scale } => {
            let ratio = scale / (1.0 + scale);
            let mut p = (1.0 + scale).powf(-shape);
            let next = |x: usize| {
                if x > 0 {
                    p *= (x as f64 - 1.0 + shape) / x as f64 * ratio;
                }
                p
            };
            // E e^{sW} = (1 − scale (e^s − 1))^{−shape}
            let log_mgf = |s: f64| {
                let inner = 1.0 - scale * s.exp_m1();
                if inner > 0.0 {
                    -shape * inner.ln()
                } else {
                    f64::INFINITY
                }
            };
            tabulate(next, log_mgf, (1.0 + 1.0 / scale).ln(), m.nu())
        }
    }
}

/// Exact law of a sum of independent finite pmfs by iterated convolution.
pub fn sums_exact_pmf(m: &IndependentSumModel) -> Result<DistributionTable> {
    m.validate()?;
    let mut work = 0usize;
    let mut acc = vec![1.0];
    for comp in &m.components {
        work = work.saturating_add(acc.len().saturating_mul(comp.len()));
        if work > SUMS_MAX_CELLS {
            return Err(Error::BudgetExceeded(format!("convolution exceeds {SUMS_MAX_CELLS} cells")));
        }
        let mut out = vec![0.0; acc.len() + comp.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, c) in comp.iter().enumerate() {
                out[i + j] += a * c;
            }
        }
        acc = out;
    }
    let total: f64 = acc.iter().sum();
    acc.iter_mut().for_each(|p| *p /= total);
    DistributionTable::new(acc, 0.0)
}

/// Kolmogorov and total variation distances between two tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    /// `sup_y |F_a(y) − F_b(y)|` over the union of covered supports; the true
    /// distance lies within `certified_slack` of it.
    pub d_k: f64,
    pub d_tv: f64,
    pub argmax_y: usize,
    pub mc_stderr: f64,
    pub certified_slack: f64,
}

impl DistanceReport {
    /// Certified upper edge of the Kolmogorov distance.
    pub fn d_k_upper(&self) -> f64 {
        self.d_k + self.certified_slack
    }
}

pub fn distance(a: &DistributionTable, b: &DistributionTable) -> DistanceReport {
    let len = a.pmf().len().max(b.pmf().len());
    let (mut fa, mut fb) = (0.0, 0.0);
    let mut d_k = 0.0;
    let mut argmax_y = 0;
    let mut l1 = 0.0;
    for y in 0..len {
        let (pa, pb) = (a.prob(y), b.prob(y));
        fa += pa;
        fb += pb;
        l1 += (pa - pb).abs();
        let gap = (fa - fb).abs();
        if gap > d_k {
            d_k = gap;
            argmax_y = y;
        }
    }
    let slack = a.tail_mass() + b.tail_mass();
    DistanceReport {
        d_k,
        d_tv: (0.5 * l1 + slack).min(1.0),
        argmax_y,
        mc_stderr: 0.0,
        certified_slack: slack,
    }
}

/// [`distance`] with the Monte Carlo standard error of the estimated cdf at
/// the maximising threshold.
pub fn distance_mc(mc: &McTable, exact: &DistributionTable) -> DistanceReport {
    let mut report = distance(&mc.table, exact);
    let f = mc.table.cdf()[report.argmax_y.min(mc.table.x_max())];
    report.mc_stderr = (f * (1.0 - f) / mc.samples as f64).sqrt();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn runs_three_half() {
        let t = runs_exact_pmf(&RunsModel::new(3, 0.5).unwrap()).unwrap();
        assert_eq!(t.pmf(), &[0.5, 0.375, 0.0, 0.125]);
    }

    #[test]
    fn runs_degenerate() {
        let t = runs_exact_pmf(&RunsModel::new(9, 1.0).unwrap()).unwrap();
        assert_eq!(t.prob(9), 1.0);
        let t = runs_exact_pmf(&RunsModel::new(9, 0.0).unwrap()).unwrap();
        assert_eq!(t.prob(0), 1.0);
        assert!(runs_exact_pmf(&RunsModel { n: 2001, p: 0.1 }).is_err());
    }

    #[test]
    fn subgrid_counter() {
        let n = 4;
        let mut g = vec![false; 16];
        for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (0, 2)] {
            g[r * n + c] = true;
        }
        assert_eq!(count_failed_subgrids(&g, n, 2), 2);
        assert_eq!(count_failed_subgrids(&[true; 16], n, 2), 9);
        assert_eq!(count_failed_subgrids(&[true; 16], n, 4), 1);
    }

    #[test]
    fn reliability_exact_edges() {
        let m = ReliabilityModel::new(3, 3, 0.7).unwrap();
        let t = reliability_exact_pmf(&m).unwrap();
        assert_eq!(t.pmf().len(), 2);
        assert_relative_eq!(t.prob(1), m.psi(), max_relative = 1e-12);
        let t = reliability_exact_pmf(&ReliabilityModel::new(3, 2, 1.0).unwrap()).unwrap();
        assert_eq!(t.prob(4), 1.0);
        assert!(reliability_exact_pmf(&ReliabilityModel::new(6, 2, 0.3).unwrap()).is_err());
    }

    #[test]
    fn reliability_exact_three_by_three() {
        // brute force with the prefix-sum counter
        let m = ReliabilityModel::new(3, 2, 0.5).unwrap();
        let t = reliability_exact_pmf(&m).unwrap();
        let mut counts = [0usize; 5];
        for pattern in 0u32..512 {
            let g: Vec<bool> = (0..9).map(|i| pattern >> i & 1 == 1).collect();
            counts[count_failed_subgrids(&g, 3, 2)] += 1;
        }
        for (w, &c) in counts.iter().enumerate() {
            assert_eq!(t.prob(w), c as f64 / 512.0);
        }
    }

    #[test]
    fn mc_zero_failure() {
        let mc = reliability_mc_pmf(&ReliabilityModel::new(6, 2, 0.0).unwrap(), 10_000, 1).unwrap();
        assert_eq!(mc.table.prob(0), 1.0);
        assert!(reliability_mc_pmf(&ReliabilityModel::new(6, 2, 0.1).unwrap(), 100, 1).is_err());
    }

    #[test]
    fn mixed_two_point() {
        let m = MixedPoissonModel::new(Mixing::TwoPoint { a: 1.0, b: 3.0, w: 0.5 }).unwrap();
        let t = mixed_exact_pmf(&m).unwrap();
        assert_relative_eq!(t.prob(0), 0.5 * (-1.0_f64).exp() + 0.5 * (-3.0_f64).exp(), max_relative = 1e-15);
        assert!((t.mean() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn mixed_degenerate_is_poisson() {
        let m = MixedPoissonModel::new(Mixing::TwoPoint { a: 2.5, b: 2.5, w: 0.2 }).unwrap();
        let t = mixed_exact_pmf(&m).unwrap();
        let mut p = (-2.5_f64).exp();
        for x in 0..20 {
            assert_relative_eq!(t.prob(x), p, max_relative = 1e-13);
            p *= 2.5 / (x + 1) as f64;
        }
    }

    #[test]
    fn sums_examples() {
        let single = IndependentSumModel::new(vec![vec![0.2, 0.3, 0.5]]).unwrap();
        assert_eq!(sums_exact_pmf(&single).unwrap().pmf(), &[0.2, 0.3, 0.5]);
        let coins = IndependentSumModel::new(vec![vec![0.5, 0.5]; 2]).unwrap();
        assert_eq!(sums_exact_pmf(&coins).unwrap().pmf(), &[0.25, 0.5, 0.25]);
        let uni = IndependentSumModel::new(vec![vec![0.25; 4]; 20]).unwrap();
        let t = sums_exact_pmf(&uni).unwrap();
        assert!((t.mean() - 30.0).abs() < 1e-9);
        assert!((t.variance() - 25.0).abs() < 1e-9);
    }

    #[test]
    fn distance_examples() {
        let t = DistributionTable::new(vec![0.2, 0.3, 0.5], 0.0).unwrap();
        let d = distance(&t, &t);
        assert_eq!((d.d_k, d.d_tv), (0.0, 0.0));
        let d = distance(&DistributionTable::point_mass(0), &DistributionTable::point_mass(1));
        assert_eq!((d.d_k, d.d_tv, d.argmax_y), (1.0, 1.0, 0));
    }
}
