//! Reference computations used by the integration tests. Each one takes a
//! different route from the library code it is compared against.

#![allow(dead_code)]

use num_complex::Complex64;

/// Circular 2-run law by enumerating all `2^n` bit strings, tallied as
/// integer counts per (number of ones, run count).
pub fn runs_brute_force(n: usize, p: f64) -> Vec<f64> {
    let mut counts = vec![vec![0u64; n + 1]; n + 1];
    for bits in 0u32..(1 << n) {
        let runs = (0..n)
            .filter(|&i| bits >> i & 1 == 1 && bits >> ((i + 1) % n) & 1 == 1)
            .count();
        counts[bits.count_ones() as usize][runs] += 1;
    }
    let mut pmf = vec![0.0; n + 1];
    for (ones, row) in counts.iter().enumerate() {
        let weight = p.powi(ones as i32) * (1.0 - p).powi((n - ones) as i32);
        for (w, &c) in row.iter().enumerate() {
            pmf[w] += c as f64 * weight;
        }
    }
    pmf
}

/// `g₃` by literal complex arithmetic on `(e^{iφ} − 1)^j`. Needs `φ ≠ 0`
/// and `p > 0`.
pub fn g3_complex(theta: &[f64], phi: f64, p: f64) -> f64 {
    let z = Complex64::from_polar(1.0, phi) - 1.0;
    let denom = phi.cos() - 1.0;
    let factorial = [1.0, 1.0, 2.0, 6.0];
    let mut sum = 0.0;
    for j in 1..=3 {
        let ratio = z.powu(j as u32).re / denom;
        let p_term = (1.0 - (1.0 - p).powi(j as i32)) / p;
        sum += theta[j - 1] / factorial[j] * ratio * p_term;
    }
    sum - 8.0 / 6.0 * theta[3]
}

/// `Σ_{m ≥ 1} λ^m x!/(x+m)!`, i.e. `P(Po(λ) > x)/P(Po(λ) = x)`.
fn upper_ratio(lambda: f64, x: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for m in 1.. {
        term *= lambda / (x + m) as f64;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// `Σ_{m=0}^{x} x!/((x−m)! λ^m)`, i.e. `P(Po(λ) ≤ x)/P(Po(λ) = x)`.
fn lower_ratio(lambda: f64, x: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..=x {
        term *= (x + 1 - m) as f64 / lambda;
        sum += term;
    }
    sum
}

fn poisson_point(lambda: f64, x: usize) -> f64 {
    let ln_fact: f64 = (1..=x).map(|i| (i as f64).ln()).sum();
    (-lambda + x as f64 * lambda.ln() - ln_fact).exp()
}

/// Forward solution of `λ f(x+1) − x f(x) = 1{x ≤ y} − P(Po(λ) ≤ y)`:
/// `f(x+1) = F(x)(1 − F(y))/(λπ_x)` for `x < y` and
/// `F(y)(1 − F(x))/(λπ_x)` for `x ≥ y`, with each ratio to `π_x` summed as
/// a well-conditioned series.
pub fn poisson_stein_forward(lambda: f64, y: usize, x_plus_one: usize) -> f64 {
    let x = x_plus_one - 1;
    let py = poisson_point(lambda, y);
    let cdf_y = py * lower_ratio(lambda, y);
    let sf_y = py * upper_ratio(lambda, y);
    if x < y {
        lower_ratio(lambda, x) * sf_y / lambda
    } else {
        cdf_y * upper_ratio(lambda, x) / lambda
    }
}

/// Reliability law by enumerating all failure patterns directly on the grid.
pub fn reliability_brute_force(n: usize, k: usize, q: f64) -> Vec<f64> {
    let positions = (n - k + 1) * (n - k + 1);
    let mut pmf = vec![0.0; positions + 1];
    for pattern in 0u64..(1 << (n * n)) {
        let failed = |r: usize, c: usize| pattern >> (r * n + c) & 1 == 1;
        let mut w = 0;
        for r in 0..=(n - k) {
            for c in 0..=(n - k) {
                if (r..r + k).all(|rr| (c..c + k).all(|cc| failed(rr, cc))) {
                    w += 1;
                }
            }
        }
        let ones = pattern.count_ones() as i32;
        pmf[w] += q.powi(ones) * (1.0 - q).powi((n * n) as i32 - ones);
    }
    pmf
}
