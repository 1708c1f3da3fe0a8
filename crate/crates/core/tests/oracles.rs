mod common;

use statrs::function::gamma::ln_gamma;

use cpstein::cp::{cp_pmf, cp_sample_many};
use cpstein::exact::{
    distance_mc, mixed_exact_pmf, reliability_exact_pmf, reliability_mc_pmf, runs_exact_pmf, sums_exact_pmf,
};
use cpstein::oracle::{default_x_max, default_y_max, empirical_factors_auto, solve_stein};
use cpstein::{CompoundPoissonParams, IndependentSumModel, MixedPoissonModel, Mixing, ReliabilityModel, RunsModel};

fn params(r: &[f64]) -> CompoundPoissonParams {
    CompoundPoissonParams::new(r.to_vec()).unwrap()
}

#[test]
fn sampler_agrees_with_pmf() {
    let p = params(&[1.2, 0.5, 0.3]);
    let table = cp_pmf(&p, 1.0 - 1e-12).unwrap();
    let draws = 1_000_000;
    let mut counts = vec![0usize; table.pmf().len() + 1];
    for x in cp_sample_many(&p, 42, draws) {
        counts[(x as usize).min(table.pmf().len())] += 1;
    }
    for (x, &prob) in table.pmf().iter().enumerate() {
        let se = (prob * (1.0 - prob) / draws as f64).sqrt();
        let observed = counts[x] as f64 / draws as f64;
        assert!(
            (observed - prob).abs() <= 5.0 * se + 1e-12,
            "x = {x}: observed {observed}, pmf {prob}, se {se}"
        );
    }
}

#[test]
fn sampler_is_reproducible() {
    let p = params(&[0.4, 0.4]);
    assert_eq!(cp_sample_many(&p, 9, 1000), cp_sample_many(&p, 9, 1000));
}

#[test]
fn runs_dp_matches_enumeration() {
    for n in 3..=16 {
        for &p in &[0.1, 0.3, 0.5, 0.7] {
            let dp = runs_exact_pmf(&RunsModel::new(n, p).unwrap()).unwrap();
            for (w, b) in common::runs_brute_force(n, p).iter().enumerate() {
                assert!((dp.prob(w) - b).abs() <= 1e-12, "n={n} p={p} w={w}");
            }
        }
    }
    let dp = runs_exact_pmf(&RunsModel::new(20, 0.4).unwrap()).unwrap();
    for (w, b) in common::runs_brute_force(20, 0.4).iter().enumerate() {
        assert!((dp.prob(w) - b).abs() <= 1e-12);
    }
}

#[test]
fn reliability_exhaustive_matches_direct_enumeration() {
    for &(n, k, q) in &[(3, 2, 0.4), (4, 2, 0.3), (4, 3, 0.7)] {
        let fast = reliability_exact_pmf(&ReliabilityModel::new(n, k, q).unwrap()).unwrap();
        for (w, b) in common::reliability_brute_force(n, k, q).iter().enumerate() {
            assert!((fast.prob(w) - b).abs() <= 1e-12, "({n},{k},{q}) w={w}");
        }
    }
}

#[test]
fn reliability_mc_agrees_with_exhaustive() {
    let m = ReliabilityModel::new(4, 2, 0.5).unwrap();
    let exact = reliability_exact_pmf(&m).unwrap();
    let mc = reliability_mc_pmf(&m, 200_000, 11).unwrap();
    for (w, se) in mc.stderr.iter().enumerate() {
        let truth = exact.prob(w);
        let tol = 4.0 * (truth * (1.0 - truth) / mc.samples as f64).sqrt().max(*se);
        assert!((mc.table.prob(w) - truth).abs() <= tol + 1e-12, "w={w}");
    }
    let d = distance_mc(&mc, &exact);
    assert!(d.d_k <= 4.0 * d.mc_stderr + 1e-3);
}

#[test]
fn reliability_mc_does_not_depend_on_thread_count() {
    let m = ReliabilityModel::new(6, 2, 0.4).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| reliability_mc_pmf(&m, 20_000, 5).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| reliability_mc_pmf(&m, 20_000, 5).unwrap());
    assert_eq!(single, many);
}

/// `∫ Po(x; ξ) Gamma(ξ; r, s) dξ` by composite Simpson after `ξ = t⁴`,
/// which smooths the `ξ^{r−1}` behaviour at the origin.
fn gamma_mixture_atom(x: usize, shape: f64, scale: f64) -> f64 {
    let upper = (80.0 * scale * shape.max(1.0) + 10.0 * x as f64 + 50.0).powf(0.25);
    let steps = 400_000;
    let h = upper / steps as f64;
    let norm = ln_gamma(x as f64 + 1.0) + ln_gamma(shape) + shape * scale.ln();
    let f = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let xi = t.powi(4);
        4.0 * t.powi(3) * ((x as f64 + shape - 1.0) * xi.ln() - xi * (1.0 + 1.0 / scale) - norm).exp()
    };
    let mut sum = f(0.0) + f(upper);
    for i in 1..steps {
        sum += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

#[test]
fn negative_binomial_matches_gamma_mixture_integral() {
    for &(shape, scale) in &[(2.5, 0.8), (1.3, 2.0), (4.0, 0.5)] {
        let table = mixed_exact_pmf(&MixedPoissonModel::new(Mixing::Gamma { shape, scale }).unwrap()).unwrap();
        for x in 0..25 {
            let want = gamma_mixture_atom(x, shape, scale);
            assert!(
                (table.prob(x) - want).abs() <= 1e-10,
                "shape {shape} scale {scale} x {x}: {} vs {want}",
                table.prob(x)
            );
        }
    }
}

#[test]
fn convolution_matches_enumeration() {
    let comps = vec![vec![0.2, 0.8], vec![0.1, 0.3, 0.6], vec![0.5, 0.0, 0.25, 0.25]];
    let table = sums_exact_pmf(&IndependentSumModel::new(comps.clone()).unwrap()).unwrap();
    let mut brute = [0.0; 7];
    for (a, pa) in comps[0].iter().enumerate() {
        for (b, pb) in comps[1].iter().enumerate() {
            for (c, pc) in comps[2].iter().enumerate() {
                brute[a + b + c] += pa * pb * pc;
            }
        }
    }
    for (w, b) in brute.iter().enumerate() {
        assert!((table.prob(w) - b).abs() <= 1e-15);
    }
}

#[test]
fn sums_budget_is_enforced() {
    let m = IndependentSumModel::new(vec![vec![0.001; 1000]; 30]).unwrap();
    assert!(matches!(sums_exact_pmf(&m), Err(cpstein::Error::BudgetExceeded(_))));
}

#[test]
fn stein_solutions_are_accurate() {
    for p in [params(&[3.0]), params(&[1.0, 0.5, 0.2]), params(&[0.5, 1.5])] {
        let y_max = default_y_max(&p).unwrap();
        let x_max = default_x_max(&p, y_max);
        for y in 0..=y_max {
            let s = solve_stein(&p, y, x_max).unwrap();
            assert!(s.max_interior_residual(&p) <= 1e-9);
            assert!(s.residual0 <= 1e-6, "residual0 {}", s.residual0);
        }
    }
}

#[test]
fn poisson_solution_matches_forward_formula() {
    let lambda = 5.0;
    let p = params(&[lambda]);
    for y in [0, 3, 5, 9] {
        let s = solve_stein(&p, y, 120).unwrap();
        for x in 1..40 {
            let want = common::poisson_stein_forward(lambda, y, x);
            assert!((s.value(x) - want).abs() <= 1e-8, "y={y} x={x}");
        }
    }
}

#[test]
fn empirical_factors_are_deterministic() {
    let p = params(&[1.0, 0.8]);
    let a = empirical_factors_auto(&p).unwrap();
    let b = empirical_factors_auto(&p).unwrap();
    assert_eq!(a, b);
}
