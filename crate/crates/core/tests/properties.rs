use std::f64::consts::PI;

use proptest::prelude::*;

use cpstein::apps::{reliability_cp_params, runs_cp_params, sums_cp_params};
use cpstein::bounds::{bound_lemma_c, bound_thm4, delta_k, g_k_eval, grid_infimum};
use cpstein::cp::{cp_pmf, theta};
use cpstein::exact::{distance, runs_exact_pmf};
use cpstein::table::TABLE_EPS;
use cpstein::{
    CompoundPoissonParams, DistributionTable, GridConfig, IndependentSumModel, Model, ReliabilityModel, RunsModel,
    ThetaVector,
};

fn coarse() -> GridConfig {
    GridConfig {
        phi_points: 257,
        p_points: 65,
        ..GridConfig::default()
    }
}

fn rates() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..3.0f64, 1..=5).prop_filter("some mass", |r| r.iter().sum::<f64>() > 0.05)
}

fn thetas(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..10.0f64, len).prop_filter("θ₀ > 0", |t| t[0] > 0.01)
}

fn pmf_vec() -> impl Strategy<Value = DistributionTable> {
    prop::collection::vec(0.0..1.0f64, 1..12).prop_filter_map("nonzero", |mut v| {
        let s: f64 = v.iter().sum();
        if s <= 0.0 {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= s);
        DistributionTable::new(v, 0.0).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn g_k_is_even_in_phi(t in thetas(7), k in 1usize..=6, phi in 0.0..=PI, p in 0.0..=1.0f64) {
        let t = ThetaVector::from_values(t).unwrap();
        let a = g_k_eval(&t, k, phi, p).unwrap().value;
        let b = g_k_eval(&t, k, -phi, p).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn first_order_delta_is_constant(t in thetas(2)) {
        let t = ThetaVector::from_values(t).unwrap();
        let want = t.values()[0] - 2.0 * t.values()[1];
        prop_assert_eq!(delta_k(&t, 1).unwrap().delta, want);
        let grid = grid_infimum(&t, 1, &coarse()).unwrap().delta;
        prop_assert!((grid - want).abs() < 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn second_order_is_stronger_than_bx99(t in thetas(3)) {
        let t = ThetaVector::from_values(t).unwrap();
        let bx = t.values()[0] - 2.0 * t.values()[1];
        prop_assert!(delta_k(&t, 2).unwrap().delta <= bx);
        prop_assert!(grid_infimum(&t, 2, &coarse()).unwrap().delta <= bx + 1e-12 * bx.abs().max(1.0));
    }

    #[test]
    fn third_order_is_weaker_than_bx99(t0 in 0.01..10.0f64, t1 in 0.0..10.0f64, u in 0.0..=1.0f64, v in 0.0..1.0f64) {
        // 5θ₂ ≤ 2θ₁ and 2θ₃ < 3θ₂
        let t2 = u * 0.4 * t1;
        let t3 = v * 1.5 * t2;
        let t = ThetaVector::from_values(vec![t0, t1, t2, t3]).unwrap();
        let bx = t0 - 2.0 * t1;
        let grid = grid_infimum(&t, 3, &coarse()).unwrap().delta;
        prop_assert!(grid >= bx - 1e-9 * bx.abs().max(1.0), "grid {} < {}", grid, bx);
        prop_assert!(delta_k(&t, 3).unwrap().delta >= bx);
    }

    #[test]
    fn single_size_clusters_give_nonnegative_delta(l in 0.01..50.0f64, k in 1usize..=6) {
        let p = CompoundPoissonParams::new(vec![l]).unwrap();
        let t = theta(&p, 6);
        let d = delta_k(&t, k).unwrap().delta;
        prop_assert!(d >= -1e-12 * l, "δ{} = {}", k, d);
    }

    #[test]
    fn theorem_matches_lemma_at_optimal_constant(t0 in 0.01..40.0f64, excess in 1e-6..8.0f64) {
        let t1 = t0 / 2.0 + excess;
        let t = ThetaVector::from_values(vec![t0, t1]).unwrap();
        let lemma = bound_lemma_c(&t, (1.5 * (2.0 * t1 - t0)).exp()).unwrap();
        let thm = bound_thm4(&t).unwrap();
        prop_assert!(lemma.applicable);
        prop_assert_eq!((lemma.m0, lemma.m1), (thm.m0, thm.m1));
    }

    #[test]
    fn cp_table_moments_match_theta(r in rates()) {
        let p = CompoundPoissonParams::new(r).unwrap();
        let table = cp_pmf(&p, 1.0 - 1e-12).unwrap();
        prop_assert!(table.tail_mass() <= 1e-12);
        let mass: f64 = table.pmf().iter().sum::<f64>() + table.tail_mass();
        prop_assert!((mass - 1.0).abs() <= TABLE_EPS);
        let t = theta(&p, 1);
        prop_assert!((table.mean() - t.values()[0]).abs() <= 1e-8);
        prop_assert!((table.variance() - t.values()[0] - t.values()[1]).abs() <= 1e-8);
    }

    #[test]
    fn distance_is_symmetric(a in pmf_vec(), b in pmf_vec(), c in pmf_vec()) {
        let ab = distance(&a, &b);
        let ba = distance(&b, &a);
        prop_assert_eq!(ab.d_k, ba.d_k);
        prop_assert!((ab.d_tv - ba.d_tv).abs() <= 1e-15);
        let ac = distance(&a, &c).d_k;
        let bc = distance(&b, &c).d_k;
        prop_assert!(ac <= ab.d_k + bc + ab.certified_slack + 1e-15);
        prop_assert!(ab.d_k <= ab.d_tv + 1e-15);
    }

    #[test]
    fn runs_law_is_mean_matched(n in 3usize..300, p in 0.01..0.99f64) {
        let m = RunsModel::new(n, p).unwrap();
        let exact = runs_exact_pmf(&m).unwrap();
        let t = theta(&runs_cp_params(&m).unwrap(), 0);
        prop_assert!((exact.mean() - t.values()[0]).abs() <= 1e-12 * t.values()[0].max(1.0));
    }

    #[test]
    fn reliability_clustering_is_bounded(n in 4usize..40, k in 2usize..6, q in 0.01..0.99f64) {
        prop_assume!(n > k + 1);
        let m = ReliabilityModel::new(n, k, q).unwrap();
        let t = theta(&reliability_cp_params(&m).unwrap(), 1);
        prop_assert!(t.values()[1] <= 4.0 * m.qk() * t.values()[0] * (1.0 + 1e-12));
    }

    #[test]
    fn sums_match_first_two_moments(comps in prop::collection::vec(prop::collection::vec(0.0..1.0f64, 2..5), 1..6)) {
        let comps: Vec<Vec<f64>> = comps
            .into_iter()
            .filter_map(|c| {
                let s: f64 = c.iter().sum();
                (s > 0.0).then(|| c.iter().map(|x| x / s).collect())
            })
            .collect();
        prop_assume!(!comps.is_empty());
        let m = IndependentSumModel::new(comps).unwrap();
        if let Ok(p) = sums_cp_params(&m) {
            let t = theta(&p, 1);
            let (mean, var) = (m.mean(), m.variance());
            prop_assert!((t.values()[0] - mean).abs() <= 1e-12 * mean.max(1.0));
            prop_assert!((t.values()[1] - (var - mean)).abs() <= 1e-12 * mean.max(1.0));
        }
    }

    #[test]
    fn model_json_round_trips(n in 3usize..1000, p in 0.0..=1.0f64) {
        let m = Model::Runs(RunsModel::new(n, p).unwrap());
        let back: Model = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }
}
