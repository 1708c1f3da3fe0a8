use anyhow::{bail, Context};
use clap::Args;
use rayon::prelude::*;
use serde_json::{json, Value};

use cpstein::apps::{regime_classify, reliability_delta};
use cpstein::bounds::{
    all_bounds, best_bound, bound_bx99, bound_cor3, bound_general, bound_lemma_c, bound_monotone, bound_thm2,
    bound_thm4, MAX_BEST_ORDER,
};
use cpstein::cp::{cp_pmf, theta};
use cpstein::exact::{
    distance, distance_mc, mixed_exact_pmf, reliability_exact_pmf, reliability_mc_pmf, runs_exact_pmf,
    sums_exact_pmf, DistanceReport,
};
use cpstein::oracle::{check_bound, default_x_max, default_y_max, empirical_factors, solve_stein};
use cpstein::{
    CompoundPoissonParams, DistributionTable, Method, MixedPoissonModel, Mixing, Model, ReliabilityModel,
    RunsModel, SteinFactorBound, ThetaVector,
};

use crate::input::{InputArgs, Range};
use crate::output::{json_num, num, opt_num, Report};

/// Seed used by every Monte Carlo path unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 20_240_917;
const PMF_MASS: f64 = 1.0 - 1e-12;
/// Standard errors allowed before a Monte Carlo distance counts as a violation.
const MC_Z: f64 = 4.0;

/// Command outcome: the report plus whether every checked inequality held.
pub struct Outcome {
    pub report: Report,
    pub ok: bool,
}

fn input_json(input: &crate::input::Input, params: &CompoundPoissonParams) -> Value {
    match input.model() {
        Some(m) => serde_json::to_value(m).unwrap_or(Value::Null),
        None => serde_json::to_value(params).unwrap_or(Value::Null),
    }
}

fn bound_row(b: &SteinFactorBound) -> Vec<String> {
    vec![
        b.method.to_string(),
        b.applicable.to_string(),
        num(b.m0),
        num(b.m1),
        b.condition_note.clone(),
    ]
}

// ---------------------------------------------------------------- bounds

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Also evaluate the lemma bound with this constant c > 1.
    #[arg(long)]
    pub lemma_c: Option<f64>,
}

pub fn bounds(args: &BoundsArgs) -> anyhow::Result<Outcome> {
    let input = args.input.resolve()?;
    let params = input.params()?;
    let t = theta(&params, MAX_BEST_ORDER);
    let mut list = all_bounds(&params, &t)?;
    let best = best_bound(&params, &t)?;
    if let Some(c) = args.lemma_c {
        list.push(bound_lemma_c(&t, c)?);
    }
    let dk = match input.model() {
        Some(m) => m.dk_bound(best.m1)?,
        None => None,
    };
    let model_delta = match input.model() {
        Some(Model::Reliability(r)) => Some(reliability_delta(r)?),
        _ => None,
    };

    let json = json!({
        "input": input_json(&input, &params),
        "rates": params.rates(),
        "theta": t.values(),
        "regime": regime_classify(&t)?.to_string(),
        "bounds": list,
        "best": best,
        "dk_bound": dk,
        "vacuous": dk.map(|d| d > 1.0),
        "model_delta": model_delta,
    });
    let mut rows: Vec<Vec<String>> = list.iter().map(bound_row).collect();
    let mut best_row = bound_row(&best);
    best_row[0] = format!("BEST[{}]", best.method);
    rows.push(best_row);
    Ok(Outcome {
        report: Report {
            json,
            header: ["method", "applicable", "m0", "m1", "note"].map(String::from).to_vec(),
            rows,
        },
        ok: true,
    })
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Exhaustive enumeration for the reliability model instead of Monte Carlo.
    #[arg(long)]
    pub exact: bool,

    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Largest threshold in the Stein-factor sweep.
    #[arg(long)]
    pub y_max: Option<usize>,

    /// Initial truncation point of the Stein solutions.
    #[arg(long)]
    pub x_max: Option<usize>,
}

/// Exact law of the model statistic, or a Monte Carlo estimate for
/// reliability grids without `exact`.
fn model_distance(
    model: &Model,
    approx: &DistributionTable,
    exact: bool,
    samples: usize,
    seed: u64,
) -> anyhow::Result<DistanceReport> {
    Ok(match model {
        Model::Runs(m) => distance(&runs_exact_pmf(m)?, approx),
        Model::Reliability(m) if exact => distance(&reliability_exact_pmf(m)?, approx),
        Model::Reliability(m) => distance_mc(&reliability_mc_pmf(m, samples, seed)?, approx),
        Model::Mixed(m) => distance(&mixed_exact_pmf(m)?, approx),
        Model::Sums(m) => distance(&sums_exact_pmf(m)?, approx),
    })
}

pub fn verify(args: &VerifyArgs) -> anyhow::Result<Outcome> {
    let input = args.input.resolve()?;
    let params = input.params()?;
    let t = theta(&params, MAX_BEST_ORDER);
    let list = all_bounds(&params, &t)?;
    let best = best_bound(&params, &t)?;

    let y_max = match args.y_max {
        Some(y) => y,
        None => default_y_max(&params)?,
    };
    let x_max = args.x_max.unwrap_or_else(|| default_x_max(&params, y_max));
    let emp = empirical_factors(&params, y_max, x_max)?;
    let reports = list
        .iter()
        .filter(|b| b.applicable)
        .map(|b| check_bound(b, &emp))
        .collect::<cpstein::Result<Vec<_>>>()?;
    let mut ok = reports.iter().all(|r| r.pass);

    let mut rows = Vec::new();
    for r in &reports {
        rows.push(vec!["m0".into(), r.method.to_string(), num(r.m0_hat), num(r.m0_bound), r.pass.to_string()]);
        rows.push(vec!["m1".into(), r.method.to_string(), num(r.m1_hat), num(r.m1_bound), r.pass.to_string()]);
    }

    let mut dk_json = Value::Null;
    if let Some(model) = input.model() {
        let approx = cp_pmf(&params, PMF_MASS)?;
        let d = model_distance(model, &approx, args.exact, args.samples, args.seed)?;
        if let Some(bound) = model.dk_bound(best.m1)? {
            let observed = d.d_k_upper() - MC_Z * d.mc_stderr;
            let pass = observed <= bound;
            ok &= pass;
            rows.push(vec!["d_k".into(), best.method.to_string(), num(d.d_k_upper()), num(bound), pass.to_string()]);
            dk_json = json!({
                "distance": d,
                "bound": bound,
                "bound_method": best.method,
                "vacuous": bound > 1.0,
                "pass": pass,
            });
        } else {
            rows.push(vec!["d_k".into(), String::new(), num(d.d_k_upper()), String::new(), String::new()]);
            dk_json = json!({ "distance": d, "bound": null });
        }
    }

    let json = json!({
        "input": input_json(&input, &params),
        "theta": t.values(),
        "best": best,
        "empirical": emp,
        "factors": reports,
        "kolmogorov": dk_json,
        "pass": ok,
    });
    Ok(Outcome {
        report: Report {
            json,
            header: ["check", "method", "observed", "bound", "pass"].map(String::from).to_vec(),
            rows,
        },
        ok,
    })
}

// ----------------------------------------------------------------- sweep

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepModel {
    Runs,
    Reliability,
    Mixed,
}

/// Parameter flags accept `start:stop:count` or a single value; the grid is
/// their Cartesian product in flag order.
#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub model: SweepModel,

    #[arg(long)]
    pub n: Option<Range>,
    #[arg(long)]
    pub k: Option<Range>,
    #[arg(long)]
    pub p: Option<Range>,
    #[arg(long, conflicts_with = "qk")]
    pub q: Option<Range>,
    /// Reliability: sweep q^k instead of q.
    #[arg(long)]
    pub qk: Option<Range>,

    /// Two-point mixing: ξ = a with probability w, else b.
    #[arg(long)]
    pub a: Option<Range>,
    #[arg(long)]
    pub b: Option<Range>,
    #[arg(long)]
    pub w: Option<Range>,
    /// Gamma mixing.
    #[arg(long, conflicts_with_all = ["a", "b", "w"])]
    pub shape: Option<Range>,
    #[arg(long)]
    pub scale: Option<Range>,

    /// Methods reported per row, e.g. `BX99,COR3,THM4`.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "GENERAL,MONOTONE,BX99,THM2(1),THM2(2),THM2(3),COR3,THM4"
    )]
    pub methods: Vec<String>,
}

fn evaluate(method: Method, params: &CompoundPoissonParams, t: &ThetaVector) -> cpstein::Result<SteinFactorBound> {
    match method {
        Method::General => Ok(bound_general(params)),
        Method::Monotone => Ok(bound_monotone(params)),
        Method::Bx99 => bound_bx99(t),
        Method::Thm2(k) => bound_thm2(t, k),
        Method::Cor3 => bound_cor3(t),
        Method::LemmaC(c) => bound_lemma_c(t, c),
        Method::Thm4 => bound_thm4(t),
    }
}

fn integer(x: f64, flag: &str) -> anyhow::Result<usize> {
    if x < 0.0 || x.fract() != 0.0 {
        bail!("--{flag} values must be non-negative integers, got {x}");
    }
    Ok(x as usize)
}

fn grid(ranges: &[(&str, Option<Range>)]) -> anyhow::Result<Vec<Vec<(String, f64)>>> {
    let mut points = vec![Vec::new()];
    for (name, range) in ranges {
        let range = range.with_context(|| format!("--{name} is required for this sweep"))?;
        points = points
            .into_iter()
            .flat_map(|prefix: Vec<(String, f64)>| {
                range.points().into_iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push((name.to_string(), v));
                    next
                })
            })
            .collect();
    }
    Ok(points)
}

fn sweep_model(kind: SweepModel, point: &[(String, f64)]) -> anyhow::Result<Model> {
    let get = |name: &str| point.iter().find(|(n, _)| n == name).map(|(_, v)| *v);
    Ok(match kind {
        SweepModel::Runs => Model::Runs(RunsModel::new(integer(get("n").unwrap(), "n")?, get("p").unwrap())?),
        SweepModel::Reliability => {
            let k = integer(get("k").unwrap(), "k")?;
            let q = match get("qk") {
                Some(y) => y.powf(1.0 / k as f64),
                None => get("q").unwrap(),
            };
            Model::Reliability(ReliabilityModel::new(integer(get("n").unwrap(), "n")?, k, q)?)
        }
        SweepModel::Mixed => Model::Mixed(MixedPoissonModel::new(match get("shape") {
            Some(shape) => Mixing::Gamma { shape, scale: get("scale").unwrap() },
            None => Mixing::TwoPoint { a: get("a").unwrap(), b: get("b").unwrap(), w: get("w").unwrap() },
        })?),
    })
}

struct SweepRow {
    point: Vec<(String, f64)>,
    theta: Vec<f64>,
    bounds: Vec<SteinFactorBound>,
    best: Option<SteinFactorBound>,
    dk_bound: Option<f64>,
    error: Option<String>,
}

fn sweep_row(kind: SweepModel, point: Vec<(String, f64)>, methods: &[Method]) -> anyhow::Result<SweepRow> {
    let model = sweep_model(kind, &point)?;
    let params = match model.cp_params() {
        Ok(p) => p,
        Err(e @ (cpstein::Error::ApproximantUndefined(_) | cpstein::Error::InvalidArgument(_))) => {
            return Ok(SweepRow {
                point,
                theta: Vec::new(),
                bounds: Vec::new(),
                best: None,
                dk_bound: None,
                error: Some(e.to_string()),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let t = theta(&params, MAX_BEST_ORDER);
    let bounds = methods
        .iter()
        .map(|m| evaluate(*m, &params, &t))
        .collect::<cpstein::Result<Vec<_>>>()?;
    let best = best_bound(&params, &t)?;
    let dk_bound = model.dk_bound(best.m1)?;
    Ok(SweepRow {
        point,
        theta: t.values()[..4].to_vec(),
        bounds,
        best: Some(best),
        dk_bound,
        error: None,
    })
}

pub fn sweep(args: &SweepArgs) -> anyhow::Result<Outcome> {
    let methods = args
        .methods
        .iter()
        .map(|m| m.trim().parse::<Method>())
        .collect::<cpstein::Result<Vec<_>>>()?;
    let axes: Vec<(&str, Option<Range>)> = match args.model {
        SweepModel::Runs => vec![("n", args.n), ("p", args.p)],
        SweepModel::Reliability => {
            let q = if args.qk.is_some() { ("qk", args.qk) } else { ("q", args.q) };
            vec![("n", args.n), ("k", args.k), q]
        }
        SweepModel::Mixed if args.shape.is_some() => vec![("shape", args.shape), ("scale", args.scale)],
        SweepModel::Mixed => vec![("a", args.a), ("b", args.b), ("w", args.w)],
    };
    let points = grid(&axes)?;
    let rows = points
        .into_par_iter()
        .map(|p| sweep_row(args.model, p, &methods))
        .collect::<anyhow::Result<Vec<_>>>()?;

    let mut header: Vec<String> = axes.iter().map(|(n, _)| n.to_string()).collect();
    header.extend((0..4).map(|k| format!("theta{k}")));
    for m in &methods {
        header.push(format!("{m}_applicable"));
        header.push(format!("{m}_m1"));
    }
    header.extend(["best_method", "best_m1", "dk_bound", "vacuous", "error"].map(String::from));

    let mut csv_rows = Vec::with_capacity(rows.len());
    let mut json_rows = Vec::with_capacity(rows.len());
    for r in &rows {
        let mut cells: Vec<String> = r
            .point
            .iter()
            .map(|(name, v)| if name == "n" || name == "k" { format!("{v}") } else { num(*v) })
            .collect();
        cells.extend((0..4).map(|k| opt_num(r.theta.get(k).copied())));
        if r.bounds.is_empty() {
            cells.extend(std::iter::repeat_n(String::new(), 2 * methods.len()));
        }
        for b in &r.bounds {
            cells.push(b.applicable.to_string());
            cells.push(num(b.m1));
        }
        cells.push(r.best.as_ref().map(|b| b.method.to_string()).unwrap_or_default());
        cells.push(opt_num(r.best.as_ref().map(|b| b.m1)));
        cells.push(opt_num(r.dk_bound));
        cells.push(r.dk_bound.map(|d| (d > 1.0).to_string()).unwrap_or_default());
        cells.push(r.error.clone().unwrap_or_default());
        csv_rows.push(cells);

        let params: serde_json::Map<String, Value> = r
            .point
            .iter()
            .map(|(n, v)| (n.clone(), if n == "n" || n == "k" { json!(*v as usize) } else { json!(v) }))
            .collect();
        let methods_json: Vec<Value> = methods
            .iter()
            .zip(&r.bounds)
            .map(|(m, b)| json!({ "requested": m.to_string(), "method": b.method, "applicable": b.applicable, "m1": json_num(b.m1) }))
            .collect();
        json_rows.push(json!({
            "params": params,
            "theta": r.theta,
            "methods": methods_json,
            "best_method": r.best.as_ref().map(|b| b.method.to_string()),
            "best_m1": r.best.as_ref().map(|b| json_num(b.m1)),
            "dk_bound": r.dk_bound,
            "vacuous": r.dk_bound.map(|d| d > 1.0),
            "error": r.error,
        }));
    }
    Ok(Outcome {
        report: Report {
            json: json!({ "model": format!("{:?}", args.model).to_lowercase(), "rows": json_rows }),
            header,
            rows: csv_rows,
        },
        ok: true,
    })
}

// ----------------------------------------------------------- stein-solve

#[derive(Debug, Args)]
pub struct SteinSolveArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Threshold y of the test function I(· ≤ y).
    #[arg(long)]
    pub y: usize,

    /// Truncation point; defaults to the sweep default.
    #[arg(long)]
    pub x_max: Option<usize>,
}

pub fn stein_solve(args: &SteinSolveArgs) -> anyhow::Result<Outcome> {
    let params = args.input.resolve()?.params()?;
    let x_max = match args.x_max {
        Some(x) => x,
        None => default_x_max(&params, default_y_max(&params)?.max(args.y)),
    };
    let s = solve_stein(&params, args.y, x_max)?;
    let rows = (1..=s.x_max())
        .map(|x| vec![x.to_string(), num(s.value(x)), num(s.value(x + 1) - s.value(x))])
        .collect();
    Ok(Outcome {
        report: Report {
            json: serde_json::to_value(&s)?,
            header: ["x", "f", "delta_f"].map(String::from).to_vec(),
            rows,
        },
        ok: true,
    })
}

// ------------------------------------------------------------------- pmf

#[derive(Debug, Args)]
pub struct PmfArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Exact law of the model statistic instead of its compound Poisson
    /// approximation.
    #[arg(long, conflicts_with = "mc")]
    pub exact: bool,

    /// Monte Carlo law of the reliability statistic.
    #[arg(long)]
    pub mc: bool,

    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Probability mass the approximation table must cover.
    #[arg(long, default_value_t = PMF_MASS)]
    pub mass: f64,
}

fn table_report(table: &DistributionTable, stderr: Option<&[f64]>, json: Value) -> Report {
    let cdf = table.cdf();
    let rows = table
        .pmf()
        .iter()
        .enumerate()
        .map(|(x, p)| {
            let mut row = vec![x.to_string(), num(*p), num(cdf[x])];
            if let Some(se) = stderr {
                row.push(num(se[x]));
            }
            row
        })
        .collect();
    let mut header: Vec<String> = ["x", "pmf", "cdf"].map(String::from).to_vec();
    if stderr.is_some() {
        header.push("stderr".into());
    }
    Report { json, header, rows }
}

pub fn pmf(args: &PmfArgs) -> anyhow::Result<Outcome> {
    let input = args.input.resolve()?;
    let report = if args.exact || args.mc {
        let Some(model) = input.model() else {
            bail!("--exact and --mc need a --model");
        };
        if args.mc {
            let Model::Reliability(m) = model else {
                bail!("--mc applies to the reliability model only");
            };
            let mc = reliability_mc_pmf(m, args.samples, args.seed)?;
            table_report(&mc.table, Some(&mc.stderr), serde_json::to_value(&mc)?)
        } else {
            let table = match model {
                Model::Runs(m) => runs_exact_pmf(m)?,
                Model::Reliability(m) => reliability_exact_pmf(m)?,
                Model::Mixed(m) => mixed_exact_pmf(m)?,
                Model::Sums(m) => sums_exact_pmf(m)?,
            };
            table_report(&table, None, serde_json::to_value(&table)?)
        }
    } else {
        let table = cp_pmf(&input.params()?, args.mass)?;
        table_report(&table, None, serde_json::to_value(&table)?)
    };
    Ok(Outcome { report, ok: true })
}
