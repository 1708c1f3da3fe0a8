use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};

use cpstein::{
    CompoundPoissonParams, IndependentSumModel, MixedPoissonModel, Mixing, Model, ReliabilityModel, RunsModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Runs,
    Reliability,
    Mixed,
    Sums,
}

/// Either explicit cluster rates or one of the application models.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Cluster rates λ₁,λ₂,… (comma separated).
    #[arg(long, value_delimiter = ',', conflicts_with = "model")]
    pub rates: Option<Vec<f64>>,

    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,

    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,

    /// Two-point mixing law `a,b,w`: ξ = a with probability w, else b.
    #[arg(long, value_name = "A,B,W")]
    pub two_point: Option<String>,

    /// Gamma mixing law `shape,scale`.
    #[arg(long, value_name = "SHAPE,SCALE", conflicts_with = "two_point")]
    pub gamma: Option<String>,

    /// Summand pmfs, `;`-separated, each a comma list starting at 0.
    #[arg(long, value_name = "PMF;PMF;...")]
    pub components: Option<String>,
}

/// What the user asked to approximate.
pub enum Input {
    Rates(CompoundPoissonParams),
    Model(Model),
}

impl Input {
    pub fn params(&self) -> cpstein::Result<CompoundPoissonParams> {
        match self {
            Input::Rates(p) => Ok(p.clone()),
            Input::Model(m) => m.cp_params(),
        }
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            Input::Rates(_) => None,
            Input::Model(m) => Some(m),
        }
    }
}

pub fn parse_list<T: FromStr>(s: &str, what: &str) -> anyhow::Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.split(',')
        .map(|t| t.trim().parse::<T>().with_context(|| format!("bad {what} entry {t:?}")))
        .collect()
}

fn triple(s: &str, what: &str) -> anyhow::Result<[f64; 3]> {
    let v: Vec<f64> = parse_list(s, what)?;
    v.try_into().map_err(|_| anyhow::anyhow!("{what} needs three values"))
}

fn pair(s: &str, what: &str) -> anyhow::Result<[f64; 2]> {
    let v: Vec<f64> = parse_list(s, what)?;
    v.try_into().map_err(|_| anyhow::anyhow!("{what} needs two values"))
}

fn need<T: Copy>(v: Option<T>, flag: &str, model: &str) -> anyhow::Result<T> {
    v.with_context(|| format!("--{flag} is required for the {model} model"))
}

pub fn mixing(two_point: Option<&str>, gamma: Option<&str>) -> anyhow::Result<Mixing> {
    match (two_point, gamma) {
        (Some(s), None) => {
            let [a, b, w] = triple(s, "--two-point")?;
            Ok(Mixing::TwoPoint { a, b, w })
        }
        (None, Some(s)) => {
            let [shape, scale] = pair(s, "--gamma")?;
            Ok(Mixing::Gamma { shape, scale })
        }
        _ => bail!("the mixed model needs exactly one of --two-point or --gamma"),
    }
}

pub fn components(s: &str) -> anyhow::Result<Vec<Vec<f64>>> {
    s.split(';').map(|c| parse_list(c, "--components")).collect()
}

impl InputArgs {
    pub fn resolve(&self) -> anyhow::Result<Input> {
        if let Some(rates) = &self.rates {
            return Ok(Input::Rates(CompoundPoissonParams::new(rates.clone())?));
        }
        let Some(kind) = self.model else {
            bail!("give either --rates or --model");
        };
        let model = match kind {
            ModelKind::Runs => Model::Runs(RunsModel::new(need(self.n, "n", "runs")?, need(self.p, "p", "runs")?)?),
            ModelKind::Reliability => Model::Reliability(ReliabilityModel::new(
                need(self.n, "n", "reliability")?,
                need(self.k, "k", "reliability")?,
                need(self.q, "q", "reliability")?,
            )?),
            ModelKind::Mixed => Model::Mixed(MixedPoissonModel::new(mixing(
                self.two_point.as_deref(),
                self.gamma.as_deref(),
            )?)?),
            ModelKind::Sums => {
                let s = self.components.as_deref().context("--components is required for the sums model")?;
                Model::Sums(IndependentSumModel::new(components(s)?)?)
            }
        };
        Ok(Input::Model(model))
    }
}

/// `start:stop:count` (inclusive, evenly spaced) or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

impl FromStr for Range {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?} in range {s:?}"));
        match parts.as_slice() {
            [v] => Ok(Range { start: num(v)?, stop: num(v)?, count: 1 }),
            [a, b, c] => {
                let count: usize = c.trim().parse().with_context(|| format!("bad count in range {s:?}"))?;
                if count == 0 {
                    bail!("range {s:?} has count 0");
                }
                let (start, stop) = (num(a)?, num(b)?);
                if count == 1 && start != stop {
                    bail!("range {s:?} has one point but distinct ends");
                }
                Ok(Range { start, stop, count })
            }
            _ => bail!("expected start:stop:count or a number, got {s:?}"),
        }
    }
}
