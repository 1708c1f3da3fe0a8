//! Stein factors for compound Poisson approximation in the Kolmogorov
//! metric, with the application models they serve and the exact oracles
//! that check them.
//!
//! * [`cp`]: compound Poisson laws, factorial-moment sums `θ_k`, pmf tables
//!   and sampling.
//! * [`bounds`]: every Stein-factor bound, including the `g_k`/`δ_k`
//!   criterion and its numerical infimum.
//! * [`oracle`]: the Stein equation solved numerically, and empirical
//!   factors measured from it.
//! * [`apps`]: runs, reliability, mixed Poisson and independent-sum models.
//! * [`exact`]: exact laws of the model statistics and table distances.

pub mod apps;
pub mod bounds;
pub mod cp;
pub mod error;
pub mod exact;
pub mod oracle;
mod quad;
pub mod table;

pub use apps::{
    IndependentSumModel, Mixing, MixedPoissonModel, Model, Regime, ReliabilityModel, RunsModel,
};
pub use bounds::{DeltaResult, GkEvaluation, GridConfig, Method, SteinFactorBound};
pub use cp::{CompoundPoissonParams, ThetaVector};
pub use error::{Error, Result};
pub use exact::{DistanceReport, McTable};
pub use oracle::{EmpiricalFactors, SteinSolution, VerifyReport};
pub use table::DistributionTable;
