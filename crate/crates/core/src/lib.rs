//! Multiple factor analysis of histogram-valued data.
//!
//! Each distributional variable is encoded by a block of quantile columns;
//! the blocks are analysed jointly by a two-step weighted PCA whose inertia
//! approximates the L2 Wasserstein variability of the data. The numerical
//! core is generic over [`Scalar`] (`f32` / `f64`); ingestion, reports,
//! plots and the pipeline work in `f64`.

pub mod distribution;
pub mod error;
pub mod io;
pub mod linalg;
pub mod mfa;
pub mod pipeline;
pub mod plots;
pub mod quantile;
pub mod scalar;
pub mod simulate;

pub use distribution::{
    decompose_distance, distributional_variance, frechet_mean, histogram_from_samples, homogenize,
    wasserstein_sq_closed, wasserstein_sq_integral, Bin, DistanceDecomposition, DistributionSummary,
    EquiDepthHistogram, Histogram, QuantileFunction,
};
pub use error::{Error, Result};
pub use linalg::{weighted_svd, EigenSystem};
pub use mfa::{
    global_mfa, moment_axis_diagnostics, partial_pca, rv_coefficient, Moment, MfaModel, PartialPca,
};
pub use quantile::{
    build_quantile_table, center_columns, concatenate, covariance_block, trace_variance_gap, BlockSet,
    ColumnRole, ExtremePolicy, QuantileTable, UnitWeights,
};
pub use scalar::Scalar;
pub use io::{DistributionalTable, QuantileSpec};
pub use pipeline::{run_mfa, Analysis, MfaOptions};
pub use plots::{Plane, PlotKind};
pub use simulate::SimulationDesign;

pub type Histogram64 = Histogram<f64>;
pub type Histogram32 = Histogram<f32>;
pub type EquiDepth64 = EquiDepthHistogram<f64>;
pub type EquiDepth32 = EquiDepthHistogram<f32>;
pub type QuantileFunction64 = QuantileFunction<f64>;
pub type QuantileTable64 = QuantileTable<f64>;
pub type BlockSet64 = BlockSet<f64>;
pub type Model64 = MfaModel<f64>;
pub type Model32 = MfaModel<f32>;
