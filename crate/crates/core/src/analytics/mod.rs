//! Validation statistics over PWI results.

mod correlation;
mod distribution;
mod regression;

pub use correlation::{spearman, threshold_sweep, CorrelationReport, CorrelationRow, ScoreTable, DEFAULT_THRESHOLDS};
pub use distribution::{cumulative_distribution, CdfPoint, DistributionExport};
pub use regression::{ols_regress, Predictor, RegressionReport, RegressionTerm};
