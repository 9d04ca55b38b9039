//! Prize Winner Index (PWI) for bibliographic datasets.
//!
//! The PWI scores every author by their co-authorship distance to the
//! laureates of a prize: each (paper, laureate) pair contributes `1 / 2^d`,
//! with `d` = 0 for the laureate themself, 1 for a co-author, 2 for a
//! co-author of a co-author, and no contribution when there is no path.
//!
//! The crate covers the whole workflow:
//!
//! - [`ingest`]: Web of Science tab-delimited and plain text exports
//! - [`registry`]: author name keys, merge maps for disambiguation, author previews
//! - [`graph`]: the co-authorship graph and breadth-first distances
//! - [`pwi`]: the index itself, in two distance modes, with relative variants
//! - [`analytics`]: Spearman threshold sweeps, OLS regression, ECDF export
//! - [`pipeline`]: file-level commands shared by the `pwi` binary
//!
//! ```
//! use pwi_core::{assign_keys, compute_pwi, AuthorKey, LaureateSet, MergeMap, PaperRecord, PwiOptions};
//!
//! let mut records = vec![
//!     PaperRecord::new("1", vec!["Mahlck, P".into()]),
//!     PaperRecord::new("2", vec!["Boekhout, H".into(), "van der Weijden, I".into(), "Waltman, L".into()]),
//! ];
//! assign_keys(&mut records, &MergeMap::default());
//! let laureates = LaureateSet::new("demo", [AuthorKey::parse("Waltman, L").unwrap()]);
//! let out = compute_pwi(&records, &laureates, &PwiOptions::default());
//! assert_eq!(out.rows[0].author.as_str(), "WALTMAN L");
//! assert_eq!(out.rows[1].pwi, 0.5);
//! ```

pub mod analytics;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod output;
pub mod pipeline;
pub mod pwi;
pub mod registry;

pub use analytics::{
    cumulative_distribution, ols_regress, spearman, threshold_sweep, CorrelationReport, DistributionExport, Predictor,
    RegressionReport, ScoreTable,
};
pub use error::{Error, Result};
pub use graph::{build_graph, count_coauthors, distances_from, CoauthorGraph, Distance, DistanceTable};
pub use ingest::{dedupe_records, parse_wos_plaintext, parse_wos_tab, ExportFormat, IngestReport, PaperRecord};
pub use pwi::{
    compute_pwi, compute_pwi_on_graph, paper_distance, relative_variants, weight, DistanceMode, LaureateSet,
    PwiOptions, PwiOutput, PwiRow,
};
pub use registry::{apply_merge_map, assign_keys, list_authors, normalize_name, AuthorKey, AuthorRow, MergeMap};
