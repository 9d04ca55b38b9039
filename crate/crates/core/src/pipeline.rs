//! File-level commands: ingest, key, merge, compute, and write.
//!
//! Every command writes its table to `out` and human-readable progress and
//! warnings to `diag`, so the same code backs the binary and the tests.

use std::collections::HashMap;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::analytics::{
    cumulative_distribution, ols_regress, threshold_sweep, Predictor, ScoreTable, DEFAULT_THRESHOLDS,
};
use crate::error::{Error, Result};
use crate::graph::CoauthorGraph;
use crate::ingest::{dedupe_records, detect_format, parse, ExportFormat, IngestReport, PaperRecord};
use crate::output::{self, OutputFormat};
use crate::pwi::{compute_pwi_on_graph, LaureateSet, PwiOptions, PwiOutput};
use crate::registry::{assign_keys, list_authors, MergeMap};

/// Everything a command needs.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    /// `None` sniffs each file.
    pub format: Option<ExportFormat>,
    pub merge_map: Option<PathBuf>,
    /// `None` uses the bundled Price Medal list.
    pub laureates: Option<PathBuf>,
    pub options: PwiOptions,
    pub out_format: OutputFormat,
    pub scores: Option<PathBuf>,
    pub thresholds: Vec<usize>,
    /// Optional co-authorship edge list written alongside `compute`.
    pub edges: Option<PathBuf>,
    /// Optional JSON copy of the ingest report.
    pub ingest_report: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            format: None,
            merge_map: None,
            laureates: None,
            options: PwiOptions::default(),
            out_format: OutputFormat::Csv,
            scores: None,
            thresholds: DEFAULT_THRESHOLDS.to_vec(),
            edges: None,
            ingest_report: None,
        }
    }
}

impl Error {
    /// Process exit status: 2 for I/O and usage, 3 for bad input formats or
    /// configuration, 4 when the analysis has nothing to work with.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Usage(_) | Error::Write(_) | Error::Thresholds(_) => 2,
            Error::EmptyJoin
            | Error::RankDeficient(_)
            | Error::TooFewObservations(_)
            | Error::ConstantInput(_)
            | Error::LengthMismatch(..)
            | Error::NonFinite => 4,
            _ => 3,
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Keyed, merged, deduplicated records plus the ingest accounting.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub records: Vec<PaperRecord>,
    pub report: IngestReport,
    pub merge: MergeMap,
}

/// Reads every input, keys author names, applies the merge map, and drops
/// duplicate records across files.
pub fn load_dataset(config: &RunConfig, diag: &mut dyn Write) -> Result<Dataset> {
    if config.inputs.is_empty() {
        return Err(Error::Usage("no input files given".into()));
    }
    // Read everything first so a missing file fails before any parsing.
    let contents: Vec<Vec<u8>> = config.inputs.iter().map(|p| read(p)).collect::<Result<_>>()?;

    let merge = match &config.merge_map {
        Some(path) => MergeMap::from_csv(open(path)?)?,
        None => MergeMap::default(),
    };

    let mut stems: HashMap<String, usize> = HashMap::new();
    let mut records = Vec::new();
    let mut report = IngestReport::default();
    for (path, content) in config.inputs.iter().zip(&contents) {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "input".into());
        // Distinct files sharing a stem get distinct synthesized ids.
        let seen = stems.entry(stem.clone()).or_default();
        *seen += 1;
        let source = if *seen == 1 { stem } else { format!("{stem}~{seen}") };

        let format = match config.format {
            Some(f) => f,
            None => detect_format(content).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?,
        };
        let (recs, rep) = parse(content, format, &source).map_err(|e| match e {
            Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        records.extend(recs);
        report.absorb(rep);
    }
    let (mut records, dropped) = dedupe_records(records);
    report.duplicates_dropped += dropped;
    report.records_kept -= dropped;
    assign_keys(&mut records, &merge);

    writeln!(diag, "ingest: {report}")?;
    for w in &report.warnings {
        writeln!(diag, "warning: {}: {}", w.locator, w.message)?;
    }
    if let Some(path) = &config.ingest_report {
        serde_json::to_writer_pretty(create(path)?, &report)?;
    }
    Ok(Dataset { records, report, merge })
}

fn load_laureates(config: &RunConfig, merge: &MergeMap) -> Result<LaureateSet> {
    let set = match &config.laureates {
        Some(path) => {
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            LaureateSet::from_reader(label, open(path)?)?
        }
        None => LaureateSet::price_medal(),
    };
    // Laureate names go through the same merge map as the data.
    Ok(LaureateSet::new(
        set.label,
        set.keys.iter().map(|k| merge.resolve(k).clone()),
    ))
}

fn run_pwi(config: &RunConfig, diag: &mut dyn Write) -> Result<(Dataset, CoauthorGraph, PwiOutput)> {
    let dataset = load_dataset(config, diag)?;
    let laureates = load_laureates(config, &dataset.merge)?;
    let graph = CoauthorGraph::build(&dataset.records);
    let result = compute_pwi_on_graph(&graph, &laureates, &config.options);
    for w in &result.warnings {
        writeln!(diag, "warning: {w}")?;
    }
    writeln!(
        diag,
        "records: {}, authors: {}, laureates matched: {}/{} ({}), mode: {}{}",
        dataset.records.len(),
        graph.node_count(),
        result.laureates_matched.len(),
        laureates.len(),
        laureates.label,
        config.options.mode,
        config
            .options
            .max_distance
            .map(|d| format!(", max distance: {d}"))
            .unwrap_or_default(),
    )?;
    Ok((dataset, graph, result))
}

/// Author preview for spotting name variants.
pub fn cmd_list_authors(config: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    let dataset = load_dataset(config, diag)?;
    let rows = list_authors(&dataset.records);
    writeln!(diag, "authors: {}", rows.len())?;
    output::write_authors(&rows, config.out_format, out)
}

/// Full PWI table.
pub fn cmd_compute(config: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    let (_, graph, result) = run_pwi(config, diag)?;
    if let Some(path) = &config.edges {
        graph.write_edge_list(create(path)?)?;
    }
    output::write_pwi(&result.rows, config.out_format, out)
}

/// Spearman correlations between PWI and external scores over the
/// configured paper-count thresholds.
pub fn cmd_correlate(config: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    let scores_path = config
        .scores
        .as_ref()
        .ok_or_else(|| Error::Usage("correlate needs a score table (--scores)".into()))?;
    let (dataset, _, result) = run_pwi(config, diag)?;
    let scores = ScoreTable::from_csv(open(scores_path)?, &dataset.merge)?;
    let report = threshold_sweep(&result.rows, &scores, &config.thresholds)?;
    if report.unmatched_authors == result.rows.len() {
        return Err(Error::EmptyJoin);
    }
    writeln!(
        diag,
        "joined authors: {}, without score: {}",
        result.rows.len() - report.unmatched_authors,
        report.unmatched_authors
    )?;
    output::write_correlation(&report, config.out_format, out)
}

/// Empirical CDFs of PWI for laureates and non-laureates.
pub fn cmd_distribution(config: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    let (_, _, result) = run_pwi(config, diag)?;
    let export = cumulative_distribution(&result.rows);
    for w in &export.warnings {
        writeln!(diag, "warning: {w}")?;
    }
    output::write_distribution(&export, config.out_format, out)
}

/// OLS of PWI on paper count, co-author count and laureate status.
pub fn cmd_regress(config: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    let (_, _, result) = run_pwi(config, diag)?;
    let rows = &result.rows;
    let y: Vec<f64> = rows.iter().map(|r| r.pwi).collect();
    let predictors = [
        Predictor::new("papers", rows.iter().map(|r| r.n_papers as f64).collect()),
        Predictor::new("coauthors", rows.iter().map(|r| r.n_coauthors as f64).collect()),
        Predictor::new(
            "awardee",
            rows.iter().map(|r| f64::from(u8::from(r.is_laureate))).collect(),
        ),
    ];
    let report = ols_regress(&y, &predictors)?;
    output::write_regression(&report, config.out_format, out)
}
