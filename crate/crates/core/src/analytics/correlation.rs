use std::collections::BTreeMap;
use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pwi::PwiRow;
use crate::registry::{normalize_name, AuthorKey, MergeMap};

/// Minimum-paper thresholds reported by default.
pub const DEFAULT_THRESHOLDS: [usize; 6] = [1, 10, 20, 30, 40, 50];

/// External per-author scores, e.g. P(top 10%) sums.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScoreTable {
    scores: BTreeMap<AuthorKey, f64>,
}

impl ScoreTable {
    pub fn from_pairs<I: IntoIterator<Item = (AuthorKey, f64)>>(pairs: I) -> Result<Self> {
        let mut scores = BTreeMap::new();
        for (author, score) in pairs {
            if !score.is_finite() || score < 0.0 {
                return Err(Error::Format(format!(
                    "score for {author} must be finite and non-negative"
                )));
            }
            if scores.insert(author.clone(), score).is_some() {
                return Err(Error::Format(format!("duplicate score row for {author}")));
            }
        }
        Ok(Self { scores })
    }

    /// Reads an `author,score` CSV (header optional). Author names are
    /// normalized and passed through `merge`.
    pub fn from_csv<R: Read>(reader: R, merge: &MergeMap) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut pairs = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            if record.iter().all(str::is_empty) {
                continue;
            }
            if record.len() != 2 {
                return Err(Error::Format(format!("score table row {}: expected 2 columns", i + 1)));
            }
            let parsed = record[1].parse::<f64>();
            if i == 0 && parsed.is_err() && record[0].eq_ignore_ascii_case("author") {
                continue;
            }
            let score =
                parsed.map_err(|_| Error::Format(format!("score table row {}: bad score {:?}", i + 1, &record[1])))?;
            let key = normalize_name(&record[0])?;
            pairs.push((merge.resolve(&key).clone(), score));
        }
        Self::from_pairs(pairs)
    }

    pub fn get(&self, author: &AuthorKey) -> Option<f64> {
        self.scores.get(author).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start+1..=end share their mean rank.
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::TooFewObservations(format!("{} pairs, need at least 2", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if x.iter().all(|v| *v == x[0]) {
        return Err(Error::ConstantInput("x"));
    }
    if y.iter().all(|v| *v == y[0]) {
        return Err(Error::ConstantInput("y"));
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    // Mean rank is (n + 1) / 2 regardless of ties.
    let mean = (x.len() + 1) as f64 / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (dx, dy) = (a - mean, b - mean);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub threshold: usize,
    /// Absent when fewer than two authors qualify or a side is constant.
    pub rho: Option<f64>,
    pub n_authors: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub rows: Vec<CorrelationRow>,
    /// PWI authors missing from the score table (excluded from every row).
    pub unmatched_authors: usize,
}

/// Spearman correlation between PWI and external scores among authors with
/// at least `t` papers, for every threshold `t`.
pub fn threshold_sweep(rows: &[PwiRow], scores: &ScoreTable, thresholds: &[usize]) -> Result<CorrelationReport> {
    if thresholds.is_empty() {
        return Err(Error::Thresholds("no thresholds given".into()));
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Thresholds(format!("{thresholds:?} is not strictly ascending")));
    }
    let joined: Vec<(usize, f64, f64)> = rows
        .iter()
        .filter_map(|r| scores.get(&r.author).map(|s| (r.n_papers, r.pwi, s)))
        .collect();
    let unmatched_authors = rows.len() - joined.len();

    let report_rows = thresholds
        .iter()
        .map(|&t| {
            let (x, y): (Vec<f64>, Vec<f64>) = joined
                .iter()
                .filter(|(n, _, _)| *n >= t)
                .map(|&(_, p, s)| (p, s))
                .unzip();
            CorrelationRow {
                threshold: t,
                rho: spearman(&x, &y).ok(),
                n_authors: x.len(),
            }
        })
        .collect();
    Ok(CorrelationReport {
        rows: report_rows,
        unmatched_authors,
    })
}
