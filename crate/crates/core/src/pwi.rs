//! The Prize Winner Index.
//!
//! For an author `a`, every paper `p` of `a` and every laureate `w`
//! contribute `1 / 2^d`, where `d` is the co-authorship distance between
//! `a` and `w` as seen from paper `p` (0 for the laureate themself, 1 for
//! a co-author, and so on; no path contributes 0). Two readings of "the
//! distance for paper `p`" are offered through [`DistanceMode`].

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Read};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph, distances_from, CoauthorGraph, Distance, DistanceTable};
use crate::ingest::PaperRecord;
use crate::registry::{normalize_name, AuthorKey};

const PRICE_MEDAL: &str = include_str!("../data/price_medal.txt");

/// The prize winners the index is anchored on.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaureateSet {
    pub label: String,
    pub keys: BTreeSet<AuthorKey>,
}

impl LaureateSet {
    pub fn new<I: IntoIterator<Item = AuthorKey>>(label: impl Into<String>, keys: I) -> Self {
        Self {
            label: label.into(),
            keys: keys.into_iter().collect(),
        }
    }

    /// Reads one name per line. Names may be raw or already normalized;
    /// `#` starts a comment.
    pub fn from_reader<R: Read>(label: impl Into<String>, reader: R) -> Result<Self> {
        let mut keys = BTreeSet::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let name = line
                .split('#')
                .next()
                .unwrap_or("")
                .trim()
                .trim_start_matches('\u{FEFF}');
            if name.is_empty() {
                continue;
            }
            let key = normalize_name(name)
                .map_err(|_| Error::Format(format!("laureate list line {}: unusable name {name:?}", i + 1)))?;
            keys.insert(key);
        }
        Ok(Self {
            label: label.into(),
            keys,
        })
    }

    /// Derek de Solla Price Memorial Medal laureates, shipped as data.
    pub fn price_medal() -> Self {
        Self::from_reader("Derek de Solla Price Memorial Medal", PRICE_MEDAL.as_bytes())
            .expect("bundled laureate list is well-formed")
    }

    pub fn contains(&self, key: &AuthorKey) -> bool {
        self.keys.contains(key)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMode {
    /// The first hop from the author must be a co-author on the paper
    /// itself; the remaining hops use the whole network.
    #[default]
    Realized,
    /// The whole-network shortest path, the same for every paper.
    Global,
}

impl std::fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DistanceMode::Realized => "realized",
            DistanceMode::Global => "global",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PwiOptions {
    pub mode: DistanceMode,
    /// Distances above this are treated as unreachable.
    pub max_distance: Option<u32>,
}

/// One output row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PwiRow {
    pub author: AuthorKey,
    pub pwi: f64,
    #[serde(rename = "papers")]
    pub n_papers: usize,
    #[serde(rename = "coauthors")]
    pub n_coauthors: usize,
    #[serde(rename = "laureate")]
    pub is_laureate: bool,
    pub pwi_per_paper: f64,
    /// Absent for authors without co-authors.
    pub pwi_per_coauthor: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PwiOutput {
    pub rows: Vec<PwiRow>,
    /// Laureates that occur in the dataset.
    pub laureates_matched: Vec<AuthorKey>,
    pub warnings: Vec<String>,
}

/// `1 / 2^d`, exact for every finite distance; unreachable weighs 0.
pub fn weight(d: Distance) -> f64 {
    match d.finite() {
        Some(d) if d <= 1022 => f64::from_bits(u64::from(1023 - d) << 52),
        Some(d) if d <= 1074 => f64::from_bits(1u64 << (1074 - d)),
        _ => 0.0,
    }
}

/// Distance between `author` and the laureate of `table`, as seen from
/// the paper `record_id`.
pub fn paper_distance(
    graph: &CoauthorGraph,
    author: &AuthorKey,
    record_id: &str,
    table: &DistanceTable,
    mode: DistanceMode,
) -> Result<Distance> {
    let not_on_paper = || Error::NotOnPaper {
        author: author.to_string(),
        paper: record_id.to_string(),
    };
    let node = graph.node(author).ok_or_else(not_on_paper)?;
    let paper = graph
        .papers_of(node)
        .iter()
        .map(|&p| &graph.papers()[p as usize])
        .find(|p| p.record_id == record_id)
        .ok_or_else(not_on_paper)?;

    if *author == table.laureate {
        return Ok(Distance::ZERO);
    }
    Ok(match mode {
        DistanceMode::Global => table.get(node),
        DistanceMode::Realized => paper
            .authors
            .iter()
            .filter(|&&b| b != node)
            .map(|&b| table.get(b))
            .min()
            .unwrap_or(Distance::UNREACHABLE)
            .step(),
    })
}

/// Per-node contributions of one laureate, summed over papers.
fn laureate_contributions(graph: &CoauthorGraph, table: &DistanceTable, options: &PwiOptions) -> Vec<f64> {
    let mut acc = vec![0.0; graph.node_count()];
    if !table.present {
        return acc;
    }
    let laureate = graph.node(&table.laureate);
    let cap = options.max_distance;
    for paper in graph.papers() {
        match options.mode {
            DistanceMode::Global => {
                for &a in &paper.authors {
                    acc[a as usize] += weight(table.get(a).capped(cap));
                }
            }
            DistanceMode::Realized => {
                // Smallest and second-smallest co-author distance on the paper,
                // so each author's "best other" is found in O(1).
                let (mut best, mut best_pos, mut second) = (Distance::UNREACHABLE, usize::MAX, Distance::UNREACHABLE);
                for (i, &b) in paper.authors.iter().enumerate() {
                    let d = table.get(b);
                    if d < best {
                        second = best;
                        best = d;
                        best_pos = i;
                    } else if d < second {
                        second = d;
                    }
                }
                for (i, &a) in paper.authors.iter().enumerate() {
                    let d = if Some(a) == laureate {
                        Distance::ZERO
                    } else if i == best_pos {
                        second.step()
                    } else {
                        best.step()
                    };
                    acc[a as usize] += weight(d.capped(cap));
                }
            }
        }
    }
    acc
}

/// Computes the index for every author of `records` (already keyed and
/// merged).
pub fn compute_pwi(records: &[PaperRecord], laureates: &LaureateSet, options: &PwiOptions) -> PwiOutput {
    compute_pwi_on_graph(&build_graph(records), laureates, options)
}

/// Like [`compute_pwi`] on a prebuilt graph. Laureates are processed in
/// parallel; their contributions are summed in key order, so the result
/// does not depend on scheduling.
pub fn compute_pwi_on_graph(graph: &CoauthorGraph, laureates: &LaureateSet, options: &PwiOptions) -> PwiOutput {
    let mut warnings = Vec::new();
    if laureates.is_empty() {
        warnings.push("laureate set is empty; every PWI value is zero".to_string());
    }

    let laureate_keys: Vec<&AuthorKey> = laureates.keys.iter().collect();
    let per_laureate: Vec<(bool, Vec<f64>)> = laureate_keys
        .par_iter()
        .map(|w| {
            let table = distances_from(graph, w);
            (table.present, laureate_contributions(graph, &table, options))
        })
        .collect();

    let mut pwi = vec![0.0; graph.node_count()];
    let mut matched = Vec::new();
    for (key, (present, contributions)) in laureate_keys.iter().zip(&per_laureate) {
        if !present {
            warnings.push(format!("laureate {key} does not occur in the dataset"));
            continue;
        }
        matched.push((*key).clone());
        for (total, c) in pwi.iter_mut().zip(contributions) {
            *total += c;
        }
    }
    if !laureates.is_empty() && matched.is_empty() {
        warnings.push("no laureate occurs in the dataset; every PWI value is zero".to_string());
    }

    let mut rows: Vec<PwiRow> = (0..graph.node_count() as u32)
        .map(|a| {
            let author = graph.key(a).clone();
            PwiRow {
                is_laureate: laureates.contains(&author),
                author,
                pwi: pwi[a as usize],
                n_papers: graph.papers_of(a).len(),
                n_coauthors: graph.neighbors(a).len(),
                pwi_per_paper: 0.0,
                pwi_per_coauthor: None,
            }
        })
        .collect();
    relative_variants(&mut rows);
    sort_rows(&mut rows);
    PwiOutput {
        rows,
        laureates_matched: matched,
        warnings,
    }
}

/// Orders rows by PWI descending, then paper count descending, then key.
pub fn sort_rows(rows: &mut [PwiRow]) {
    rows.sort_by(PwiRow::output_cmp);
}

/// Fills PWI per paper and PWI per co-author.
pub fn relative_variants(rows: &mut [PwiRow]) {
    for row in rows {
        row.pwi_per_paper = if row.n_papers == 0 {
            0.0
        } else {
            row.pwi / row.n_papers as f64
        };
        row.pwi_per_coauthor = (row.n_coauthors > 0).then(|| row.pwi / row.n_coauthors as f64);
    }
}

/// Looks up a row by author key.
pub fn find_row<'a>(rows: &'a [PwiRow], author: &AuthorKey) -> Option<&'a PwiRow> {
    rows.iter().find(|r| r.author == *author)
}

impl PwiRow {
    /// Total order used for output, exposed for callers that re-sort.
    pub fn output_cmp(&self, other: &Self) -> Ordering {
        other
            .pwi
            .total_cmp(&self.pwi)
            .then(other.n_papers.cmp(&self.n_papers))
            .then_with(|| self.author.cmp(&other.author))
    }
}
