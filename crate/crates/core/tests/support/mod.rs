//! Test-only oracles and dataset generators.
//!
//! Nothing here calls into the crate's graph or PWI code: distances come from
//! exhaustive relaxation over the raw co-author pair list, and the index is
//! summed straight from its definition.

#![allow(dead_code)]

use std::collections::BTreeSet;

use pwi_core::{assign_keys, AuthorKey, MergeMap, PaperRecord};
use rand::Rng;

pub const INF: u32 = u32::MAX;

/// A dataset as plain integers: each paper lists distinct author ids.
#[derive(Clone, Debug)]
pub struct RawDataset {
    pub papers: Vec<Vec<usize>>,
    pub laureates: BTreeSet<usize>,
}

pub fn author_name(id: usize) -> String {
    format!("Author{id:03}, Q")
}

pub fn author_key(id: usize) -> AuthorKey {
    AuthorKey::parse(&author_name(id)).unwrap()
}

impl RawDataset {
    pub fn authors(&self) -> BTreeSet<usize> {
        self.papers.iter().flatten().copied().collect()
    }

    pub fn records(&self) -> Vec<PaperRecord> {
        let mut records: Vec<PaperRecord> = self
            .papers
            .iter()
            .enumerate()
            .map(|(i, p)| PaperRecord::new(format!("WOS:{i:05}"), p.iter().map(|&a| author_name(a)).collect()))
            .collect();
        assign_keys(&mut records, &MergeMap::default());
        records
    }

    pub fn laureate_set(&self) -> pwi_core::LaureateSet {
        pwi_core::LaureateSet::new("oracle", self.laureates.iter().map(|&w| author_key(w)))
    }
}

/// Random dataset with at most `max_authors` authors, `max_papers` papers
/// of 1-5 authors, and up to `max_laureates` laureates drawn from authors
/// that occur (plus, sometimes, one that does not).
pub fn random_dataset<R: Rng>(rng: &mut R, max_authors: usize, max_papers: usize, max_laureates: usize) -> RawDataset {
    let n_authors = rng.gen_range(1..=max_authors);
    let n_papers = rng.gen_range(1..=max_papers);
    let papers: Vec<Vec<usize>> = (0..n_papers)
        .map(|_| {
            let size = rng.gen_range(1..=5usize.min(n_authors));
            let mut p: Vec<usize> = Vec::with_capacity(size);
            while p.len() < size {
                let a = rng.gen_range(0..n_authors);
                if !p.contains(&a) {
                    p.push(a);
                }
            }
            p
        })
        .collect();
    let present: Vec<usize> = papers
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n_laureates = rng.gen_range(0..=max_laureates);
    let mut laureates = BTreeSet::new();
    for _ in 0..n_laureates {
        if rng.gen_bool(0.1) {
            laureates.insert(max_authors + 100); // never publishes
        } else {
            laureates.insert(present[rng.gen_range(0..present.len())]);
        }
    }
    RawDataset { papers, laureates }
}

/// All-pairs distances by repeated edge relaxation over the pair list.
pub fn all_pairs(ds: &RawDataset, n: usize) -> Vec<Vec<u32>> {
    let mut pairs = Vec::new();
    for p in &ds.papers {
        for &a in p {
            for &b in p {
                if a != b {
                    pairs.push((a, b));
                }
            }
        }
    }
    let mut dist = vec![vec![INF; n]; n];
    for a in ds.authors() {
        dist[a][a] = 0;
    }
    loop {
        let mut changed = false;
        for src in 0..n {
            for &(a, b) in &pairs {
                if dist[src][a] != INF && dist[src][a] + 1 < dist[src][b] {
                    dist[src][b] = dist[src][a] + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            return dist;
        }
    }
}

pub fn oracle_weight(d: u32, cap: Option<u32>) -> f64 {
    match cap {
        _ if d == INF => 0.0,
        Some(c) if d > c => 0.0,
        _ => 0.5f64.powi(d as i32),
    }
}

/// Distance for author `a` on paper `p` to laureate `w`, straight from the
/// definition.
pub fn oracle_paper_distance(dist: &[Vec<u32>], paper: &[usize], a: usize, w: usize, realized: bool) -> u32 {
    let n = dist.len();
    if a == w {
        return 0;
    }
    if w >= n {
        return INF;
    }
    if realized {
        paper
            .iter()
            .filter(|&&b| b != a)
            .map(|&b| dist[b][w])
            .filter(|&d| d != INF)
            .map(|d| d + 1)
            .min()
            .unwrap_or(INF)
    } else {
        dist[a][w]
    }
}

/// PWI per author id (authors that publish only).
pub fn oracle_pwi(ds: &RawDataset, realized: bool, cap: Option<u32>) -> Vec<(usize, f64)> {
    let n = ds.authors().iter().max().map_or(0, |m| m + 1);
    let dist = all_pairs(ds, n);
    ds.authors()
        .into_iter()
        .map(|a| {
            let mut total = 0.0;
            for paper in ds.papers.iter().filter(|p| p.contains(&a)) {
                for &w in &ds.laureates {
                    total += oracle_weight(oracle_paper_distance(&dist, paper, a, w, realized), cap);
                }
            }
            (a, total)
        })
        .collect()
}

/// Global-mode distance `D_w[a]` from the oracle.
pub fn oracle_distance(ds: &RawDataset, a: usize, w: usize) -> u32 {
    let n = ds.authors().iter().max().map_or(0, |m| m + 1).max(a + 1);
    if w >= n {
        return INF;
    }
    all_pairs(ds, n)[a][w]
}
