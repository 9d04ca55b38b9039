//! Synthetic corpora for benchmarking.

use pwi_core::{assign_keys, AuthorKey, LaureateSet, MergeMap, PaperRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A keyed record set plus a laureate list drawn from its most prolific
/// authors.
pub struct Corpus {
    pub records: Vec<PaperRecord>,
    pub laureates: LaureateSet,
}

/// Builds `papers` records over roughly `authors` authors. Early authors are
/// reused more often, which yields one large connected component plus a
/// tail of small groups, as in real bibliographic data.
pub fn corpus(papers: usize, authors: usize, laureates: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p_new = (authors as f64 / (papers as f64 * 3.0)).min(1.0);
    let mut used = 0usize;
    let mut counts = vec![0usize; authors.max(1)];
    let mut records = Vec::with_capacity(papers);
    for i in 0..papers {
        let size = rng.gen_range(1..=5);
        let mut ids: Vec<usize> = Vec::with_capacity(size);
        while ids.len() < size {
            let id = if used < authors && (used == 0 || rng.gen_bool(p_new)) {
                used += 1;
                used - 1
            } else {
                let r: f64 = rng.gen();
                ((r * r) * used as f64) as usize
            };
            if !ids.contains(&id) {
                ids.push(id);
            }
        }
        for &id in &ids {
            counts[id] += 1;
        }
        records.push(PaperRecord::new(
            format!("WOS:{i:015}"),
            ids.iter().map(|id| format!("Surname{id}, A")).collect(),
        ));
    }
    assign_keys(&mut records, &MergeMap::default());

    let mut top: Vec<usize> = (0..used).collect();
    top.sort_by_key(|&id| (std::cmp::Reverse(counts[id]), id));
    let keys = top
        .iter()
        .take(laureates)
        .map(|id| AuthorKey::parse(&format!("Surname{id}, A")).expect("valid synthetic name"));
    Corpus {
        records,
        laureates: LaureateSet::new("synthetic", keys),
    }
}
