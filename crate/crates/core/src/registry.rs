//! Author name normalization, merge maps, and per-author profiles.
//!
//! Authors are matched on a key of the form `"LASTNAME II"`: the uppercased
//! last name followed by the concatenated initials of every given name.
//! Variant spellings that survive normalization (e.g. `VANRAAN AFJ` and
//! `VAN RAAN AFJ`) are folded together with a user-supplied [`MergeMap`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::ingest::PaperRecord;

const SUFFIXES: [&str; 4] = ["JR", "SR", "II", "III"];

/// Normalized author identity, e.g. `VAN RAAN AFJ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuthorKey(String);

impl AuthorKey {
    /// Normalizes a raw name (or an existing key) into a key.
    pub fn parse(raw: &str) -> Result<Self> {
        normalize_name(raw)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for AuthorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Uppercase, ASCII-fold where a canonical decomposition exists, and collapse whitespace.
fn fold(s: &str) -> String {
    let stripped: String = s.nfd().filter(|c| !is_combining_mark(*c)).collect();
    stripped.to_uppercase().split_whitespace().collect::<Vec<_>>().join(" ")
}

fn is_suffix(token: &str) -> bool {
    let t = token.trim_end_matches('.');
    SUFFIXES.contains(&t)
}

fn is_initial_run(token: &str) -> bool {
    let n = token.chars().count();
    (1..=3).contains(&n) && token.chars().all(|c| c.is_alphabetic() && !c.is_lowercase())
}

/// Initials of a given-names string. Tokens are split on whitespace, hyphens
/// and periods; each contributes its first alphanumeric character, except
/// short all-caps tokens (`AFJ` as exported in abbreviated author fields),
/// which are already a run of initials.
fn initials(given: &str) -> String {
    let mut out = String::new();
    for token in given.split(|c: char| c.is_whitespace() || c == '-' || c == '.') {
        if token.is_empty() {
            continue;
        }
        if is_initial_run(token) {
            out.extend(fold(token).chars().filter(|c| c.is_alphanumeric()));
        } else if let Some(c) = fold(token).chars().find(|c| c.is_alphanumeric()) {
            out.push(c);
        }
    }
    out
}

fn last_name(part: &str) -> String {
    fold(part)
        .split(' ')
        .filter(|t| !t.is_empty() && !is_suffix(t))
        .collect::<Vec<_>>()
        .join(" ")
}

fn join_key(last: String, initials: String) -> String {
    if initials.is_empty() {
        last
    } else {
        format!("{last} {initials}")
    }
}

/// Turns a raw author name into its matching key.
///
/// `"Waltman, Ludo"` becomes `WALTMAN L` and `"van Raan, Anthony F.J."`
/// becomes `VAN RAAN AFJ`. Comma-less input that is already uppercase is
/// taken to be a key and only canonicalized, so the function is idempotent
/// on its own output.
pub fn normalize_name(raw: &str) -> Result<AuthorKey> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(Error::UnusableName(raw.to_string()));
    }

    let key = if let Some((last, rest)) = trimmed.split_once(',') {
        // "Smith, John, Jr." - later comma segments are suffixes or more given names.
        let given: Vec<&str> = rest
            .split(',')
            .filter(|seg| !seg.split_whitespace().all(|t| is_suffix(&fold(t))))
            .collect();
        let last = last_name(last);
        if last.is_empty() {
            return Err(Error::UnusableName(raw.to_string()));
        }
        join_key(last, initials(&given.join(" ")))
    } else if trimmed.to_uppercase() == trimmed {
        // Key form: "VAN RAAN AFJ".
        let folded = fold(trimmed);
        let mut tokens: Vec<String> = folded.split(' ').map(str::to_string).collect();
        if tokens.len() > 1 {
            let last = tokens.pop().unwrap_or_default().replace('.', "");
            if !last.is_empty() {
                tokens.push(last);
            }
        }
        tokens.join(" ")
    } else {
        let mut tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let given = if tokens.len() > 1 {
            tokens.pop().unwrap_or("")
        } else {
            ""
        };
        join_key(last_name(&tokens.join(" ")), initials(given))
    };

    if key.starts_with(' ') || !key.contains(|c: char| c.is_alphanumeric()) {
        return Err(Error::UnusableName(raw.to_string()));
    }
    Ok(AuthorKey(key))
}

/// Variant-to-canonical key mapping, closed so every variant points at a
/// key that is not itself a variant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MergeMap {
    entries: BTreeMap<AuthorKey, AuthorKey>,
}

impl MergeMap {
    /// Builds a closed map from raw `(variant, canonical)` pairs. Chains are
    /// followed to their end; self-mappings are ignored.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (AuthorKey, AuthorKey)>,
    {
        let mut direct: BTreeMap<AuthorKey, AuthorKey> = BTreeMap::new();
        for (variant, canonical) in pairs {
            if variant == canonical {
                continue;
            }
            match direct.get(&variant) {
                Some(existing) if *existing != canonical => {
                    return Err(Error::ConflictingMerge {
                        variant: variant.0,
                        first: existing.0.clone(),
                        second: canonical.0,
                    });
                }
                _ => {
                    direct.insert(variant, canonical);
                }
            }
        }

        let mut entries = BTreeMap::new();
        for variant in direct.keys() {
            let mut path = vec![variant.clone()];
            let mut current = variant;
            while let Some(next) = direct.get(current) {
                if let Some(pos) = path.iter().position(|k| k == next) {
                    let mut cycle: Vec<String> = path[pos..].iter().map(|k| k.0.clone()).collect();
                    cycle.push(next.0.clone());
                    return Err(Error::CyclicMergeMap(cycle));
                }
                path.push(next.clone());
                current = next;
            }
            entries.insert(variant.clone(), current.clone());
        }
        Ok(Self { entries })
    }

    /// Reads a two-column `variant,canonical` CSV. The header row is optional.
    /// Both columns accept raw names or keys.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut pairs = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            if record.iter().all(str::is_empty) {
                continue;
            }
            if i == 0
                && record.get(0).is_some_and(|s| s.eq_ignore_ascii_case("variant"))
                && record.get(1).is_some_and(|s| s.eq_ignore_ascii_case("canonical"))
            {
                continue;
            }
            if record.len() != 2 {
                return Err(Error::Format(format!(
                    "merge map row {}: expected 2 columns, found {}",
                    i + 1,
                    record.len()
                )));
            }
            pairs.push((normalize_name(&record[0])?, normalize_name(&record[1])?));
        }
        Self::from_pairs(pairs)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn resolve<'a>(&'a self, key: &'a AuthorKey) -> &'a AuthorKey {
        self.entries.get(key).unwrap_or(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AuthorKey, &AuthorKey)> {
        self.entries.iter()
    }
}

/// Replaces variants by canonical keys and collapses repeats, keeping the
/// first occurrence of each key.
pub fn apply_merge_map(keys: &[AuthorKey], map: &MergeMap) -> Vec<AuthorKey> {
    let mut seen = BTreeSet::new();
    keys.iter()
        .map(|k| map.resolve(k))
        .filter(|k| seen.insert((*k).clone()))
        .cloned()
        .collect()
}

/// Removes later repeats of a key within one paper, keeping `raw_authors`
/// aligned with `author_keys`.
fn collapse_record(record: &mut PaperRecord, keys: Vec<AuthorKey>) {
    let mut seen = BTreeSet::new();
    let mut raw = Vec::with_capacity(keys.len());
    let mut kept = Vec::with_capacity(keys.len());
    for (name, key) in record.raw_authors.drain(..).zip(keys) {
        if seen.insert(key.clone()) {
            raw.push(name);
            kept.push(key);
        }
    }
    record.raw_authors = raw;
    record.author_keys = kept;
}

/// Fills `author_keys` for every record and applies the merge map.
///
/// Raw names that cannot be normalized are dropped (ingestion already
/// filters those, so this only matters for hand-built records).
pub fn assign_keys(records: &mut [PaperRecord], map: &MergeMap) {
    for record in records.iter_mut() {
        let (raw, keys): (Vec<String>, Vec<AuthorKey>) = record
            .raw_authors
            .drain(..)
            .filter_map(|name| {
                let key = normalize_name(&name).ok()?;
                let key = map.resolve(&key).clone();
                Some((name, key))
            })
            .unzip();
        record.raw_authors = raw;
        collapse_record(record, keys);
    }
}

/// Re-applies a merge map to records whose keys are already filled.
pub fn merge_records(records: &mut [PaperRecord], map: &MergeMap) {
    for record in records.iter_mut() {
        let keys = record.author_keys.iter().map(|k| map.resolve(k).clone()).collect();
        collapse_record(record, keys);
    }
}

/// Papers and distinct collaborators of one author.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuthorProfile {
    pub key: AuthorKey,
    pub paper_ids: BTreeSet<String>,
    pub coauthors: BTreeSet<AuthorKey>,
}

/// Immutable index of author profiles, keyed and ordered by author key.
#[derive(Clone, Debug, Default)]
pub struct AuthorRegistry {
    profiles: BTreeMap<AuthorKey, AuthorProfile>,
}

impl AuthorRegistry {
    /// Folds keyed records into profiles.
    pub fn build(records: &[PaperRecord]) -> Self {
        let mut profiles: BTreeMap<AuthorKey, AuthorProfile> = BTreeMap::new();
        for record in records {
            for key in &record.author_keys {
                let profile = profiles.entry(key.clone()).or_insert_with(|| AuthorProfile {
                    key: key.clone(),
                    paper_ids: BTreeSet::new(),
                    coauthors: BTreeSet::new(),
                });
                profile.paper_ids.insert(record.record_id.clone());
                profile
                    .coauthors
                    .extend(record.author_keys.iter().filter(|k| *k != key).cloned());
            }
        }
        Self { profiles }
    }

    pub fn get(&self, key: &AuthorKey) -> Option<&AuthorProfile> {
        self.profiles.get(key)
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn profiles(&self) -> impl Iterator<Item = &AuthorProfile> {
        self.profiles.values()
    }
}

/// One line of the author preview table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuthorRow {
    pub author: AuthorKey,
    pub papers: usize,
    pub coauthors: usize,
}

/// Author preview used to spot name variants before merging: one row per
/// key with paper count and distinct co-author count, sorted by key.
pub fn list_authors(records: &[PaperRecord]) -> Vec<AuthorRow> {
    // Paper counts go by record, not by id: ids may repeat before dedupe.
    let mut papers: HashMap<&AuthorKey, usize> = HashMap::new();
    for record in records {
        for key in &record.author_keys {
            *papers.entry(key).or_default() += 1;
        }
    }
    AuthorRegistry::build(records)
        .profiles()
        .map(|p| AuthorRow {
            author: p.key.clone(),
            papers: papers.get(&p.key).copied().unwrap_or(0),
            coauthors: p.coauthors.len(),
        })
        .collect()
}
