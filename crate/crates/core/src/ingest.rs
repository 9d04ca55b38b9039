//! Readers for Web of Science export files.
//!
//! Two export flavors are supported: the tab-delimited table (one record
//! per line under a header of two-letter field tags) and the field-tagged
//! plain text format (`FN`/`VR` header, `ER` after each record, `EF` at the
//! end). Both produce the same [`PaperRecord`]s. Malformed input is skipped
//! with a warning instead of aborting the file.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::registry::{normalize_name, AuthorKey};

/// One publication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaperRecord {
    /// UT accession number, or `<file-stem>:<line>` when the export has none.
    pub record_id: String,
    /// Set when `record_id` was synthesized rather than read from `UT`.
    pub synthetic_id: bool,
    pub raw_authors: Vec<String>,
    /// Filled by [`crate::registry::assign_keys`].
    pub author_keys: Vec<AuthorKey>,
    pub pub_year: Option<i32>,
    pub doc_type: String,
    pub source_title: String,
}

impl PaperRecord {
    /// A bare record with the given id and raw author names.
    pub fn new(record_id: impl Into<String>, raw_authors: Vec<String>) -> Self {
        Self {
            record_id: record_id.into(),
            synthetic_id: false,
            raw_authors,
            author_keys: Vec::new(),
            pub_year: None,
            doc_type: String::new(),
            source_title: String::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IngestWarning {
    pub locator: String,
    pub message: String,
}

/// Accounting for one ingestion run.
///
/// `records_kept + duplicates_dropped + skipped == records_read`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub records_read: usize,
    pub records_kept: usize,
    pub duplicates_dropped: usize,
    /// Malformed lines and records without a usable author.
    pub skipped: usize,
    pub warnings: Vec<IngestWarning>,
}

impl IngestReport {
    fn warn(&mut self, locator: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(IngestWarning {
            locator: locator.into(),
            message: message.into(),
        });
    }

    /// Folds another report into this one.
    pub fn absorb(&mut self, other: IngestReport) {
        self.records_read += other.records_read;
        self.records_kept += other.records_kept;
        self.duplicates_dropped += other.duplicates_dropped;
        self.skipped += other.skipped;
        self.warnings.extend(other.warnings);
    }

    pub fn is_balanced(&self) -> bool {
        self.records_kept + self.duplicates_dropped + self.skipped == self.records_read
    }
}

impl std::fmt::Display for IngestReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "records read: {}, kept: {}, duplicates dropped: {}, skipped: {}, warnings: {}",
            self.records_read,
            self.records_kept,
            self.duplicates_dropped,
            self.skipped,
            self.warnings.len()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Tab,
    Plaintext,
}

fn decode(content: &[u8], report: &mut IngestReport) -> String {
    let content = content.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(content);
    match std::str::from_utf8(content) {
        Ok(s) => s.to_string(),
        Err(_) => {
            report.warn("file", "invalid UTF-8 replaced");
            String::from_utf8_lossy(content).into_owned()
        }
    }
}

/// Guesses the export flavor from the first non-empty line.
pub fn detect_format(content: &[u8]) -> Result<ExportFormat> {
    let content = content.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(content);
    let text = String::from_utf8_lossy(&content[..content.len().min(64 * 1024)]);
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    if first.starts_with("FN ") || first == "FN" {
        Ok(ExportFormat::Plaintext)
    } else if first.contains('\t') {
        Ok(ExportFormat::Tab)
    } else {
        Err(Error::Format(
            "unrecognized export: expected a tab-delimited header or an \"FN \" line".into(),
        ))
    }
}

/// Parses with the given flavor.
pub fn parse(content: &[u8], format: ExportFormat, source: &str) -> Result<(Vec<PaperRecord>, IngestReport)> {
    match format {
        ExportFormat::Tab => parse_wos_tab(content, source),
        ExportFormat::Plaintext => Ok(parse_wos_plaintext(content, source)),
    }
}

fn split_names(value: &str) -> impl Iterator<Item = &str> {
    value.split(';').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_year(value: &str) -> Option<i32> {
    let v = value.trim();
    if v.len() == 4 && v.bytes().all(|b| b.is_ascii_digit()) {
        v.parse().ok()
    } else {
        None
    }
}

/// Fields collected for one record, shared by both parsers.
#[derive(Default)]
struct Fields {
    au: Vec<String>,
    af: Vec<String>,
    ut: Option<String>,
    py: Option<String>,
    dt: String,
    so: String,
}

impl Fields {
    /// Builds the record, or `None` (with a warning) when no author survives.
    fn finish(self, source: &str, line: usize, report: &mut IngestReport) -> Option<PaperRecord> {
        let locator = format!("{source}:{line}");
        let names = if self.af.is_empty() { self.au } else { self.af };
        let mut authors = Vec::with_capacity(names.len());
        for name in names {
            if normalize_name(&name).is_ok() {
                authors.push(name);
            } else {
                report.warn(&locator, format!("unusable author name {name:?} dropped"));
            }
        }
        if authors.is_empty() {
            report.warn(&locator, "record has no usable authors; skipped");
            report.skipped += 1;
            return None;
        }
        let (record_id, synthetic_id) = match self.ut.map(|s| s.trim().to_string()) {
            Some(ut) if !ut.is_empty() => (ut, false),
            _ => (locator, true),
        };
        report.records_kept += 1;
        Some(PaperRecord {
            record_id,
            synthetic_id,
            raw_authors: authors,
            author_keys: Vec::new(),
            pub_year: self.py.as_deref().and_then(parse_year),
            doc_type: self.dt.trim().to_string(),
            source_title: self.so.trim().to_string(),
        })
    }
}

/// Parses a tab-delimited export.
///
/// `source` names the file (its stem) and is used to synthesize ids for
/// records lacking `UT`. A missing `AU` column is fatal; rows with too few
/// columns are skipped with a warning. A repeat of the header line is
/// ignored, so concatenated exports parse like their parts.
pub fn parse_wos_tab(content: &[u8], source: &str) -> Result<(Vec<PaperRecord>, IngestReport)> {
    let mut report = IngestReport::default();
    let text = decode(content, &mut report);
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));

    let header_line = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((_, l)) => break l,
            None => return Err(Error::Format("empty file: no header line".into())),
        }
    };
    let header: Vec<&str> = header_line.split('\t').map(str::trim).collect();
    let col = |tag: &str| header.iter().position(|h| *h == tag);
    let au = col("AU").ok_or_else(|| Error::Format("header has no AU column".into()))?;
    let (af, ut, py, dt, so) = (col("AF"), col("UT"), col("PY"), col("DT"), col("SO"));

    let mut records = Vec::new();
    for (line_no, line) in lines {
        if line.trim().is_empty() || line.trim_start_matches('\u{FEFF}') == header_line {
            continue;
        }
        report.records_read += 1;
        let cells: Vec<&str> = line.split('\t').collect();
        let extra_nonempty = cells.iter().skip(header.len()).any(|c| !c.trim().is_empty());
        if cells.len() < header.len() || extra_nonempty {
            report.warn(
                format!("{source}:{line_no}"),
                format!("expected {} columns, found {}; line skipped", header.len(), cells.len()),
            );
            report.skipped += 1;
            continue;
        }
        let get = |idx: Option<usize>| idx.map(|i| cells[i]).unwrap_or("");
        let fields = Fields {
            au: split_names(cells[au]).map(str::to_string).collect(),
            af: split_names(get(af)).map(str::to_string).collect(),
            ut: ut.map(|i| cells[i].to_string()),
            py: py.map(|i| cells[i].to_string()),
            dt: get(dt).to_string(),
            so: get(so).to_string(),
        };
        records.extend(fields.finish(source, line_no, &mut report));
    }
    Ok((records, report))
}

/// Parses a field-tagged plain text export. Never fails: unknown tags are
/// ignored and a record left open at `EF` or end of file is kept with a
/// warning.
pub fn parse_wos_plaintext(content: &[u8], source: &str) -> (Vec<PaperRecord>, IngestReport) {
    let mut report = IngestReport::default();
    let text = decode(content, &mut report);

    let mut records = Vec::new();
    let mut open: Option<(usize, Fields)> = None;
    let mut tag = String::new();

    let close = |open: &mut Option<(usize, Fields)>, report: &mut IngestReport, records: &mut Vec<PaperRecord>| {
        if let Some((start, fields)) = open.take() {
            records.extend(fields.finish(source, start, report));
        }
    };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(cont) = line.strip_prefix("   ") {
            if let Some((_, fields)) = open.as_mut() {
                push_field(fields, &tag, cont.trim(), true);
            }
            continue;
        }
        let line = line.trim_start_matches('\u{FEFF}');
        let tagged = line.len() >= 2
            && line.as_bytes()[..2].iter().all(u8::is_ascii_alphanumeric)
            && (line.len() == 2 || line.as_bytes()[2] == b' ');
        if !tagged {
            report.warn(format!("{source}:{line_no}"), "unrecognized line ignored");
            continue;
        }
        let (t, value) = (&line[..2], line.get(3..).unwrap_or("").trim());
        match t {
            "FN" | "VR" => {}
            "ER" => close(&mut open, &mut report, &mut records),
            "EF" => {
                if let Some((start, _)) = &open {
                    report.warn(format!("{source}:{start}"), "record not terminated by ER");
                }
                close(&mut open, &mut report, &mut records);
            }
            _ => {
                let (_, fields) = open.get_or_insert_with(|| {
                    report.records_read += 1;
                    (line_no, Fields::default())
                });
                tag = t.to_string();
                push_field(fields, &tag, value, false);
            }
        }
    }
    if let Some((start, _)) = &open {
        report.warn(format!("{source}:{start}"), "record not terminated by ER");
    }
    close(&mut open, &mut report, &mut records);
    (records, report)
}

fn push_field(fields: &mut Fields, tag: &str, value: &str, continuation: bool) {
    let append = |s: &mut String| {
        if continuation && !s.is_empty() {
            s.push(' ');
        }
        s.push_str(value);
    };
    match tag {
        "AU" if !value.is_empty() => fields.au.push(value.to_string()),
        "AF" if !value.is_empty() => fields.af.push(value.to_string()),
        "UT" => append(fields.ut.get_or_insert_with(String::new)),
        "PY" => append(fields.py.get_or_insert_with(String::new)),
        "DT" => append(&mut fields.dt),
        "SO" => append(&mut fields.so),
        _ => {}
    }
}

/// Keeps the first record for every id. Synthesized ids live in their own
/// namespace and never collide with `UT` ids.
pub fn dedupe_records(records: Vec<PaperRecord>) -> (Vec<PaperRecord>, usize) {
    let mut seen: HashSet<(bool, String)> = HashSet::with_capacity(records.len());
    let before = records.len();
    let kept: Vec<PaperRecord> = records
        .into_iter()
        .filter(|r| seen.insert((r.synthetic_id, r.record_id.clone())))
        .collect();
    let dropped = before - kept.len();
    (kept, dropped)
}
