//! Web of Science export ingestion.
//!
//! Two export formats are supported: the field-tagged plain text format
//! (`FN`/`VR` header, two-letter tags, `ER`-terminated records, `EF` end
//! marker) and the tab-delimited format (header row, one record per line,
//! no quoting). Parsed corpora can be merged with accession-id
//! deduplication and summarized into descriptive statistics.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

/// Column names recognized in tab-delimited headers.
const KNOWN_COLUMNS: [&str; 9] = ["PT", "AU", "TI", "SO", "DT", "DE", "ID", "PY", "UT"];

/// Errors produced while parsing an export file.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{file}: missing FN header line")]
    MalformedHeader { file: String },

    #[error("{file}: record starting at line {line} has no ER terminator")]
    UnterminatedRecord { file: String, line: usize },

    #[error("{file}: header row names none of the known WoS columns")]
    MissingHeader { file: String },

    #[error("{file}: line {line}: row has {cells} cells but the header has {columns} columns")]
    RaggedRow {
        file: String,
        line: usize,
        cells: usize,
        columns: usize,
    },

    #[error("{file}: input looks binary, not a text export")]
    DecodeError { file: String },
}

/// One bibliographic document.
///
/// Keyword lists preserve source order and raw casing; normalization is a
/// separate, later step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Record {
    /// WoS accession number (`UT`), unique per document when present.
    pub accession_id: Option<String>,
    /// Document title (`TI`).
    pub title: String,
    /// Author names (`AU`), one entry per author.
    pub authors: Vec<String>,
    /// Journal or book title (`SO`).
    pub source: String,
    /// Publication year (`PY`); absent when missing or unparseable.
    pub pub_year: Option<u16>,
    /// Document type (`DT`).
    pub doc_type: String,
    /// Author-supplied keywords (`DE`).
    pub author_keywords: Vec<String>,
    /// Database-generated Keywords Plus (`ID`).
    pub keywords_plus: Vec<String>,
}

/// How the bytes of an input file were decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Utf8,
    /// Fallback for legacy exports that are not valid UTF-8.
    Latin1,
}

/// One parsed input file: name, record count, and the encoding used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenanceEntry {
    pub file: String,
    pub record_count: usize,
    pub encoding: Encoding,
}

/// An ordered collection of records with per-file provenance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub records: Vec<Record>,
    pub provenance: Vec<ProvenanceEntry>,
}

/// Descriptive corpus statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub document_count: usize,
    /// Distinct non-empty `source` strings, counted verbatim.
    pub source_count: usize,
    pub year_span: Option<(u16, u16)>,
    pub per_year_counts: BTreeMap<u16, u64>,
    /// Distinct raw author keywords (pre-normalization).
    pub author_keyword_count: usize,
    /// Distinct raw Keywords Plus (pre-normalization).
    pub keywords_plus_count: usize,
    /// Compound annual growth of the yearly document counts, in percent.
    pub annual_growth_rate_pct: Option<f64>,
}

/// Strips a UTF-8 byte-order mark, decodes as UTF-8, and falls back to
/// Latin-1 when the bytes are not valid UTF-8. NUL bytes are rejected as
/// binary input.
fn decode(bytes: &[u8], file: &str) -> Result<(String, Encoding), ParseError> {
    let bytes = bytes.strip_prefix(b"\xef\xbb\xbf").unwrap_or(bytes);
    if bytes.contains(&0) {
        return Err(ParseError::DecodeError {
            file: file.to_owned(),
        });
    }
    match std::str::from_utf8(bytes) {
        Ok(text) => Ok((text.to_owned(), Encoding::Utf8)),
        Err(_) => Ok((bytes.iter().map(|&b| b as char).collect(), Encoding::Latin1)),
    }
}

/// Splits a raw keyword cell on the exact separator `"; "`, tolerating one
/// trailing `;`. A lone `;` inside a term is not a separator.
fn split_keyword_cell(cell: &str) -> Vec<String> {
    cell.split("; ")
        .map(|part| {
            let part = part.trim();
            part.strip_suffix(';').unwrap_or(part).trim_end()
        })
        .filter(|part| !part.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Lenient year parsing: anything that is not a four-digit year in
/// [1900, 2100] yields an absent year, not a rejected record.
fn parse_year(cell: &str) -> Option<u16> {
    let year: u16 = cell.trim().parse().ok()?;
    (1900..=2100).contains(&year).then_some(year)
}

fn non_empty(value: String) -> Option<String> {
    if value.is_empty() {
        None
    } else {
        Some(value)
    }
}

/// Assembles a `Record` from the tag lines of one `PT`..`ER` block.
///
/// Per-tag line lists keep continuation lines separate so that multi-line
/// fields combine per their own rule: `AU` has one author per line, while
/// text fields (`TI`, `SO`, `DE`, `ID`) re-join wrapped lines with a space.
fn record_from_tags(tags: &BTreeMap<String, Vec<String>>) -> Record {
    let joined = |tag: &str| -> String {
        tags.get(tag)
            .map(|lines| lines.join(" "))
            .unwrap_or_default()
    };
    Record {
        accession_id: non_empty(
            tags.get("UT")
                .and_then(|lines| lines.first())
                .map(|s| s.trim().to_owned())
                .unwrap_or_default(),
        ),
        title: joined("TI").trim().to_owned(),
        authors: tags
            .get("AU")
            .map(|lines| {
                lines
                    .iter()
                    .map(|l| l.trim().to_owned())
                    .filter(|l| !l.is_empty())
                    .collect()
            })
            .unwrap_or_default(),
        source: joined("SO").trim().to_owned(),
        pub_year: tags
            .get("PY")
            .and_then(|lines| lines.first())
            .and_then(|l| parse_year(l)),
        doc_type: joined("DT").trim().to_owned(),
        author_keywords: split_keyword_cell(&joined("DE")),
        keywords_plus: split_keyword_cell(&joined("ID")),
    }
}

/// Parses the WoS field-tagged plain text format.
///
/// The first line must start with `FN`. Each record runs from `PT` to `ER`;
/// tags occupy columns 1-2 with the value from column 4; continuation lines
/// start with three spaces and extend the previous tag. Unknown tags are
/// skipped. `EF` ends the file.
pub fn parse_wos_plaintext(bytes: &[u8], source_name: &str) -> Result<Corpus, ParseError> {
    let (text, encoding) = decode(bytes, source_name)?;

    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim_end_matches('\r').starts_with("FN") => {}
        _ => {
            return Err(ParseError::MalformedHeader {
                file: source_name.to_owned(),
            })
        }
    }

    struct OpenRecord {
        start_line: usize,
        tags: BTreeMap<String, Vec<String>>,
        last_tag: Option<String>,
    }

    let mut records = Vec::new();
    let mut current: Option<OpenRecord> = None;

    for (idx, raw) in lines {
        let line = raw.trim_end_matches('\r');
        let lineno = idx + 1;

        if line == "EF" {
            break;
        }

        if let Some(open) = current.as_mut() {
            if let Some(cont) = line.strip_prefix("   ") {
                // Continuation extends the previous tag, known or not.
                if let Some(tag) = &open.last_tag {
                    if let Some(values) = open.tags.get_mut(tag) {
                        values.push(cont.to_owned());
                    }
                }
                continue;
            }
            let Some(tag) = line.get(0..2) else { continue };
            let is_tag_line = line.len() == 2 || line.as_bytes().get(2) == Some(&b' ');
            if !is_tag_line {
                continue;
            }
            if tag == "ER" {
                let open = current.take().expect("record in progress");
                records.push(record_from_tags(&open.tags));
                continue;
            }
            let value = line.get(3..).unwrap_or("").to_owned();
            open.tags.entry(tag.to_owned()).or_default().push(value);
            open.last_tag = Some(tag.to_owned());
        } else if line.starts_with("PT") {
            let mut tags = BTreeMap::new();
            let value = line.get(3..).unwrap_or("").to_owned();
            tags.insert("PT".to_owned(), vec![value]);
            current = Some(OpenRecord {
                start_line: lineno,
                tags,
                last_tag: Some("PT".to_owned()),
            });
        }
        // Lines outside records (VR, blank lines) are skipped.
    }

    // A PT block left open at EF or end of input.
    if let Some(open) = current {
        return Err(ParseError::UnterminatedRecord {
            file: source_name.to_owned(),
            line: open.start_line,
        });
    }

    let record_count = records.len();
    Ok(Corpus {
        records,
        provenance: vec![ProvenanceEntry {
            file: source_name.to_owned(),
            record_count,
            encoding,
        }],
    })
}

/// Parses the WoS tab-delimited format: a tab-separated header line, one
/// record per following line, no quoting.
pub fn parse_wos_tabdelimited(bytes: &[u8], source_name: &str) -> Result<Corpus, ParseError> {
    let (text, encoding) = decode(bytes, source_name)?;

    let mut lines = text.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line.trim_end_matches('\r'),
        None => {
            return Err(ParseError::MissingHeader {
                file: source_name.to_owned(),
            })
        }
    };

    let columns: Vec<&str> = header.split('\t').map(str::trim).collect();
    let mut positions: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, name) in columns.iter().enumerate() {
        if KNOWN_COLUMNS.contains(name) {
            positions.entry(name).or_insert(i);
        }
    }
    if positions.is_empty() {
        return Err(ParseError::MissingHeader {
            file: source_name.to_owned(),
        });
    }

    let mut records = Vec::new();
    for (idx, raw) in lines {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() > columns.len() {
            return Err(ParseError::RaggedRow {
                file: source_name.to_owned(),
                line: idx + 1,
                cells: cells.len(),
                columns: columns.len(),
            });
        }
        let cell = |name: &str| -> &str {
            positions
                .get(name)
                .and_then(|&i| cells.get(i))
                .copied()
                .unwrap_or("")
        };
        records.push(Record {
            accession_id: non_empty(cell("UT").trim().to_owned()),
            title: cell("TI").trim().to_owned(),
            authors: split_keyword_cell(cell("AU")),
            source: cell("SO").trim().to_owned(),
            pub_year: parse_year(cell("PY")),
            doc_type: cell("DT").trim().to_owned(),
            author_keywords: split_keyword_cell(cell("DE")),
            keywords_plus: split_keyword_cell(cell("ID")),
        });
    }

    let record_count = records.len();
    Ok(Corpus {
        records,
        provenance: vec![ProvenanceEntry {
            file: source_name.to_owned(),
            record_count,
            encoding,
        }],
    })
}

/// Serializes a corpus back to the tab-delimited format.
///
/// Re-parsing the output yields field-wise equal records, up to the
/// absent-vs-empty ambiguity inherent to the format. Tabs and newlines
/// inside values are replaced with spaces since the format has no quoting.
pub fn to_tab_delimited(corpus: &Corpus) -> String {
    fn clean(value: &str) -> String {
        value.replace(['\t', '\n', '\r'], " ")
    }
    let mut out = String::from("AU\tTI\tSO\tDT\tDE\tID\tPY\tUT\n");
    for record in &corpus.records {
        let year = record.pub_year.map(|y| y.to_string()).unwrap_or_default();
        let row = [
            clean(&record.authors.join("; ")),
            clean(&record.title),
            clean(&record.source),
            clean(&record.doc_type),
            clean(&record.author_keywords.join("; ")),
            clean(&record.keywords_plus.join("; ")),
            year,
            clean(record.accession_id.as_deref().unwrap_or("")),
        ];
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

/// Concatenates corpora in the given order, dropping records whose
/// accession id was already seen. Records without an accession id are
/// never deduplicated.
pub fn merge_corpora(corpora: Vec<Corpus>) -> Corpus {
    let mut merged = Corpus::default();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for corpus in corpora {
        merged.provenance.extend(corpus.provenance);
        for record in corpus.records {
            match &record.accession_id {
                Some(id) => {
                    if seen.insert(id.clone()) {
                        merged.records.push(record);
                    }
                }
                None => merged.records.push(record),
            }
        }
    }
    merged
}

/// Compound annual growth rate, in percent, between the first and last
/// years with a nonzero count. Absent when fewer than two such years.
pub fn annual_growth_rate(per_year_counts: &BTreeMap<u16, u64>) -> Option<f64> {
    let mut nonzero = per_year_counts.iter().filter(|(_, &count)| count > 0);
    let (&first_year, &first_count) = nonzero.next()?;
    let (&last_year, &last_count) = nonzero.next_back()?;
    let span = u32::from(last_year - first_year);
    if span == 0 {
        return None;
    }
    let ratio = last_count as f64 / first_count as f64;
    Some(100.0 * (ratio.powf(1.0 / f64::from(span)) - 1.0))
}

/// Computes descriptive statistics over a corpus.
pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut per_year_counts: BTreeMap<u16, u64> = BTreeMap::new();
    let mut sources: BTreeSet<&str> = BTreeSet::new();
    let mut author_keywords: BTreeSet<&str> = BTreeSet::new();
    let mut keywords_plus: BTreeSet<&str> = BTreeSet::new();

    for record in &corpus.records {
        if let Some(year) = record.pub_year {
            *per_year_counts.entry(year).or_insert(0) += 1;
        }
        if !record.source.is_empty() {
            sources.insert(&record.source);
        }
        author_keywords.extend(record.author_keywords.iter().map(String::as_str));
        keywords_plus.extend(record.keywords_plus.iter().map(String::as_str));
    }

    let year_span = match (
        per_year_counts.keys().next().copied(),
        per_year_counts.keys().next_back().copied(),
    ) {
        (Some(min), Some(max)) => Some((min, max)),
        _ => None,
    };

    CorpusStats {
        document_count: corpus.records.len(),
        source_count: sources.len(),
        year_span,
        annual_growth_rate_pct: annual_growth_rate(&per_year_counts),
        per_year_counts,
        author_keyword_count: author_keywords.len(),
        keywords_plus_count: keywords_plus.len(),
    }
}
