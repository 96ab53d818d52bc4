//! Keyword normalization and indexing.
//!
//! Raw keywords become canonical terms through a fixed rule chain:
//! whitespace trim/collapse, case folding, trailing-punctuation stripping,
//! thesaurus lookup, and plural/singular merging. The plural rule is
//! corpus-dependent (a plural collapses only when its singular form is
//! attested), so index construction is a two-pass procedure: collect the
//! vocabulary first, merge plurals second.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::wos::{Corpus, Record};

/// Errors produced while loading a thesaurus file.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ThesaurusError {
    #[error("thesaurus is not valid UTF-8")]
    InvalidUtf8,

    #[error("thesaurus line {line}: expected `variant<TAB>canonical`")]
    MalformedLine { line: usize },

    #[error("thesaurus variant {variant:?} maps to both {existing:?} and {conflicting:?}")]
    DuplicateVariant {
        variant: String,
        existing: String,
        conflicting: String,
    },

    #[error("thesaurus chain: {canonical:?} is a canonical but also maps to {maps_to:?}")]
    ChainDetected { canonical: String, maps_to: String },
}

/// A variant-to-canonical keyword mapping. Entries are case-folded and
/// chain-free: no canonical term is itself a variant of a different term.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Thesaurus {
    entries: BTreeMap<String, String>,
    canonicals: BTreeSet<String>,
}

impl Thesaurus {
    pub fn lookup(&self, term: &str) -> Option<&str> {
        self.entries.get(term).map(String::as_str)
    }

    pub fn is_canonical(&self, term: &str) -> bool {
        self.canonicals.contains(term)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(v, c)| (v.as_str(), c.as_str()))
    }
}

/// Loads a thesaurus from `variant<TAB>canonical` lines. `#` starts a
/// comment line. Both sides are whitespace-collapsed and case-folded.
pub fn load_thesaurus(bytes: &[u8]) -> Result<Thesaurus, ThesaurusError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ThesaurusError::InvalidUtf8)?;
    let mut entries: BTreeMap<String, String> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let Some((variant, canonical)) = line.split_once('\t') else {
            return Err(ThesaurusError::MalformedLine { line: lineno });
        };
        let variant = fold(variant);
        let canonical = fold(canonical);
        if variant.is_empty() || canonical.is_empty() {
            return Err(ThesaurusError::MalformedLine { line: lineno });
        }
        match entries.get(&variant) {
            Some(existing) if *existing != canonical => {
                return Err(ThesaurusError::DuplicateVariant {
                    variant,
                    existing: existing.clone(),
                    conflicting: canonical,
                });
            }
            _ => {
                entries.insert(variant, canonical);
            }
        }
    }

    // Reject chains: a canonical that is itself mapped elsewhere.
    for canonical in entries.values() {
        if let Some(next) = entries.get(canonical) {
            if next != canonical {
                return Err(ThesaurusError::ChainDetected {
                    canonical: canonical.clone(),
                    maps_to: next.clone(),
                });
            }
        }
    }

    let canonicals = entries.values().cloned().collect();
    Ok(Thesaurus {
        entries,
        canonicals,
    })
}

fn fold(term: &str) -> String {
    collapse_whitespace(term).to_lowercase()
}

/// The normalization rule chain as data. The same rules value always maps
/// the same input to the same canonical form.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormalizationRules {
    pub case_fold: bool,
    pub trim_and_collapse_whitespace: bool,
    pub strip_trailing_punctuation: bool,
    pub merge_plurals: bool,
    pub thesaurus: Option<Thesaurus>,
}

impl NormalizationRules {
    /// All flags on, no thesaurus.
    pub fn standard() -> Self {
        NormalizationRules {
            case_fold: true,
            trim_and_collapse_whitespace: true,
            strip_trailing_punctuation: true,
            merge_plurals: true,
            thesaurus: None,
        }
    }

    pub fn with_thesaurus(mut self, thesaurus: Thesaurus) -> Self {
        self.thesaurus = Some(thesaurus);
        self
    }
}

/// Which keyword field of a record feeds the index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KeywordField {
    /// Author-supplied keywords (`DE`).
    #[default]
    Author,
    /// Database-generated Keywords Plus (`ID`).
    Plus,
}

impl KeywordField {
    fn of(self, record: &Record) -> &[String] {
        match self {
            KeywordField::Author => &record.author_keywords,
            KeywordField::Plus => &record.keywords_plus,
        }
    }
}

fn collapse_whitespace(term: &str) -> String {
    term.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Steps 1-4 of the chain: whitespace, case, trailing punctuation,
/// thesaurus. Returns `None` when the result is empty.
fn basic_normalize(raw: &str, rules: &NormalizationRules) -> Option<String> {
    let mut term = if rules.trim_and_collapse_whitespace {
        collapse_whitespace(raw)
    } else {
        raw.to_owned()
    };
    if rules.case_fold {
        term = term.to_lowercase();
    }
    if rules.strip_trailing_punctuation {
        // Stripping can expose trailing whitespace; keep going until the
        // tail is stable so renormalizing is a no-op.
        loop {
            let before = term.len();
            while term.ends_with(['.', ',', ';', ':']) {
                term.pop();
            }
            if rules.trim_and_collapse_whitespace {
                term.truncate(term.trim_end().len());
            }
            if term.len() == before {
                break;
            }
        }
    }
    if let Some(thesaurus) = &rules.thesaurus {
        if let Some(canonical) = thesaurus.lookup(&term) {
            term = canonical.to_owned();
        }
    }
    if term.is_empty() {
        None
    } else {
        Some(term)
    }
}

/// Plural/singular merge: a term ending in `s` collapses to the form
/// without the final `s` (or `-ies` to `-y`) only when that form is
/// attested in the vocabulary or among thesaurus canonicals. Iterates to a
/// fixed point so the result is stable under renormalization.
fn merge_plural(
    mut term: String,
    rules: &NormalizationRules,
    vocabulary: &BTreeSet<String>,
) -> String {
    let attested = |candidate: &str| {
        vocabulary.contains(candidate)
            || rules
                .thesaurus
                .as_ref()
                .is_some_and(|t| t.is_canonical(candidate))
    };
    loop {
        let singular = if let Some(stem) = term.strip_suffix("ies") {
            let y_form = format!("{stem}y");
            if attested(&y_form) {
                Some(y_form)
            } else if attested(&term[..term.len() - 1]) {
                Some(term[..term.len() - 1].to_owned())
            } else {
                None
            }
        } else if term.ends_with('s') && term.len() > 1 && attested(&term[..term.len() - 1]) {
            Some(term[..term.len() - 1].to_owned())
        } else {
            None
        };
        match singular {
            Some(next) => term = next,
            None => return term,
        }
    }
}

/// Normalizes one raw keyword against a vocabulary of attested terms.
/// Returns `None` when the keyword normalizes to nothing.
pub fn normalize_term(
    raw: &str,
    rules: &NormalizationRules,
    vocabulary: &BTreeSet<String>,
) -> Option<String> {
    let term = basic_normalize(raw, rules)?;
    if rules.merge_plurals {
        Some(merge_plural(term, rules, vocabulary))
    } else {
        Some(term)
    }
}

/// Canonical term -> postings (document ordinals into the source corpus).
/// A term's frequency is its postings size: one count per document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeywordIndex {
    terms: BTreeMap<String, Vec<usize>>,
    doc_count: usize,
}

impl KeywordIndex {
    /// Builds an index from raw postings; postings are sorted and deduped.
    pub fn from_postings(terms: BTreeMap<String, Vec<usize>>, doc_count: usize) -> Self {
        let terms = terms
            .into_iter()
            .map(|(term, mut postings)| {
                postings.sort_unstable();
                postings.dedup();
                (term, postings)
            })
            .filter(|(_, postings)| !postings.is_empty())
            .collect();
        KeywordIndex { terms, doc_count }
    }

    pub fn frequency(&self, term: &str) -> u64 {
        self.terms.get(term).map_or(0, |p| p.len() as u64)
    }

    pub fn postings(&self, term: &str) -> Option<&[usize]> {
        self.terms.get(term).map(Vec::as_slice)
    }

    /// Terms with their frequencies, in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&str, u64)> {
        self.terms.iter().map(|(t, p)| (t.as_str(), p.len() as u64))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[usize])> {
        self.terms.iter().map(|(t, p)| (t.as_str(), p.as_slice()))
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains_key(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of documents in the source corpus.
    pub fn doc_count(&self) -> usize {
        self.doc_count
    }
}

/// Builds the keyword index for one field of a corpus.
///
/// Two passes: the first basic-normalizes every keyword and collects the
/// vocabulary, the second applies the corpus-dependent plural merge and
/// collapses per-document duplicates into a single posting.
pub fn build_index(
    corpus: &Corpus,
    field: KeywordField,
    rules: &NormalizationRules,
) -> KeywordIndex {
    let mut per_doc: Vec<Vec<String>> = Vec::with_capacity(corpus.records.len());
    let mut vocabulary: BTreeSet<String> = BTreeSet::new();
    for record in &corpus.records {
        let normalized: Vec<String> = field
            .of(record)
            .iter()
            .filter_map(|raw| basic_normalize(raw, rules))
            .collect();
        vocabulary.extend(normalized.iter().cloned());
        per_doc.push(normalized);
    }

    let mut terms: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (ordinal, keywords) in per_doc.into_iter().enumerate() {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for term in keywords {
            let term = if rules.merge_plurals {
                merge_plural(term, rules, &vocabulary)
            } else {
                term
            };
            if seen.insert(term.clone()) {
                terms.entry(term).or_default().push(ordinal);
            }
        }
    }

    KeywordIndex {
        terms,
        doc_count: corpus.records.len(),
    }
}

/// Top terms by descending frequency; ties break lexicographically.
pub fn rank_keywords(index: &KeywordIndex, top_n: usize) -> Vec<(String, u64)> {
    let mut ranking: Vec<(String, u64)> = index
        .terms()
        .map(|(term, freq)| (term.to_owned(), freq))
        .collect();
    ranking.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranking.truncate(top_n);
    ranking
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wos::parse_wos_tabdelimited;
    use proptest::prelude::*;

    use crate::testutil::{corpus_from_keyword_sets, mini_corpus};

    #[test]
    fn whitespace_and_case() {
        let rules = NormalizationRules::standard();
        let vocab = BTreeSet::new();
        assert_eq!(
            normalize_term("  Artificial  Intelligence ", &rules, &vocab).as_deref(),
            Some("artificial intelligence")
        );
    }

    #[test]
    fn trailing_punctuation_stripped() {
        let rules = NormalizationRules::standard();
        let vocab = BTreeSet::new();
        assert_eq!(
            normalize_term("ethics;", &rules, &vocab).as_deref(),
            Some("ethics")
        );
        assert_eq!(
            normalize_term("ai.,", &rules, &vocab).as_deref(),
            Some("ai")
        );
    }

    #[test]
    fn empty_result_is_absent() {
        let rules = NormalizationRules::standard();
        let vocab = BTreeSet::new();
        assert_eq!(normalize_term("  ;;; ", &rules, &vocab), None);
        assert_eq!(normalize_term("", &rules, &vocab), None);
    }

    #[test]
    fn plural_merges_only_when_singular_attested() {
        let rules = NormalizationRules::standard();
        let vocab: BTreeSet<String> = ["algorithm".to_owned(), "ethics".to_owned()].into();
        assert_eq!(
            normalize_term("algorithms", &rules, &vocab).as_deref(),
            Some("algorithm")
        );
        // "ethic" is not attested, so "ethics" stays plural.
        assert_eq!(
            normalize_term("ethics", &rules, &vocab).as_deref(),
            Some("ethics")
        );
    }

    #[test]
    fn ies_maps_to_y() {
        let rules = NormalizationRules::standard();
        let vocab: BTreeSet<String> = ["case study".to_owned()].into();
        assert_eq!(
            normalize_term("case studies", &rules, &vocab).as_deref(),
            Some("case study")
        );
    }

    #[test]
    fn thesaurus_applies_before_plural() {
        let thesaurus = load_thesaurus(b"chat-gpt\tchatgpt\n").unwrap();
        let rules = NormalizationRules::standard().with_thesaurus(thesaurus);
        let vocab = BTreeSet::new();
        assert_eq!(
            normalize_term("Chat-GPT", &rules, &vocab).as_deref(),
            Some("chatgpt")
        );
    }

    #[test]
    fn identity_thesaurus_entry_keeps_term() {
        // "ai" stays "ai": merging it into "artificial intelligence" takes
        // an explicit thesaurus entry, never a default rule.
        let thesaurus = load_thesaurus(b"ai\tai\n").unwrap();
        let rules = NormalizationRules::standard().with_thesaurus(thesaurus);
        let vocab: BTreeSet<String> = ["artificial intelligence".to_owned()].into();
        assert_eq!(normalize_term("AI", &rules, &vocab).as_deref(), Some("ai"));
    }

    #[test]
    fn plural_can_match_thesaurus_canonical() {
        let thesaurus = load_thesaurus(b"algorithmic system\talgorithm\n").unwrap();
        let rules = NormalizationRules::standard().with_thesaurus(thesaurus);
        let vocab = BTreeSet::new();
        assert_eq!(
            normalize_term("algorithms", &rules, &vocab).as_deref(),
            Some("algorithm")
        );
    }

    #[test]
    fn thesaurus_chain_rejected() {
        let err = load_thesaurus(b"a\tb\nb\tc\n").unwrap_err();
        assert_eq!(
            err,
            ThesaurusError::ChainDetected {
                canonical: "b".into(),
                maps_to: "c".into()
            }
        );
    }

    #[test]
    fn thesaurus_duplicate_variant_rejected() {
        let err = load_thesaurus(b"a\tb\na\tc\n").unwrap_err();
        assert!(matches!(err, ThesaurusError::DuplicateVariant { .. }));
    }

    #[test]
    fn thesaurus_comments_blanks_and_repeats() {
        let thesaurus =
            load_thesaurus(b"# comment\n\nChat-GPT\tchatgpt\nchat-gpt\tchatgpt\n").unwrap();
        assert_eq!(thesaurus.len(), 1);
        assert_eq!(thesaurus.lookup("chat-gpt"), Some("chatgpt"));
    }

    #[test]
    fn empty_thesaurus() {
        assert!(load_thesaurus(b"").unwrap().is_empty());
    }

    #[test]
    fn mini_corpus_frequencies() {
        let index = build_index(
            &mini_corpus(),
            KeywordField::Author,
            &NormalizationRules::standard(),
        );
        assert_eq!(index.frequency("ai"), 4);
        assert_eq!(index.frequency("journalism"), 3);
        assert_eq!(index.frequency("ethics"), 3);
        assert_eq!(index.frequency("chatgpt"), 2);
        assert_eq!(index.frequency("generative ai"), 2);
        assert_eq!(index.len(), 5);
        assert_eq!(index.doc_count(), 6);
    }

    #[test]
    fn per_document_duplicates_collapse() {
        let corpus = corpus_from_keyword_sets(&[&["AI", "ai"]]);
        let index = build_index(
            &corpus,
            KeywordField::Author,
            &NormalizationRules::standard(),
        );
        assert_eq!(index.frequency("ai"), 1);
        assert_eq!(index.postings("ai"), Some(&[0usize][..]));
    }

    #[test]
    fn empty_corpus_empty_index() {
        let index = build_index(
            &Corpus::default(),
            KeywordField::Author,
            &NormalizationRules::standard(),
        );
        assert!(index.is_empty());
    }

    #[test]
    fn keywords_plus_field_selectable() {
        let text = "DE\tID\nauthor kw\tPLUS KW\n";
        let corpus = parse_wos_tabdelimited(text.as_bytes(), "f.tab").unwrap();
        let index = build_index(&corpus, KeywordField::Plus, &NormalizationRules::standard());
        assert_eq!(index.frequency("plus kw"), 1);
        assert_eq!(index.frequency("author kw"), 0);
    }

    #[test]
    fn ranking_breaks_ties_lexicographically() {
        let index = build_index(
            &mini_corpus(),
            KeywordField::Author,
            &NormalizationRules::standard(),
        );
        let top3 = rank_keywords(&index, 3);
        assert_eq!(
            top3,
            vec![
                ("ai".to_owned(), 4),
                ("ethics".to_owned(), 3),
                ("journalism".to_owned(), 3)
            ]
        );
    }

    #[test]
    fn ranking_larger_than_vocabulary_is_full() {
        let index = build_index(
            &mini_corpus(),
            KeywordField::Author,
            &NormalizationRules::standard(),
        );
        assert_eq!(rank_keywords(&index, 100).len(), 5);
    }

    proptest! {
        /// The rule chain is a fixed point: normalizing twice equals once.
        #[test]
        fn normalization_is_idempotent(
            raw in "[ A-Za-z.;:,]{0,24}",
            vocab in proptest::collection::btree_set("[a-z]{1,8}", 0..8),
        ) {
            let rules = NormalizationRules::standard();
            if let Some(once) = normalize_term(&raw, &rules, &vocab) {
                let twice = normalize_term(&once, &rules, &vocab);
                prop_assert_eq!(twice.as_deref(), Some(once.as_str()));
            }
        }

        /// Frequencies never depend on record order.
        #[test]
        fn index_is_permutation_invariant(order in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
            let corpus = mini_corpus();
            let reordered = Corpus {
                records: order.iter().map(|&i| corpus.records[i].clone()).collect(),
                ..Corpus::default()
            };
            let rules = NormalizationRules::standard();
            let a = build_index(&corpus, KeywordField::Author, &rules);
            let b = build_index(&reordered, KeywordField::Author, &rules);
            let fa: Vec<(String, u64)> = a.terms().map(|(t, f)| (t.to_owned(), f)).collect();
            let fb: Vec<(String, u64)> = b.terms().map(|(t, f)| (t.to_owned(), f)).collect();
            prop_assert_eq!(fa, fb);
            prop_assert_eq!(rank_keywords(&a, 10), rank_keywords(&b, 10));
        }
    }
}
