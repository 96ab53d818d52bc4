//! Shared fixtures for the crate's unit tests.

use crate::wos::{Corpus, Record};

pub(crate) fn corpus_from_keyword_sets(sets: &[&[&str]]) -> Corpus {
    let records = sets
        .iter()
        .map(|keywords| Record {
            author_keywords: keywords.iter().map(|s| s.to_string()).collect(),
            ..Record::default()
        })
        .collect();
    Corpus {
        records,
        ..Corpus::default()
    }
}

/// Six documents over five keywords; the hand-traced fixture behind most
/// expected values in this crate's tests.
pub(crate) fn mini_corpus() -> Corpus {
    corpus_from_keyword_sets(&[
        &["ai", "journalism"],
        &["ai", "journalism", "ethics"],
        &["ai", "ethics"],
        &["chatgpt", "generative ai"],
        &["chatgpt", "generative ai", "ai"],
        &["journalism", "ethics"],
    ])
}
