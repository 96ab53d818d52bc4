//! Keyword co-occurrence networks.
//!
//! Nodes are canonical terms with their document frequencies; an
//! undirected edge between two terms counts the documents in which both
//! appear and carries the equivalence weight e_ij = c_ij^2 / (c_i * c_j).
//! Low-frequency terms are pruned before counting.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::norm::KeywordIndex;

/// An unordered pair of distinct terms, stored in lexicographic order so
/// that the pair itself has a total order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TermPair {
    first: String,
    second: String,
}

impl TermPair {
    /// Builds the pair, ordering the two terms. The terms must differ:
    /// co-occurrence networks have no self-edges.
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        let (a, b) = (a.into(), b.into());
        assert_ne!(a, b, "self-edges are not representable");
        if a <= b {
            TermPair {
                first: a,
                second: b,
            }
        } else {
            TermPair {
                first: b,
                second: a,
            }
        }
    }

    pub fn first(&self) -> &str {
        &self.first
    }

    pub fn second(&self) -> &str {
        &self.second
    }

    pub fn contains(&self, term: &str) -> bool {
        self.first == term || self.second == term
    }

    /// The pair member that is not `term`, if `term` is a member.
    pub fn other(&self, term: &str) -> Option<&str> {
        if self.first == term {
            Some(&self.second)
        } else if self.second == term {
            Some(&self.first)
        } else {
            None
        }
    }
}

/// Edge payload: raw document co-occurrence count and equivalence weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeWeight {
    pub cooccurrence: u64,
    pub equivalence: f64,
}

/// The co-word network over terms surviving the frequency threshold.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoWordNetwork {
    /// Term -> document frequency c_i.
    pub nodes: BTreeMap<String, u64>,
    pub edges: BTreeMap<TermPair, EdgeWeight>,
    /// The pruning threshold this network was built with.
    pub min_frequency: u64,
}

impl CoWordNetwork {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn equivalence(&self, a: &str, b: &str) -> Option<f64> {
        self.edges.get(&TermPair::new(a, b)).map(|w| w.equivalence)
    }
}

/// Arguments outside the equivalence-index domain.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("equivalence index out of domain: c_ij={cij}, c_i={ci}, c_j={cj}")]
pub struct DomainError {
    pub cij: u64,
    pub ci: u64,
    pub cj: u64,
}

/// Network construction parameters. `min_cooccurrence` is an optional
/// extra edge cutoff; the default of 1 keeps every co-occurring pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkParams {
    pub min_frequency: u64,
    pub min_cooccurrence: u64,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams {
            min_frequency: 3,
            min_cooccurrence: 1,
        }
    }
}

/// Equivalence index e_ij = c_ij^2 / (c_i * c_j), in [0, 1].
///
/// Requires c_i >= c_ij, c_j >= c_ij and both frequencies nonzero; a pair
/// cannot co-occur more often than either term occurs.
pub fn equivalence_index(cij: u64, ci: u64, cj: u64) -> Result<f64, DomainError> {
    if ci == 0 || cj == 0 || cij > ci || cij > cj {
        return Err(DomainError { cij, ci, cj });
    }
    Ok((cij as f64 * cij as f64) / (ci as f64 * cj as f64))
}

/// Keeps exactly the terms with frequency >= `min_freq`; postings are
/// untouched.
pub fn prune_by_frequency(index: &KeywordIndex, min_freq: u64) -> KeywordIndex {
    let terms: BTreeMap<String, Vec<usize>> = index
        .iter()
        .filter(|(_, postings)| postings.len() as u64 >= min_freq)
        .map(|(term, postings)| (term.to_owned(), postings.to_vec()))
        .collect();
    KeywordIndex::from_postings(terms, index.doc_count())
}

/// Document-level co-occurrence counts: c_ij = |postings(i) n postings(j)|
/// for every pair with a nonempty intersection. A pair counts once per
/// document however often the keywords repeat inside it.
pub fn count_cooccurrences(index: &KeywordIndex) -> BTreeMap<TermPair, u64> {
    // Invert to document -> terms; index iteration is lexicographic, so
    // each document's term list comes out sorted and pairs are ordered.
    let mut docs: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for (term, postings) in index.iter() {
        for &doc in postings {
            docs.entry(doc).or_default().push(term);
        }
    }

    let mut counts: BTreeMap<TermPair, u64> = BTreeMap::new();
    for terms in docs.values() {
        for (i, a) in terms.iter().enumerate() {
            for b in &terms[i + 1..] {
                *counts.entry(TermPair::new(*a, *b)).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Builds the co-word network: prune by frequency, count co-occurrences,
/// weight edges with the equivalence index.
pub fn build_network(index: &KeywordIndex, min_freq: u64) -> CoWordNetwork {
    build_network_with(
        index,
        &NetworkParams {
            min_frequency: min_freq,
            min_cooccurrence: 1,
        },
    )
}

/// `build_network` with an explicit parameter set.
pub fn build_network_with(index: &KeywordIndex, params: &NetworkParams) -> CoWordNetwork {
    let pruned = prune_by_frequency(index, params.min_frequency);
    let nodes: BTreeMap<String, u64> = pruned.terms().map(|(t, f)| (t.to_owned(), f)).collect();

    let edges = count_cooccurrences(&pruned)
        .into_iter()
        .filter(|(_, count)| *count >= params.min_cooccurrence)
        .map(|(pair, cooccurrence)| {
            let ci = nodes[pair.first()];
            let cj = nodes[pair.second()];
            let equivalence = equivalence_index(cooccurrence, ci, cj)
                .expect("counts bounded by frequencies by construction");
            (
                pair,
                EdgeWeight {
                    cooccurrence,
                    equivalence,
                },
            )
        })
        .collect();

    CoWordNetwork {
        nodes,
        edges,
        min_frequency: params.min_frequency,
    }
}
