//! Simple-centers theme clustering.
//!
//! Themes grow greedily from the strongest links: edges are scanned once
//! in descending equivalence order; an edge between two unassigned terms
//! seeds a theme, an edge from a theme to an unassigned term attaches it
//! while the theme has room. Themes that end up below the minimum size
//! dissolve into the residual set. Every tie is broken by a stated total
//! order, so the partition is identical across runs and platforms.

use std::collections::{BTreeMap, BTreeSet};

use crate::net::{CoWordNetwork, TermPair};
use crate::norm::KeywordIndex;

/// Clustering bounds. The minimum guards against fragment themes; the
/// maximum stops one theme from swallowing the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterParams {
    pub min_theme_size: usize,
    pub max_theme_size: usize,
    pub max_themes: Option<usize>,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams {
            min_theme_size: 3,
            max_theme_size: 10,
            max_themes: None,
        }
    }
}

impl ClusterParams {
    pub fn is_valid(&self) -> bool {
        1 <= self.min_theme_size && self.min_theme_size <= self.max_theme_size
    }
}

/// A disjoint keyword cluster with its link sums.
#[derive(Debug, Clone, PartialEq)]
pub struct Theme {
    pub id: usize,
    /// Member term -> document frequency in the network.
    pub members: BTreeMap<String, u64>,
    /// The most significant member; see [`label_theme`].
    pub label: String,
    /// Member-pair edges with their equivalence weights.
    pub internal_edges: BTreeMap<TermPair, f64>,
    /// Sum of equivalence weights on edges from members to non-members.
    pub external_strength: f64,
    /// Documents linked to the theme; filled from an index, see
    /// [`theme_doc_count`].
    pub doc_count: u64,
    /// Sum of member frequencies.
    pub freq_sum: u64,
}

impl Theme {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Sum of internal-edge equivalence weights.
    pub fn internal_strength(&self) -> f64 {
        self.internal_edges.values().sum()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.members.contains_key(term)
    }
}

/// How to count the documents behind a theme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DocCountMode {
    /// Size of the union of member posting lists.
    #[default]
    AnyMember,
    /// Sum of member frequencies; counts a document once per member it
    /// contains, so it can exceed the corpus size.
    FreqSum,
}

/// Edges sorted for the greedy scan: equivalence descending, then raw
/// co-occurrence descending, then pair ascending. Equal rationals produce
/// bit-equal doubles, so the float comparison is exact and total.
fn sorted_edges(network: &CoWordNetwork) -> Vec<(&TermPair, f64, u64)> {
    let mut edges: Vec<(&TermPair, f64, u64)> = network
        .edges
        .iter()
        .map(|(pair, w)| (pair, w.equivalence, w.cooccurrence))
        .collect();
    edges.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| b.2.cmp(&a.2))
            .then_with(|| a.0.cmp(b.0))
    });
    edges
}

/// Partitions the network into themes plus a residual term set.
///
/// Returned themes carry members, internal edges, external strength, label
/// and frequency sum; `doc_count` starts at zero until a keyword index is
/// consulted. Every network node lands in exactly one theme or in the
/// residual.
pub fn simple_centers(
    network: &CoWordNetwork,
    params: &ClusterParams,
) -> (Vec<Theme>, BTreeSet<String>) {
    debug_assert!(params.is_valid(), "invalid cluster params");

    // Pass 1: membership by greedy scan.
    let mut assignment: BTreeMap<&str, usize> = BTreeMap::new();
    let mut groups: Vec<BTreeSet<&str>> = Vec::new();
    for (pair, _, _) in sorted_edges(network) {
        let (a, b) = (pair.first(), pair.second());
        match (assignment.get(a).copied(), assignment.get(b).copied()) {
            (None, None) => {
                if params.max_themes.is_none_or(|cap| groups.len() < cap) {
                    let id = groups.len();
                    groups.push(BTreeSet::from([a, b]));
                    assignment.insert(a, id);
                    assignment.insert(b, id);
                }
            }
            (Some(theme), None) => {
                if groups[theme].len() < params.max_theme_size {
                    groups[theme].insert(b);
                    assignment.insert(b, theme);
                }
            }
            (None, Some(theme)) => {
                if groups[theme].len() < params.max_theme_size {
                    groups[theme].insert(a);
                    assignment.insert(a, theme);
                }
            }
            (Some(_), Some(_)) => {}
        }
    }

    // Pass 2: dissolve undersized themes; survivors keep seeding order.
    let mut survivor_of: BTreeMap<&str, usize> = BTreeMap::new();
    let mut members_of: Vec<&BTreeSet<&str>> = Vec::new();
    for group in &groups {
        if group.len() >= params.min_theme_size {
            let id = members_of.len();
            for &term in group {
                survivor_of.insert(term, id);
            }
            members_of.push(group);
        }
    }
    let residual: BTreeSet<String> = network
        .nodes
        .keys()
        .filter(|term| !survivor_of.contains_key(term.as_str()))
        .cloned()
        .collect();

    // Pass 3: link sums from the settled membership. An edge inside a
    // theme is internal; an edge with exactly one endpoint in a theme
    // counts toward that theme's external strength, whether the far end
    // sits in another theme or in the residual.
    let mut internal: Vec<BTreeMap<TermPair, f64>> = vec![BTreeMap::new(); members_of.len()];
    let mut external: Vec<f64> = vec![0.0; members_of.len()];
    for (pair, weight) in &network.edges {
        let ta = survivor_of.get(pair.first()).copied();
        let tb = survivor_of.get(pair.second()).copied();
        match (ta, tb) {
            (Some(x), Some(y)) if x == y => {
                internal[x].insert(pair.clone(), weight.equivalence);
            }
            (Some(x), Some(y)) => {
                external[x] += weight.equivalence;
                external[y] += weight.equivalence;
            }
            (Some(x), None) | (None, Some(x)) => {
                external[x] += weight.equivalence;
            }
            (None, None) => {}
        }
    }

    let themes: Vec<Theme> = members_of
        .iter()
        .enumerate()
        .map(|(id, group)| {
            let members: BTreeMap<String, u64> = group
                .iter()
                .map(|&term| (term.to_owned(), network.nodes[term]))
                .collect();
            let freq_sum = members.values().sum();
            let mut theme = Theme {
                id,
                members,
                label: String::new(),
                internal_edges: internal[id].clone(),
                external_strength: external[id],
                doc_count: 0,
                freq_sum,
            };
            theme.label = label_theme(&theme);
            theme
        })
        .collect();

    (themes, residual)
}

/// The member with the highest internal association: the one maximizing
/// the sum of its internal-edge equivalences, ties broken by higher
/// frequency, then lexicographically ascending.
pub fn label_theme(theme: &Theme) -> String {
    let mut strengths: BTreeMap<&str, f64> =
        theme.members.keys().map(|t| (t.as_str(), 0.0)).collect();
    for (pair, weight) in &theme.internal_edges {
        *strengths
            .get_mut(pair.first())
            .expect("internal edge endpoint is a member") += weight;
        *strengths
            .get_mut(pair.second())
            .expect("internal edge endpoint is a member") += weight;
    }

    let mut best: Option<(&str, f64, u64)> = None;
    for (term, strength) in &strengths {
        let freq = theme.members[*term];
        let better = match best {
            None => true,
            Some((_, best_strength, best_freq)) => {
                match strength.total_cmp(&best_strength) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    // Lexicographic iteration order settles full ties.
                    std::cmp::Ordering::Equal => freq > best_freq,
                }
            }
        };
        if better {
            best = Some((term, *strength, freq));
        }
    }
    best.map(|(term, _, _)| term.to_owned()).unwrap_or_default()
}

/// Documents linked to a theme, under the chosen counting mode.
pub fn theme_doc_count(theme: &Theme, index: &KeywordIndex, mode: DocCountMode) -> u64 {
    match mode {
        DocCountMode::AnyMember => {
            let mut docs: BTreeSet<usize> = BTreeSet::new();
            for term in theme.members.keys() {
                if let Some(postings) = index.postings(term) {
                    docs.extend(postings.iter().copied());
                }
            }
            docs.len() as u64
        }
        DocCountMode::FreqSum => theme.members.keys().map(|t| index.frequency(t)).sum(),
    }
}
