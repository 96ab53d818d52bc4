#![forbid(unsafe_code)]

//! Deterministic co-word analysis for science mapping.
//!
//! The crate turns Web of Science export files into strategic diagrams:
//!
//! 1. [`wos`] parses field-tagged plain text and tab-delimited exports,
//!    merges corpora, and computes descriptive statistics.
//! 2. [`norm`] normalizes raw keywords (case, whitespace, plurals,
//!    thesaurus) and builds the keyword-to-documents index.
//! 3. [`net`] prunes low-frequency terms and builds the co-occurrence
//!    network weighted with the equivalence index.
//! 4. [`cluster`] partitions the network into themes with a deterministic
//!    simple-centers algorithm.
//! 5. [`strategic`] computes Callon centrality and density, places themes
//!    into quadrants, and classifies the field.
//! 6. [`render`] serializes maps and networks to SVG, JSON, DOT and CSV.
//!
//! There is no randomness anywhere in the pipeline; identical inputs
//! produce byte-identical outputs.

pub mod cluster;
pub mod net;
pub mod norm;
pub mod render;
pub mod strategic;
pub mod wos;

#[cfg(test)]
pub(crate) mod testutil;

pub use cluster::{simple_centers, ClusterParams, DocCountMode, Theme};
pub use net::{build_network, CoWordNetwork, EdgeWeight, TermPair};
pub use norm::{
    build_index, load_thesaurus, normalize_term, rank_keywords, KeywordField, KeywordIndex,
    NormalizationRules, Thesaurus,
};
pub use render::{
    export_map_csv, export_network_csv, export_network_dot, export_ranking_csv, export_report_json,
    render_map_svg, RenderOptions,
};
pub use strategic::{
    build_strategic_map, classify_quadrant, FieldCategory, OriginMode, Quadrant, StrategicMap,
};
pub use wos::{
    corpus_stats, merge_corpora, parse_wos_plaintext, parse_wos_tabdelimited, Corpus, CorpusStats,
    Record,
};
