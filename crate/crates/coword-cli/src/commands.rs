//! Subcommand implementations. Each command is a deterministic function
//! of its inputs and configuration; file-writing commands also drop a run
//! manifest next to their outputs.

use std::path::{Path, PathBuf};

use clap::ValueEnum;

use coword::cluster::{simple_centers, Theme};
use coword::net::{build_network, CoWordNetwork};
use coword::norm::{
    build_index, load_thesaurus, rank_keywords, KeywordField, KeywordIndex, NormalizationRules,
};
use coword::render::{
    export_network_csv, export_network_dot, export_ranking_csv, export_report_json, render_map_svg,
    RenderOptions,
};
use coword::strategic::{build_strategic_map, StrategicMap};
use coword::wos::{
    corpus_stats, merge_corpora, parse_wos_plaintext, parse_wos_tabdelimited, Corpus, CorpusStats,
};

use crate::config::{InputFormat, PipelineConfig};
use crate::manifest::{render_manifest, sha256_hex};
use crate::CliError;

/// Output style for the `keywords` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum RankingFormat {
    #[default]
    #[value(name = "text")]
    Text,
    #[value(name = "csv")]
    Csv,
}

/// Inputs after reading and parsing: the merged corpus, per-file digests
/// in processing order, and the resolved normalization rules.
pub struct LoadedInputs {
    pub corpus: Corpus,
    pub input_digests: Vec<(PathBuf, String)>,
    pub thesaurus_digest: Option<String>,
    pub rules: NormalizationRules,
}

fn sniff_format(bytes: &[u8]) -> InputFormat {
    let stripped = bytes.strip_prefix(b"\xef\xbb\xbf").unwrap_or(bytes);
    let first_line = stripped.split(|&b| b == b'\n').next().unwrap_or(&[]);
    if first_line.contains(&b'\t') {
        InputFormat::Tabdelimited
    } else {
        InputFormat::Plaintext
    }
}

/// Reads, parses, and merges the configured inputs. Files are processed
/// in file-name order (ties broken by the full path) so record order
/// never depends on flag order.
pub fn load_inputs(config: &PipelineConfig) -> Result<LoadedInputs, CliError> {
    let mut paths = config.inputs.clone();
    paths.sort_by(|a, b| {
        a.file_name()
            .cmp(&b.file_name())
            .then_with(|| a.as_os_str().cmp(b.as_os_str()))
    });
    paths.dedup();

    let mut corpora = Vec::with_capacity(paths.len());
    let mut input_digests = Vec::with_capacity(paths.len());
    for path in &paths {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Usage(format!("cannot read input {}: {e}", path.display())))?;
        input_digests.push((path.clone(), sha256_hex(&bytes)));
        let format = match config.input_format {
            InputFormat::Auto => sniff_format(&bytes),
            fixed => fixed,
        };
        let name = path.display().to_string();
        let corpus = match format {
            InputFormat::Plaintext => parse_wos_plaintext(&bytes, &name),
            InputFormat::Tabdelimited => parse_wos_tabdelimited(&bytes, &name),
            InputFormat::Auto => unreachable!("auto resolved above"),
        }
        .map_err(|e| CliError::Parse(e.to_string()))?;
        corpora.push(corpus);
    }

    let mut rules = NormalizationRules::standard();
    let mut thesaurus_digest = None;
    if let Some(path) = &config.thesaurus_path {
        let bytes = std::fs::read(path).map_err(|e| {
            CliError::Usage(format!("cannot read thesaurus {}: {e}", path.display()))
        })?;
        thesaurus_digest = Some(sha256_hex(&bytes));
        let thesaurus = load_thesaurus(&bytes)
            .map_err(|e| CliError::Usage(format!("thesaurus {}: {e}", path.display())))?;
        rules = rules.with_thesaurus(thesaurus);
    }

    Ok(LoadedInputs {
        corpus: merge_corpora(corpora),
        input_digests,
        thesaurus_digest,
        rules,
    })
}

fn checked_network(
    config: &PipelineConfig,
    index: &KeywordIndex,
) -> Result<CoWordNetwork, CliError> {
    let network = build_network(index, config.min_freq);
    if network.is_empty() {
        return Err(CliError::EmptyAnalysis(format!(
            "no keywords reach the frequency threshold {}; lower --min-freq",
            config.min_freq
        )));
    }
    Ok(network)
}

fn checked_themes(
    config: &PipelineConfig,
    network: &CoWordNetwork,
) -> Result<Vec<Theme>, CliError> {
    let (themes, _residual) = simple_centers(network, &config.cluster);
    if themes.is_empty() {
        return Err(CliError::EmptyAnalysis(format!(
            "no theme reaches min_theme_size {}; lower --min-theme-size or --min-freq",
            config.cluster.min_theme_size
        )));
    }
    Ok(themes)
}

fn build_map(
    config: &PipelineConfig,
    index: &KeywordIndex,
    themes: Vec<Theme>,
) -> Result<StrategicMap, CliError> {
    build_strategic_map(themes, index, config.origin_mode, config.doc_count_mode)
        .map_err(|e| CliError::EmptyAnalysis(e.to_string()))
}

fn write_artifact(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// Table-shaped plain-text rendering of corpus statistics.
pub fn stats_text(stats: &CorpusStats) -> String {
    let timespan = stats
        .year_span
        .map(|(lo, hi)| format!("{lo}-{hi}"))
        .unwrap_or_else(|| "n/a".to_owned());
    let growth = stats
        .annual_growth_rate_pct
        .map(|g| format!("{g:.2}"))
        .unwrap_or_else(|| "n/a".to_owned());
    let rows = [
        ("Timespan", timespan),
        ("Sources (journals, books)", stats.source_count.to_string()),
        ("Documents", stats.document_count.to_string()),
        ("Annual growth rate %", growth),
        ("Keywords Plus (ID)", stats.keywords_plus_count.to_string()),
        (
            "Author keywords (DE)",
            stats.author_keyword_count.to_string(),
        ),
    ];
    let mut out = String::new();
    for (name, value) in rows {
        out.push_str(&format!("{name:<28}{value}\n"));
    }
    out
}

/// Table-shaped plain-text rendering of a keyword ranking.
pub fn ranking_text(ranking: &[(String, u64)], field: KeywordField) -> String {
    let header = match field {
        KeywordField::Author => "Author keywords",
        KeywordField::Plus => "Keywords Plus",
    };
    let width = ranking
        .iter()
        .map(|(term, _)| term.len())
        .chain([header.len()])
        .max()
        .unwrap_or(0)
        + 2;
    let mut out = format!("{header:<width$}Frequency\n");
    for (term, frequency) in ranking {
        out.push_str(&format!("{term:<width$}{frequency}\n"));
    }
    out
}

/// Prints corpus statistics to stdout.
pub fn cmd_stats(config: &PipelineConfig) -> Result<(), CliError> {
    let loaded = load_inputs(config)?;
    print!("{}", stats_text(&corpus_stats(&loaded.corpus)));
    Ok(())
}

/// Prints the keyword frequency ranking to stdout.
pub fn cmd_keywords(
    config: &PipelineConfig,
    top: usize,
    format: RankingFormat,
) -> Result<(), CliError> {
    if top == 0 {
        return Err(CliError::Usage("--top must be at least 1".into()));
    }
    let loaded = load_inputs(config)?;
    let index = build_index(&loaded.corpus, config.keyword_field, &loaded.rules);
    let ranking = rank_keywords(&index, top);
    match format {
        RankingFormat::Text => print!("{}", ranking_text(&ranking, config.keyword_field)),
        RankingFormat::Csv => print!("{}", export_ranking_csv(&ranking)),
    }
    Ok(())
}

/// Writes the co-occurrence network as DOT and a CSV edge list.
pub fn cmd_network(config: &PipelineConfig) -> Result<(), CliError> {
    let loaded = load_inputs(config)?;
    let index = build_index(&loaded.corpus, config.keyword_field, &loaded.rules);
    let network = checked_network(config, &index)?;

    let dot_path = config.output_path("dot", "network.dot");
    let edges_path = config.output_path("edges", "edges.csv");
    write_artifact(&dot_path, export_network_dot(&network, None).as_bytes())?;
    write_artifact(&edges_path, export_network_csv(&network).as_bytes())?;

    let manifest_path = config.output_path("manifest", "run-manifest.txt");
    let manifest = render_manifest(
        "network",
        config,
        &loaded.input_digests,
        loaded.thesaurus_digest.as_deref(),
        &[("dot", &dot_path), ("edges", &edges_path)],
    );
    write_artifact(&manifest_path, manifest.as_bytes())
}

/// Runs the full pipeline and writes the JSON report and SVG diagram.
pub fn cmd_map(config: &PipelineConfig) -> Result<(), CliError> {
    let loaded = load_inputs(config)?;
    let index = build_index(&loaded.corpus, config.keyword_field, &loaded.rules);
    let network = checked_network(config, &index)?;
    let themes = checked_themes(config, &network)?;
    let map = build_map(config, &index, themes)?;

    let report_path = config.output_path("report", "report.json");
    let svg_path = config.output_path("svg", "map.svg");
    write_artifact(&report_path, export_report_json(&map).as_bytes())?;
    let svg = render_map_svg(&map, &RenderOptions::default()).expect("map has at least one theme");
    write_artifact(&svg_path, svg.as_bytes())?;

    let manifest_path = config.output_path("manifest", "run-manifest.txt");
    let manifest = render_manifest(
        "map",
        config,
        &loaded.input_digests,
        loaded.thesaurus_digest.as_deref(),
        &[("report", &report_path), ("svg", &svg_path)],
    );
    write_artifact(&manifest_path, manifest.as_bytes())
}

/// Runs everything into the output directory: statistics, ranking,
/// network exports, strategic map, and the manifest.
pub fn cmd_analyze(config: &PipelineConfig) -> Result<(), CliError> {
    let loaded = load_inputs(config)?;
    let index = build_index(&loaded.corpus, config.keyword_field, &loaded.rules);

    let stats_path = config.output_path("stats", "stats.txt");
    let keywords_path = config.output_path("keywords", "keywords.csv");
    write_artifact(
        &stats_path,
        stats_text(&corpus_stats(&loaded.corpus)).as_bytes(),
    )?;
    let ranking = rank_keywords(&index, index.len().max(1));
    write_artifact(&keywords_path, export_ranking_csv(&ranking).as_bytes())?;

    let network = checked_network(config, &index)?;
    let themes = checked_themes(config, &network)?;
    let map = build_map(config, &index, themes)?;

    let dot_path = config.output_path("dot", "network.dot");
    let edges_path = config.output_path("edges", "edges.csv");
    let report_path = config.output_path("report", "report.json");
    let svg_path = config.output_path("svg", "map.svg");
    let map_themes: Vec<Theme> = map.themes.iter().map(|(t, _)| t.clone()).collect();
    write_artifact(
        &dot_path,
        export_network_dot(&network, Some(&map_themes)).as_bytes(),
    )?;
    write_artifact(&edges_path, export_network_csv(&network).as_bytes())?;
    write_artifact(&report_path, export_report_json(&map).as_bytes())?;
    let svg = render_map_svg(&map, &RenderOptions::default()).expect("map has at least one theme");
    write_artifact(&svg_path, svg.as_bytes())?;

    let manifest_path = config.output_path("manifest", "run-manifest.txt");
    let manifest = render_manifest(
        "analyze",
        config,
        &loaded.input_digests,
        loaded.thesaurus_digest.as_deref(),
        &[
            ("stats", &stats_path),
            ("keywords", &keywords_path),
            ("dot", &dot_path),
            ("edges", &edges_path),
            ("report", &report_path),
            ("svg", &svg_path),
        ],
    );
    write_artifact(&manifest_path, manifest.as_bytes())
}
