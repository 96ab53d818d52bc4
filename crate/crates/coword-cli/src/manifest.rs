//! Run manifests: the parameters and input digests behind a set of
//! outputs, as `key: value` lines. Without `--stamp` the manifest is a
//! pure function of the run, so reruns are byte-identical.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::config::{InputFormat, PipelineConfig};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest
        .iter()
        .fold(String::with_capacity(64), |mut hex, byte| {
            use std::fmt::Write;
            let _ = write!(hex, "{byte:02x}");
            hex
        })
}

fn format_name(format: InputFormat) -> &'static str {
    match format {
        InputFormat::Auto => "auto",
        InputFormat::Plaintext => "plaintext",
        InputFormat::Tabdelimited => "tabdelimited",
    }
}

/// Renders the manifest for one command run. `inputs` pairs each path with
/// the SHA-256 of its bytes, in processing order; `outputs` lists the
/// artifacts written, as (kind, path).
pub fn render_manifest(
    command: &str,
    config: &PipelineConfig,
    inputs: &[(PathBuf, String)],
    thesaurus_digest: Option<&str>,
    outputs: &[(&str, &Path)],
) -> String {
    let mut lines = Vec::new();
    lines.push(format!("command: {command}"));
    lines.push(format!("tool: coword {}", env!("CARGO_PKG_VERSION")));
    for (path, digest) in inputs {
        lines.push(format!("input: {} sha256:{digest}", path.display()));
    }
    match (&config.thesaurus_path, thesaurus_digest) {
        (Some(path), Some(digest)) => lines.push(format!(
            "thesaurus_path: {} sha256:{digest}",
            path.display()
        )),
        _ => lines.push("thesaurus_path: none".to_owned()),
    }
    lines.push(format!(
        "input_format: {}",
        format_name(config.input_format)
    ));
    lines.push(format!(
        "keyword_field: {}",
        match config.keyword_field {
            coword::norm::KeywordField::Author => "author",
            coword::norm::KeywordField::Plus => "plus",
        }
    ));
    lines.push(format!("min_freq: {}", config.min_freq));
    lines.push(format!("min_theme_size: {}", config.cluster.min_theme_size));
    lines.push(format!("max_theme_size: {}", config.cluster.max_theme_size));
    lines.push(format!(
        "max_themes: {}",
        config
            .cluster
            .max_themes
            .map_or("none".to_owned(), |n| n.to_string())
    ));
    match config.origin_mode {
        coword::strategic::OriginMode::Explicit {
            centrality,
            density,
        } => lines.push(format!("origin_mode: explicit {centrality} {density}")),
        mode => lines.push(format!("origin_mode: {}", mode.name())),
    }
    lines.push(format!(
        "doc_count_mode: {}",
        match config.doc_count_mode {
            coword::cluster::DocCountMode::AnyMember => "any_member",
            coword::cluster::DocCountMode::FreqSum => "freq_sum",
        }
    ));
    for (kind, path) in outputs {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        lines.push(format!("output: {kind} {name}"));
    }
    if config.stamp {
        let unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        lines.push(format!("generated_at: {unix} (unix seconds)"));
    }
    let mut text = lines.join("\n");
    text.push('\n');
    text
}
