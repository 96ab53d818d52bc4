//! Pipeline configuration: defaults, TOML config file, and command-line
//! flags, merged with precedence flag > file > default. Flag long names
//! are identical to the config keys.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use coword::cluster::{ClusterParams, DocCountMode};
use coword::norm::KeywordField;
use coword::strategic::OriginMode;

use crate::CliError;

/// Artifact kinds accepted in the `[outputs]` section.
pub const OUTPUT_KINDS: [&str; 7] = [
    "stats", "keywords", "dot", "edges", "report", "svg", "manifest",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFormat {
    /// Sniff per file: a tab in the first line means tab-delimited.
    #[default]
    #[value(name = "auto")]
    Auto,
    #[value(name = "plaintext")]
    Plaintext,
    #[value(name = "tabdelimited")]
    Tabdelimited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeywordFieldArg {
    #[default]
    #[value(name = "author")]
    Author,
    #[value(name = "plus")]
    Plus,
}

impl From<KeywordFieldArg> for KeywordField {
    fn from(arg: KeywordFieldArg) -> Self {
        match arg {
            KeywordFieldArg::Author => KeywordField::Author,
            KeywordFieldArg::Plus => KeywordField::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginModeArg {
    #[default]
    #[value(name = "median")]
    Median,
    #[value(name = "mean")]
    Mean,
    /// Requires origin_centrality and origin_density.
    #[value(name = "explicit")]
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocCountModeArg {
    #[default]
    #[value(name = "any_member")]
    AnyMember,
    #[value(name = "freq_sum")]
    FreqSum,
}

impl From<DocCountModeArg> for DocCountMode {
    fn from(arg: DocCountModeArg) -> Self {
        match arg {
            DocCountModeArg::AnyMember => DocCountMode::AnyMember,
            DocCountModeArg::FreqSum => DocCountMode::FreqSum,
        }
    }
}

/// Flags shared by every subcommand. Long names mirror config keys.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Input export file (repeatable).
    #[arg(short = 'i', long = "inputs", value_name = "FILE")]
    pub inputs: Vec<PathBuf>,

    /// TOML configuration file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum, value_name = "FORMAT")]
    pub input_format: Option<InputFormat>,

    #[arg(long, value_enum, value_name = "FIELD")]
    pub keyword_field: Option<KeywordFieldArg>,

    /// Minimum keyword frequency kept in the network (default 3).
    #[arg(long, value_name = "N")]
    pub min_freq: Option<u64>,

    /// Variant->canonical keyword mapping file.
    #[arg(long, value_name = "FILE")]
    pub thesaurus_path: Option<PathBuf>,

    /// Smallest theme kept by clustering (default 3).
    #[arg(long, value_name = "N")]
    pub min_theme_size: Option<usize>,

    /// Largest theme clustering may grow (default 10).
    #[arg(long, value_name = "N")]
    pub max_theme_size: Option<usize>,

    /// Cap on the number of themes seeded.
    #[arg(long, value_name = "N")]
    pub max_themes: Option<usize>,

    #[arg(long, value_enum, value_name = "MODE")]
    pub origin_mode: Option<OriginModeArg>,

    /// Origin centrality for origin_mode=explicit.
    #[arg(long, value_name = "C")]
    pub origin_centrality: Option<f64>,

    /// Origin density for origin_mode=explicit.
    #[arg(long, value_name = "D")]
    pub origin_density: Option<f64>,

    #[arg(long, value_enum, value_name = "MODE")]
    pub doc_count_mode: Option<DocCountModeArg>,

    /// Directory for file outputs (default coword-out).
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    /// Record the wall-clock time in the run manifest (off by default so
    /// reruns are byte-identical).
    #[arg(long)]
    pub stamp: bool,
}

/// The raw shape of the TOML config file; everything optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub inputs: Option<Vec<PathBuf>>,
    pub input_format: Option<InputFormat>,
    pub keyword_field: Option<KeywordFieldArg>,
    pub min_freq: Option<u64>,
    pub thesaurus_path: Option<PathBuf>,
    pub cluster: Option<ClusterSection>,
    pub origin_mode: Option<OriginModeArg>,
    pub origin_centrality: Option<f64>,
    pub origin_density: Option<f64>,
    pub doc_count_mode: Option<DocCountModeArg>,
    pub out_dir: Option<PathBuf>,
    pub outputs: Option<BTreeMap<String, PathBuf>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterSection {
    pub min_theme_size: Option<usize>,
    pub max_theme_size: Option<usize>,
    pub max_themes: Option<usize>,
}

/// The fully resolved pipeline configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub inputs: Vec<PathBuf>,
    pub input_format: InputFormat,
    pub keyword_field: KeywordField,
    pub min_freq: u64,
    pub thesaurus_path: Option<PathBuf>,
    pub cluster: ClusterParams,
    pub origin_mode: OriginMode,
    pub doc_count_mode: DocCountMode,
    pub outputs: BTreeMap<String, PathBuf>,
    pub out_dir: PathBuf,
    pub stamp: bool,
}

fn resolve_against(base: Option<&Path>, path: PathBuf) -> PathBuf {
    match base {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path,
    }
}

/// Merges defaults, the config file (if any), and flags into a validated
/// `PipelineConfig`. Relative paths written in the config file resolve
/// against the config file's directory; flag paths stay as given.
pub fn resolve_config(args: &CommonArgs) -> Result<PipelineConfig, CliError> {
    let (file, config_dir): (FileConfig, Option<PathBuf>) = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            let parsed: FileConfig = toml::from_str(&text)
                .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
            (parsed, path.parent().map(Path::to_path_buf))
        }
        None => (FileConfig::default(), None),
    };
    let base = config_dir.as_deref();

    let inputs: Vec<PathBuf> = if !args.inputs.is_empty() {
        args.inputs.clone()
    } else {
        file.inputs
            .unwrap_or_default()
            .into_iter()
            .map(|p| resolve_against(base, p))
            .collect()
    };
    if inputs.is_empty() {
        return Err(CliError::Usage(
            "no inputs: pass --inputs FILE or set `inputs` in the config file".into(),
        ));
    }

    let thesaurus_path = args
        .thesaurus_path
        .clone()
        .or_else(|| file.thesaurus_path.map(|p| resolve_against(base, p)));

    let file_cluster = file.cluster.unwrap_or_default();
    let defaults = ClusterParams::default();
    let cluster = ClusterParams {
        min_theme_size: args
            .min_theme_size
            .or(file_cluster.min_theme_size)
            .unwrap_or(defaults.min_theme_size),
        max_theme_size: args
            .max_theme_size
            .or(file_cluster.max_theme_size)
            .unwrap_or(defaults.max_theme_size),
        max_themes: args.max_themes.or(file_cluster.max_themes),
    };
    if !cluster.is_valid() {
        return Err(CliError::Usage(format!(
            "invalid cluster sizes: need 1 <= min_theme_size <= max_theme_size, got {} and {}",
            cluster.min_theme_size, cluster.max_theme_size
        )));
    }

    let min_freq = args.min_freq.or(file.min_freq).unwrap_or(3);
    if min_freq == 0 {
        return Err(CliError::Usage("min_freq must be at least 1".into()));
    }

    let origin_mode = match args.origin_mode.or(file.origin_mode).unwrap_or_default() {
        OriginModeArg::Median => OriginMode::Median,
        OriginModeArg::Mean => OriginMode::Mean,
        OriginModeArg::Explicit => {
            let centrality = args.origin_centrality.or(file.origin_centrality);
            let density = args.origin_density.or(file.origin_density);
            match (centrality, density) {
                (Some(centrality), Some(density)) => OriginMode::Explicit {
                    centrality,
                    density,
                },
                _ => {
                    return Err(CliError::Usage(
                        "origin_mode=explicit needs origin_centrality and origin_density".into(),
                    ))
                }
            }
        }
    };

    let outputs: BTreeMap<String, PathBuf> = file.outputs.unwrap_or_default().into_iter().collect();
    for kind in outputs.keys() {
        if !OUTPUT_KINDS.contains(&kind.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown output kind {kind:?}; expected one of {OUTPUT_KINDS:?}"
            )));
        }
    }

    Ok(PipelineConfig {
        inputs,
        input_format: args.input_format.or(file.input_format).unwrap_or_default(),
        keyword_field: args
            .keyword_field
            .or(file.keyword_field)
            .unwrap_or_default()
            .into(),
        min_freq,
        thesaurus_path,
        cluster,
        origin_mode,
        doc_count_mode: args
            .doc_count_mode
            .or(file.doc_count_mode)
            .unwrap_or_default()
            .into(),
        outputs,
        out_dir: args
            .out_dir
            .clone()
            .or_else(|| file.out_dir.map(|p| resolve_against(base, p)))
            .unwrap_or_else(|| PathBuf::from("coword-out")),
        stamp: args.stamp,
    })
}

impl PipelineConfig {
    /// Resolves the path of one output artifact: the `[outputs]` override
    /// when present (relative overrides land in `out_dir`), else the
    /// default file name in `out_dir`.
    pub fn output_path(&self, kind: &str, default_name: &str) -> PathBuf {
        match self.outputs.get(kind) {
            Some(path) if path.is_absolute() => path.clone(),
            Some(path) => self.out_dir.join(path),
            None => self.out_dir.join(default_name),
        }
    }
}
