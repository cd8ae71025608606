//! Suite configuration: a TOML file with a `[protocol]` section, repeated
//! `[[variant]]` blocks, and an optional `[output]` section.
//!
//! ```toml
//! title = "startup"
//!
//! [protocol]
//! warmups = 5
//! iterations = 50
//! prepare = ["sh", "-c", "sync"]
//! high_priority = true
//! cpu_set = [2, 3]
//!
//! [output]
//! formats = ["markdown", "json"]
//! dir = "results"
//!
//! [[variant]]
//! name = "native"
//! argv = ["./noop"]
//! ```

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{ExecutionVariant, MeasurementProtocol};

/// Report kinds a suite can emit; each writes one file into the output
/// directory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Markdown,
    Csv,
    Json,
    Boxplot,
}

impl OutputFormat {
    pub fn file_name(self) -> &'static str {
        match self {
            OutputFormat::Markdown => "report.md",
            OutputFormat::Csv => "report.csv",
            OutputFormat::Json => "report.json",
            OutputFormat::Boxplot => "boxplot.json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text {
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "boxplot" => Ok(OutputFormat::Boxplot),
            other => Err(Error::Validation(format!(
                "unknown output format '{other}' (expected markdown, csv, json, or boxplot)"
            ))),
        }
    }
}

/// A benchmark suite: the measurement protocol, the variant matrix, and
/// where results go.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub title: String,
    pub protocol: MeasurementProtocol,
    pub variants: Vec<ExecutionVariant>,
    pub outputs: BTreeSet<OutputFormat>,
    pub output_dir: PathBuf,
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        self.protocol.validate()?;
        if self.variants.is_empty() {
            return Err(Error::Validation(
                "config needs at least one [[variant]]".to_string(),
            ));
        }
        let mut seen = BTreeSet::new();
        for variant in &self.variants {
            variant.validate()?;
            if !seen.insert(variant.name.as_str()) {
                return Err(Error::Validation(format!(
                    "duplicate variant name '{}'",
                    variant.name
                )));
            }
        }
        if self.outputs.is_empty() {
            return Err(Error::Validation(
                "at least one output format is required".to_string(),
            ));
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    title: Option<String>,
    #[serde(default)]
    protocol: MeasurementProtocol,
    #[serde(default)]
    output: RawOutput,
    #[serde(default, rename = "variant")]
    variants: Vec<ExecutionVariant>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    formats: Option<Vec<OutputFormat>>,
    dir: Option<PathBuf>,
}

pub fn load_config(path: &Path) -> Result<SuiteConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read config '{}': {e}", path.display())))?;
    parse_config(&text)
}

/// Parses and validates configuration text. TOML parse errors keep their
/// line/column context; defaults: title "Benchmark results", markdown-only
/// output into the current directory.
pub fn parse_config(text: &str) -> Result<SuiteConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| Error::Validation(format!("invalid config: {e}")))?;
    let config = SuiteConfig {
        title: raw.title.unwrap_or_else(|| "Benchmark results".to_string()),
        protocol: raw.protocol,
        variants: raw.variants,
        outputs: raw
            .output
            .formats
            .map(|formats| formats.into_iter().collect())
            .unwrap_or_else(|| BTreeSet::from([OutputFormat::Markdown])),
        output_dir: raw.output.dir.unwrap_or_else(|| PathBuf::from(".")),
    };
    config.validate()?;
    Ok(config)
}
