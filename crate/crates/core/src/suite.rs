//! Suite execution: resolve programs up front, apply environment controls,
//! run every variant, and write the requested report files.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::config::{OutputFormat, SuiteConfig};
use crate::environment::apply_environment;
use crate::error::{Error, Result};
use crate::measure::{run_benchmark, SampleSet};
use crate::report::{boxplot_data, ComparisonReport};

/// Locates the executable a variant would spawn, mirroring shell lookup:
/// paths containing a separator resolve against `workdir` (or the current
/// directory), bare names are searched in `PATH`. Returns `None` when
/// nothing suitable exists.
pub fn resolve_program(program: &str, workdir: Option<&Path>) -> Option<PathBuf> {
    let path = Path::new(program);
    if path.components().count() > 1 || path.is_absolute() {
        let candidate = if path.is_absolute() {
            path.to_path_buf()
        } else {
            workdir.unwrap_or_else(|| Path::new(".")).join(path)
        };
        return is_executable(&candidate).then_some(candidate);
    }
    let search = std::env::var_os("PATH")?;
    std::env::split_paths(&search)
        .map(|dir| dir.join(program))
        .find(|candidate| is_executable(candidate))
}

fn is_executable(path: &Path) -> bool {
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        path.metadata()
            .map(|m| m.is_file() && m.permissions().mode() & 0o111 != 0)
            .unwrap_or(false)
    }
    #[cfg(not(unix))]
    {
        path.is_file()
    }
}

/// Runs every variant of the suite and writes the requested reports.
///
/// All programs (including the prepare hook) are resolved before the first
/// measurement so a typo in variant eight cannot waste the runtime of the
/// first seven. If a variant fails mid-run, the sample sets gathered so far
/// are dumped to `partial.json` in the output directory and the error says
/// so. Progress and the environment-control summary go to stderr; reports
/// never do.
pub fn run_suite(config: &SuiteConfig) -> Result<ComparisonReport> {
    config.validate()?;
    for variant in &config.variants {
        let program = if config.protocol.use_shell {
            "sh"
        } else {
            &variant.argv[0]
        };
        if resolve_program(program, variant.workdir.as_deref()).is_none() {
            return Err(Error::Validation(format!(
                "variant '{}': program '{program}' not found",
                variant.name
            )));
        }
    }
    if let Some(prepare) = &config.protocol.prepare {
        if resolve_program(&prepare[0], None).is_none() {
            return Err(Error::Validation(format!(
                "prepare hook: program '{}' not found",
                prepare[0]
            )));
        }
    }

    let environment = apply_environment(&config.protocol);
    eprintln!("environment controls: {}", environment.summary());

    let total = config.variants.len();
    let mut sets = Vec::with_capacity(total);
    for (index, variant) in config.variants.iter().enumerate() {
        eprintln!("[{}/{total}] benchmarking '{}'", index + 1, variant.name);
        match run_benchmark(variant, &config.protocol) {
            Ok(set) => sets.push(set),
            Err(error) => return Err(dump_partial(config, &sets, error)),
        }
    }

    let report = ComparisonReport::from_sample_sets(config.title.clone(), &sets)?;
    write_outputs(&config.outputs, &config.output_dir, &report)?;
    Ok(report)
}

/// Saves completed sample sets next to where the reports would have gone,
/// so an aborted run is not a total loss, and extends the error message
/// with the location.
fn dump_partial(config: &SuiteConfig, sets: &[SampleSet], error: Error) -> Error {
    if sets.is_empty() {
        return error;
    }
    let path = config.output_dir.join("partial.json");
    let payload = serde_json::json!({ "title": config.title, "completed": sets });
    let mut text = serde_json::to_string_pretty(&payload).expect("sample sets serialize");
    text.push('\n');
    if std::fs::create_dir_all(&config.output_dir).is_err() || std::fs::write(&path, text).is_err()
    {
        return error;
    }
    match error {
        Error::Validation(msg) => Error::Validation(format!(
            "{msg}; partial results written to {}",
            path.display()
        )),
        Error::Execution(msg) => Error::Execution(format!(
            "{msg}; partial results written to {}",
            path.display()
        )),
    }
}

/// Writes one file per requested format into `dir` (created if missing) and
/// returns the paths written, in format order.
pub fn write_outputs(
    outputs: &BTreeSet<OutputFormat>,
    dir: &Path,
    report: &ComparisonReport,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| {
        Error::Validation(format!(
            "cannot create output directory '{}': {e}",
            dir.display()
        ))
    })?;
    let mut written = Vec::with_capacity(outputs.len());
    for format in outputs {
        let content = match format {
            OutputFormat::Markdown => report.to_markdown(),
            OutputFormat::Csv => report.to_csv(),
            OutputFormat::Json => report.to_json(),
            OutputFormat::Boxplot => boxplot_json(report)?,
        };
        let path = dir.join(format.file_name());
        std::fs::write(&path, content)
            .map_err(|e| Error::Validation(format!("cannot write '{}': {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

/// Five-number summaries for every variant, ordered like the report rows
/// (ascending mean), as a pretty-printed JSON array.
fn boxplot_json(report: &ComparisonReport) -> Result<String> {
    let summaries = report
        .rows
        .iter()
        .map(|row| {
            let set = report.samples.get(&row.variant_name).ok_or_else(|| {
                Error::Validation(format!("no samples recorded for '{}'", row.variant_name))
            })?;
            boxplot_data(set)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut text = serde_json::to_string_pretty(&summaries).expect("summaries serialize");
    text.push('\n');
    Ok(text)
}

/// Rebuilds a report from a previously written `report.json`. Statistics
/// are recomputed from the embedded samples rather than trusted, so a
/// hand-edited mean cannot survive a replay.
pub fn replay(text: &str) -> Result<ComparisonReport> {
    let stored = ComparisonReport::from_json(text)?;
    let sets: Vec<SampleSet> = stored.samples.into_values().collect();
    ComparisonReport::from_sample_sets(stored.title, &sets)
}
