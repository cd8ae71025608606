//! Spawning and timing child processes.
//!
//! Strictly sequential: exactly one child is alive at a time, and the
//! prepare hook runs before every single execution — warmups included — so
//! warmup and timed iterations see an identical environment.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named command template: one row of a benchmark matrix. The harness
/// treats the command as opaque — container engines, bytecode runtimes and
/// native binaries are all just argv.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExecutionVariant {
    pub name: String,
    /// Program and arguments. With `use_shell` the tokens are joined with
    /// spaces and passed to `sh -c`.
    pub argv: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workdir: Option<PathBuf>,
    /// Environment overrides, additive over the inherited environment.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub env: BTreeMap<String, String>,
}

impl ExecutionVariant {
    pub fn new<I, S>(name: impl Into<String>, argv: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ExecutionVariant {
            name: name.into(),
            argv: argv.into_iter().map(Into::into).collect(),
            workdir: None,
            env: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::Validation(
                "variant name must be non-empty".to_string(),
            ));
        }
        if self.argv.is_empty() {
            return Err(Error::Validation(format!(
                "variant '{}' has an empty command",
                self.name
            )));
        }
        Ok(())
    }
}

/// How every variant in a suite is measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeasurementProtocol {
    /// Untimed repetitions before sampling starts.
    pub warmups: u32,
    /// Timed repetitions; at least 1.
    pub iterations: u32,
    /// Command (argv, spawned directly) run before every iteration,
    /// warmups included — e.g. a cache-dropping script.
    pub prepare: Option<Vec<String>>,
    /// Raise scheduler priority for the harness and its children.
    /// Best effort: failure degrades with a warning.
    pub high_priority: bool,
    /// Pin the harness and its children to these logical CPUs. Best effort.
    pub cpu_set: Option<BTreeSet<usize>>,
    /// Run variant commands through `sh -c` instead of spawning argv
    /// directly. Off by default so shell spawn cost cannot pollute
    /// millisecond-scale startup measurements.
    pub use_shell: bool,
    /// Record nonzero exit codes instead of aborting the run.
    pub tolerate_failures: bool,
    /// Echo captured child output to stderr after each run instead of
    /// discarding it.
    pub echo_output: bool,
}

impl Default for MeasurementProtocol {
    fn default() -> Self {
        MeasurementProtocol {
            warmups: 0,
            iterations: 1,
            prepare: None,
            high_priority: false,
            cpu_set: None,
            use_shell: false,
            tolerate_failures: false,
            echo_output: false,
        }
    }
}

impl MeasurementProtocol {
    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::Validation(
                "iterations must be at least 1".to_string(),
            ));
        }
        if let Some(cpus) = &self.cpu_set {
            if cpus.is_empty() {
                return Err(Error::Validation(
                    "cpu_set must be non-empty when present".to_string(),
                ));
            }
        }
        if let Some(prepare) = &self.prepare {
            if prepare.is_empty() {
                return Err(Error::Validation(
                    "prepare command must be non-empty when present".to_string(),
                ));
            }
        }
        Ok(())
    }
}

/// Wall-clock samples for one variant, in execution order. Durations are
/// seconds; one exit code per sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub variant_name: String,
    pub samples: Vec<f64>,
    pub exit_codes: Vec<i32>,
}

/// Runs the variant once and returns (elapsed seconds, exit code).
///
/// The clock is monotonic and starts immediately before the spawn call, so
/// process creation cost — the point of startup benchmarks — is included.
/// Child stdout/stderr are captured into memory, never inherited, so
/// terminal I/O cost cannot differ between variants.
pub fn run_once(variant: &ExecutionVariant, protocol: &MeasurementProtocol) -> Result<(f64, i32)> {
    let mut command = build_command(variant, protocol);
    command
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());

    let start = Instant::now();
    let child = command.spawn().map_err(|e| {
        Error::Execution(format!(
            "variant '{}': failed to spawn '{}': {e}",
            variant.name, variant.argv[0]
        ))
    })?;
    let output = child.wait_with_output().map_err(|e| {
        Error::Execution(format!(
            "variant '{}': failed to wait for child: {e}",
            variant.name
        ))
    })?;
    let elapsed = start.elapsed().as_secs_f64();

    if protocol.echo_output {
        use std::io::Write;
        let stderr = std::io::stderr();
        let mut handle = stderr.lock();
        let _ = handle.write_all(&output.stdout);
        let _ = handle.write_all(&output.stderr);
    }

    Ok((elapsed, exit_code(&output.status)))
}

/// Runs `warmups` untimed repetitions, then `iterations` timed ones, with
/// the prepare hook before every single run. The returned set holds exactly
/// `iterations` samples in execution order; warmup timings are discarded.
///
/// A nonzero child exit aborts with an error naming the iteration unless
/// `tolerate_failures` is set, in which case the exit code is recorded and
/// the run continues. A failing prepare hook always aborts.
pub fn run_benchmark(
    variant: &ExecutionVariant,
    protocol: &MeasurementProtocol,
) -> Result<SampleSet> {
    variant.validate()?;
    protocol.validate()?;

    for i in 0..protocol.warmups {
        run_prepare(variant, protocol, &format!("warmup {}", i + 1))?;
        let (_, code) = run_once(variant, protocol)?;
        if code != 0 && !protocol.tolerate_failures {
            return Err(Error::Execution(format!(
                "variant '{}': warmup {} exited with code {code}",
                variant.name,
                i + 1
            )));
        }
    }

    let mut samples = Vec::with_capacity(protocol.iterations as usize);
    let mut exit_codes = Vec::with_capacity(protocol.iterations as usize);
    for i in 0..protocol.iterations {
        run_prepare(variant, protocol, &format!("iteration {}", i + 1))?;
        let (elapsed, code) = run_once(variant, protocol)?;
        if code != 0 && !protocol.tolerate_failures {
            return Err(Error::Execution(format!(
                "variant '{}': iteration {} exited with code {code}",
                variant.name,
                i + 1
            )));
        }
        samples.push(elapsed);
        exit_codes.push(code);
    }

    Ok(SampleSet {
        variant_name: variant.name.clone(),
        samples,
        exit_codes,
    })
}

fn build_command(variant: &ExecutionVariant, protocol: &MeasurementProtocol) -> Command {
    let mut command = if protocol.use_shell {
        let mut c = Command::new("sh");
        c.arg("-c").arg(variant.argv.join(" "));
        c
    } else {
        let mut c = Command::new(&variant.argv[0]);
        c.args(&variant.argv[1..]);
        c
    };
    if let Some(dir) = &variant.workdir {
        command.current_dir(dir);
    }
    command.envs(&variant.env);
    command
}

fn run_prepare(
    variant: &ExecutionVariant,
    protocol: &MeasurementProtocol,
    phase: &str,
) -> Result<()> {
    let Some(prepare) = &protocol.prepare else {
        return Ok(());
    };
    let output = Command::new(&prepare[0])
        .args(&prepare[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .output()
        .map_err(|e| {
            Error::Execution(format!(
                "variant '{}': failed to spawn prepare hook '{}': {e}",
                variant.name, prepare[0]
            ))
        })?;
    let code = exit_code(&output.status);
    if code != 0 {
        return Err(Error::Execution(format!(
            "variant '{}': prepare hook exited with code {code} before {phase}",
            variant.name
        )));
    }
    Ok(())
}

fn exit_code(status: &std::process::ExitStatus) -> i32 {
    #[cfg(unix)]
    {
        use std::os::unix::process::ExitStatusExt;
        if let Some(signal) = status.signal() {
            return 128 + signal;
        }
    }
    status.code().unwrap_or(-1)
}
