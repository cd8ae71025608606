//! Rendering comparison results: markdown tables, CSV/JSON exports, and
//! Tukey boxplot summaries. No plotting backend — boxplot data is emitted as
//! numbers for any external plotter.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::SampleSet;
use crate::stats::{relativize, summarize, SummaryRow};

/// A full comparison: summary rows sorted ascending by mean, plus the raw
/// samples they were computed from (retained so boxplots and replays never
/// need the original commands).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub title: String,
    pub rows: Vec<SummaryRow>,
    pub samples: BTreeMap<String, SampleSet>,
}

impl ComparisonReport {
    /// Summarizes and relativizes sample sets into a report. Rows are sorted
    /// ascending by mean (ties broken by variant name), so the baseline is
    /// always the first row.
    pub fn from_sample_sets(title: impl Into<String>, sets: &[SampleSet]) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Validation(
                "a report needs at least one sample set".to_string(),
            ));
        }
        let keyed = sets
            .iter()
            .map(|set| Ok((set.variant_name.clone(), summarize(set)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut rows = relativize(&keyed)?;
        rows.sort_by(|a, b| {
            a.stats
                .mean
                .partial_cmp(&b.stats.mean)
                .expect("means are finite")
                .then_with(|| a.variant_name.cmp(&b.variant_name))
        });
        let samples = sets
            .iter()
            .map(|s| (s.variant_name.clone(), s.clone()))
            .collect();
        Ok(ComparisonReport {
            title: title.into(),
            rows,
            samples,
        })
    }

    /// Pipe table in the layout
    /// `Command | Mean [s] | Min [s] | Max [s] | Relative`,
    /// seconds at 3 decimals, relative factors at 2, baseline as bare
    /// `1.00`. Rows are already ascending by mean, baseline first.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        if !self.title.is_empty() {
            out.push_str("# ");
            out.push_str(&self.title);
            out.push_str("\n\n");
        }
        out.push_str("| Command | Mean [s] | Min [s] | Max [s] | Relative |\n");
        out.push_str("|:---|---:|---:|---:|---:|\n");
        for row in &self.rows {
            let relative = match row.relative_sigma {
                None => format!("{:.2}", row.relative),
                Some(sigma) => format!("{:.2} ± {:.2}", row.relative, sigma),
            };
            out.push_str(&format!(
                "| {} | {:.3} ± {:.3} | {:.3} | {:.3} | {} |\n",
                row.variant_name.replace('|', "\\|"),
                row.stats.mean,
                row.stats.stddev,
                row.stats.min,
                row.stats.max,
                relative
            ));
        }
        out
    }

    /// CSV with full float precision (shortest round-trip formatting);
    /// `relative_sigma` is empty for the baseline row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("command,mean,stddev,min,max,relative,relative_sigma\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_field(&row.variant_name),
                row.stats.mean,
                row.stats.stddev,
                row.stats.min,
                row.stats.max,
                row.relative,
                row.relative_sigma
                    .map(|s| s.to_string())
                    .unwrap_or_default()
            ));
        }
        out
    }

    /// Pretty JSON of the whole report, raw samples included. Floats use
    /// shortest round-trip encoding, so parsing the export recovers every
    /// value bit-exactly.
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Validation(format!("invalid report JSON: {e}")))
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Tukey five-number summary of one variant's samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotSummary {
    pub variant_name: String,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    /// Smallest sample within `q1 - 1.5*IQR`.
    pub whisker_low: f64,
    /// Largest sample within `q3 + 1.5*IQR`.
    pub whisker_high: f64,
    /// Samples outside the whiskers, ascending.
    pub outliers: Vec<f64>,
}

/// Tukey convention: quartiles by linear interpolation between order
/// statistics, whiskers at the most extreme samples within 1.5 IQR of the
/// quartile box, everything further out listed as an outlier. The summary
/// partitions the set: samples inside the whiskers plus outliers equal n.
pub fn boxplot_data(set: &SampleSet) -> Result<BoxplotSummary> {
    if set.samples.is_empty() {
        return Err(Error::Validation(format!(
            "variant '{}': cannot build a boxplot from an empty sample set",
            set.variant_name
        )));
    }
    let mut sorted = set.samples.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("samples are finite"));

    let q1 = quantile(&sorted, 0.25);
    let median = quantile(&sorted, 0.5);
    let q3 = quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    let low_fence = q1 - 1.5 * iqr;
    let high_fence = q3 + 1.5 * iqr;

    let mut outliers = Vec::new();
    let mut whisker_low = f64::INFINITY;
    let mut whisker_high = f64::NEG_INFINITY;
    for &x in &sorted {
        if x < low_fence || x > high_fence {
            outliers.push(x);
        } else {
            whisker_low = whisker_low.min(x);
            whisker_high = whisker_high.max(x);
        }
    }
    // the fences contain the quartile box and at least one order statistic
    // always lies inside the box, so the whiskers exist for every input
    debug_assert!(whisker_low.is_finite() && whisker_high.is_finite());

    Ok(BoxplotSummary {
        variant_name: set.variant_name.clone(),
        q1,
        median,
        q3,
        whisker_low,
        whisker_high,
        outliers,
    })
}

/// Quantile by linear interpolation between order statistics: rank
/// h = (n-1)p, interpolating between the samples at floor(h) and ceil(h).
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
