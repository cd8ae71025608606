//! Summary statistics and relative factors.
//!
//! Pure functions over immutable inputs. All samples enter the statistics —
//! no outlier rejection; large sample sizes are the intended compensation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::SampleSet;

/// Five-number summary of one sample set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    /// Arithmetic mean, seconds.
    pub mean: f64,
    /// Sample standard deviation (n-1 denominator); 0 when n == 1.
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

/// One comparison row: summary plus factor relative to the fastest variant.
/// The baseline row has `relative` exactly 1.0 and no sigma; every other row
/// carries a propagated uncertainty, even when it is 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub variant_name: String,
    pub stats: SummaryStats,
    pub relative: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_sigma: Option<f64>,
}

/// Mean, sample stddev, min, max over the set. Errors on an empty set.
pub fn summarize(set: &SampleSet) -> Result<SummaryStats> {
    let samples = &set.samples;
    if samples.is_empty() {
        return Err(Error::Validation(format!(
            "variant '{}': cannot summarize an empty sample set",
            set.variant_name
        )));
    }
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let stddev = if n == 1 {
        0.0
    } else {
        (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    };
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(SummaryStats {
        mean,
        stddev,
        min,
        max,
        n,
    })
}

/// Computes factors relative to the fastest variant (smallest mean; ties
/// broken by lexicographic variant name, so results are deterministic under
/// input permutation). Input order is preserved in the output.
///
/// For a non-baseline row, `relative = mean / mean_base` and the uncertainty
/// follows independent-ratio error propagation:
/// `sigma = relative * sqrt((stddev/mean)^2 + (stddev_base/mean_base)^2)`.
pub fn relativize(rows: &[(String, SummaryStats)]) -> Result<Vec<SummaryRow>> {
    if rows.is_empty() {
        return Err(Error::Validation(
            "relativize requires at least one variant".to_string(),
        ));
    }
    for (name, stats) in rows {
        if stats.mean.is_nan() || stats.mean <= 0.0 {
            return Err(Error::Validation(format!(
                "variant '{name}': mean must be positive to compute relative factors"
            )));
        }
    }

    let base_index = (0..rows.len())
        .min_by(|&a, &b| {
            rows[a]
                .1
                .mean
                .partial_cmp(&rows[b].1.mean)
                .expect("means are finite")
                .then_with(|| rows[a].0.cmp(&rows[b].0))
        })
        .expect("rows is non-empty");
    let base = rows[base_index].1;

    Ok(rows
        .iter()
        .enumerate()
        .map(|(i, (name, stats))| {
            if i == base_index {
                SummaryRow {
                    variant_name: name.clone(),
                    stats: *stats,
                    relative: 1.0,
                    relative_sigma: None,
                }
            } else {
                let relative = stats.mean / base.mean;
                let sigma = relative
                    * ((stats.stddev / stats.mean).powi(2) + (base.stddev / base.mean).powi(2))
                        .sqrt();
                SummaryRow {
                    variant_name: name.clone(),
                    stats: *stats,
                    relative,
                    relative_sigma: Some(sigma),
                }
            }
        })
        .collect())
}
