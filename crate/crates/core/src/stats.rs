//! Paired t-tests and sample summaries.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::special::student_t_two_tailed;

/// Significance marker: `**` for p < 0.01, `*` for p < 0.05.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stars {
    None,
    One,
    Two,
}

impl Stars {
    pub fn from_p(p: f64) -> Self {
        if p < 0.01 {
            Stars::Two
        } else if p < 0.05 {
            Stars::One
        } else {
            Stars::None
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stars::None => "",
            Stars::One => "*",
            Stars::Two => "**",
        }
    }
}

impl fmt::Display for Stars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Stars {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Why a test fell back to a conventional value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    /// All differences equal and non-zero: reported as p = 0.
    ConstantNonzeroDifference,
    /// All differences zero: reported as t = 0, p = 1.
    AllDifferencesZero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TTestResult {
    pub n_pairs: usize,
    pub mean_diff: f64,
    pub sd_diff: f64,
    pub t: f64,
    pub df: usize,
    pub p_two_tailed: f64,
    pub stars: Stars,
    pub degenerate: Option<Degeneracy>,
}

/// Student t-test on `case_i - control_i`, two-tailed, `df = n - 1`.
pub fn paired_t_test(case_values: &[f64], control_values: &[f64]) -> Result<TTestResult> {
    if case_values.len() != control_values.len() {
        return Err(Error::InvalidArgument(format!(
            "paired samples differ in length ({} vs {})",
            case_values.len(),
            control_values.len()
        )));
    }
    let n = case_values.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "paired t-test needs at least 2 pairs (got {n})"
        )));
    }
    let diffs: Vec<f64> = case_values
        .iter()
        .zip(control_values)
        .map(|(a, b)| a - b)
        .collect();
    let mean_diff = mean(&diffs);
    let sd_diff = sample_sd(&diffs, mean_diff);
    let df = n - 1;

    let (t, p, degenerate) = if sd_diff == 0.0 {
        if mean_diff == 0.0 {
            (0.0, 1.0, Some(Degeneracy::AllDifferencesZero))
        } else {
            let t = f64::INFINITY.copysign(mean_diff);
            (t, 0.0, Some(Degeneracy::ConstantNonzeroDifference))
        }
    } else {
        let t = mean_diff / (sd_diff / (n as f64).sqrt());
        (t, student_t_two_tailed(t, df as f64)?, None)
    };

    Ok(TTestResult {
        n_pairs: n,
        mean_diff,
        sd_diff,
        t,
        df,
        p_two_tailed: p,
        stars: Stars::from_p(p),
        degenerate,
    })
}

/// Sample mean and `n - 1` standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupSummary {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
}

impl GroupSummary {
    /// `mean±sd`, e.g. `88.64±98.30`.
    pub fn display(&self, decimals: usize) -> String {
        format!("{:.*}±{:.*}", decimals, self.mean, decimals, self.sd)
    }
}

pub fn summarize_group(values: &[f64]) -> Result<GroupSummary> {
    if values.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot summarize an empty sample".into(),
        ));
    }
    let m = mean(values);
    let sd = if values.len() == 1 {
        0.0
    } else {
        sample_sd(values, m)
    };
    Ok(GroupSummary {
        n: values.len(),
        mean: m,
        sd,
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_sd(xs: &[f64], mean: f64) -> f64 {
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}
