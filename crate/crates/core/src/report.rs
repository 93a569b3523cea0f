//! Report tables and their text, CSV and JSON renderings.
//!
//! Display rounding: two decimals for means, standard deviations, ratios and
//! dollars per index point; three for projects per index point. Ratio rows
//! divide the rounded cells as printed. Machine-readable outputs elsewhere
//! keep full precision.

use std::str::FromStr;

use serde::Serialize;

use crate::analysis::ProductivityStratum;
use crate::cohort::{Feature, MatchOutcome, StratumTests};
use crate::credit::CreditVector;
use crate::error::{Error, Result};
use crate::funding::{GroupAggregate, Metric, NormalizedRatios, Normalizer};
use crate::oracle::OracleEstimate;

pub const MEAN_DECIMALS: usize = 2;
pub const RATIO_DECIMALS: usize = 2;
pub const DOLLARS_PER_INDEX_DECIMALS: usize = 2;
pub const PROJECTS_PER_INDEX_DECIMALS: usize = 3;

pub const SIGNIFICANCE_LEGEND: &str = "* p<0.05, ** p<0.01 (paired t-test, two-tailed)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportTable {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub footnote: Option<String>,
}

impl ReportTable {
    pub fn new(
        title: impl Into<String>,
        headers: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        Self {
            title: title.into(),
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            footnote: None,
        }
    }

    /// Rows must have one cell per header.
    pub fn push_row(&mut self, row: Vec<String>) {
        assert_eq!(
            row.len(),
            self.headers.len(),
            "row arity does not match the header of `{}`",
            self.title
        );
        self.rows.push(row);
    }

    pub fn with_footnote(mut self, note: impl Into<String>) -> Self {
        self.footnote = Some(note.into());
        self
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Text => self.render_text(),
            TableFormat::Csv => self.render_csv(),
            TableFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("tables serialize");
                s.push('\n');
                s
            }
        }
    }

    fn render_text(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = format!("{}\n", self.title);
        out.push_str(&line(&self.headers));
        out.push('\n');
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&rule.join("  "));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        if let Some(note) = &self.footnote {
            out.push_str(note);
            out.push('\n');
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(TableFormat::Text),
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown table format `{other}` (expected text, csv or json)"
            ))),
        }
    }
}

pub fn round_to(value: f64, decimals: usize) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (value * scale).round() / scale
}

/// Ratio of two cells after each is rounded for display. `None` when the
/// rounded control cell is zero.
pub fn display_ratio(case: f64, control: f64, decimals: usize) -> Option<f64> {
    let denom = round_to(control, decimals);
    (denom != 0.0).then(|| round_to(case, decimals) / denom)
}

fn fmt_fixed(value: f64, decimals: usize) -> String {
    format!("{value:.decimals$}")
}

fn fmt_ratio(r: Option<f64>) -> String {
    r.map_or_else(|| "n/a".to_string(), |r| fmt_fixed(r, RATIO_DECIMALS))
}

/// Whole numbers without decimals, anything else with two.
fn fmt_amount(value: f64) -> String {
    if value.fract() == 0.0 && value.abs() < 1e15 {
        format!("{value:.0}")
    } else {
        fmt_fixed(value, 2)
    }
}

/// Ratio row from per-column means as printed: sample-count ratio followed by
/// one ratio per feature.
pub fn productivity_ratio_row(
    case_n: usize,
    control_n: usize,
    case_means: &[f64],
    control_means: &[f64],
) -> Vec<Option<f64>> {
    std::iter::once(display_ratio(
        case_n as f64,
        control_n as f64,
        RATIO_DECIMALS,
    ))
    .chain(
        case_means
            .iter()
            .zip(control_means)
            .map(|(&a, &b)| display_ratio(a, b, MEAN_DECIMALS)),
    )
    .collect()
}

/// Productivity comparison in the layout of the paired-pool tables: one row
/// per group per stratum, stars on the case cell, and a ratio row for the
/// final stratum.
pub fn productivity_table(
    title: &str,
    case_label: &str,
    control_label: &str,
    strata: &[ProductivityStratum],
) -> ReportTable {
    let headers = ["Stratum", "Group", "Number of Samples"]
        .into_iter()
        .map(str::to_string)
        .chain(Feature::ALL.iter().map(|f| f.label().to_string()));
    let mut table = ReportTable::new(title, headers);
    for s in strata {
        let mut case_row = vec![
            s.label.clone(),
            case_label.to_string(),
            s.case.n.to_string(),
        ];
        for feature in Feature::ALL {
            let stars = s
                .tests
                .iter()
                .find(|t| t.feature == feature)
                .and_then(|t| t.test.as_ref())
                .map_or("", |t| t.stars.as_str());
            case_row.push(format!(
                "{}{stars}",
                s.case.get(feature).display(MEAN_DECIMALS)
            ));
        }
        table.push_row(case_row);

        let mut control_row = vec![
            String::new(),
            control_label.to_string(),
            s.control.n.to_string(),
        ];
        for feature in Feature::ALL {
            control_row.push(s.control.get(feature).display(MEAN_DECIMALS));
        }
        table.push_row(control_row);
    }
    if let Some(last) = strata.last() {
        let ratios = productivity_ratio_row(
            last.case.n,
            last.control.n,
            &last.case.means(),
            &last.control.means(),
        );
        let row = [String::new(), "Ratio".to_string()]
            .into_iter()
            .chain(ratios.into_iter().map(fmt_ratio))
            .collect();
        table.push_row(row);
    }
    table.with_footnote(SIGNIFICANCE_LEGEND)
}

fn normalized_decimals(metric: Metric) -> usize {
    match metric {
        Metric::FundingTotal => DOLLARS_PER_INDEX_DECIMALS,
        Metric::ProjectCount => PROJECTS_PER_INDEX_DECIMALS,
    }
}

/// Ratio row of a funding table: samples, raw metric, then the metric per
/// Pr, Pc and Pc*IF, each from the rounded cells.
pub fn funding_ratio_row(
    metric: Metric,
    ratios: &NormalizedRatios,
    case: &GroupAggregate,
    control: &GroupAggregate,
) -> Vec<Option<f64>> {
    let mut row = vec![display_ratio(
        case.n_people as f64,
        control.n_people as f64,
        RATIO_DECIMALS,
    )];
    for normalizer in Normalizer::ALL {
        let cell = ratios.cell(metric, normalizer);
        let decimals = match normalizer {
            Normalizer::None => 2,
            _ => normalized_decimals(metric),
        };
        row.push(match (cell.case_value, cell.control_value) {
            (Some(a), Some(b)) => display_ratio(a, b, decimals),
            _ => None,
        });
    }
    row
}

/// One metric normalized by each productivity index, per group.
pub fn funding_table(
    title: &str,
    metric: Metric,
    ratios: &NormalizedRatios,
    case: &GroupAggregate,
    control: &GroupAggregate,
) -> ReportTable {
    let headers = [
        "Group".to_string(),
        "Number of Samples".to_string(),
        metric.to_string(),
    ]
    .into_iter()
    .chain(
        Normalizer::ALL
            .iter()
            .filter_map(|n| n.index_name())
            .map(|name| format!("{metric} Normalized by {name}")),
    );
    let mut table = ReportTable::new(title, headers);
    let decimals = normalized_decimals(metric);
    for (agg, is_case) in [(case, true), (control, false)] {
        let mut row = vec![
            agg.group_label.clone(),
            agg.n_people.to_string(),
            fmt_amount(metric.value(agg)),
        ];
        for normalizer in Normalizer::ALL.iter().skip(1) {
            let cell = ratios.cell(metric, *normalizer);
            let v = if is_case {
                cell.case_value
            } else {
                cell.control_value
            };
            row.push(v.map_or_else(|| "n/a".to_string(), |v| fmt_fixed(v, decimals)));
        }
        table.push_row(row);
    }
    let ratio_row = ["Ratio".to_string()]
        .into_iter()
        .chain(
            funding_ratio_row(metric, ratios, case, control)
                .into_iter()
                .map(fmt_ratio),
        )
        .collect();
    table.push_row(ratio_row);

    let errors: Vec<&str> = ratios
        .cells
        .iter()
        .filter(|c| c.metric == metric)
        .filter_map(|c| c.error.as_deref())
        .collect();
    if errors.is_empty() {
        table.with_footnote("Normalization divides group totals by the group's summed index.")
    } else {
        table.with_footnote(format!("n/a: {}", errors.join("; ")))
    }
}

pub fn ttest_table(title: &str, strata: &[StratumTests]) -> ReportTable {
    let mut table = ReportTable::new(
        title,
        [
            "Stratum",
            "Feature",
            "Pairs",
            "Mean diff",
            "SD diff",
            "t",
            "df",
            "p",
            "Stars",
            "Note",
        ],
    );
    for s in strata {
        for ft in &s.tests {
            let mut row = vec![
                s.stratum.clone(),
                ft.feature.label().to_string(),
                s.n_pairs.to_string(),
            ];
            match &ft.test {
                Some(t) => {
                    row.extend([
                        format!("{:.4}", t.mean_diff),
                        format!("{:.4}", t.sd_diff),
                        format!("{:.4}", t.t),
                        t.df.to_string(),
                        format!("{:.4}", t.p_two_tailed),
                        t.stars.to_string(),
                        t.degenerate
                            .map(|d| match d {
                                crate::stats::Degeneracy::AllDifferencesZero => {
                                    "all differences zero"
                                }
                                crate::stats::Degeneracy::ConstantNonzeroDifference => {
                                    "zero variance"
                                }
                            })
                            .unwrap_or("")
                            .to_string(),
                    ]);
                }
                None => {
                    row.extend(std::iter::repeat_n(String::new(), 6));
                    row.push(ft.note.clone().unwrap_or_default());
                }
            }
            table.push_row(row);
        }
    }
    table.with_footnote(SIGNIFICANCE_LEGEND)
}

pub fn pairs_table(title: &str, outcome: &MatchOutcome) -> ReportTable {
    let mut table = ReportTable::new(title, ["case_id", "control_ids", "status"]);
    for p in &outcome.pairs {
        table.push_row(vec![
            p.case_id.clone(),
            p.control_ids.join(";"),
            "matched".into(),
        ]);
    }
    for id in &outcome.unmatched {
        table.push_row(vec![id.clone(), String::new(), "unmatched".into()]);
    }
    table
}

/// Group shares to six decimals, with Monte Carlo columns when given.
pub fn credit_table(credit: &CreditVector, oracle: Option<&OracleEstimate>) -> ReportTable {
    let mut headers = vec!["group", "size", "share"];
    if oracle.is_some() {
        headers.extend(["oracle_mean", "oracle_stderr"]);
    }
    let mut table = ReportTable::new(format!("a-index for pattern {}", credit.pattern()), headers);
    for (i, (&size, &share)) in credit
        .pattern()
        .counts()
        .iter()
        .zip(credit.group_shares())
        .enumerate()
    {
        let mut row = vec![(i + 1).to_string(), size.to_string(), format!("{share:.6}")];
        if let Some(est) = oracle {
            row.push(format!("{:.6}", est.estimate.group_shares()[i]));
            row.push(format!("{:.6}", est.std_errors[i]));
        }
        table.push_row(row);
    }
    if let Some(est) = oracle {
        table = table.with_footnote(format!(
            "oracle: {} accepted of {} draws",
            est.accepted, est.draws
        ));
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_ratio_uses_rounded_cells() {
        assert_eq!(display_ratio(0.022117, 0.010563, 3), Some(0.022 / 0.011));
        assert_eq!(display_ratio(1.0, 0.001, 2), None);
    }

    #[test]
    fn text_render_is_aligned() {
        let mut t = ReportTable::new("T", ["a", "long header"]);
        t.push_row(vec!["xyz".into(), "1".into()]);
        let text = t.render(TableFormat::Text);
        assert_eq!(text, "T\na    long header\n---  -----------\nxyz  1\n");
    }

    #[test]
    fn csv_render_quotes() {
        let mut t = ReportTable::new("T", ["a", "b"]);
        t.push_row(vec!["1,2".into(), "x".into()]);
        assert_eq!(t.render(TableFormat::Csv), "a,b\n\"1,2\",x\n");
    }

    #[test]
    #[should_panic]
    fn ragged_rows_rejected() {
        let mut t = ReportTable::new("T", ["a", "b"]);
        t.push_row(vec!["1".into()]);
    }

    #[test]
    fn amounts() {
        assert_eq!(fmt_amount(20140082.0), "20140082");
        assert_eq!(fmt_amount(12.5), "12.50");
    }
}
