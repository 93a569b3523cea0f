//! Group-level funding totals normalized by accumulated productivity.
//!
//! Normalization divides group sums (total dollars or projects over the sum of
//! an index), not the mean of per-person ratios.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::productivity::ProductivityScores;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundingRecord {
    pub person_id: String,
    pub project_count: u64,
    /// US dollars.
    pub funding_total: f64,
}

impl FundingRecord {
    pub fn new(
        person_id: impl Into<String>,
        project_count: u64,
        funding_total: f64,
    ) -> Result<Self> {
        let r = Self {
            person_id: person_id.into(),
            project_count,
            funding_total,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn none(person_id: impl Into<String>) -> Self {
        Self {
            person_id: person_id.into(),
            project_count: 0,
            funding_total: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.funding_total >= 0.0 && self.funding_total.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "funding total for `{}` must be finite and non-negative",
                self.person_id
            )));
        }
        if self.project_count == 0 && self.funding_total != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "`{}` has funding but no projects",
                self.person_id
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAggregate {
    pub group_label: String,
    pub n_people: usize,
    pub funding_total: f64,
    pub project_count: u64,
    pub pr_sum: f64,
    pub pc_sum: f64,
    pub pcif_sum: f64,
}

/// Field-wise sums over the members, accumulated in `person_id` order.
pub fn aggregate_group(
    members: &[(ProductivityScores, FundingRecord)],
    label: &str,
) -> Result<GroupAggregate> {
    if members.is_empty() {
        return Err(Error::EmptyGroup(label.to_string()));
    }
    let mut ordered: Vec<_> = members.iter().collect();
    ordered.sort_by(|a, b| a.0.person_id.cmp(&b.0.person_id));

    let mut agg = GroupAggregate {
        group_label: label.to_string(),
        n_people: members.len(),
        funding_total: 0.0,
        project_count: 0,
        pr_sum: 0.0,
        pc_sum: 0.0,
        pcif_sum: 0.0,
    };
    for (scores, funding) in ordered {
        if scores.person_id != funding.person_id {
            return Err(Error::InvalidArgument(format!(
                "scores for `{}` paired with funding for `{}`",
                scores.person_id, funding.person_id
            )));
        }
        agg.funding_total += funding.funding_total;
        agg.project_count += funding.project_count;
        agg.pr_sum += scores.pr;
        agg.pc_sum += scores.pc;
        agg.pcif_sum += scores.pcif;
    }
    Ok(agg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    FundingTotal,
    ProjectCount,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::FundingTotal, Metric::ProjectCount];

    pub fn value(self, agg: &GroupAggregate) -> f64 {
        match self {
            Metric::FundingTotal => agg.funding_total,
            Metric::ProjectCount => agg.project_count as f64,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::FundingTotal => "Funding Total",
            Metric::ProjectCount => "Number of Projects",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalizer {
    None,
    Pr,
    Pc,
    Pcif,
}

impl Normalizer {
    pub const ALL: [Normalizer; 4] = [
        Normalizer::None,
        Normalizer::Pr,
        Normalizer::Pc,
        Normalizer::Pcif,
    ];

    /// Divisor for this normalizer; 1 for `None`.
    pub fn sum(self, agg: &GroupAggregate) -> f64 {
        match self {
            Normalizer::None => 1.0,
            Normalizer::Pr => agg.pr_sum,
            Normalizer::Pc => agg.pc_sum,
            Normalizer::Pcif => agg.pcif_sum,
        }
    }

    pub fn index_name(self) -> Option<&'static str> {
        match self {
            Normalizer::None => None,
            Normalizer::Pr => Some("Pr-index"),
            Normalizer::Pc => Some("Pc-index"),
            Normalizer::Pcif => Some("Pc*IF-index"),
        }
    }
}

/// One metric/normalizer column. Values are absent when a divisor is zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioCell {
    pub metric: Metric,
    pub normalizer: Normalizer,
    pub case_value: Option<f64>,
    pub control_value: Option<f64>,
    pub ratio: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedRatios {
    pub case_label: String,
    pub control_label: String,
    pub cells: Vec<RatioCell>,
}

impl NormalizedRatios {
    pub fn cell(&self, metric: Metric, normalizer: Normalizer) -> &RatioCell {
        self.cells
            .iter()
            .find(|c| c.metric == metric && c.normalizer == normalizer)
            .expect("every metric/normalizer combination is present")
    }
}

/// Case/control ratios of `metric_sum / normalizer_sum` for every metric and
/// normalizer. A zero divisor only invalidates its own column.
pub fn normalized_funding(case: &GroupAggregate, control: &GroupAggregate) -> NormalizedRatios {
    let mut cells = Vec::with_capacity(8);
    for metric in Metric::ALL {
        for normalizer in Normalizer::ALL {
            cells.push(ratio_cell(case, control, metric, normalizer));
        }
    }
    NormalizedRatios {
        case_label: case.group_label.clone(),
        control_label: control.group_label.clone(),
        cells,
    }
}

fn ratio_cell(
    case: &GroupAggregate,
    control: &GroupAggregate,
    metric: Metric,
    normalizer: Normalizer,
) -> RatioCell {
    let normalize = |agg: &GroupAggregate| -> std::result::Result<f64, String> {
        let divisor = normalizer.sum(agg);
        if divisor > 0.0 {
            Ok(metric.value(agg) / divisor)
        } else {
            Err(format!(
                "{} sum of group `{}` is zero",
                normalizer.index_name().unwrap_or("normalizer"),
                agg.group_label
            ))
        }
    };
    let mut cell = RatioCell {
        metric,
        normalizer,
        case_value: None,
        control_value: None,
        ratio: None,
        error: None,
    };
    match (normalize(case), normalize(control)) {
        (Ok(a), Ok(b)) => {
            cell.case_value = Some(a);
            cell.control_value = Some(b);
            if b > 0.0 {
                cell.ratio = Some(a / b);
            } else {
                cell.error = Some(format!(
                    "{metric} of group `{}` is zero",
                    control.group_label
                ));
            }
        }
        (a, b) => {
            cell.case_value = a.as_ref().ok().copied();
            cell.control_value = b.as_ref().ok().copied();
            cell.error = a.err().or(b.err());
        }
    }
    cell
}
