//! Pool-level comparisons built from matched pairs.

use std::collections::HashMap;

use serde::Serialize;

use crate::cohort::{
    stratified_tests, stratify, FacultyRecord, Feature, FeatureTest, Grouping, MatchedPair,
};
use crate::error::{Error, Result};
use crate::funding::{aggregate_group, FundingRecord, GroupAggregate};
use crate::productivity::ProductivityScores;
use crate::stats::{summarize_group, GroupSummary};

/// Per-feature summaries of one group within a stratum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureSummaries {
    pub n: usize,
    pub summaries: Vec<(Feature, GroupSummary)>,
}

impl FeatureSummaries {
    pub fn get(&self, feature: Feature) -> &GroupSummary {
        &self
            .summaries
            .iter()
            .find(|(f, _)| *f == feature)
            .expect("all features summarized")
            .1
    }

    pub fn means(&self) -> Vec<f64> {
        self.summaries.iter().map(|(_, s)| s.mean).collect()
    }
}

/// One stratum of a productivity comparison: individual-level summaries for
/// both groups and paired tests on collapsed pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductivityStratum {
    pub label: String,
    pub case: FeatureSummaries,
    pub control: FeatureSummaries,
    pub tests: Vec<FeatureTest>,
}

/// Summaries and tests for each requested grouping, strata concatenated in
/// the order the groupings are given.
pub fn productivity_comparison(
    pairs: &[MatchedPair],
    roster: &[FacultyRecord],
    scores: &HashMap<String, ProductivityScores>,
    groupings: &[Grouping],
) -> Result<Vec<ProductivityStratum>> {
    let mut out = Vec::new();
    for &grouping in groupings {
        let strata = stratify(pairs, roster, grouping)?;
        let tests = stratified_tests(pairs, roster, scores, grouping)?;
        for (stratum, tested) in strata.into_iter().zip(tests) {
            let case_ids: Vec<&String> = stratum.pairs.iter().map(|p| &p.case_id).collect();
            let control_ids: Vec<&String> =
                stratum.pairs.iter().flat_map(|p| &p.control_ids).collect();
            out.push(ProductivityStratum {
                label: stratum.label,
                case: summarize_people(&case_ids, scores)?,
                control: summarize_people(&control_ids, scores)?,
                tests: tested.tests,
            });
        }
    }
    Ok(out)
}

fn summarize_people(
    ids: &[&String],
    scores: &HashMap<String, ProductivityScores>,
) -> Result<FeatureSummaries> {
    let missing: Vec<String> = ids
        .iter()
        .filter(|id| !scores.contains_key(id.as_str()))
        .map(|id| id.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingScores(missing));
    }
    let summaries = Feature::ALL
        .iter()
        .map(|&feature| {
            let values: Vec<f64> = ids
                .iter()
                .map(|id| crate::cohort::FeatureVector::from(&scores[id.as_str()]).get(feature))
                .collect();
            Ok((feature, summarize_group(&values)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureSummaries {
        n: ids.len(),
        summaries,
    })
}

/// Aggregates for the cases and for all controls of the given pairs.
pub fn pool_aggregates(
    pairs: &[MatchedPair],
    scores: &HashMap<String, ProductivityScores>,
    funding: impl Fn(&str) -> FundingRecord,
    case_label: &str,
    control_label: &str,
) -> Result<(GroupAggregate, GroupAggregate)> {
    let members = |ids: Vec<&String>| -> Result<Vec<(ProductivityScores, FundingRecord)>> {
        let missing: Vec<String> = ids
            .iter()
            .filter(|id| !scores.contains_key(id.as_str()))
            .map(|id| id.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingScores(missing));
        }
        Ok(ids
            .into_iter()
            .map(|id| (scores[id.as_str()].clone(), funding(id)))
            .collect())
    };
    let case = members(pairs.iter().map(|p| &p.case_id).collect())?;
    let control = members(pairs.iter().flat_map(|p| &p.control_ids).collect())?;
    Ok((
        aggregate_group(&case, case_label)?,
        aggregate_group(&control, control_label)?,
    ))
}
