//! Criteria-matched case/control pairing and per-stratum comparisons.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::productivity::ProductivityScores;
use crate::stats::{paired_t_test, TTestResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacultyRecord {
    pub person_id: String,
    pub group_label: String,
    pub gender: String,
    pub degree: String,
    pub title: String,
    pub specialty: String,
    pub school_id: String,
    /// School-rank stratum, 1..=3.
    pub tier: u8,
}

impl FacultyRecord {
    /// The five attributes a control must share with its case.
    pub fn criteria(&self) -> (&str, &str, &str, &str, &str) {
        (
            &self.gender,
            &self.degree,
            &self.title,
            &self.specialty,
            &self.school_id,
        )
    }

    pub fn matches(&self, other: &FacultyRecord) -> bool {
        self.criteria() == other.criteria()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub case_id: String,
    pub control_ids: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MatchOutcome {
    pub pairs: Vec<MatchedPair>,
    pub unmatched: Vec<String>,
    pub warnings: Vec<String>,
}

/// Matches each case to `ratio` distinct controls agreeing on gender, degree,
/// title, specialty and school.
///
/// Cases are processed in roster order; each draws its controls uniformly
/// from the still-unused eligible ones. A warning is emitted for every
/// criteria cell where demand exceeds supply, since which cases end up matched
/// there depends on roster order.
pub fn match_pairs(
    roster: &[FacultyRecord],
    case_label: &str,
    control_label: &str,
    ratio: usize,
    seed: u64,
) -> Result<MatchOutcome> {
    if !(1..=2).contains(&ratio) {
        return Err(Error::InvalidArgument(format!(
            "matching ratio must be 1 or 2 (got {ratio})"
        )));
    }
    if case_label == control_label {
        return Err(Error::InvalidArgument(
            "case and control labels must differ".into(),
        ));
    }
    check_unique(roster)?;
    for label in [case_label, control_label] {
        if !roster.iter().any(|r| r.group_label == label) {
            return Err(Error::UnknownLabel(label.to_string()));
        }
    }

    let mut pools: BTreeMap<_, Vec<&FacultyRecord>> = BTreeMap::new();
    for r in roster.iter().filter(|r| r.group_label == control_label) {
        pools.entry(r.criteria()).or_default().push(r);
    }
    let mut demand: BTreeMap<_, usize> = BTreeMap::new();
    for r in roster.iter().filter(|r| r.group_label == case_label) {
        *demand.entry(r.criteria()).or_default() += 1;
    }

    let mut warnings = Vec::new();
    for (key, &cases) in &demand {
        let supply = pools.get(key).map_or(0, Vec::len);
        if supply >= ratio && cases * ratio > supply {
            let (gender, degree, title, specialty, school) = key;
            warnings.push(format!(
                "{cases} case(s) compete for {supply} control(s) with gender={gender}, degree={degree}, \
                 title={title}, specialty={specialty}, school={school}; which cases match depends on roster order"
            ));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome = MatchOutcome {
        warnings,
        ..MatchOutcome::default()
    };
    for case in roster.iter().filter(|r| r.group_label == case_label) {
        let pool = match pools.get_mut(&case.criteria()) {
            Some(pool) if pool.len() >= ratio => pool,
            _ => {
                outcome.unmatched.push(case.person_id.clone());
                continue;
            }
        };
        let mut picked = index::sample(&mut rng, pool.len(), ratio).into_vec();
        picked.sort_unstable();
        let control_ids = picked
            .iter()
            .rev()
            .map(|&i| pool.remove(i).person_id.clone())
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect();
        outcome.pairs.push(MatchedPair {
            case_id: case.person_id.clone(),
            control_ids,
        });
    }
    Ok(outcome)
}

fn check_unique(roster: &[FacultyRecord]) -> Result<()> {
    let mut seen = HashSet::new();
    for r in roster {
        if !seen.insert(r.person_id.as_str()) {
            return Err(Error::DuplicatePerson(r.person_id.clone()));
        }
    }
    Ok(())
}

/// The five productivity features compared between groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Papers,
    Citations,
    Pr,
    Pc,
    Pcif,
}

impl Feature {
    pub const ALL: [Feature; 5] = [
        Feature::Papers,
        Feature::Citations,
        Feature::Pr,
        Feature::Pc,
        Feature::Pcif,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Feature::Papers => "Number of Papers",
            Feature::Citations => "Number of Citations",
            Feature::Pr => "Pr-index",
            Feature::Pc => "Pc-index",
            Feature::Pcif => "Pc*IF-index",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct FeatureVector {
    pub papers: f64,
    pub citations: f64,
    pub pr: f64,
    pub pc: f64,
    pub pcif: f64,
}

impl FeatureVector {
    pub fn get(&self, feature: Feature) -> f64 {
        match feature {
            Feature::Papers => self.papers,
            Feature::Citations => self.citations,
            Feature::Pr => self.pr,
            Feature::Pc => self.pc,
            Feature::Pcif => self.pcif,
        }
    }
}

impl From<&ProductivityScores> for FeatureVector {
    fn from(s: &ProductivityScores) -> Self {
        Self {
            papers: s.papers as f64,
            citations: s.citations as f64,
            pr: s.pr,
            pc: s.pc,
            pcif: s.pcif,
        }
    }
}

/// Case features and the mean of the controls' features.
pub fn collapse_controls(
    pair: &MatchedPair,
    scores: &HashMap<String, ProductivityScores>,
) -> Result<(FeatureVector, FeatureVector)> {
    let missing: Vec<String> = std::iter::once(&pair.case_id)
        .chain(&pair.control_ids)
        .filter(|id| !scores.contains_key(*id))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingScores(missing));
    }
    if pair.control_ids.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "pair for `{}` has no controls",
            pair.case_id
        )));
    }
    let case = FeatureVector::from(&scores[&pair.case_id]);
    let k = pair.control_ids.len() as f64;
    let mut control = FeatureVector::default();
    for id in &pair.control_ids {
        let v = FeatureVector::from(&scores[id]);
        control.papers += v.papers;
        control.citations += v.citations;
        control.pr += v.pr;
        control.pc += v.pc;
        control.pcif += v.pcif;
    }
    control.papers /= k;
    control.citations /= k;
    control.pr /= k;
    control.pc /= k;
    control.pcif /= k;
    Ok((case, control))
}

/// How pairs are split into strata before testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    Title,
    Tier,
    Gender,
    All,
}

impl FromStr for Grouping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "title" => Ok(Grouping::Title),
            "tier" => Ok(Grouping::Tier),
            "gender" => Ok(Grouping::Gender),
            "all" => Ok(Grouping::All),
            other => Err(Error::InvalidArgument(format!(
                "unknown grouping `{other}` (expected title, tier, gender or all)"
            ))),
        }
    }
}

impl fmt::Display for Grouping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grouping::Title => "title",
            Grouping::Tier => "tier",
            Grouping::Gender => "gender",
            Grouping::All => "all",
        })
    }
}

impl Grouping {
    /// Stratum label of a record.
    pub fn stratum_of(self, r: &FacultyRecord) -> String {
        match self {
            Grouping::Title => r.title.clone(),
            Grouping::Tier => format!("Tier {}", r.tier),
            Grouping::Gender => r.gender.clone(),
            Grouping::All => "Total".to_string(),
        }
    }
}

/// Pairs sharing one stratum value. Controls always share the case's title,
/// gender and school, so the case's attributes define the stratum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stratum {
    pub label: String,
    pub pairs: Vec<MatchedPair>,
}

/// Splits pairs by the case's stratum. Tiers come out in numeric order; other
/// strata in order of first appearance.
pub fn stratify(
    pairs: &[MatchedPair],
    roster: &[FacultyRecord],
    grouping: Grouping,
) -> Result<Vec<Stratum>> {
    let by_id: HashMap<&str, &FacultyRecord> =
        roster.iter().map(|r| (r.person_id.as_str(), r)).collect();
    let mut strata: Vec<(Option<u8>, Stratum)> = Vec::new();
    for pair in pairs {
        let case = by_id.get(pair.case_id.as_str()).ok_or_else(|| {
            Error::InvalidArgument(format!("case `{}` not in roster", pair.case_id))
        })?;
        let label = grouping.stratum_of(case);
        match strata.iter_mut().find(|(_, s)| s.label == label) {
            Some((_, s)) => s.pairs.push(pair.clone()),
            None => strata.push((
                (grouping == Grouping::Tier).then_some(case.tier),
                Stratum {
                    label,
                    pairs: vec![pair.clone()],
                },
            )),
        }
    }
    strata.sort_by_key(|(tier, _)| *tier);
    Ok(strata.into_iter().map(|(_, s)| s).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureTest {
    pub feature: Feature,
    pub test: Option<TTestResult>,
    /// Why no test was run, e.g. too few pairs.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumTests {
    pub stratum: String,
    pub n_pairs: usize,
    pub tests: Vec<FeatureTest>,
}

/// One paired t-test per feature per stratum, with multi-control pairs
/// collapsed to their mean.
pub fn stratified_tests(
    pairs: &[MatchedPair],
    roster: &[FacultyRecord],
    scores: &HashMap<String, ProductivityScores>,
    grouping: Grouping,
) -> Result<Vec<StratumTests>> {
    stratify(pairs, roster, grouping)?
        .into_iter()
        .map(|stratum| {
            let collapsed = stratum
                .pairs
                .iter()
                .map(|p| collapse_controls(p, scores))
                .collect::<Result<Vec<_>>>()?;
            let tests = Feature::ALL
                .iter()
                .map(|&feature| {
                    let case: Vec<f64> = collapsed.iter().map(|(c, _)| c.get(feature)).collect();
                    let control: Vec<f64> = collapsed.iter().map(|(_, c)| c.get(feature)).collect();
                    match paired_t_test(&case, &control) {
                        Ok(test) => FeatureTest {
                            feature,
                            test: Some(test),
                            note: None,
                        },
                        Err(e) => FeatureTest {
                            feature,
                            test: None,
                            note: Some(e.to_string()),
                        },
                    }
                })
                .collect();
            Ok(StratumTests {
                stratum: stratum.label,
                n_pairs: collapsed.len(),
                tests,
            })
        })
        .collect()
}
