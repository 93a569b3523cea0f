//! Per-researcher productivity indices.
//!
//! * `pr`: impact factors weighted by the researcher's a-index share.
//! * `pc`: citation counts weighted by the share.
//! * `pcif`: citations weighted by both the share and the impact factor.

use serde::{Deserialize, Serialize};

use crate::credit::{a_index, pattern_from_byline, Byline};
use crate::error::{Error, Result};

/// First and corresponding authors share the top group when scoring.
pub const MERGE_CORRESPONDING_DEFAULT: bool = true;

/// One paper from the point of view of one researcher.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub pub_id: String,
    pub byline: Byline,
    /// Journal key the impact factor was resolved from, if any.
    pub journal_key: Option<String>,
    pub impact_factor: f64,
    pub citations: u64,
    /// False when the data did not say whether the subject is a
    /// corresponding author; the byline then falls back to singletons.
    pub roles_known: bool,
}

impl PublicationRecord {
    pub fn new(
        pub_id: impl Into<String>,
        byline: Byline,
        impact_factor: f64,
        citations: u64,
    ) -> Result<Self> {
        if !(impact_factor >= 0.0 && impact_factor.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "impact factor must be a finite non-negative number (got {impact_factor})"
            )));
        }
        Ok(Self {
            pub_id: pub_id.into(),
            byline,
            journal_key: None,
            impact_factor,
            citations,
            roles_known: true,
        })
    }

    pub fn with_journal(mut self, key: impl Into<String>) -> Self {
        self.journal_key = Some(key.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductivityScores {
    pub person_id: String,
    pub papers: u64,
    pub citations: u64,
    pub pr: f64,
    pub pc: f64,
    pub pcif: f64,
}

impl ProductivityScores {
    pub fn zero(person_id: impl Into<String>) -> Self {
        Self {
            person_id: person_id.into(),
            papers: 0,
            citations: 0,
            pr: 0.0,
            pc: 0.0,
            pcif: 0.0,
        }
    }
}

/// The subject's a-index share on one paper.
pub fn credit_share(record: &PublicationRecord, merge_corresponding: bool) -> Result<f64> {
    let (pattern, group) = pattern_from_byline(&record.byline, merge_corresponding)?;
    Ok(a_index(&pattern)
        .group_share(group)
        .expect("subject group lies within its pattern"))
}

/// Scores a publication list with first and corresponding authors merged.
pub fn score_profile(person_id: &str, records: &[PublicationRecord]) -> Result<ProductivityScores> {
    score_profile_with(person_id, records, MERGE_CORRESPONDING_DEFAULT)
}

/// Sums are taken in `pub_id` order so results do not depend on input order.
pub fn score_profile_with(
    person_id: &str,
    records: &[PublicationRecord],
    merge_corresponding: bool,
) -> Result<ProductivityScores> {
    let mut ordered: Vec<&PublicationRecord> = records.iter().collect();
    ordered.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));

    let mut scores = ProductivityScores::zero(person_id);
    for record in ordered {
        let share = credit_share(record, merge_corresponding)?;
        let citations = record.citations as f64;
        scores.papers += 1;
        scores.citations += record.citations;
        scores.pr += share * record.impact_factor;
        scores.pc += share * citations;
        scores.pcif += share * record.impact_factor * citations;
    }
    Ok(scores)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper(
        id: &str,
        n: u32,
        pos: u32,
        corresponding: bool,
        impact: f64,
        cites: u64,
    ) -> PublicationRecord {
        let corr = if corresponding { vec![pos] } else { vec![] };
        PublicationRecord::new(id, Byline::new(n, pos, corr, None).unwrap(), impact, cites).unwrap()
    }

    #[test]
    fn shares() {
        assert_eq!(
            credit_share(&paper("a", 1, 1, false, 1.0, 0), true).unwrap(),
            1.0
        );
        assert!(
            (credit_share(&paper("a", 2, 1, false, 1.0, 0), true).unwrap() - 0.75).abs() < 1e-12
        );
        let last = paper("a", 3, 3, true, 1.0, 0);
        assert!((credit_share(&last, true).unwrap() - 5.0 / 12.0).abs() < 1e-12);
        assert!((credit_share(&last, false).unwrap() - 2.0 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn sole_author_profile() {
        let s = score_profile("p", &[paper("a", 1, 1, true, 5.0, 10)]).unwrap();
        assert_eq!((s.papers, s.citations), (1, 10));
        assert_eq!((s.pr, s.pc, s.pcif), (5.0, 10.0, 50.0));
    }

    #[test]
    fn first_of_two_profile() {
        let s = score_profile("p", &[paper("a", 2, 1, false, 4.0, 8)]).unwrap();
        assert!((s.pr - 3.0).abs() < 1e-12);
        assert!((s.pc - 6.0).abs() < 1e-12);
        assert!((s.pcif - 24.0).abs() < 1e-12);
    }

    #[test]
    fn empty_profile() {
        assert_eq!(
            score_profile("p", &[]).unwrap(),
            ProductivityScores::zero("p")
        );
    }

    #[test]
    fn input_order_does_not_matter() {
        let a = paper("a", 3, 2, false, 2.3, 7);
        let b = paper("b", 5, 5, true, 0.7, 19);
        let c = paper("c", 2, 2, false, 11.1, 3);
        let x = score_profile("p", &[a.clone(), b.clone(), c.clone()]).unwrap();
        let y = score_profile("p", &[c, a, b]).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn negative_impact_factor_rejected() {
        assert!(PublicationRecord::new("a", Byline::sole_author(), -1.0, 0).is_err());
        assert!(PublicationRecord::new("a", Byline::sole_author(), f64::NAN, 0).is_err());
    }
}
