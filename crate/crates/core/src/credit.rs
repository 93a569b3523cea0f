//! Co-author credit shares.
//!
//! A byline of `n` authors is partitioned into `m` ordered tie groups of sizes
//! `c_1..c_m`; every author in group `i` receives the same share `x_i`. The
//! admissible share vectors are those with `x_1 >= x_2 >= ... >= x_m > 0` and
//! `c_1 x_1 + ... + c_m x_m = 1`, and the a-index is the expectation of `x`
//! under the uniform law on that polytope.
//!
//! # Closed form
//!
//! Write `C_j = c_1 + ... + c_j` and take the spacings `y_j = x_j - x_{j+1}`
//! (with `y_m = x_m`), so that `x_k = y_k + ... + y_m` and every `y_j >= 0`.
//! Exchanging the order of summation,
//!
//! ```text
//! sum_i c_i x_i = sum_i c_i sum_{j>=i} y_j = sum_j C_j y_j = 1.
//! ```
//!
//! Rescaling `z_j = C_j y_j` turns the polytope into the standard
//! `(m-1)`-simplex `{z >= 0, sum z_j = 1}`. The map `x -> z` is linear, so the
//! uniform law on the polytope becomes the uniform law on the simplex, where
//! every coordinate has mean `1/m`. Hence `E[y_j] = 1 / (m C_j)` and
//!
//! ```text
//! E[x_k] = (1/m) * sum_{j=k}^{m} 1 / C_j.
//! ```
//!
//! The rejection sampler in [`crate::oracle`] estimates the same expectation
//! without using this derivation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered tie-group sizes of a byline; group 1 carries the highest credit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct AuthorGroupPattern {
    counts: Vec<u32>,
}

impl AuthorGroupPattern {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidPattern("pattern has no groups".into()));
        }
        if let Some(pos) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidPattern(format!(
                "group {} has size 0; group sizes must be positive",
                pos + 1
            )));
        }
        Ok(Self { counts })
    }

    /// `n` authors, each in a group of its own.
    pub fn singletons(n: u32) -> Result<Self> {
        Self::new(vec![1; n as usize])
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Number of groups `m`.
    pub fn groups(&self) -> usize {
        self.counts.len()
    }

    /// Total number of authors `n`.
    pub fn author_count(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Cumulative counts `C_1 < C_2 < ... < C_m = n`.
    pub fn cumulative(&self) -> Vec<u32> {
        self.counts
            .iter()
            .scan(0, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }
}

impl TryFrom<Vec<u32>> for AuthorGroupPattern {
    type Error = Error;

    fn try_from(counts: Vec<u32>) -> Result<Self> {
        Self::new(counts)
    }
}

impl From<AuthorGroupPattern> for Vec<u32> {
    fn from(p: AuthorGroupPattern) -> Self {
        p.counts
    }
}

impl FromStr for AuthorGroupPattern {
    type Err = Error;

    /// Parses a comma-separated list such as `1,2,1`.
    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<u32>()
                    .map_err(|_| Error::InvalidPattern(format!("`{part}` is not a group size")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(counts)
    }
}

impl fmt::Display for AuthorGroupPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Per-group credit shares for a pattern.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CreditVector {
    group_shares: Vec<f64>,
    pattern: AuthorGroupPattern,
}

impl CreditVector {
    pub(crate) fn from_parts(pattern: AuthorGroupPattern, group_shares: Vec<f64>) -> Self {
        debug_assert_eq!(pattern.groups(), group_shares.len());
        Self {
            group_shares,
            pattern,
        }
    }

    pub fn group_shares(&self) -> &[f64] {
        &self.group_shares
    }

    pub fn pattern(&self) -> &AuthorGroupPattern {
        &self.pattern
    }

    /// Share of every member of the 1-based group `group`.
    pub fn group_share(&self, group: usize) -> Option<f64> {
        group
            .checked_sub(1)
            .and_then(|i| self.group_shares.get(i))
            .copied()
    }

    /// Shares expanded to one entry per author in byline group order.
    pub fn per_author(&self) -> Vec<f64> {
        self.pattern
            .counts
            .iter()
            .zip(&self.group_shares)
            .flat_map(|(&c, &x)| std::iter::repeat_n(x, c as usize))
            .collect()
    }

    /// `sum_i c_i x_i`; equals 1 for every credit vector built by this module.
    pub fn total(&self) -> f64 {
        self.pattern
            .counts
            .iter()
            .zip(&self.group_shares)
            .map(|(&c, &x)| f64::from(c) * x)
            .sum()
    }
}

/// Closed-form a-index: `x_k = (1/m) * sum_{j>=k} 1/C_j`.
pub fn a_index(pattern: &AuthorGroupPattern) -> CreditVector {
    let cumulative = pattern.cumulative();
    let m = cumulative.len() as f64;
    let mut shares = vec![0.0; cumulative.len()];
    let mut tail = 0.0;
    for (k, &c) in cumulative.iter().enumerate().rev() {
        tail += 1.0 / f64::from(c);
        shares[k] = tail / m;
    }
    CreditVector::from_parts(pattern.clone(), shares)
}

/// Harmonic counting: the k-th of `n` authors gets `(1/k) / H_n`.
pub fn harmonic_credit(n: u32) -> Result<CreditVector> {
    let pattern = AuthorGroupPattern::singletons(n)?;
    let harmonic: f64 = (1..=n).rev().map(|j| 1.0 / f64::from(j)).sum();
    let shares = (1..=n).map(|k| 1.0 / f64::from(k) / harmonic).collect();
    Ok(CreditVector::from_parts(pattern, shares))
}

/// Fractional counting: one tie group of `n` authors, `1/n` each.
pub fn fractional_credit(n: u32) -> Result<CreditVector> {
    let pattern = AuthorGroupPattern::new(vec![n])?;
    Ok(CreditVector::from_parts(pattern, vec![1.0 / f64::from(n)]))
}

/// Inflated counting: every author receives full credit. The result does not
/// sum to one, so it is returned as a plain per-author list.
pub fn inflated_credit(n: u32) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidPattern(
            "author count must be positive".into(),
        ));
    }
    Ok(vec![1.0; n as usize])
}

/// Authorship roles of the researcher being scored on one paper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Byline {
    author_count: u32,
    subject_position: u32,
    corresponding_positions: BTreeSet<u32>,
    explicit_ties: Option<Vec<Vec<u32>>>,
}

impl Byline {
    /// Positions are 1-based.
    pub fn new(
        author_count: u32,
        subject_position: u32,
        corresponding_positions: impl IntoIterator<Item = u32>,
        explicit_ties: Option<Vec<Vec<u32>>>,
    ) -> Result<Self> {
        if author_count == 0 {
            return Err(Error::InvalidByline(
                "author_count must be at least 1".into(),
            ));
        }
        let in_range = |p: u32| (1..=author_count).contains(&p);
        if !in_range(subject_position) {
            return Err(Error::InvalidByline(format!(
                "subject position {subject_position} outside 1..={author_count}"
            )));
        }
        let corresponding_positions: BTreeSet<u32> = corresponding_positions.into_iter().collect();
        if let Some(&p) = corresponding_positions.iter().find(|&&p| !in_range(p)) {
            return Err(Error::InvalidByline(format!(
                "corresponding position {p} outside 1..={author_count}"
            )));
        }
        Ok(Self {
            author_count,
            subject_position,
            corresponding_positions,
            explicit_ties,
        })
    }

    pub fn sole_author() -> Self {
        Self {
            author_count: 1,
            subject_position: 1,
            corresponding_positions: BTreeSet::new(),
            explicit_ties: None,
        }
    }

    pub fn author_count(&self) -> u32 {
        self.author_count
    }

    pub fn subject_position(&self) -> u32 {
        self.subject_position
    }

    pub fn corresponding_positions(&self) -> &BTreeSet<u32> {
        &self.corresponding_positions
    }

    pub fn explicit_ties(&self) -> Option<&[Vec<u32>]> {
        self.explicit_ties.as_deref()
    }
}

/// Groups a byline into a tie pattern and reports the 1-based group holding
/// the subject.
///
/// Without explicit ties every author is a singleton in byline order. Explicit
/// ties must partition `1..=n`; their groups are ordered by smallest position.
/// With `merge_corresponding`, every group holding a corresponding author is
/// folded into the group of position 1.
pub fn pattern_from_byline(
    byline: &Byline,
    merge_corresponding: bool,
) -> Result<(AuthorGroupPattern, usize)> {
    let n = byline.author_count;
    let mut groups: Vec<Vec<u32>> = match &byline.explicit_ties {
        Some(ties) => validate_ties(ties, n)?,
        None => (1..=n).map(|p| vec![p]).collect(),
    };

    if merge_corresponding && !byline.corresponding_positions.is_empty() {
        let (mut lead, rest): (Vec<_>, Vec<_>) = groups.into_iter().partition(|g| {
            g.contains(&1) || g.iter().any(|p| byline.corresponding_positions.contains(p))
        });
        let mut merged: Vec<u32> = lead.drain(..).flatten().collect();
        merged.sort_unstable();
        groups = std::iter::once(merged).chain(rest).collect();
    }

    let subject_group = groups
        .iter()
        .position(|g| g.contains(&byline.subject_position))
        .map(|i| i + 1)
        .expect("groups partition every position");
    let counts = groups.iter().map(|g| g.len() as u32).collect();
    Ok((AuthorGroupPattern::new(counts)?, subject_group))
}

fn validate_ties(ties: &[Vec<u32>], n: u32) -> Result<Vec<Vec<u32>>> {
    let mut seen = vec![false; n as usize];
    for group in ties {
        if group.is_empty() {
            return Err(Error::InvalidByline("explicit tie group is empty".into()));
        }
        for &p in group {
            if !(1..=n).contains(&p) {
                return Err(Error::InvalidByline(format!(
                    "tie position {p} outside 1..={n}"
                )));
            }
            let slot = &mut seen[(p - 1) as usize];
            if *slot {
                return Err(Error::InvalidByline(format!(
                    "position {p} appears in more than one tie group"
                )));
            }
            *slot = true;
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidByline(format!(
            "explicit ties do not cover position {}",
            missing + 1
        )));
    }
    let mut groups: Vec<Vec<u32>> = ties
        .iter()
        .map(|g| {
            let mut g = g.clone();
            g.sort_unstable();
            g
        })
        .collect();
    groups.sort_by_key(|g| g[0]);
    Ok(groups)
}
