//! Axiomatic co-author credit (the a-index), per-researcher productivity
//! indices, criteria-matched cohort comparisons and productivity-normalized
//! funding ratios.

pub mod analysis;
pub mod cohort;
pub mod credit;
pub mod error;
pub mod funding;
pub mod ingest;
pub mod oracle;
pub mod productivity;
pub mod report;
pub mod special;
pub mod stats;

pub use credit::{
    a_index, fractional_credit, harmonic_credit, inflated_credit, pattern_from_byline,
    AuthorGroupPattern, Byline, CreditVector,
};
pub use error::{Error, Location, Result};
pub use oracle::{a_index_oracle, OracleEstimate};
pub use productivity::{credit_share, score_profile, ProductivityScores, PublicationRecord};
pub use stats::{paired_t_test, summarize_group, GroupSummary, Stars, TTestResult};
